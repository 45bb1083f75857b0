"""Putting analytic inputs on a common lattice.

Campaigns verify inequalities on the group ``hZ`` (the real-line grid with
Haar weight ``h``) or on ``Z_n``.  Young's inequality and the Banach-algebra
inequality hold exactly on these groups, so a computed ratio above one
can only come from rounding, never from discretisation error.
"""
from __future__ import annotations

import math

import numpy as np

from ..convolution import ConvolutionPlan, convolve_cyclic, convolve_grid
from ..functions import Analytic, GaussianDecay, GroupDomain, PowerDecay, Sampled, sample

__all__ = ["fitting_domain", "to_lattice", "lattice_convolve", "rounding_budget"]

# values below EDGE_FLOOR * max|f| count as outside the support
EDGE_FLOOR = 1e-13


def _extent(f: Analytic) -> float:
    if isinstance(f.decay, PowerDecay):
        raise ValueError(f"{f.label}: power tails do not fit on a finite grid")
    lo, hi = f.lo, f.hi
    if isinstance(f.decay, GaussianDecay):
        # the declared bound is loose; scan inside it for the effective support
        r = f.decay.cutoff(1.0, 1e-300)
        xs = np.linspace(max(lo, -r), min(hi, r), 16001)
        a = np.abs(f(xs))
        big = xs[a > EDGE_FLOOR * a.max()] if a.max() > 0 else xs[:1]
        step = xs[1] - xs[0]
        lo, hi = big[0] - step, big[-1] + step
    return max(abs(lo), abs(hi))


def fitting_domain(*fs: Analytic, min_half_width: float = 16.0, min_nodes: int = 4096,
                   nodes_per_unit: int = 128) -> GroupDomain:
    """Smallest grid (``L`` a multiple of 8) holding every input inside ``[-L/2, L/2)``."""
    need = 2.0 * max([_extent(f) for f in fs] + [0.0])
    half = max(min_half_width, 8.0 * math.ceil(need / 8.0))
    n = max(min_nodes, 2 * int(nodes_per_unit * half / 2))
    return GroupDomain.real_line(half, n)


def to_lattice(f, domain: GroupDomain) -> Sampled:
    """Sample ``f`` on ``domain`` (a no-op for functions already there)."""
    if isinstance(f, Sampled):
        if f.domain != domain:
            raise ValueError("function lives on a different lattice")
        return f
    return sample(f, domain)


def lattice_convolve(f: Sampled, g: Sampled, plan: ConvolutionPlan | None = None) -> Sampled:
    """Convolution on the common group of ``f`` and ``g``."""
    if f.domain != g.domain:
        raise ValueError("inputs live on different lattices")
    if f.domain.is_real:
        return convolve_grid(f, g, plan)
    return convolve_cyclic(f, g)


def rounding_budget(domain: GroupDomain) -> float:
    """Relative rounding allowance for sums of ``n`` terms on ``domain``."""
    return 16.0 * domain.n * np.finfo(float).eps
