"""Convolution engines.

* ``DirectGrid``/``Spectral``: step-weighted linear convolution of two sampled
  functions on the same real-line grid (``O(n^2)`` sum or zero-padded FFT).
* ``CircularExact``: convolution on ``Z_n`` with normalised counting measure.
* ``DirectQuadrature``: pointwise ``int f(y) g(x-y) dy`` by adaptive
  quadrature, returned as an analytic function.
* ``SingularAnalytic``: the self-convolution of the power tail
  ``x^(-1/alpha) I(x >= 1)`` through the substitution ``y = x z``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .functions import Analytic, GaussianDecay, GroupDomain, PowerDecay, Sampled
from .quadrature import QuadratureResult, integrate

__all__ = [
    "AliasingError",
    "ConvolutionPlan",
    "convolve_grid",
    "convolve_cyclic",
    "convolve_direct",
    "counterexample_h",
    "truncated_counterexample_h",
    "power_tail_self_convolution",
    "beta_partial",
]

METHODS = ("direct-grid", "spectral", "circular-exact", "singular-analytic")


class AliasingError(ValueError):
    """The inputs carry too much mass near the grid edge for a linear convolution."""


@dataclass(frozen=True)
class ConvolutionPlan:
    method: str = "spectral"
    tolerance: float = 1e-10
    aliasing_tol: float = 1e-9

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown convolution method {self.method!r}")


def _edge_mass(f: Sampled) -> float:
    """Fraction of ``|f|_1`` carried by nodes with ``|x| >= L/2``."""
    a = np.abs(f.values)
    total = a.sum()
    if total == 0.0:
        return 0.0
    x = f.domain.points()
    return float(a[np.abs(x) >= 0.5 * f.domain.half_width].sum() / total)


def convolve_grid(f: Sampled, g: Sampled, plan: ConvolutionPlan | None = None) -> Sampled:
    """Linear convolution ``h(x_k) = h * sum_j f(x_j) g(x_k - x_j)`` on ``[-L, L)``.

    Both inputs must live on the same real-line domain and keep their mass
    inside ``[-L/2, L/2)`` so the result fits on the grid without
    wrap-around; otherwise :class:`AliasingError` is raised.
    """
    plan = plan or ConvolutionPlan()
    if not (isinstance(f, Sampled) and isinstance(g, Sampled)):
        raise TypeError("convolve_grid needs sampled inputs")
    if f.domain != g.domain:
        raise ValueError("inputs live on different domains")
    dom = f.domain
    if not dom.is_real:
        raise ValueError("use convolve_cyclic on Z_n")
    for v in (f, g):
        m = _edge_mass(v)
        if m > plan.aliasing_tol:
            raise AliasingError(f"{v.label}: {m:.3g} of the mass lies beyond L/2")
    n = dom.n
    if plan.method == "direct-grid":
        full = np.convolve(f.values, g.values)
    elif plan.method == "spectral":
        size = 1 << int(math.ceil(math.log2(2 * n)))
        spec = np.fft.rfft(f.values, size) * np.fft.rfft(g.values, size)
        full = np.fft.irfft(spec, size)[: 2 * n - 1]
    else:
        raise ValueError(f"method {plan.method!r} does not apply to real-line grids")
    # full[s] sits at x = -2L + s*h; node k of the domain is s = k + n/2
    values = dom.step * full[n // 2: n // 2 + n]
    return Sampled(dom, values, label=f"({f.label})*({g.label})",
                   provenance={"method": plan.method, "domain": dom.describe()})


def convolve_cyclic(f, g):
    """``h[k] = (1/n) sum_j f[j] g[(k - j) mod n]`` on ``Z_n``.

    Accepts arrays or :class:`Sampled` values on a cyclic domain and returns
    the same kind.
    """
    as_sampled = isinstance(f, Sampled)
    fv = f.values if isinstance(f, Sampled) else np.asarray(f, dtype=float)
    gv = g.values if isinstance(g, Sampled) else np.asarray(g, dtype=float)
    if fv.ndim != 1 or fv.shape != gv.shape:
        raise ValueError("cyclic convolution needs two sequences of equal length")
    n = fv.shape[0]
    full = np.convolve(fv, gv)
    h = full[:n].copy()
    h[: n - 1] += full[n:]
    h /= n
    if as_sampled:
        return Sampled(GroupDomain.cyclic(n), h, label=f"({f.label})*({g.label})",
                       provenance={"method": "circular-exact"})
    return h


def _edges(f: Analytic):
    pts = set(f.breakpoints)
    if math.isfinite(f.lo):
        pts.add(f.lo)
    if math.isfinite(f.hi):
        pts.add(f.hi)
    return pts


def _l1_bound(f: Analytic) -> float:
    from .norms import lp_norm

    return lp_norm(f, 1.0)


def convolve_direct(f: Analytic, g: Analytic, *, rtol: float = 1e-12) -> Analytic:
    """Pointwise convolution by adaptive quadrature, as an analytic function.

    Intended as the accuracy oracle: each value is an adaptive integral over
    the overlap of the supports, split at every kink of either factor.
    Results are memoised per abscissa.
    """
    if isinstance(f.decay, PowerDecay) or isinstance(g.decay, PowerDecay):
        raise ValueError("power tails are convolved with power_tail_self_convolution")
    flo, fhi = f.window(1.0)
    glo, ghi = g.window(1.0)
    fbp, gbp = sorted(_edges(f)), sorted(_edges(g))
    fe, ge = f.evaluator, g.evaluator

    @lru_cache(maxsize=1 << 16)
    def point(x: float) -> float:
        lo = max(flo, x - ghi)
        hi = min(fhi, x - glo)
        if not lo < hi:
            return 0.0
        bps = [b for b in fbp if lo < b < hi] + [x - b for b in gbp if lo < x - b < hi]
        res = integrate(lambda y: fe(y) * ge(x - y), lo, hi, rtol=rtol, atol=1e-300,
                        breakpoints=bps)
        return res.value

    def evaluator(x):
        flat = np.asarray(x, dtype=float).ravel()
        out = np.fromiter((point(float(v)) for v in flat), dtype=float, count=flat.size)
        return out.reshape(np.shape(x))

    bps = sorted({a + b for a in _edges(f) for b in _edges(g)})
    lo, hi = f.lo + g.lo, f.hi + g.hi
    decay = None
    if not (math.isfinite(lo) and math.isfinite(hi)):
        # |y| >= |x|/2 or |x-y| >= |x|/2 on the whole line
        decays = [d for d in (f.decay, g.decay) if isinstance(d, GaussianDecay)]
        x0 = 2.0 * max([d.x0 for d in decays] + [abs(v) for v in _edges(f) | _edges(g)] + [0.0])
        cf = f.decay.scale if isinstance(f.decay, GaussianDecay) else 0.0
        cg = g.decay.scale if isinstance(g.decay, GaussianDecay) else 0.0
        rate = min(d.rate for d in decays) / 4.0
        scale = cf * _l1_bound(g) + cg * _l1_bound(f)
        decay = GaussianDecay(scale, rate, x0)
    sup = None
    if f.sup is not None and g.sup is not None:
        sup = min(f.sup * _l1_bound(g), g.sup * _l1_bound(f))
    return Analytic(
        evaluator,
        lo=lo,
        hi=hi,
        decay=decay,
        breakpoints=tuple(b for b in bps if lo < b < hi),
        sup=sup,
        label=f"({f.label})*({g.label})",
        provenance={"method": "direct-quadrature", "left": f.provenance, "right": g.provenance},
    )


# ---------------------------------------------------------------------------
# the power-tail self-convolution


def _kernel(gam):
    return lambda z: z ** (-gam) * (1.0 - z) ** (-gam)


@lru_cache(maxsize=None)
def _full_kernel(gam: float) -> QuadratureResult:
    # symmetric about 1/2: twice the half with the pole at 0
    half = integrate(_kernel(gam), 0.0, 0.5, rtol=1e-13, singular=(gam, 0.0))
    return QuadratureResult(2.0 * half.value, 2.0 * half.error, half.converged,
                            half.intervals, half.evaluations)


def _head(w: float, gam: float, rtol: float) -> QuadratureResult:
    """``int_0^w t^-gam (1-t)^-gam dt`` for ``w <= 1/2``, pole declared at 0."""
    return integrate(_kernel(gam), 0.0, w, rtol=rtol, singular=(gam, 0.0))


def beta_partial(z: float, gam: float = 2.0 / 3.0, rtol: float = 1e-12) -> tuple[float, float]:
    """``int_0^z t^-gam (1-t)^-gam dt`` for ``z`` in ``[0, 1]``; returns ``(value, error)``.

    For ``z > 1/2`` the symmetry ``t -> 1 - t`` keeps the pole at the origin.
    """
    if z <= 0.0:
        return 0.0, 0.0
    full = _full_kernel(gam)
    if z >= 1.0:
        return full.value, full.error
    if z <= 0.5:
        r = _head(z, gam, rtol)
        return r.value, r.error
    r = _head(1.0 - z, gam, rtol)
    return full.value - r.value, full.error + r.error


def _alpha_exponent(alpha: float) -> float:
    if not (1.0 < alpha <= 2.0):
        raise ValueError(f"alpha must lie in (1, 2], got {alpha!r}")
    return 1.0 / alpha


def counterexample_h(x: float, alpha: float = 1.5, rtol: float = 1e-12) -> float:
    """``(f * f)(x)`` for ``f(x) = x^(-1/alpha) I(x >= 1)``.

    With ``y = x z`` the convolution becomes
    ``x^(1 - 2/alpha) int_{1/x}^{1-1/x} z^(-1/alpha) (1-z)^(-1/alpha) dz``;
    the inner integral is the full kernel integral minus the two end pieces,
    which are equal by the symmetry ``z -> 1 - z``.  Each piece is
    integrated with its endpoint pole declared.  Zero for ``x <= 2``.
    """
    gam = _alpha_exponent(alpha)
    if x <= 2.0:
        return 0.0
    full = _full_kernel(gam).value
    end = _head(1.0 / x, gam, rtol).value
    return x ** (1.0 - 2.0 * gam) * (full - 2.0 * end)


def truncated_counterexample_h(x: float, cut: float, alpha: float = 1.5, rtol: float = 1e-12) -> float:
    """``(f_X * f_X)(x)`` where ``f_X`` is the power tail restricted to ``[1, X]``.

    The ``y`` range is ``[max(1, x - X), min(x - 1, X)]``; the result is
    supported on ``[2, 2X]`` and agrees with :func:`counterexample_h` for
    ``x <= X + 1``.
    """
    gam = _alpha_exponent(alpha)
    lo_y = max(1.0, x - cut)
    hi_y = min(x - 1.0, cut)
    if not lo_y < hi_y:
        return 0.0
    hi_v, _ = beta_partial(hi_y / x, gam, rtol)
    lo_v, _ = beta_partial(lo_y / x, gam, rtol)
    return x ** (1.0 - 2.0 * gam) * (hi_v - lo_v)


def power_tail_self_convolution(alpha: float = 1.5) -> Analytic:
    """``f_alpha * f_alpha`` as an analytic function with its power decay declared.

    ``h(x) <= B x^(1 - 2/alpha)`` where ``B`` is the full kernel integral, so
    ``|h|_p`` is infinite whenever ``(2/alpha - 1) p <= 1``.
    """
    gam = _alpha_exponent(alpha)
    full = _full_kernel(gam).value

    def evaluator(x):
        flat = np.asarray(x, dtype=float).ravel()
        out = np.fromiter((counterexample_h(float(v), alpha) for v in flat), dtype=float, count=flat.size)
        return out.reshape(np.shape(x))

    return Analytic(
        evaluator,
        lo=2.0,
        hi=math.inf,
        decay=PowerDecay(full * (1.0 + 1e-9), 2.0 * gam - 1.0, 2.0),
        label=f"power-tail:{alpha:g}*power-tail:{alpha:g}",
        provenance={"method": "singular-analytic", "alpha": alpha},
    )
