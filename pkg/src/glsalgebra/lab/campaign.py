"""Seeded campaigns over families of functions, generating functions and exponents.

Every campaign is a list of independent cells.  Cells run on a thread pool
capped by ``GLS_THREADS`` (``0`` or unset: one thread per CPU) and the
reports come back sorted by case id, so the output does not depend on
scheduling.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence

import numpy as np

from ..functions import (Analytic, GroupDomain, make_gaussian, make_indicator,
                         make_random_mixture)
from ..norms import PsiSpec
from .algebra import verify_banach_algebra
from .continuity import uc_convolution_bound
from .counterexample import counterexample_campaign
from .fourier import check_fourier_multiplicativity, fourier_transform, ideal_membership
from .lattice import fitting_domain
from .report import VerificationReport
from .scaling import DEFAULT_LAMBDAS, scaling_exponent_probe
from .young import verify_young

__all__ = [
    "BANACH_BATTERY",
    "YOUNG_EXPONENTS",
    "SCALING_TRIPLES",
    "parse_psi",
    "thread_count",
    "run_cells",
    "random_pairs",
    "young_functions",
    "uc_pairs",
    "banach_campaign",
    "young_campaign",
    "scaling_campaign",
    "fourier_campaign",
    "uc_campaign",
    "counterexample_reports",
]

BANACH_BATTERY = ("gaussian:1", "power-m:2", "critical:4:0.5", "gaussian:2")

# twenty admissible pairs, 1/p + 1/q >= 1
YOUNG_EXPONENTS = (
    (1.0, 1.0), (1.0, 1.5), (1.0, 2.0), (1.0, 3.0), (1.0, 8.0),
    (1.0, math.inf), (1.5, 1.0), (1.5, 1.5), (1.5, 2.0), (1.5, 3.0),
    (2.0, 1.0), (2.0, 1.25), (2.0, 2.0), (1.25, 1.25), (1.25, 4.0),
    (3.0, 1.0), (3.0, 1.5), (4.0, 1.2), (8.0, 1.0), (1.2, 6.0),
)

SCALING_TRIPLES = ((1.0, 1.0, 1.0), (2.0, 2.0, 2.0), (1.0, 1.0, 2.0), (1.5, 3.0, 3.0))


def parse_psi(text: str) -> PsiSpec:
    """``gaussian:s``, ``power-m:m``, ``critical:b:beta``, ``extremal:r`` or ``tilde``."""
    head, *rest = text.split(":")
    try:
        args = [float(v) for v in rest]
    except ValueError:
        raise ValueError(f"bad generating function parameters in {text!r}") from None
    builders = {
        ("gaussian", 1): PsiSpec.gaussian,
        ("power-m", 1): PsiSpec.power_m,
        ("critical", 2): PsiSpec.critical,
        ("extremal", 1): PsiSpec.extremal,
        ("tilde", 0): PsiSpec.tilde,
    }
    build = builders.get((head, len(args)))
    if build is None:
        raise ValueError(f"unknown generating function {text!r}")
    return build(*args)


def thread_count() -> int:
    raw = os.environ.get("GLS_THREADS", "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"GLS_THREADS must be an integer, got {raw!r}") from None
    if n < 0:
        raise ValueError("GLS_THREADS must be non-negative")
    return n or (os.cpu_count() or 1)


def run_cells(cells: Sequence[Callable[[], VerificationReport]], threads: int | None = None):
    """Run independent cells and return their reports sorted by case id."""
    threads = thread_count() if threads is None else max(1, threads)
    if threads == 1 or len(cells) < 2:
        reports = [cell() for cell in cells]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            reports = list(pool.map(lambda c: c(), cells))
    ids = [r.case_id for r in reports]
    if len(set(ids)) != len(ids):
        raise ValueError("campaign produced duplicate case ids")
    return sorted(reports, key=lambda r: r.case_id)


def random_pairs(seed: int, count: int) -> list[tuple[Analytic, Analytic]]:
    """``count`` mixture pairs; pair ``i`` uses seeds ``1000 seed + 2i`` and ``+1``."""
    base = 1000 * int(seed)
    return [(make_random_mixture(base + 2 * i), make_random_mixture(base + 2 * i + 1))
            for i in range(count)]


def _domain_for(pairs) -> GroupDomain:
    return fitting_domain(*[f for pair in pairs for f in pair])


def banach_campaign(seed: int = 7, pairs: int = 50, specs: Sequence[str] = BANACH_BATTERY,
                    tol: float = 1e-6, domain: GroupDomain | None = None,
                    threads: int | None = None) -> list[VerificationReport]:
    fam = random_pairs(seed, pairs)
    domain = domain or _domain_for(fam)
    parsed = [parse_psi(s) for s in specs]
    cells = []
    for i, (f, g) in enumerate(fam):
        for spec in parsed:
            cid = f"algebra:{seed}:{i:03d}:{spec.text}"
            cells.append(lambda f=f, g=g, spec=spec, cid=cid: _tag_seed(
                verify_banach_algebra(f, g, spec, tol, domain=domain, case_id=cid), seed))
    return run_cells(cells, threads)


def young_functions(seed: int, pairs: int):
    fam = [(make_gaussian(1.0), make_gaussian(1.0)),
           (make_gaussian(1.0), make_indicator(0.0, 1.0))]
    return fam + random_pairs(seed, max(0, pairs - len(fam)))


def young_campaign(seed: int = 7, pairs: int = 10, exponents=YOUNG_EXPONENTS, tol: float = 1e-6,
                   domain: GroupDomain | None = None, threads: int | None = None):
    fam = young_functions(seed, pairs)
    domain = domain or _domain_for(fam)
    cells = []
    for i, (f, g) in enumerate(fam):
        for j, (p, q) in enumerate(exponents):
            cid = f"young:{seed}:{i:03d}:{j:02d}:{p:g}:{q:g}"
            cells.append(lambda f=f, g=g, p=p, q=q, cid=cid: _tag_seed(
                verify_young(f, g, p, q, tol, domain=domain, case_id=cid), seed))
    return run_cells(cells, threads)


def scaling_campaign(triples=SCALING_TRIPLES, d: int = 1, lambdas=DEFAULT_LAMBDAS,
                     route: str = "numeric", threads: int | None = None):
    f, g = make_gaussian(1.0), make_indicator(0.0, 1.0)
    cells = [lambda t=t: scaling_exponent_probe(f, g, *t, d=d, lambdas=lambdas, route=route)[1]
             for t in triples]
    return run_cells(cells, threads)


def fourier_campaign(xi: Sequence[float] | None = None, tol: float = 1e-5,
                     threads: int | None = None):
    """Multiplicativity, conjugate symmetry, the ``|f|_1`` bound and the ideal ``J(1)``."""
    xi = np.linspace(-2.0, 2.0, 81) if xi is None else np.asarray(xi, dtype=float)
    z1 = make_gaussian(1.0)
    box = make_indicator(-0.5, 0.5)
    pairs = [(z1, z1), (box, box), (z1, box)]
    cells = [lambda a=a, b=b: check_fourier_multiplicativity(a, b, xi, tol) for a, b in pairs]
    for f in (z1, box, make_indicator(0.0, 1.0)):
        cells.append(lambda f=f: _sup_bound(f, xi))
        cells.append(lambda f=f: _symmetry(f, xi))
    spec = PsiSpec.gaussian(1.0)
    cells.append(lambda: ideal_membership(box, 1.0, spec)[1])
    cells.append(lambda: ideal_membership(z1, 1.0, spec)[1])
    return run_cells(cells, threads)


def _sup_bound(f, xi) -> VerificationReport:
    from ..norms import lp_norm

    grid = fourier_transform(f, xi)
    return VerificationReport(f"fourier-sup:{f.label}", "fourier-sup", grid.sup_modulus(),
                              lp_norm(f, 1.0), {"mode": "le", "rel": 1e-6},
                              {"f": f.label, "nodes": len(xi)})


def _symmetry(f, xi) -> VerificationReport:
    grid = fourier_transform(f, xi)
    return VerificationReport(f"fourier-symmetry:{f.label}", "fourier-symmetry",
                              grid.symmetry_defect(), 1e-10, {"mode": "lt", "rel": 1e-10},
                              {"f": f.label, "nodes": len(xi)})


def uc_pairs(seed: int = 7) -> list[tuple[Analytic, Analytic]]:
    """Five ``(g, f)`` pairs for the uniform-continuity bound."""
    z1 = make_gaussian(1.0)
    m = random_pairs(seed, 2)
    return [(make_indicator(0.0, 1.0), z1), (z1, z1), (z1, make_indicator(0.0, 1.0)),
            (m[0][0], m[0][1]), (m[1][0], z1)]


def uc_campaign(seed: int = 7, deltas: Sequence[float] = (1e-3, 1e-2, 1e-1), tol: float = 1e-3,
                threads: int | None = None):
    cells = []
    for i, (g, f) in enumerate(uc_pairs(seed)):
        for d in deltas:
            cid = f"uc:{seed}:{i:02d}:{d:g}"
            cells.append(lambda g=g, f=f, d=d, cid=cid: _tag_seed(
                uc_convolution_bound(g, f, d, tol, case_id=cid), seed))
    return run_cells(cells, threads)


def counterexample_reports(X_list=None, p_list=None, threads: int | None = None):
    kwargs = {}
    if X_list is not None:
        kwargs["X_list"] = X_list
    if p_list is not None:
        kwargs["p_list"] = p_list
    return sorted(counterexample_campaign(**kwargs), key=lambda r: r.case_id)


def _tag_seed(report: VerificationReport, seed: int) -> VerificationReport:
    report.provenance["seed"] = int(seed)
    return report
