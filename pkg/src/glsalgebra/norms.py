"""L_p norms, generating functions and Grand Lebesgue norms.

The Grand Lebesgue norm of ``f`` for a generating function ``psi`` on
``[1, b)`` is ``sup_p |f|_p / psi(p)``.  It is computed on a grid that is
log-spaced in ``p - 1 + delta`` (suprema frequently sit at ``p = 1``),
refined by golden-section search around every grid-local maximum, and, for
``b = inf``, closed off with an interpolation-inequality bound on the part
of the axis beyond the last node.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .functions import Analytic, FunctionRep, Sampled, gaussian_norm
from .quadrature import integrate

__all__ = [
    "DegenerateSpace",
    "PsiClass",
    "PsiSpec",
    "GrandNormResult",
    "lp_norm",
    "lp_norm_with_error",
    "psi_eval",
    "ratio",
    "grand_norm",
    "sup_on_nodes",
    "small_lebesgue_norm",
    "degenerate_psi_check",
    "golden_max",
    "p_grid",
]

GRID_NODES = 257
P_MAX = 64.0
P_CAP = 2.0**14
GRID_DELTA = 1e-3
TAIL_RTOL = 1e-2
# below this decay exponent the mapped tail integral loses double precision
SLOW_TAIL = 1.25
NORM_RTOL = 1e-11
INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


class DegenerateSpace(ValueError):
    """The generating function vanishes at ``p = 1``; the space is ``{0}``."""


class PsiClass(enum.Enum):
    NORMALIZED = "normalized"
    POSITIVE_UNNORMALIZED = "positive-unnormalized"
    DEGENERATE = "degenerate"
    INFINITE_AT_ONE = "infinite-at-one"


# ---------------------------------------------------------------------------
# L_p norms


def lp_norm_with_error(f: FunctionRep, p: float, *, exact: bool = False,
                       rtol: float = NORM_RTOL) -> tuple[float, float]:
    """``(|f|_p, relative error estimate)``; the value may be ``inf``."""
    if not p >= 1.0:
        raise ValueError(f"L_p norms need p >= 1, got {p!r}")
    if isinstance(f, Sampled):
        return _sampled_norm(f, p), 0.0
    if exact and f.norm_oracle is not None:
        return float(f.norm_oracle(p)), 0.0
    if math.isinf(p):
        return _analytic_sup(f), 0.0
    if not f.integrable_power(p):
        return math.inf, 0.0
    top = f.sup if f.sup else _analytic_sup(f)
    if top == 0.0:
        return 0.0, 0.0
    lo, hi = f.window(p)
    integrand = lambda x: (np.abs(f(x)) / top) ** p
    if math.isinf(hi) or math.isinf(lo):
        return _power_tail_norm(f, p, top, integrand, lo, hi, rtol)
    res = integrate(integrand, lo, hi, rtol=rtol, breakpoints=f.breakpoints)
    return _finish(res, top, p)


def _finish(res, top, p, extra=0.0):
    total = res.value + extra
    if total <= 0.0:
        return 0.0, 0.0
    rel = res.error / total / p
    if not res.converged:
        rel = math.inf
    return top * total ** (1.0 / p), rel


def _power_tail_norm(f, p, top, integrand, lo, hi, rtol):
    decay = f.decay
    s = decay.exponent * p
    if math.isinf(lo):
        raise NotImplementedError("power tails are supported on [a, inf) only")
    if s >= SLOW_TAIL or not decay.exact:
        res = integrate(integrand, lo, hi, rtol=rtol, breakpoints=f.breakpoints, tail_decay=s)
        return _finish(res, top, p)
    # slowly decaying exact power law: closed-form remainder beyond the cut
    cut = max(2.0 * decay.x0, lo + 1.0, *f.breakpoints) if f.breakpoints else max(2.0 * decay.x0, lo + 1.0)
    res = integrate(integrand, lo, cut, rtol=rtol, breakpoints=f.breakpoints)
    rest = (decay.scale / top) ** p * cut ** (1.0 - s) / (s - 1.0)
    return _finish(res, top, p, rest)


def lp_norm(f: FunctionRep, p: float, *, exact: bool = False, rtol: float = NORM_RTOL) -> float:
    """``|f|_p`` for ``p`` in ``[1, inf]``.

    Sampled functions use the weighted grid sum of their domain (step ``h``
    on the real line, ``1/n`` on ``Z_n``).  Analytic functions use adaptive
    quadrature, or the attached closed form when ``exact`` is true.  A power
    tail ``|x|^-g`` with ``g*p <= 1`` gives ``inf``.
    """
    return lp_norm_with_error(f, p, exact=exact, rtol=rtol)[0]


def _sampled_norm(f: Sampled, p: float) -> float:
    top, logs = f.normalized()
    if top == 0.0:
        return 0.0
    if math.isinf(p):
        return top
    s = float(np.sum(np.exp(p * logs))) * f.domain.weight
    return top * s ** (1.0 / p)


def _analytic_sup(f: Analytic) -> float:
    lo, hi = f.window(1.0)
    if math.isinf(hi):
        hi = lo + 64.0 * max(1.0, abs(lo))
    if math.isinf(lo):
        lo = hi - 64.0 * max(1.0, abs(hi))
    xs = np.linspace(lo, hi, 20001)
    extra = []
    for b in f.breakpoints + ((f.lo,) if math.isfinite(f.lo) else ()):
        extra.extend((b, np.nextafter(b, -math.inf)))
    if math.isfinite(f.hi):
        extra.append(np.nextafter(f.hi, -math.inf))
    xs = np.concatenate([xs, np.array(extra, dtype=float)])
    return float(np.max(np.abs(f(xs))))


# ---------------------------------------------------------------------------
# generating functions


@dataclass(frozen=True, eq=False)
class PsiSpec:
    """A generating function ``psi`` on ``[1, b)``.

    Build one with the class methods; ``spec(p)`` evaluates it with
    ``+inf`` allowed.
    """

    family: str
    params: tuple = ()
    b: float = math.inf
    payload: object = None
    _cache: dict = field(default_factory=dict, repr=False)

    @classmethod
    def power_m(cls, m: float) -> "PsiSpec":
        if not m > 0:
            raise ValueError("power-m needs m > 0")
        return cls("power-m", (float(m),))

    @classmethod
    def critical(cls, b: float, beta: float) -> "PsiSpec":
        if not (1.0 < b < math.inf) or beta < 0:
            raise ValueError("critical needs b in (1, inf) and beta >= 0")
        return cls("critical", (float(b), float(beta)), b=float(b))

    @classmethod
    def extremal(cls, r: float) -> "PsiSpec":
        if not r >= 1.0 or math.isinf(r):
            raise ValueError("extremal needs a finite r >= 1")
        return cls("extremal", (float(r),))

    @classmethod
    def gaussian(cls, sigma: float) -> "PsiSpec":
        if not sigma > 0:
            raise ValueError("gaussian psi needs sigma > 0")
        return cls("gaussian", (float(sigma),))

    @classmethod
    def tilde(cls) -> "PsiSpec":
        return cls("tilde")

    @classmethod
    def natural(cls, f: FunctionRep, b: float = math.inf, exact: bool = False) -> "PsiSpec":
        return cls("natural", (bool(exact),), b=b, payload=f)

    @classmethod
    def table(cls, ps: Iterable[float], values: Iterable[float], b: float | None = None) -> "PsiSpec":
        ps = np.asarray(list(ps), dtype=float)
        vals = np.asarray(list(values), dtype=float)
        if ps.shape != vals.shape or ps.size < 1:
            raise ValueError("table needs matching, non-empty p and value arrays")
        order = np.argsort(ps)
        ps, vals = ps[order], vals[order]
        if ps[0] != 1.0:
            raise ValueError("table must start at p = 1")
        if np.any(vals < 0):
            raise ValueError("generating functions are non-negative")
        b = math.inf if b is None else float(b)
        return cls("table", (), b=b, payload=(ps, vals))

    @property
    def text(self) -> str:
        if self.family in ("natural", "table"):
            return self.family
        return ":".join([self.family] + [f"{v:g}" for v in self.params])

    def __call__(self, p: float) -> float:
        return psi_eval(self, p)

    def special_nodes(self) -> tuple[float, ...]:
        if self.family == "extremal":
            return (self.params[0],)
        if self.family == "table":
            return tuple(float(v) for v in self.payload[0] if v < self.b)
        return ()

    def limit_at_infinity(self) -> float:
        """``lim psi(p)`` as ``p -> inf`` (only for ``b = inf``)."""
        fam = self.family
        if fam == "gaussian":
            return gaussian_norm(self.params[0], math.inf)
        if fam == "tilde":
            return 1.0
        if fam == "natural":
            return lp_norm(self.payload, math.inf, exact=self.params[0])
        if fam == "table":
            return float(self.payload[1][-1])
        return math.inf

    def tail_inf(self, p_max: float) -> float:
        """``inf_{p > p_max} psi(p)`` for ``b = inf``."""
        fam = self.family
        if fam == "power-m":
            return p_max ** (1.0 / self.params[0])
        if fam == "extremal":
            return 1.0 if self.params[0] > p_max else math.inf
        if fam == "gaussian":
            # log psi has a single critical point at p = 2*pi*e
            crit = 2.0 * math.pi * math.e
            return self(max(p_max, crit))
        if fam == "table":
            ps, vals = self.payload
            beyond = vals[ps >= p_max]
            return float(min(beyond.min(), self(p_max))) if beyond.size else float(vals[-1])
        ps = p_max * np.geomspace(1.0, 2.0**20, 41)
        return float(min(min(self(p) for p in ps), self.limit_at_infinity()))


def psi_eval(spec: PsiSpec, p: float) -> float:
    """Evaluate a generating function at ``p``; ``+inf`` is a legal value."""
    if not p >= 1.0 or (p >= spec.b and not (math.isinf(p) and math.isinf(spec.b))):
        raise ValueError(f"p = {p!r} outside the domain [1, {spec.b!r}) of {spec.text}")
    fam = spec.family
    if math.isinf(p):
        return spec.limit_at_infinity()
    if fam == "power-m":
        return p ** (1.0 / spec.params[0])
    if fam == "critical":
        b, beta = spec.params
        return (b - 1.0) ** beta * (b - p) ** (-beta)
    if fam == "extremal":
        return 1.0 if p == spec.params[0] else math.inf
    if fam == "gaussian":
        return gaussian_norm(spec.params[0], p)
    if fam == "tilde":
        return (3.0 / (2.0 * p - 3.0)) ** (1.0 / p) if p > 1.5 else math.inf
    if fam == "natural":
        hit = spec._cache.get(p)
        if hit is None:
            hit = lp_norm(spec.payload, p, exact=spec.params[0])
            spec._cache[p] = hit
        return hit
    if fam == "table":
        return _table_eval(spec.payload, p)
    raise ValueError(f"unknown generating function family {fam!r}")


def _table_eval(payload, p: float) -> float:
    ps, vals = payload
    if p <= ps[0]:
        return float(vals[0])
    if p >= ps[-1]:
        return float(vals[-1])
    j = int(np.searchsorted(ps, p))
    if ps[j] == p:
        return float(vals[j])
    v0, v1 = vals[j - 1], vals[j]
    if math.isinf(v0) or math.isinf(v1):
        return math.inf
    # linear in 1/p
    t = (1.0 / ps[j - 1] - 1.0 / p) / (1.0 / ps[j - 1] - 1.0 / ps[j])
    return float(v0 + t * (v1 - v0))


def degenerate_psi_check(spec: PsiSpec) -> PsiClass:
    """Classify ``psi`` by its value at ``p = 1``."""
    v = spec(1.0)
    if math.isinf(v):
        return PsiClass.INFINITE_AT_ONE
    if v == 0.0:
        return PsiClass.DEGENERATE
    if abs(v - 1.0) <= 1e-12:
        return PsiClass.NORMALIZED
    return PsiClass.POSITIVE_UNNORMALIZED


def ratio(num: float, den: float) -> tuple[float, bool]:
    """Extended-real ``num/den`` with ``C/inf = 0``; returns ``(value, indeterminate)``."""
    if math.isinf(den):
        if math.isinf(num):
            return math.nan, True
        return 0.0, False
    if math.isinf(num):
        return math.inf, False
    if den == 0.0:
        return (0.0, False) if num == 0.0 else (math.inf, False)
    return num / den, False


# ---------------------------------------------------------------------------
# suprema


def golden_max(func, a: float, b: float, tol: float, max_iter: int = 200):
    """Maximise a unimodal ``func`` on ``[a, b]``; returns ``(x, f(x), evaluations)``.

    Endpoints are evaluated too, so a maximum sitting on the boundary is
    returned exactly.
    """
    fa, fb = func(a), func(b)
    best = (a, fa) if fa >= fb else (b, fb)
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = func(c), func(d)
    evals = 4
    it = 0
    while abs(b - a) > tol and it < max_iter:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = func(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = func(d)
        evals += 1
        it += 1
    for x, v in ((c, fc), (d, fd)):
        if v > best[1]:
            best = (x, v)
    return best[0], best[1], evals


@dataclass
class GrandNormResult:
    value: float
    p_star: float
    nodes: int
    refinements: int
    tail_bound: float
    converged: bool
    p_max: float
    indeterminate: list = field(default_factory=list)
    error: float = 0.0
    evaluated: dict = field(default_factory=dict, repr=False)

    def as_dict(self) -> dict:
        return {
            "value": self.value,
            "p_star": self.p_star,
            "nodes": self.nodes,
            "refinements": self.refinements,
            "tail_bound": self.tail_bound,
            "converged": self.converged,
            "p_max": self.p_max,
            "indeterminate": len(self.indeterminate),
            "error": self.error,
        }


def p_grid(upper: float, nodes: int = GRID_NODES, delta: float = GRID_DELTA) -> np.ndarray:
    """``nodes`` points on ``[1, upper]``, log-spaced in ``p - 1 + delta``."""
    t = np.geomspace(delta, upper - 1.0 + delta, nodes)
    ps = 1.0 - delta + t
    ps[0], ps[-1] = 1.0, upper
    return ps


class _RatioCurve:
    """Memoised ``p -> |f|_p / psi(p)`` with extended-real bookkeeping."""

    def __init__(self, f, spec, exact):
        self.f, self.spec, self.exact = f, spec, exact
        self.values: dict[float, float] = {}
        self.norms: dict[float, float] = {}
        self.indeterminate: list[float] = []
        self.error = 0.0

    def norm(self, p):
        if p not in self.norms:
            v, e = lp_norm_with_error(self.f, p, exact=self.exact)
            self.norms[p] = v
            if math.isfinite(e):
                self.error = max(self.error, e)
        return self.norms[p]

    def __call__(self, p):
        p = float(p)
        if p in self.values:
            return self.values[p]
        den = self.spec(p)
        if math.isinf(den) and self.spec.family == "extremal":
            v, bad = 0.0, False  # C/inf without touching |f|_p
        else:
            v, bad = ratio(self.norm(p), den)
        if bad:
            self.indeterminate.append(p)
            v = -math.inf  # excluded from the supremum, reported separately
        self.values[p] = v
        return v

    def best(self):
        p, v = max(self.values.items(), key=lambda kv: (kv[1], -kv[0]))
        return p, v


def _refine(curve, ps, tol, keep: int = 4):
    """Golden-section refinement around the ``keep`` highest grid-local maxima."""
    vals = []
    for p in ps:
        v = curve(p)
        if v == math.inf:
            return 0  # the supremum is already +inf
        vals.append(v)
    vals = np.array(vals)
    peaks = []
    for i in range(len(ps)):
        left = vals[i - 1] if i > 0 else -math.inf
        right = vals[i + 1] if i + 1 < len(ps) else -math.inf
        if np.isfinite(vals[i]) and vals[i] >= left and vals[i] >= right and (vals[i] > left or vals[i] > right):
            peaks.append(i)
    peaks.sort(key=lambda i: -vals[i])
    count = 0
    for i in peaks[:keep]:
        a = ps[i - 1] if i > 0 else ps[i]
        b = ps[i + 1] if i + 1 < len(ps) else ps[i]
        if b - a > tol:
            golden_max(curve, a, b, tol)
            count += 1
    return count


def _interpolation_tail(curve, spec, p_max):
    """Bound on ``sup_{p > p_max} |f|_p / psi(p)`` from ``|f|_p <= |f|_q^(q/p) |f|_inf^(1-q/p)``."""
    finite = sorted(p for p, v in curve.norms.items() if math.isfinite(v) and v > 0)
    if not finite:
        return 0.0
    q = finite[0]
    nq = curve.norms[q]
    ninf = lp_norm(curve.f, math.inf, exact=curve.exact)
    if ninf == 0.0:
        return 0.0
    at_pmax = nq ** (q / p_max) * ninf ** (1.0 - q / p_max)
    top = max(at_pmax, ninf)
    den = spec.tail_inf(p_max)
    return ratio(top, den)[0]


def grand_norm(
    f: FunctionRep,
    spec: PsiSpec,
    tol: float = 1e-6,
    *,
    exact: bool = False,
    nodes: int = GRID_NODES,
    p_max: float = P_MAX,
    extra_nodes: Iterable[float] = (),
    tail_rtol: float = TAIL_RTOL,
) -> GrandNormResult:
    """``sup_{p in [1, b)} |f|_p / psi(p)``.

    ``tol`` is the width, in ``p``, to which golden-section refinement
    localises each grid-local maximum.  ``extra_nodes`` are evaluated in
    addition to the grid (used to put several functions on a common set of
    exponents).  For ``b = inf`` the grid stops at ``p_max``; it is doubled
    (up to ``2**14``) until the interpolation tail bound is within
    ``tail_rtol`` of the value, and ``converged`` records whether that
    happened.
    """
    cls = degenerate_psi_check(spec)
    if cls is PsiClass.DEGENERATE:
        raise DegenerateSpace(f"psi(1) = 0 for {spec.text}: the space is trivial")
    curve = _RatioCurve(f, spec, exact)
    if spec.family == "extremal":
        r = spec.params[0]
        v = ratio(lp_norm(f, r, exact=exact), 1.0)[0]
        curve.values[r] = v
        return GrandNormResult(v, r, 1, 0, 0.0, math.isfinite(v), r, [], curve.error, dict(curve.values))

    finite_b = math.isfinite(spec.b)
    upper = spec.b - 1e-9 * (spec.b - 1.0) if finite_b else p_max
    ps = p_grid(upper, nodes)
    extras = [float(p) for p in list(extra_nodes) + list(spec.special_nodes())
              if 1.0 <= p and (p < spec.b or not finite_b)]
    ps = np.unique(np.concatenate([ps, np.array(extras, dtype=float)]))
    ps = ps[np.isfinite(ps)]
    refinements = _refine(curve, ps, tol)

    tail = 0.0
    tail_ok = True
    if not finite_b:
        current = max(p_max, float(ps[-1]))
        while True:
            best = curve.best()[1]
            if math.isinf(best):
                break
            tail = _interpolation_tail(curve, spec, current)
            if tail <= best * (1.0 + tail_rtol) or current >= P_CAP:
                tail_ok = tail <= best * (1.0 + tail_rtol)
                break
            new = np.geomspace(current, 2.0 * current, 17)[1:]
            current *= 2.0
            refinements += _refine(curve, np.concatenate([[ps[-1]], new]), tol)
            ps = np.concatenate([ps, new])
        p_max = current

    p_star, value = curve.best()
    if value == -math.inf:
        value = math.nan
    converged = math.isfinite(value) and tail_ok
    return GrandNormResult(
        value=value,
        p_star=p_star,
        nodes=len(curve.values),
        refinements=refinements,
        tail_bound=tail,
        converged=converged,
        p_max=p_max if not finite_b else upper,
        indeterminate=sorted(curve.indeterminate),
        error=curve.error,
        evaluated=dict(curve.values),
    )


def sup_on_nodes(f: FunctionRep, spec: PsiSpec, ps: Iterable[float], *, exact: bool = False) -> float:
    """Max of ``|f|_p / psi(p)`` over the given exponents (indeterminate ones skipped)."""
    curve = _RatioCurve(f, spec, exact)
    for p in ps:
        curve(p)
    return curve.best()[1]


def small_lebesgue_norm(
    f: FunctionRep,
    b: float,
    theta: float,
    tol: float = 1e-6,
    *,
    exact: bool = False,
    nodes: int = GRID_NODES,
) -> GrandNormResult:
    """``sup_{0 < eps <= b-1} eps^(theta/(b-eps)) |f|_(b-eps)``.

    ``p_star`` of the result holds the maximising exponent ``b - eps``.
    """
    if not b > 1.0 or theta < 0:
        raise ValueError("small Lebesgue norm needs b > 1 and theta >= 0")
    norms: dict[float, float] = {}
    err = [0.0]

    def phi(eps):
        eps = float(eps)
        if eps not in norms:
            v, e = lp_norm_with_error(f, b - eps, exact=exact)
            norms[eps] = v
            if math.isfinite(e):
                err[0] = max(err[0], e)
        n = norms[eps]
        if math.isinf(n):
            return math.inf
        return eps ** (theta / (b - eps)) * n

    class _Curve:
        values: dict = {}

        def __call__(self, e):
            if e not in self.values:
                self.values[e] = phi(e)
            return self.values[e]

    curve = _Curve()
    curve.values = {}
    eps = np.geomspace(1e-9 * (b - 1.0), b - 1.0, nodes)
    refinements = _refine(curve, eps, tol)
    e_star, value = max(curve.values.items(), key=lambda kv: kv[1])
    return GrandNormResult(value, b - e_star, len(curve.values), refinements, 0.0,
                           math.isfinite(value), b, [], err[0], dict(curve.values))
