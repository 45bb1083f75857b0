"""Group domains, function representations and the canonical test families."""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Union

import numpy as np

__all__ = [
    "GroupDomain",
    "GaussianDecay",
    "PowerDecay",
    "Analytic",
    "Sampled",
    "FunctionRep",
    "FamilySpec",
    "make_gaussian",
    "make_power_tail",
    "make_indicator",
    "make_random_mixture",
    "make_zero",
    "dilate",
    "sample",
    "scale",
    "add",
    "gaussian_norm",
]

DEFAULT_HALF_WIDTH = 16.0
DEFAULT_GRID = 4096


@dataclass(frozen=True)
class GroupDomain:
    """A concrete unimodular group with its Haar measure.

    ``kind == "real"``: the truncated real line ``[-L, L)`` sampled on
    ``n`` uniform nodes ``x_i = -L + i*h``, ``h = 2L/n``, with Lebesgue
    measure approximated by the weight ``h`` per node.

    ``kind == "cyclic"``: the group ``Z_n`` with counting measure
    normalised to total mass 1 (weight ``1/n`` per element).
    """

    kind: str
    n: int
    half_width: float = 0.0

    def __post_init__(self):
        if self.kind not in ("real", "cyclic"):
            raise ValueError(f"unknown domain kind {self.kind!r}")
        if not isinstance(self.n, (int, np.integer)) or self.n <= 0:
            raise ValueError(f"grid size must be a positive integer, got {self.n!r}")
        if self.kind == "real":
            if self.n % 2:
                raise ValueError("real-line grid size must be even")
            if not self.half_width > 0:
                raise ValueError("real-line half width must be positive")

    @classmethod
    def real_line(cls, half_width: float = DEFAULT_HALF_WIDTH, n: int = DEFAULT_GRID) -> "GroupDomain":
        return cls("real", int(n), float(half_width))

    @classmethod
    def cyclic(cls, n: int) -> "GroupDomain":
        return cls("cyclic", int(n))

    @property
    def is_real(self) -> bool:
        return self.kind == "real"

    @property
    def step(self) -> float:
        if not self.is_real:
            raise TypeError("cyclic domains have no grid step")
        return 2.0 * self.half_width / self.n

    @property
    def weight(self) -> float:
        """Haar weight carried by each node."""
        return self.step if self.is_real else 1.0 / self.n

    def points(self) -> np.ndarray:
        if self.is_real:
            return -self.half_width + self.step * np.arange(self.n)
        return np.arange(self.n, dtype=float)

    def weights(self) -> np.ndarray:
        return np.full(self.n, self.weight)

    def describe(self) -> dict:
        if self.is_real:
            return {"kind": "real", "L": self.half_width, "n": self.n}
        return {"kind": "cyclic", "n": self.n}


@dataclass(frozen=True)
class GaussianDecay:
    """``|f(x)| <= scale * exp(-rate * x**2)`` for ``|x| >= x0``."""

    scale: float
    rate: float
    x0: float = 0.0

    def bound(self, x):
        return self.scale * np.exp(-self.rate * np.square(x))

    def cutoff(self, p: float = 1.0, floor: float = 1e-32) -> float:
        """Radius beyond which ``bound(x)**p`` stays below ``floor * scale**p``."""
        need = -math.log(floor) / (self.rate * p)
        return max(self.x0, math.sqrt(max(need, 0.0)))

    def dilated(self, lam: float) -> "GaussianDecay":
        return GaussianDecay(self.scale, self.rate * lam * lam, self.x0 / lam)


@dataclass(frozen=True)
class PowerDecay:
    """``|f(x)| <= scale * |x|**-exponent`` for ``|x| >= x0``.

    ``exact`` marks the bound as an identity on ``[x0, inf)``.
    """

    scale: float
    exponent: float
    x0: float = 1.0
    exact: bool = False

    def bound(self, x):
        return self.scale * np.abs(x) ** (-self.exponent)

    def dilated(self, lam: float) -> "PowerDecay":
        return PowerDecay(self.scale * lam ** (-self.exponent), self.exponent, self.x0 / lam, self.exact)


@dataclass(frozen=True, eq=False)
class Analytic:
    """A function given by a vectorised evaluator plus support metadata.

    ``lo``/``hi`` bound the support (either may be infinite); an infinite
    end must be covered by ``decay``.  ``breakpoints`` lists interior points
    where the function is not smooth, so quadrature can split there.
    ``norm_oracle`` optionally returns the exact ``L_p`` norm.
    """

    evaluator: Callable[[np.ndarray], np.ndarray]
    lo: float = -math.inf
    hi: float = math.inf
    decay: GaussianDecay | PowerDecay | None = None
    breakpoints: tuple[float, ...] = ()
    norm_oracle: Callable[[float], float] | None = None
    sup: float | None = None
    label: str = "analytic"
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError("empty support")
        if (math.isinf(self.lo) or math.isinf(self.hi)) and self.decay is None:
            raise ValueError("unbounded support needs a decay bound")
        if self.decay is not None:
            self._spot_check()

    def _spot_check(self) -> None:
        x = 2.0 * max(self.decay.x0, 1.0)
        probes = np.array([x, -x])
        vals = np.abs(self(probes))
        bound = self.decay.bound(probes)
        if np.any(vals > bound * (1.0 + 1e-12) + 1e-300):
            raise ValueError(f"{self.label}: evaluator violates its declared decay bound")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        with np.errstate(over="ignore", under="ignore"):
            return np.asarray(self.evaluator(x), dtype=float)

    @property
    def compact(self) -> bool:
        return not (math.isinf(self.lo) or math.isinf(self.hi))

    def window(self, p: float = 1.0) -> tuple[float, float]:
        """Finite interval carrying all of ``|f|^p`` up to a negligible tail.

        Power-decaying functions keep their infinite end; callers pass the
        decay exponent to the quadrature engine instead.
        """
        lo, hi = self.lo, self.hi
        if isinstance(self.decay, GaussianDecay):
            r = self.decay.cutoff(p)
            lo, hi = max(lo, -r), min(hi, r)
        return lo, hi

    def integrable_power(self, p: float) -> bool:
        """False when ``|f|^p`` has a non-integrable power tail."""
        if isinstance(self.decay, PowerDecay) and not self.compact:
            return self.decay.exponent * p > 1.0
        return True


@dataclass(frozen=True, eq=False)
class Sampled:
    """Values of a function on the nodes of a :class:`GroupDomain`."""

    domain: GroupDomain
    values: np.ndarray
    label: str = "sampled"
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != (self.domain.n,):
            raise ValueError(f"expected {self.domain.n} values, got shape {vals.shape}")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def normalized(self) -> tuple[float, np.ndarray]:
        """``(max |f|, log(|f| / max |f|))``, cached; non-zero entries only."""
        cached = self.__dict__.get("_normalized")
        if cached is None:
            a = np.abs(self.values)
            top = float(a.max()) if a.size else 0.0
            with np.errstate(divide="ignore"):  # subnormal ratios round to log 0 = -inf
                cached = (top, np.log(a[a > 0] / top) if top > 0 else a[:0])
            object.__setattr__(self, "_normalized", cached)
        return cached


FunctionRep = Union[Analytic, Sampled]


def gaussian_norm(sigma: float, p: float) -> float:
    """Exact ``L_p(R)`` norm of the centred Gaussian density of width ``sigma``."""
    if math.isinf(p):
        return 1.0 / (sigma * math.sqrt(2.0 * math.pi))
    return (2.0 * math.pi) ** (1.0 / (2.0 * p) - 0.5) * p ** (-1.0 / (2.0 * p)) * sigma ** (1.0 / p - 1.0)


def make_gaussian(sigma: float, mu: float = 0.0, weight: float = 1.0) -> Analytic:
    """Gaussian density ``weight * N(mu, sigma^2)`` with its exact norm attached."""
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma!r}")
    peak = weight / (sigma * math.sqrt(2.0 * math.pi))
    inv = 1.0 / (2.0 * sigma * sigma)

    def evaluator(x):
        return peak * np.exp(-np.square(x - mu) * inv)

    if mu == 0.0:
        decay = GaussianDecay(abs(peak), inv, 0.0)
    else:
        # |x - mu| >= |x|/2 once |x| >= 2|mu|
        decay = GaussianDecay(abs(peak), inv / 4.0, 2.0 * abs(mu))
    return Analytic(
        evaluator,
        decay=decay,
        norm_oracle=lambda p: abs(weight) * gaussian_norm(sigma, p),
        sup=abs(peak),
        label=f"gaussian:{sigma:g}" if (mu == 0.0 and weight == 1.0) else f"gaussian:{sigma:g}@{mu:g}",
        provenance={"family": "gaussian", "sigma": sigma, "mu": mu, "weight": weight},
    )


def make_power_tail(alpha: float) -> Analytic:
    """``f(x) = x^(-1/alpha)`` for ``x >= 1`` and zero elsewhere, ``alpha`` in ``(1, 2]``."""
    if not (1.0 < alpha <= 2.0):
        raise ValueError(f"alpha must lie in (1, 2], got {alpha!r}")
    gam = 1.0 / alpha

    def evaluator(x):
        out = np.zeros_like(x)
        m = x >= 1.0
        out[m] = x[m] ** (-gam)
        return out

    def oracle(p):
        if math.isinf(p):
            return 1.0
        if gam * p <= 1.0:
            return math.inf
        return (1.0 / (gam * p - 1.0)) ** (1.0 / p)

    return Analytic(
        evaluator,
        lo=1.0,
        hi=math.inf,
        decay=PowerDecay(1.0, gam, 1.0, exact=True),
        norm_oracle=oracle,
        sup=1.0,
        label=f"power-tail:{alpha:g}",
        provenance={"family": "power-tail", "alpha": alpha},
    )


def make_indicator(a: float, b: float, weight: float = 1.0) -> Analytic:
    """Indicator of the half-open interval ``[a, b)``."""
    if not a < b:
        raise ValueError(f"indicator needs a < b, got [{a!r}, {b!r})")

    def evaluator(x):
        return weight * ((x >= a) & (x < b)).astype(float)

    def oracle(p):
        if math.isinf(p):
            return abs(weight)
        return abs(weight) * (b - a) ** (1.0 / p)

    return Analytic(
        evaluator,
        lo=a,
        hi=b,
        norm_oracle=oracle,
        sup=abs(weight),
        label=f"indicator:{a:g}:{b:g}",
        provenance={"family": "indicator", "a": a, "b": b, "weight": weight},
    )


def make_zero() -> Analytic:
    return Analytic(lambda x: np.zeros_like(x), lo=0.0, hi=1.0,
                    norm_oracle=lambda p: 0.0, sup=0.0, label="zero")


def make_random_mixture(seed: int, components: int = 3) -> Analytic:
    """Positive combination of Gaussians and indicators drawn from a seeded generator.

    Gaussian widths lie in ``[0.5, 4]``, centres in ``[-4, 4]``; indicator
    widths in ``[0.5, 4]``; weights in ``[0.5, 1.5]``.
    """
    if components < 1:
        raise ValueError("a mixture needs at least one component")
    rng = np.random.default_rng(seed)
    parts = []
    for _ in range(components):
        kind = "gaussian" if rng.random() < 0.5 else "indicator"
        weight = float(rng.uniform(0.5, 1.5))
        centre = float(rng.uniform(-4.0, 4.0))
        if kind == "gaussian":
            parts.append(("gaussian", weight, centre, float(rng.uniform(0.5, 4.0))))
        else:
            width = float(rng.uniform(0.5, 4.0))
            parts.append(("indicator", weight, centre - width / 2, centre + width / 2))
    return _mixture(parts, label=f"mixture:{seed}:{components}",
                    provenance={"family": "mixture", "seed": seed, "components": components})


def _mixture(parts, label, provenance) -> Analytic:
    funcs = []
    for kind, w, a, b in parts:
        funcs.append(make_gaussian(b, a, w) if kind == "gaussian" else make_indicator(a, b, w))

    def evaluator(x):
        out = np.zeros_like(x)
        for f in funcs:
            out += f.evaluator(x)
        return out

    gauss = [p for p in parts if p[0] == "gaussian"]
    ind = [p for p in parts if p[0] == "indicator"]
    bps = tuple(sorted({v for p in ind for v in (p[2], p[3])}))
    sup = sum(f.sup for f in funcs)
    if gauss:
        edge = max([abs(v) for p in ind for v in (p[2], p[3])] + [0.0])
        x0 = max([2.0 * abs(p[2]) for p in gauss] + [edge])
        rate = min(1.0 / (8.0 * p[3] ** 2) for p in gauss)
        scale_ = sum(p[1] / (p[3] * math.sqrt(2.0 * math.pi)) for p in gauss)
        return Analytic(evaluator, decay=GaussianDecay(scale_, rate, x0), breakpoints=bps,
                        sup=sup, label=label, provenance=provenance)
    lo = min(p[2] for p in ind)
    hi = max(p[3] for p in ind)
    return Analytic(evaluator, lo=lo, hi=hi, breakpoints=tuple(b for b in bps if lo < b < hi),
                    sup=sup, label=label, provenance=provenance)


@dataclass(frozen=True)
class FamilySpec:
    """A named member of a test family, e.g. ``gaussian:1`` or ``indicator:0:1``."""

    tag: str
    params: tuple[float, ...] = ()

    @classmethod
    def parse(cls, text: str) -> "FamilySpec":
        head, *rest = text.split(":")
        try:
            params = tuple(float(v) for v in rest)
        except ValueError:
            raise ValueError(f"bad family parameters in {text!r}") from None
        spec = cls(head, params)
        spec.build()  # validate eagerly
        return spec

    def build(self) -> Analytic:
        t, ps = self.tag, self.params
        if t == "gaussian" and len(ps) == 1:
            return make_gaussian(ps[0])
        if t == "power-tail" and len(ps) == 1:
            return make_power_tail(ps[0])
        if t == "indicator" and len(ps) == 2:
            return make_indicator(ps[0], ps[1])
        if t == "mixture" and len(ps) in (1, 2):
            return make_random_mixture(int(ps[0]), int(ps[1]) if len(ps) == 2 else 3)
        raise ValueError(f"unknown family {self.text!r}")

    @property
    def text(self) -> str:
        return ":".join([self.tag] + [f"{p:g}" for p in self.params])


def dilate(f: Analytic, lam: float, dim: int = 1) -> Analytic:
    """Dilation ``T_lam f(x) = f(lam * x)``.

    ``dim`` is the formal dimension recorded for scaling bookkeeping; the
    representation itself is one-dimensional.
    """
    if not isinstance(f, Analytic):
        raise TypeError("only analytic functions can be dilated")
    if not lam > 0:
        raise ValueError(f"dilation factor must be positive, got {lam!r}")
    if int(dim) < 1:
        raise ValueError("dimension must be a positive integer")
    ev = f.evaluator
    oracle = None
    if f.norm_oracle is not None:
        base = f.norm_oracle
        oracle = lambda p: base(p) if math.isinf(p) else lam ** (-1.0 / p) * base(p)
    return Analytic(
        lambda x: ev(lam * x),
        lo=f.lo / lam,
        hi=f.hi / lam,
        decay=None if f.decay is None else f.decay.dilated(lam),
        breakpoints=tuple(b / lam for b in f.breakpoints),
        norm_oracle=oracle,
        sup=f.sup,
        label=f"{f.label}|dilate:{lam:g}",
        provenance={**f.provenance, "dilation": lam * f.provenance.get("dilation", 1.0), "dim": int(dim)},
    )


def sample(f: Analytic, domain: GroupDomain) -> Sampled:
    """Evaluate ``f`` at the nodes of a real-line domain."""
    if isinstance(f, Sampled):
        if f.domain != domain:
            raise ValueError("sampled function lives on a different domain")
        return f
    if not domain.is_real:
        raise ValueError("analytic functions can only be sampled on the real line")
    return Sampled(domain, f(domain.points()), label=f.label,
                   provenance={**f.provenance, "domain": domain.describe()})


def scale(f: FunctionRep, c: float) -> FunctionRep:
    """Pointwise multiple ``c * f``."""
    if isinstance(f, Sampled):
        return Sampled(f.domain, c * f.values, label=f"{c:g}*{f.label}", provenance=f.provenance)
    ev = f.evaluator
    oracle = None if f.norm_oracle is None else (lambda p, o=f.norm_oracle: abs(c) * o(p))
    decay = f.decay
    if isinstance(decay, GaussianDecay):
        decay = replace(decay, scale=abs(c) * decay.scale)
    elif isinstance(decay, PowerDecay):
        decay = replace(decay, scale=abs(c) * decay.scale)
    return Analytic(lambda x: c * ev(x), lo=f.lo, hi=f.hi, decay=decay,
                    breakpoints=f.breakpoints, norm_oracle=oracle,
                    sup=None if f.sup is None else abs(c) * f.sup,
                    label=f"{c:g}*{f.label}", provenance=f.provenance)


def add(f: FunctionRep, g: FunctionRep) -> FunctionRep:
    """Pointwise sum; both operands must have the same representation."""
    if isinstance(f, Sampled) and isinstance(g, Sampled):
        if f.domain != g.domain:
            raise ValueError("cannot add functions on different domains")
        return Sampled(f.domain, f.values + g.values, label=f"{f.label}+{g.label}")
    if isinstance(f, Analytic) and isinstance(g, Analytic):
        if isinstance(f.decay, PowerDecay) or isinstance(g.decay, PowerDecay):
            raise NotImplementedError("sums with power tails are not supported")
        fe, ge = f.evaluator, g.evaluator
        decays = [d for d in (f.decay, g.decay) if d is not None]
        decay = None
        if decays:
            x0 = max([d.x0 for d in decays] + [abs(v) for h in (f, g) if h.compact for v in (h.lo, h.hi)])
            decay = GaussianDecay(sum(d.scale for d in decays), min(d.rate for d in decays), x0)
        bps = set(f.breakpoints) | set(g.breakpoints)
        for h in (f, g):
            if h.compact:
                bps |= {h.lo, h.hi}
        lo, hi = min(f.lo, g.lo), max(f.hi, g.hi)
        sup = None if f.sup is None or g.sup is None else f.sup + g.sup
        return Analytic(lambda x: fe(x) + ge(x), lo=lo, hi=hi, decay=decay,
                        breakpoints=tuple(sorted(b for b in bps if lo < b < hi)),
                        sup=sup, label=f"{f.label}+{g.label}")
    raise TypeError("cannot add analytic and sampled representations")
