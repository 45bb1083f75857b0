"""The power-tail counterexample for a ``psi`` with ``psi(1) = inf``.

``f(x) = x^(-2/3) I(x >= 1)`` has natural function
``psi~(p) = (3/(2p - 3))^(1/p)`` for ``p > 3/2`` (and ``inf`` below), so
``||f||_{G psi~} = 1``.  Its self-convolution behaves like
``B(1/3, 1/3) x^(-1/3)`` and is not in ``L_p`` for ``p <= 3``, hence
``||f*f||_{G psi~} = inf``.  Divergence is exhibited through the
truncations ``h_X = f_X * f_X`` with ``f_X = f I(x <= X)``.
"""
from __future__ import annotations

import math
import time
from typing import Sequence

import numpy as np

from ..convolution import counterexample_h, power_tail_self_convolution, truncated_counterexample_h
from ..functions import make_power_tail
from ..norms import PsiSpec, grand_norm, lp_norm_with_error
from ..quadrature import QuadratureError, beta_function, integrate
from .report import VerificationReport

__all__ = [
    "DEFAULT_X",
    "DEFAULT_P",
    "truncated_power_integrals",
    "counterexample_campaign",
]

ALPHA = 1.5
DEFAULT_X = (1e6, 1e7, 1e8, 1e9)
DEFAULT_P = (2.0, 2.5, 3.0, 6.0, 8.0)
ASYMPTOTIC_X = (1e3, 1e6, 1e9)
SLOPE_TOL = 0.1
STABLE_RTOL = 1e-3
LOG_TOL = 0.25
CLOSED_FORM_TOL = 1e-6
INTEGRAL_RTOL = 1e-9


def truncated_power_integrals(cut: float, ps: Sequence[float], rtol: float = INTEGRAL_RTOL):
    """``int_2^(2X) h_X(x)^p dx`` for every ``p`` in ``ps`` at once.

    Integrated in ``u = log x`` and split at ``x = X + 1``, where ``h_X``
    stops agreeing with the untruncated convolution.  Returns
    ``(values, relative error, converged)``.
    """
    ps = np.asarray(list(ps), dtype=float)

    def integrand(u):
        x = np.exp(u)
        h = np.fromiter((truncated_counterexample_h(float(v), cut, ALPHA) for v in x),
                        dtype=float, count=x.size)
        return np.power(h[:, None], ps[None, :]) * x[:, None]

    lo, hi = math.log(2.0), math.log(2.0 * cut)
    knee = math.log(cut + 1.0)
    res = integrate(integrand, lo, hi, rtol=rtol, breakpoints=[knee] if lo < knee < hi else [])
    vals = np.asarray(res.value, dtype=float)
    return vals, res.error / float(np.min(vals)), res.converged


def _slope(xs, ys) -> float:
    return float(np.polyfit(np.log(xs), np.log(ys), 1)[0])


def counterexample_campaign(X_list: Sequence[float] = DEFAULT_X, p_list: Sequence[float] = DEFAULT_P, *,
                            asymptotic_x: Sequence[float] = ASYMPTOTIC_X) -> list[VerificationReport]:
    """Reproduce the failure of the algebra inequality for ``psi~``.

    Cells:

    * ``closed-form``: ``|f|_p`` by quadrature against ``psi~(p)`` (``p > 3/2``).
    * ``natural-norm``: ``||f||_{G psi~} = 1`` from the closed form.
    * ``divergence`` (``p < 3``): the log-log slope of ``|h_X|_p^p`` against
      ``X`` matches ``1 - p/3`` within 0.1.  The approach is slow: for
      ``p = 2``, ``|h_X|_2^2 ~ 3 B^2 X^(1/3) - 12 B log X``, so the default
      truncations start at ``1e6``.
    * ``log-divergence`` (``p = 3``): each decade of ``X`` adds about
      ``B^3 log 10`` to ``|h_X|_3^3``.
    * ``convergence`` (``p > 3``): ``|h_X|_p`` changes by less than ``1e-3``
      (relative) between the last two truncations.
    * ``beta-asymptotics``: ``h(x) x^(1/3) + 6 x^(-1/3)`` equals
      ``B(1/3, 1/3)`` up to the next order of the expansion.
    * ``ratio-growth``: ``|h_X|_2 / psi~(2)`` keeps growing with ``X``.
    * ``expected-divergence``: ``||f*f||_{G psi~} = inf`` while
      ``||f||^2 = 1``; a pass confirms the divergence.

    A quadrature failure in one cell is recorded in that cell (which then
    fails) and the campaign continues.
    """
    xs = np.asarray(sorted(float(v) for v in X_list))
    ps = [float(p) for p in p_list]
    if xs.size < 3:
        raise ValueError("the campaign needs at least three truncations")
    if not any(1.5 < p <= 3.0 for p in ps) or not any(p > 3.0 for p in ps):
        raise ValueError("p_list needs exponents in (3/2, 3] and above 3")
    tilde = PsiSpec.tilde()
    f = make_power_tail(ALPHA)
    beta = beta_function(1.0 / 3.0, 1.0 / 3.0)
    reports: list[VerificationReport] = []

    for p in (2.0, 3.0, 6.0):
        start = time.perf_counter()
        try:
            val, err = lp_norm_with_error(f, p)
        except QuadratureError:
            val, err = math.nan, math.inf
        reports.append(VerificationReport(
            f"counterexample:closed-form:{p:g}", "closed-form", val, tilde(p),
            {"mode": "equal", "rel": CLOSED_FORM_TOL}, {"p": p, "quad_error": err},
            time.perf_counter() - start))

    start = time.perf_counter()
    nat = grand_norm(f, tilde, exact=True)
    reports.append(VerificationReport(
        "counterexample:natural-norm", "natural-norm", nat.value, 1.0,
        {"mode": "equal", "rel": CLOSED_FORM_TOL}, {"psi": tilde.text, **nat.as_dict()},
        time.perf_counter() - start))

    # |h_X|_p^p on every truncation, all exponents in one quadrature per X
    table = np.full((xs.size, len(ps)), math.nan)
    errors = []
    for i, cut in enumerate(xs):
        try:
            vals, err, ok = truncated_power_integrals(cut, ps)
            table[i] = vals
            errors.append(err if ok else math.inf)
        except QuadratureError:
            errors.append(math.inf)
    prov_common = {"X": [float(v) for v in xs], "quad_error": [float(e) for e in errors]}

    for j, p in enumerate(ps):
        col = table[:, j]
        cell = {"p": p, "integrals": [float(v) for v in col], **prov_common}
        if not np.all(np.isfinite(col)):
            reports.append(VerificationReport(f"counterexample:truncation:{p:g}", "truncation-failure",
                                              math.nan, math.nan, {"mode": "equal", "rel": 0.0}, cell))
            continue
        if p < 3.0:
            reports.append(VerificationReport(
                f"counterexample:divergence:{p:g}", "divergence", _slope(xs, col), 1.0 - p / 3.0,
                {"mode": "slope", "rel": SLOPE_TOL}, cell))
        elif p == 3.0:
            steps = np.diff(col) / (beta ** 3 * np.diff(np.log(xs)))
            cell["increments_over_b3_log"] = [float(v) for v in steps]
            reports.append(VerificationReport(
                "counterexample:log-divergence:3", "log-divergence", float(steps[-1]), 1.0,
                {"mode": "equal", "rel": LOG_TOL}, cell))
        else:
            norms = col ** (1.0 / p)
            change = abs(norms[-1] - norms[-2]) / norms[-1]
            cell["norms"] = [float(v) for v in norms]
            reports.append(VerificationReport(
                f"counterexample:convergence:{p:g}", "convergence", change, STABLE_RTOL,
                {"mode": "lt", "rel": STABLE_RTOL}, cell))

    if 2.0 in ps:
        growth = table[:, ps.index(2.0)] ** 0.5 / tilde(2.0)
        reports.append(VerificationReport(
            "counterexample:ratio-growth", "ratio-growth", float(growth[-1]), float(growth[0]),
            {"mode": "gt", "rel": 0.0},
            {"ratios": [float(v) for v in growth], "increasing": bool(np.all(np.diff(growth) > 0)),
             **prov_common}))

    for x in asymptotic_x:
        start = time.perf_counter()
        scaled = counterexample_h(x, ALPHA) * x ** (1.0 / 3.0)
        corrected = scaled + 6.0 * x ** (-1.0 / 3.0)
        reports.append(VerificationReport(
            f"counterexample:beta-asymptotics:{x:g}", "beta-asymptotics", corrected, beta,
            {"mode": "equal", "rel": 2.0 * x ** (-4.0 / 3.0) / beta + 1e-10},
            {"x": x, "h_times_x_cube_root": scaled, "relative_gap": 1.0 - scaled / beta,
             "predicted_gap": 6.0 * x ** (-1.0 / 3.0) / beta},
            time.perf_counter() - start))

    start = time.perf_counter()
    conv = grand_norm(power_tail_self_convolution(ALPHA), tilde)
    reports.append(VerificationReport(
        "counterexample:algebra-failure", "expected-divergence", conv.value, nat.value ** 2,
        {"mode": "expected-divergence", "rel": 0.0},
        {"psi": tilde.text, "f*f": conv.as_dict(), "f": nat.value},
        time.perf_counter() - start))
    return reports
