"""Command-line entry point ``gls``.

Function families: ``gaussian:SIGMA``, ``indicator:A:B``, ``power-tail:ALPHA``,
``mixture:SEED[:COMPONENTS]``.  Generating functions: ``gaussian:SIGMA``,
``power-m:M``, ``critical:B:BETA``, ``extremal:R``, ``tilde``.

Exit status: 0 when every case passes, 1 when some case fails, 2 on a
usage or configuration error.
"""
from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from .convolution import ConvolutionPlan, convolve_grid
from .functions import FamilySpec, GroupDomain, sample
from .lab import campaign
from .lab.lattice import fitting_domain
from .norms import grand_norm, lp_norm, p_grid, ratio
from .reporting import CampaignConfig, ReportError, canonical_json, emit_report, write_rows

__all__ = ["cli_main", "build_parser"]

FAMILY_HELP = "function family: gaussian:S, indicator:A:B, power-tail:ALPHA, mixture:SEED[:K]"
PSI_HELP = "generating function: gaussian:S, power-m:M, critical:B:BETA, extremal:R, tilde"


class UsageError(Exception):
    pass


def _float(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _add_output(p: argparse.ArgumentParser, fmt: bool = True) -> None:
    p.add_argument("--output", "-o", default="-", help="output path ('-' for stdout)")
    if fmt:
        p.add_argument("--format", choices=("json", "csv"), default="json")


def _add_grid(p: argparse.ArgumentParser) -> None:
    p.add_argument("--L", type=_float, default=None, dest="half_width",
                   help="half width of the real-line grid [-L, L) (default: fitted to the inputs)")
    p.add_argument("--n", type=int, default=None, help="number of grid nodes (even)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gls",
        description="Grand Lebesgue norms, convolutions and verification campaigns.",
        epilog="exit status: 0 all cases pass, 1 some case fails, 2 usage error",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("norm", help="L_p norm of a family member")
    p.add_argument("--family", required=True, help=FAMILY_HELP)
    p.add_argument("--p", type=_float, required=True, help="exponent in [1, inf]")
    p.add_argument("--exact", action="store_true", help="use the closed form when available")

    p = sub.add_parser("grand-norm", help="Grand Lebesgue norm as JSON")
    p.add_argument("--family", required=True, help=FAMILY_HELP)
    p.add_argument("--psi", required=True, help=PSI_HELP)
    p.add_argument("--tol", type=_float, default=1e-6, help="refinement width in p")
    p.add_argument("--exact", action="store_true", help="use closed-form L_p norms")
    _add_output(p, fmt=False)

    p = sub.add_parser("convolve", help="sampled f*g as CSV (x, h)")
    p.add_argument("--f", required=True, help=FAMILY_HELP)
    p.add_argument("--g", required=True, help=FAMILY_HELP)
    p.add_argument("--method", choices=("spectral", "direct-grid"), default="spectral")
    _add_grid(p)
    _add_output(p, fmt=False)

    p = sub.add_parser("verify", help="run a verification campaign")
    p.add_argument("target", choices=("young", "algebra", "scaling", "fourier", "continuity"))
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--pairs", type=int, default=None, help="number of random function pairs")
    p.add_argument("--psi", action="append", default=None, help=PSI_HELP + " (repeatable)")
    p.add_argument("--tol", type=_float, default=None)
    _add_grid(p)
    _add_output(p)

    p = sub.add_parser("counterexample", help="the power-tail counterexample campaign")
    p.add_argument("--X", type=_float, nargs="+", default=None, dest="truncations",
                   help="truncation points (at least three)")
    p.add_argument("--p", type=_float, nargs="+", default=None, dest="exponents",
                   help="exponents, some in (3/2, 3] and some above 3")
    _add_output(p)

    p = sub.add_parser("curve", help="(p, |f|_p / psi(p)) plot data as CSV")
    p.add_argument("--family", required=True, help=FAMILY_HELP)
    p.add_argument("--psi", required=True, help=PSI_HELP)
    p.add_argument("--pmax", type=_float, default=64.0)
    p.add_argument("--nodes", type=int, default=257)
    p.add_argument("--exact", action="store_true")
    _add_output(p, fmt=False)
    return parser


def _family(text: str):
    try:
        return FamilySpec.parse(text).build()
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _psi(text: str):
    try:
        return campaign.parse_psi(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _domain(args, *fs) -> GroupDomain:
    auto = fitting_domain(*fs)
    half = args.half_width if args.half_width is not None else auto.half_width
    n = args.n if args.n is not None else auto.n
    try:
        return GroupDomain.real_line(half, n)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _cmd_norm(args) -> int:
    f = _family(args.family)
    if not args.p >= 1.0:
        raise UsageError("--p must be at least 1")
    print(repr(lp_norm(f, args.p, exact=args.exact)))
    return 0


def _cmd_grand_norm(args) -> int:
    f, spec = _family(args.family), _psi(args.psi)
    res = grand_norm(f, spec, args.tol, exact=args.exact)
    doc = {"family": args.family, "psi": spec.text, **res.as_dict()}
    _write_text(canonical_json(doc), args.output)
    return 0


def _write_text(text: str, path: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise ReportError(f"cannot write {path!r}: {exc.strerror}") from exc


def _cmd_convolve(args) -> int:
    f, g = _family(args.f), _family(args.g)
    dom = _domain(args, f, g)
    h = convolve_grid(sample(f, dom), sample(g, dom), ConvolutionPlan(args.method))
    write_rows(("x", "h"), zip(dom.points(), h.values), args.output)
    return 0


def _cmd_curve(args) -> int:
    f, spec = _family(args.family), _psi(args.psi)
    upper = min(args.pmax, spec.b - 1e-9 * (spec.b - 1.0)) if math.isfinite(spec.b) else args.pmax
    if not upper > 1.0 or args.nodes < 2:
        raise UsageError("the curve needs pmax > 1 and at least two nodes")
    ps = np.unique(p_grid(upper, args.nodes))
    rows = []
    for p in ps:
        num, den = lp_norm(f, p, exact=args.exact), spec(p)
        value, bad = ratio(num, den)
        finite = math.isfinite(value) and not bad
        rows.append((p, value, 1 if finite else 0))
    write_rows(("p", "ratio", "finite"), rows, args.output)
    return 0


def _exit_for(reports) -> int:
    return 0 if all(r.passed for r in reports) else 1


def _cmd_verify(args) -> int:
    seed = args.seed
    psi = tuple(args.psi) if args.psi else ()
    for s in psi:
        _psi(s)
    t = args.target
    domain = None
    if t in ("algebra", "young"):
        pairs = args.pairs if args.pairs is not None else (50 if t == "algebra" else 10)
        if pairs < 1:
            raise UsageError("--pairs must be positive")
        fam = (campaign.random_pairs(seed, pairs) if t == "algebra"
               else campaign.young_functions(seed, pairs))
        domain = _domain(args, *[f for pair in fam for f in pair])
    if t == "algebra":
        psi = psi or campaign.BANACH_BATTERY
        tol = 1e-6 if args.tol is None else args.tol
        reports = campaign.banach_campaign(seed, pairs, psi, tol, domain)
        extra = {"pairs": pairs}
    elif t == "young":
        tol = 1e-6 if args.tol is None else args.tol
        reports = campaign.young_campaign(seed, pairs, campaign.YOUNG_EXPONENTS, tol, domain)
        extra = {"pairs": pairs, "exponents": [v for pq in campaign.YOUNG_EXPONENTS for v in pq]}
    elif t == "scaling":
        tol = 0.05 if args.tol is None else args.tol
        reports = campaign.scaling_campaign()
        extra = {"exponents": [v for tr in campaign.SCALING_TRIPLES for v in tr]}
    elif t == "fourier":
        tol = 1e-5 if args.tol is None else args.tol
        reports = campaign.fourier_campaign(tol=tol)
        extra = {}
    else:
        tol = 1e-3 if args.tol is None else args.tol
        reports = campaign.uc_campaign(seed, tol=tol)
        extra = {"deltas": [1e-3, 1e-2, 1e-1]}
    config = CampaignConfig(
        command="verify", target=t, seed=seed, tol=tol, psi=psi,
        half_width=domain.half_width if domain else 0.0, n=domain.n if domain else 0,
        format=args.format, output=args.output, **extra)
    emit_report(reports, args.format, args.output, seed=seed, config=config)
    return _exit_for(reports)


def _cmd_counterexample(args) -> int:
    from .lab.counterexample import DEFAULT_P, DEFAULT_X

    xs = tuple(args.truncations) if args.truncations else DEFAULT_X
    ps = tuple(args.exponents) if args.exponents else DEFAULT_P
    try:
        reports = campaign.counterexample_reports(xs, ps)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    config = CampaignConfig(command="counterexample", truncations=xs, exponents=ps,
                            psi=("tilde",), families=("power-tail:1.5",),
                            format=args.format, output=args.output)
    emit_report(reports, args.format, args.output, config=config)
    return _exit_for(reports)


COMMANDS = {
    "norm": _cmd_norm,
    "grand-norm": _cmd_grand_norm,
    "convolve": _cmd_convolve,
    "verify": _cmd_verify,
    "counterexample": _cmd_counterexample,
    "curve": _cmd_curve,
}


def cli_main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse has printed usage to stderr
        return int(exc.code or 0) and 2
    try:
        return COMMANDS[args.command](args)
    except (UsageError, ReportError, ValueError) as exc:
        print(f"gls: error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
