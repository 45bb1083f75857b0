"""Campaign configuration and machine-readable report emission.

JSON reports have the layout::

    {"version", "seed", "config", "cases": [{"id", "tag", "lhs", "rhs",
     "ratio", "pass", "tolerances", "provenance"}, ...]}

with keys in exactly this order.  Floats are written with 17 significant
digits (so they round-trip bit for bit) and non-finite values as the
strings ``"inf"``, ``"-inf"`` and ``"nan"``.  Wall times and the output
path are left out so identical inputs give byte-identical files.
"""
from __future__ import annotations

import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, fields
from typing import Iterable, Sequence

import numpy as np

from .lab.report import VerificationReport

__all__ = [
    "REPORT_VERSION",
    "ReportError",
    "CampaignConfig",
    "canonical_json",
    "report_document",
    "emit_report",
    "write_rows",
]

REPORT_VERSION = "1"
CSV_HEADER = ("id", "tag", "lhs", "rhs", "ratio", "pass")


class ReportError(OSError):
    """The report could not be written."""


def _number(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return "%.17g" % x


def _encode(obj, indent: int, level: int) -> str:
    pad = "\n" + " " * (indent * (level + 1))
    end = "\n" + " " * (indent * level)
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _number(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [json.dumps(str(k)) + ": " + _encode(v, indent, level + 1) for k, v in obj.items()]
        return "{" + pad + ("," + pad).join(items) + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        if all(isinstance(v, (int, float, np.number, bool, str)) or v is None for v in seq):
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in seq) + "]"
        return "[" + pad + ("," + pad).join(_encode(v, indent, level + 1) for v in seq) + end + "]"
    if isinstance(obj, complex):
        return _encode([obj.real, obj.imag], indent, level)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def canonical_json(obj, indent: int = 2) -> str:
    """Deterministic JSON text (key order as given, floats at 17 digits)."""
    return _encode(obj, indent, 0) + "\n"


def _decode_number(v):
    if v in ("inf", "-inf", "nan"):
        return float(v)
    return v


@dataclass(frozen=True)
class CampaignConfig:
    """Everything that determines a campaign's output; defaults are explicit."""

    command: str
    target: str = ""
    seed: int = 7
    pairs: int = 0
    tol: float = 1e-6
    half_width: float = 0.0
    n: int = 0
    psi: tuple[str, ...] = ()
    families: tuple[str, ...] = ()
    exponents: tuple[float, ...] = ()
    deltas: tuple[float, ...] = ()
    truncations: tuple[float, ...] = ()
    format: str = "json"
    output: str = "-"

    def __post_init__(self):
        if self.format not in ("json", "csv"):
            raise ValueError(f"unknown report format {self.format!r}")
        for name in ("psi", "families"):
            object.__setattr__(self, name, tuple(str(v) for v in getattr(self, name)))
        for name in ("exponents", "deltas", "truncations"):
            object.__setattr__(self, name, tuple(float(v) for v in getattr(self, name)))
        object.__setattr__(self, "seed", int(self.seed))
        object.__setattr__(self, "pairs", int(self.pairs))
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "tol", float(self.tol))
        object.__setattr__(self, "half_width", float(self.half_width))

    def to_dict(self) -> dict:
        d = asdict(self)
        return {f.name: list(d[f.name]) if isinstance(d[f.name], tuple) else d[f.name]
                for f in fields(self)}

    @classmethod
    def from_dict(cls, data: dict) -> "CampaignConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        clean = {}
        for k, v in data.items():
            clean[k] = tuple(_decode_number(x) for x in v) if isinstance(v, list) else _decode_number(v)
        return cls(**clean)

    def canonical(self) -> str:
        return canonical_json(self.to_dict())

    @classmethod
    def from_canonical(cls, text: str) -> "CampaignConfig":
        return cls.from_dict(json.loads(text))


def _case(report: VerificationReport) -> dict:
    return {
        "id": report.case_id,
        "tag": report.tag,
        "lhs": report.lhs,
        "rhs": report.rhs,
        "ratio": report.ratio,
        "pass": report.passed,
        "tolerances": report.tolerances,
        "provenance": report.provenance,
    }


def _document_config(config: CampaignConfig | None) -> dict:
    # the destination does not affect results, so reports written to
    # different paths stay byte-identical
    if config is None:
        return {}
    d = config.to_dict()
    del d["output"]
    return d


def report_document(reports: Sequence[VerificationReport], seed: int | None = None,
                    config: CampaignConfig | None = None) -> dict:
    return {
        "version": REPORT_VERSION,
        "seed": seed,
        "config": _document_config(config),
        "cases": [_case(r) for r in reports],
    }


def _csv_text(reports: Sequence[VerificationReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in reports:
        w.writerow([r.case_id, r.tag, _number(r.lhs).strip('"'), _number(r.rhs).strip('"'),
                    _number(r.ratio).strip('"'), "true" if r.passed else "false"])
    return buf.getvalue()


def _write(text: str, path: str | None) -> int:
    data = text.encode("utf-8")
    if path in (None, "-"):
        sys.stdout.write(text)
        sys.stdout.flush()
        return len(data)
    try:
        with open(path, "wb") as fh:
            fh.write(data)
    except OSError as exc:
        raise ReportError(f"cannot write report to {path!r}: {exc.strerror}") from exc
    return len(data)


def emit_report(reports: Sequence[VerificationReport], format: str = "json", path: str | None = "-", *,
                seed: int | None = None, config: CampaignConfig | None = None) -> int:
    """Write reports as JSON or CSV to ``path`` (``-`` for stdout); returns bytes written."""
    if not reports:
        raise ValueError("nothing to report")
    if format == "json":
        text = canonical_json(report_document(reports, seed, config))
    elif format == "csv":
        text = _csv_text(reports)
    else:
        raise ValueError(f"unknown report format {format!r}")
    return _write(text, path)


def write_rows(header: Sequence[str], rows: Iterable[Sequence[float]], path: str | None = "-") -> int:
    """Plot data as CSV, numbers at 17 significant digits."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_number(float(v)).strip('"') for v in row])
    return _write(buf.getvalue(), path)
