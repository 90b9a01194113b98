"""Text, JSON and CSV rendering of check reports.

Floats are written with 17 significant digits so that identical runs give
byte-identical output and values round-trip exactly.
"""

from __future__ import annotations

import csv
import io
import json
import math
from typing import Iterable, List, Sequence

import numpy as np

from .checks import CheckReport

RECORD_KEYS = (
    "check", "rep", "dim", "hbar", "params", "max_deviation", "tolerance",
    "pass", "asserted", "info",
)


def _plain(value):
    """Convert numpy scalars and containers to builtin Python values."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    if isinstance(value, (complex, np.complexfloating)):
        return {"re": float(value.real), "im": float(value.imag)}
    return value


def format_float(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    text = format(x, ".17g")
    if not any(c in text for c in ".eEn"):
        text += ".0"
    return text


def dumps(value) -> str:
    """JSON encoding with fixed-precision floats and key order preserved."""
    if isinstance(value, dict):
        return "{" + ", ".join(
            f"{json.dumps(str(k))}: {dumps(v)}" for k, v in value.items()
        ) + "}"
    if isinstance(value, list):
        return "[" + ", ".join(dumps(v) for v in value) + "]"
    if isinstance(value, bool) or value is None:
        return json.dumps(value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format_float(value)
    return json.dumps(value)


def to_record(report: CheckReport) -> dict:
    return _plain({
        "check": report.name,
        "rep": report.rep,
        "dim": report.dim,
        "hbar": report.hbar,
        "params": report.params,
        "max_deviation": report.max_deviation,
        "tolerance": report.tolerance,
        "pass": report.passed,
        "asserted": report.asserted,
        "info": report.info,
    })


def render_json(reports: Iterable[CheckReport]) -> str:
    return "".join(dumps(to_record(r)) + "\n" for r in reports)


def render_csv(reports: Iterable[CheckReport]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["check", "rep", "dim", "hbar", "max_deviation", "tolerance",
                     "pass", "asserted", "params"])
    for r in reports:
        rec = to_record(r)
        writer.writerow([
            rec["check"], rec["rep"], rec["dim"], format_float(rec["hbar"]),
            format_float(rec["max_deviation"]), format_float(rec["tolerance"]),
            str(rec["pass"]).lower(), str(rec["asserted"]).lower(), dumps(rec["params"]),
        ])
    return buf.getvalue()


def render_text(reports: Iterable[CheckReport]) -> str:
    lines = []
    for r in reports:
        if r.passed:
            status = "PASS"
        elif not r.asserted:
            status = "XFAIL" if r.info.get("expected_failure") else "INFO"
        else:
            status = "FAIL"
        line = (f"{status:5} {r.name:<18} rep={r.rep} dim={r.dim} "
                f"max_dev={r.max_deviation:.3e} tol={r.tolerance:.1e}")
        extra = r.info.get("label")
        if extra:
            line += f" [{extra}]"
        lines.append(line)
    return "".join(line + "\n" for line in lines)


def render(reports: Sequence[CheckReport], fmt: str) -> str:
    if fmt == "json":
        return render_json(reports)
    if fmt == "csv":
        return render_csv(reports)
    if fmt == "text":
        return render_text(reports)
    raise ValueError(f"unknown output format {fmt!r}")


def render_table(columns: List[str], rows: List[list], fmt: str) -> str:
    """Sweep rows as CSV (also used for ``text``) or JSON lines."""
    if fmt == "json":
        return "".join(
            dumps(_plain(dict(zip(columns, row)))) + "\n" for row in rows
        )
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_float(v) if isinstance(v, float) else v for v in _plain(row)])
    return buf.getvalue()
