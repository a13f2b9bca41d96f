"""Suite reports and their deterministic text / CSV / JSON renderings."""

from __future__ import annotations

import csv
import io
import json
import math
from typing import Any


def check(name: str, residual, tolerance, passed: bool, **parameters) -> dict:
    return {"check": name, "parameters": parameters, "residual": _plain(residual),
            "tolerance": _plain(tolerance), "pass": bool(passed)}


def _plain(x):
    if isinstance(x, complex):
        return [x.real, x.imag]
    if hasattr(x, "item"):
        return x.item()
    return x


def make_report(suite: str, seed: int, parameters: dict, checks: list[dict],
                columns: list[str] | None = None, rows: list[list] | None = None,
                metadata: dict | None = None) -> dict:
    rep = {
        "suite": suite,
        "seed": seed,
        "parameters": parameters,
        "checks": checks,
        "pass": all(c["pass"] for c in checks),
    }
    if columns is not None:
        rep["columns"] = list(columns)
        rep["rows"] = [list(r) for r in rows or []]
    if metadata:
        rep["metadata"] = metadata
    return rep


def _fmt(x: Any) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        if math.isfinite(x) and x != 0 and (abs(x) < 1e-3 or abs(x) >= 1e6):
            return "%.6e" % x
        return repr(x)
    if isinstance(x, (list, tuple)):
        return "[" + ", ".join(_fmt(v) for v in x) + "]"
    if isinstance(x, dict):
        return " ".join("%s=%s" % (k, _fmt(v)) for k, v in sorted(x.items()))
    return str(x)


def _text_table(header: list[str], body: list[list[str]]) -> list[str]:
    widths = [len(h) for h in header]
    for row in body:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    line = "  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip()
    out = [line, "  ".join("-" * w for w in widths)]
    for row in body:
        out.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
    return out


def emit_table(report: dict, fmt: str = "text") -> str:
    """Render a report; identical reports give identical text."""
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if "rows" in report:
            w.writerow(report["columns"])
            for row in report["rows"]:
                w.writerow([_fmt(v) for v in row])
        else:
            w.writerow(["check", "parameters", "residual", "tolerance", "pass"])
            for c in report["checks"]:
                w.writerow([c["check"], _fmt(c["parameters"]), _fmt(c["residual"]),
                            _fmt(c["tolerance"]), _fmt(c["pass"])])
        return buf.getvalue()
    if fmt != "text":
        raise ValueError("unknown format %r" % fmt)
    lines = ["suite: %s  seed: %d  pass: %s" % (report["suite"], report["seed"], _fmt(report["pass"])),
             "parameters: %s" % _fmt(report["parameters"])]
    if report.get("metadata"):
        lines.append("metadata: %s" % _fmt(report["metadata"]))
    if "rows" in report:
        lines.append("")
        lines.extend(_text_table(report["columns"], [[_fmt(v) for v in r] for r in report["rows"]]))
    lines.append("")
    body = [[c["check"], _fmt(c["parameters"]), _fmt(c["residual"]), _fmt(c["tolerance"]),
             "PASS" if c["pass"] else "FAIL"] for c in report["checks"]]
    lines.extend(_text_table(["check", "parameters", "residual", "tolerance", "result"], body))
    return "\n".join(lines) + "\n"


def write_output(text: str, path: str | None) -> None:
    if path is None:
        import sys
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError("cannot write %s: %s" % (path, exc)) from exc
