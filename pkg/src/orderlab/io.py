"""Bit-stable CSV/JSON emission of scan reports."""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

from .errors import ComputationError
from .experiments.results import DensityCurve, ExceptionReport

DENSITY_COLUMNS = ("bucket_lo", "bucket_hi", "population", "exceptions", "fraction")
AUX_FILE = {"corollary3": "witnesses.csv", "matthews": "counts.csv"}
FORMATS = ("csv", "json", "both")


class ReportWriteError(ComputationError, OSError):
    pass


def fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(v) for v in r])
    return buf.getvalue()


def exceptions_csv(report: ExceptionReport) -> str:
    return _csv_text(report.columns, sorted(report.exceptions, key=lambda r: r[0]))


def density_csv(curve: DensityCurve) -> str:
    rows = [(lo, hi, n, e, (e / n) if n else 0.0) for lo, hi, n, e in curve.buckets]
    return _csv_text(DENSITY_COLUMNS, rows)


def report_json(report: ExceptionReport) -> str:
    return json.dumps(report.to_dict(), indent=1) + "\n"


def render(report: ExceptionReport, fmt_: str = "both") -> dict[str, str]:
    """File name -> exact file contents."""
    if fmt_ not in FORMATS:
        raise ValueError(f"format must be one of {FORMATS}")
    files = {}
    if fmt_ in ("csv", "both"):
        if report.columns:
            files["exceptions.csv"] = exceptions_csv(report)
        files["density.csv"] = density_csv(report.density)
        for name in report.series:
            files[f"density_{name}.csv"] = density_csv(report.series_curve(name))
        if report.aux_columns:
            files[AUX_FILE.get(report.scan, "aux.csv")] = _csv_text(report.aux_columns, report.aux_rows)
    if fmt_ in ("json", "both"):
        files["report.json"] = report_json(report)
    return files


def emit_report(report: ExceptionReport, out_dir, fmt_: str = "both") -> list[Path]:
    out = Path(out_dir)
    written = []
    try:
        out.mkdir(parents=True, exist_ok=True)
        for name, text in render(report, fmt_).items():
            path = out / name
            path.write_text(text)
            written.append(path)
    except OSError as exc:
        raise ReportWriteError(f"cannot write report to {out}: {exc}") from exc
    return written


def load_report(path) -> ExceptionReport:
    return ExceptionReport.from_dict(json.loads(Path(path).read_text()))
