"""Plain-text series files, detection reports, spectrum and calibration tables."""

import csv
import io as _io
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .exceptions import DataError

SPECTRUM_COLUMNS = ("frequency", "observed", "lower", "upper", "included", "significant",
                    "density")
CALIBRATION_COLUMNS = ("label", "estimate", "ci_2.5", "ci_97.5")
REPORT_KEYS = ("reject", "freq_max", "q_upper", "q_lower", "alpha", "G", "L", "basis",
               "range", "seed")


def format_float(value):
    """Shortest decimal text that round-trips to the same double."""
    if value is None:
        return ""
    return repr(float(value))


def parse_series(text):
    """Parse one number per line; blank lines and ``#`` comment lines are skipped."""
    values = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        try:
            v = float(s)
        except ValueError:
            raise DataError(f"line {lineno}: cannot parse {s!r} as a number") from None
        if not math.isfinite(v):
            raise DataError(f"line {lineno}: non-finite value {s!r}")
        values.append(v)
    if not values:
        raise DataError("series file contains no values")
    return np.array(values)


def read_series(path):
    return parse_series(Path(path).read_text(encoding="utf-8"))


def write_series(path, values, header=None):
    lines = [f"# {header}"] if header else []
    lines += [format_float(v) for v in np.asarray(values, dtype=float)]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


@dataclass(frozen=True)
class SpectrumRow:
    frequency: float
    observed: float
    lower: float
    upper: float
    included: bool
    significant: bool
    density: float


def spectrum_table(result, density_model=None):
    """Rows for every basis vector, sorted by frequency.

    ``lower``/``upper`` are the corrected interval bounds (None outside the
    tested range).  ``density`` is the raw AR(1) spectral density of
    ``density_model`` (default: the null model of the run) at the row
    frequency, with no overlay scaling applied.
    """
    model = density_model if density_model is not None else result.null_model
    lower = {int(i): float(v) for i, v in zip(result.included, result.lower)}
    upper = {int(i): float(v) for i, v in zip(result.included, result.upper)}
    signif = {int(i): bool(s) for i, s in zip(result.included, result.significant)}
    rows = []
    for k in np.argsort(result.all_frequencies, kind="stable"):
        f = float(result.all_frequencies[k])
        rows.append(SpectrumRow(
            frequency=f,
            observed=float(result.all_observed[k]),
            lower=lower.get(int(k)),
            upper=upper.get(int(k)),
            included=int(k) in lower,
            significant=signif.get(int(k), False),
            density=float(model.spectral_density(f)) if model is not None else None,
        ))
    return rows


def _csv_text(header, rows):
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def spectrum_csv(rows):
    return _csv_text(SPECTRUM_COLUMNS, [
        (format_float(r.frequency), format_float(r.observed), format_float(r.lower),
         format_float(r.upper), int(r.included), int(r.significant), format_float(r.density))
        for r in rows
    ])


def calibration_csv(rows):
    """``rows`` are ``(label, ErrorEstimate)`` pairs."""
    return _csv_text(CALIBRATION_COLUMNS, [
        (label, format_float(e.proportion), format_float(e.ci_low), format_float(e.ci_high))
        for label, e in rows
    ])


def _clean(value):
    if isinstance(value, (np.floating, float)):
        return float(value) if math.isfinite(value) else None
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    return value


def detection_report(result, *, seed, window, n_surrogates, freq_range):
    """Key-value report of one detection run (JSON-serializable)."""
    report = {
        "reject": bool(result.reject),
        "freq_max": _clean(result.freq_max),
        "q_upper": _clean(result.q_upper),
        "q_lower": _clean(result.q_lower),
        "alpha": float(f"{1.0 - result.confidence:.12g}"),
        "G": int(n_surrogates),
        "L": int(window),
        "basis": result.basis,
        "range": [float(v) for v in freq_range],
        "seed": seed,
        "two_tailed": bool(result.two_tailed),
        "null_model": None if result.null_model is None else {
            "varphi": result.null_model.varphi, "delta": result.null_model.delta},
        "intervals": [
            {"frequency": _clean(f), "observed": _clean(o), "lower": _clean(lo),
             "upper": _clean(hi), "significant": bool(s)}
            for f, o, lo, hi, s in zip(result.frequencies, result.observed, result.lower,
                                       result.upper, result.significant)
        ],
    }
    return report


def dumps(payload):
    """Deterministic JSON text (stable key order, round-trip float repr)."""
    return json.dumps(payload, indent=2, sort_keys=False, allow_nan=False) + "\n"


def write_text(path, text):
    Path(path).write_text(text, encoding="utf-8")
