"""Score ingestion and curve/report serialisation.

Two output formats:

``csv`` (delimited)
    Comma separated, ``.`` decimal point, floats written with 17
    significant digits so they parse back to the same double.
``json`` (structured)
    The same fields nested per estimator; floats use Python's shortest
    round-trip repr.

Serialisation is deterministic: equal inputs give equal bytes, and
``serialize(parse(serialize(x))) == serialize(x)``.
"""

import csv
import io as _io
import json
import math
import os

import numpy as np

from .combinatorics import EstimatorKind
from .comparison import ComparisonReport, ConclusionRate
from .curves import EvpCurve, EvpPoint
from .estimators import ScorePool
from .simulation import SimulationReport

CURVE_COLUMNS = ("n", "estimator", "mean", "variance")
SIMULATION_COLUMNS = ("n", "estimator", "mean", "bias", "variance", "mse", "stderr")
COMPARISON_COLUMNS = ("B", "estimator", "error_rate", "ties", "resamples")

_FORMATS = {"csv": "csv", "delimited": "csv", "json": "json", "structured": "json"}


class ScoreParseError(ValueError):
    pass


def _fmt(fmt):
    try:
        return _FORMATS[fmt.lower()]
    except (KeyError, AttributeError):
        raise ValueError(f"unknown format {fmt!r}; use csv or json") from None


def _num(x):
    return format(float(x), ".17g")


# reading scores


def _parse_score(text, lineno, origin):
    try:
        value = float(text)
    except ValueError:
        raise ScoreParseError(f"{origin}: line {lineno}: cannot parse {text.strip()!r} as a number") \
            from None
    if not math.isfinite(value):
        raise ScoreParseError(f"{origin}: line {lineno}: non-finite value {text.strip()!r}")
    return value


def _looks_numeric(text):
    try:
        float(text)
    except ValueError:
        return False
    return True


def _parse_lines(lines, origin, fmt):
    numbered = [(i, line.strip()) for i, line in enumerate(lines, start=1)]
    content = [(i, line) for i, line in numbered if line]
    if not content:
        raise ScoreParseError(f"{origin}: no scores found")
    if fmt is None:
        first = content[0][1]
        fmt = "csv" if "," in first and not _looks_numeric(first) else "lines"
    if fmt == "lines":
        return [_parse_score(line, i, origin) for i, line in content]
    if fmt != "csv":
        raise ValueError(f"unknown score format {fmt!r}; use lines or csv")

    header_line, header = content[0]
    names = [h.strip().lower() for h in next(csv.reader([header]))]
    if "score" not in names:
        raise ScoreParseError(f"{origin}: line {header_line}: header has no 'score' column")
    col = names.index("score")
    scores = []
    for i, line in content[1:]:
        fields = next(csv.reader([line]))
        if col >= len(fields):
            raise ScoreParseError(f"{origin}: line {i}: missing score field")
        scores.append(_parse_score(fields[col], i, origin))
    if not scores:
        raise ScoreParseError(f"{origin}: header but no score rows")
    return scores


def read_scores(source, fmt=None):
    """Read trial scores into a :class:`ScorePool`.

    ``source`` is a path or an open text stream. ``fmt`` is ``"lines"``
    (one number per non-empty line), ``"csv"`` (header row with a
    ``score`` column) or None to detect from the first non-empty line.

    >>> read_scores(io.StringIO("0.41\\n0.39\\n0.44\\n")).scores.tolist()
    [0.39, 0.41, 0.44]
    """
    if isinstance(source, (str, os.PathLike)):
        with open(source, newline="") as fh:
            lines = fh.readlines()
        origin = os.fspath(source)
    else:
        lines = source.read().splitlines()
        origin = getattr(source, "name", "<stream>")
    return ScorePool(_parse_lines(lines, origin, fmt))


# curves


def write_curve(curves, fmt="csv"):
    """Serialise one curve or a sequence of curves to bytes."""
    if isinstance(curves, EvpCurve):
        curves = (curves,)
    fmt = _fmt(fmt)
    if fmt == "csv":
        rows = [
            (str(p.n), c.kind.letter, _num(p.mean), _num(p.variance))
            for c in curves
            for p in c.points
        ]
        return _csv_bytes(CURVE_COLUMNS, rows)
    doc = {
        "type": "evp_curves",
        "curves": [
            {
                "estimator": c.kind.letter,
                "B": c.B,
                "points": [
                    {"n": p.n, "mean": float(p.mean), "variance": float(p.variance)}
                    for p in c.points
                ],
            }
            for c in curves
        ],
    }
    return _json_bytes(doc)


def read_curve(data, fmt="csv"):
    """Parse bytes from :func:`write_curve` back into a tuple of curves."""
    fmt = _fmt(fmt)
    if fmt == "csv":
        grouped = {}
        for row in _csv_rows(data, CURVE_COLUMNS):
            kind = EstimatorKind.parse(row[1])
            grouped.setdefault(kind, []).append(EvpPoint(int(row[0]), float(row[2]), float(row[3])))
        return tuple(EvpCurve(k, len(pts), tuple(pts)) for k, pts in grouped.items())
    doc = _json_doc(data, "evp_curves")
    return tuple(
        EvpCurve(
            EstimatorKind.parse(c["estimator"]),
            int(c["B"]),
            tuple(EvpPoint(int(p["n"]), float(p["mean"]), float(p["variance"])) for p in c["points"]),
        )
        for c in doc["curves"]
    )


# reports

_SIM_FIELDS = ("mean", "bias", "variance", "mse", "stderr")


def write_report(report, fmt="csv"):
    """Serialise a :class:`SimulationReport` or :class:`ComparisonReport`."""
    fmt = _fmt(fmt)
    if isinstance(report, SimulationReport):
        return _write_simulation(report, fmt)
    if isinstance(report, ComparisonReport):
        return _write_comparison(report, fmt)
    raise TypeError(f"cannot serialise {type(report).__name__}")


def _write_simulation(rep, fmt):
    if fmt == "csv":
        rows = []
        for k, kind in enumerate(rep.kinds):
            for n in range(1, rep.B + 1):
                rows.append((str(n), kind.letter) + tuple(
                    _num(getattr(rep, f)[k, n - 1]) for f in _SIM_FIELDS
                ))
        return _csv_bytes(SIMULATION_COLUMNS, rows)

    def opt(arr):
        return None if arr is None else [float(x) for x in np.ravel(arr)]

    estimators = []
    for k, kind in enumerate(rep.kinds):
        entry = {"estimator": kind.letter}
        for f in _SIM_FIELDS:
            entry[f] = opt(getattr(rep, f)[k])
        entry["mse_direct"] = None if rep.mse_direct is None else opt(rep.mse_direct[k])
        estimators.append(entry)
    doc = {
        "type": "simulation",
        "B": rep.B,
        "trials": rep.trials,
        "truth_reps": rep.truth_reps,
        "truth": opt(rep.truth),
        "truth_stderr": opt(rep.truth_stderr),
        "estimators": estimators,
    }
    return _json_bytes(doc)


def _write_comparison(rep, fmt):
    if fmt == "csv":
        rows = [
            (str(r.B), r.kind.letter, _num(r.rate), str(r.ties), str(r.resamples))
            for r in rep.rates
        ]
        return _csv_bytes(COMPARISON_COLUMNS, rows)
    budgets = []
    for B in rep.budgets:
        budgets.append({
            "B": B,
            "truth": rep.truth.get(B),
            "rates": [
                {
                    "estimator": r.kind.letter,
                    "error_rate": r.rate,
                    "incorrect": r.incorrect,
                    "ties": r.ties,
                    "resamples": r.resamples,
                }
                for r in rep.rates if r.B == B
            ],
        })
    doc = {"type": "comparison", "truth_source": rep.truth_source, "budgets": budgets}
    return _json_bytes(doc)


def read_report(data, fmt="csv"):
    """Parse bytes from :func:`write_report`.

    In csv form the report type is recognised from the header row.
    """
    fmt = _fmt(fmt)
    if fmt == "csv":
        header = _header(data)
        if header == SIMULATION_COLUMNS:
            return _read_simulation_csv(data)
        if header == COMPARISON_COLUMNS:
            return _read_comparison_csv(data)
        raise ValueError(f"unrecognised report header {header!r}")
    doc = json.loads(_text(data))
    if doc.get("type") == "simulation":
        return _read_simulation_json(doc)
    if doc.get("type") == "comparison":
        return _read_comparison_json(doc)
    raise ValueError(f"unrecognised report type {doc.get('type')!r}")


def _read_simulation_csv(data):
    grouped = {}
    for row in _csv_rows(data, SIMULATION_COLUMNS):
        kind = EstimatorKind.parse(row[1])
        grouped.setdefault(kind, []).append([float(x) for x in row[2:]])
    kinds = tuple(grouped)
    B = len(next(iter(grouped.values()))) if grouped else 0
    cube = np.array([grouped[k] for k in kinds]).reshape(len(kinds), B, len(_SIM_FIELDS))
    arrays = {f: cube[:, :, j].copy() for j, f in enumerate(_SIM_FIELDS)}
    return SimulationReport(B=B, kinds=kinds, **arrays)


def _read_simulation_json(doc):
    entries = doc["estimators"]
    kinds = tuple(EstimatorKind.parse(e["estimator"]) for e in entries)

    def arr(values):
        return None if values is None else np.array(values, dtype=np.float64)

    arrays = {f: np.array([e[f] for e in entries], dtype=np.float64) for f in _SIM_FIELDS}
    mse_direct = None
    if entries and all(e.get("mse_direct") is not None for e in entries):
        mse_direct = np.array([e["mse_direct"] for e in entries], dtype=np.float64)
    return SimulationReport(
        B=int(doc["B"]), kinds=kinds, trials=doc.get("trials"), truth_reps=doc.get("truth_reps"),
        truth=arr(doc.get("truth")), truth_stderr=arr(doc.get("truth_stderr")),
        mse_direct=mse_direct, **arrays,
    )


def _read_comparison_csv(data):
    rates = []
    budgets = []
    for row in _csv_rows(data, COMPARISON_COLUMNS):
        B, resamples = int(row[0]), int(row[4])
        incorrect = round(float(row[2]) * resamples)
        rates.append(ConclusionRate(EstimatorKind.parse(row[1]), B, resamples, incorrect, int(row[3])))
        if B not in budgets:
            budgets.append(B)
    return ComparisonReport(tuple(budgets), tuple(rates))


def _read_comparison_json(doc):
    budgets, rates, truth = [], [], {}
    for entry in doc["budgets"]:
        B = int(entry["B"])
        budgets.append(B)
        if entry.get("truth") is not None:
            truth[B] = entry["truth"]
        for r in entry["rates"]:
            rates.append(ConclusionRate(EstimatorKind.parse(r["estimator"]), B,
                                        int(r["resamples"]), int(r["incorrect"]), int(r["ties"])))
    return ComparisonReport(tuple(budgets), tuple(rates), truth, doc.get("truth_source"))


# helpers


def _text(data):
    return data.decode("utf-8") if isinstance(data, (bytes, bytearray)) else data


def _csv_bytes(columns, rows):
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    writer.writerows(rows)
    return buf.getvalue().encode("utf-8")


def _header(data):
    reader = csv.reader(_io.StringIO(_text(data)))
    return tuple(next(reader, ()))


def _csv_rows(data, columns):
    reader = csv.reader(_io.StringIO(_text(data)))
    header = tuple(next(reader, ()))
    if header != columns:
        raise ValueError(f"expected columns {columns}, got {header}")
    return [row for row in reader if row]


def _json_bytes(doc):
    return (json.dumps(doc, indent=2, allow_nan=False) + "\n").encode("utf-8")


def _json_doc(data, expected):
    doc = json.loads(_text(data))
    if doc.get("type") != expected:
        raise ValueError(f"expected a {expected!r} document, got {doc.get('type')!r}")
    return doc
