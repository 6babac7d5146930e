"""CSV and JSON input/output. All readers expect comma-delimited UTF-8 with a
header row; all writers produce byte-stable output (fixed field order, '\n'
line endings, 6 significant digits in JSON reports, full precision in CSV)."""

import csv
import hashlib
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from .equity import IndicatorVector
from .errors import ParseError, ValidationError
from .mcda import PairwiseMatrix
from .mining import MiningCurveParams, RevenueWindow
from .sensnet import DEFAULT_LAYER_SIZES, LayerSpec, TrainConfig
from .topsis import DecisionMatrix, IndicatorKind

INDICATOR_COLUMNS = ("ei", "idg", "cea", "ma", "hr", "er", "sa")


def parse_ratio(text: str) -> float:
    """Parse a comparison ratio; fractions like '1/3' are taken exactly."""
    try:
        return float(Fraction(text.strip()))
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad ratio {text!r}: {exc}") from None


def load_pairwise_csv(path) -> PairwiseMatrix:
    """Read a comparison matrix: header and first column carry the labels."""
    rows = _read_rows(path)
    if len(rows) < 2:
        raise ParseError("pairwise matrix file needs a header and body", line=1)
    labels = [c.strip() for c in rows[0][1:]]
    n = len(labels)
    entries = np.empty((n, n))
    for i, row in enumerate(rows[1:], start=2):
        if len(row) != n + 1:
            raise ParseError(f"expected {n + 1} cells, got {len(row)}", line=i)
        if row[0].strip() != labels[i - 2]:
            raise ParseError(
                f"row label {row[0].strip()!r} does not match header order", line=i
            )
        for j, cell in enumerate(row[1:]):
            try:
                entries[i - 2, j] = parse_ratio(cell)
            except ParseError as exc:
                raise ParseError(str(exc), line=i) from None
    return PairwiseMatrix(entries=entries, labels=labels)


def load_decision_csv(path) -> DecisionMatrix:
    """Read a decision matrix; header cells are 'name:kind' with kind one of
    benefit, cost or mid=<x_best>; first column holds alternative labels."""
    rows = _read_rows(path)
    if len(rows) < 2:
        raise ParseError("decision matrix file needs a header and body", line=1)
    names, kinds = [], []
    for cell in rows[0][1:]:
        if ":" not in cell:
            raise ParseError(f"indicator {cell!r} is missing its kind annotation", line=1)
        name, annotation = cell.rsplit(":", 1)
        names.append(name.strip())
        try:
            kinds.append(IndicatorKind.parse(annotation.strip()))
        except ValidationError as exc:
            raise ParseError(str(exc), line=1) from None
    labels, values = [], []
    for i, row in enumerate(rows[1:], start=2):
        if len(row) != len(names) + 1:
            raise ParseError(f"expected {len(names) + 1} cells, got {len(row)}", line=i)
        labels.append(row[0].strip())
        try:
            values.append([float(c) for c in row[1:]])
        except ValueError as exc:
            raise ParseError(str(exc), line=i) from None
    return DecisionMatrix(
        values=np.array(values),
        alternative_labels=labels,
        indicator_kinds=kinds,
        indicator_labels=names,
    )


@dataclass
class IndicatorTable:
    """Validated (country, year) -> IndicatorVector records."""

    records: dict

    @property
    def countries(self) -> list:
        seen = {}
        for country, _ in self.records:
            seen.setdefault(country, None)
        return list(seen)

    @property
    def years(self) -> list:
        return sorted({year for _, year in self.records})

    def require_complete_panel(self):
        """Every country must have every year; returns (countries, years)."""
        countries, years = self.countries, self.years
        missing = [
            (c, y) for c in countries for y in years if (c, y) not in self.records
        ]
        if missing:
            raise ValidationError(f"indicator table is missing records: {missing[:5]}")
        return countries, years

    def matrix(self, countries, year) -> np.ndarray:
        return np.array([self.records[(c, year)].as_array() for c in countries])


def load_indicator_table(path) -> IndicatorTable:
    """Read per-(country, year) indicator records, rejecting duplicates."""
    rows = _read_rows(path)
    expected = ("country", "year") + INDICATOR_COLUMNS
    if not rows or tuple(c.strip().lower() for c in rows[0]) != expected:
        raise ParseError(f"header must be {','.join(expected)}", line=1)
    records = {}
    for i, row in enumerate(rows[1:], start=2):
        if len(row) != len(expected):
            raise ParseError(f"expected {len(expected)} cells, got {len(row)}", line=i)
        country = row[0].strip()
        try:
            year = int(row[1])
            vector = IndicatorVector(*[float(c) for c in row[2:]])
        except (ValueError, ValidationError) as exc:
            raise ParseError(str(exc), line=i) from None
        if (country, year) in records:
            raise ValidationError(f"duplicate record for ({country}, {year})")
        records[(country, year)] = vector
    if not records:
        raise ParseError("indicator table has no data rows", line=1)
    return IndicatorTable(records=records)


def load_gdp_csv(path) -> dict:
    """Read (country, gdp) pairs into a dict, preserving file order."""
    rows = _read_rows(path)
    if not rows or tuple(c.strip().lower() for c in rows[0]) != ("country", "gdp"):
        raise ParseError("header must be country,gdp", line=1)
    gdp = {}
    for i, row in enumerate(rows[1:], start=2):
        if len(row) != 2:
            raise ParseError(f"expected 2 cells, got {len(row)}", line=i)
        country = row[0].strip()
        if country in gdp:
            raise ValidationError(f"duplicate GDP row for {country!r}")
        try:
            gdp[country] = float(row[1])
        except ValueError as exc:
            raise ParseError(str(exc), line=i) from None
    return gdp


def load_scenario(path):
    """Read a mining scenario JSON file.

    Returns (MiningCurveParams, RevenueWindow, mode, metadata). Missing fields
    fall back to the module defaults; t2 may be the string "inf".
    """
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(raw, dict):
        raise ParseError("scenario file must hold a JSON object")
    params = MiningCurveParams(
        dof=float(raw.get("dof", 5.0)),
        location=float(raw.get("location", 15.0)),
        scale=float(raw.get("scale", 5.0)),
        total_value=float(raw.get("total_value", 70e12)),
    )
    t2 = raw.get("t2", "inf")
    t2 = math.inf if t2 in ("inf", None) else float(t2)
    window = RevenueWindow(t1=float(raw.get("t1", 0.0)), t2=t2, cost=float(raw.get("cost", 0.0)))
    mode = raw.get("mode", "cumulative")
    metadata = {k: v for k, v in raw.items()
                if k not in ("dof", "location", "scale", "total_value", "t1", "t2", "cost", "mode")}
    return params, window, mode, metadata


def load_train_config(path):
    """Read training settings; returns (LayerSpec, TrainConfig)."""
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    spec = LayerSpec(tuple(raw.get("layer_sizes", DEFAULT_LAYER_SIZES)))
    config = TrainConfig(
        learning_rate=float(raw.get("learning_rate", 0.1)),
        epochs=int(raw.get("epochs", 5000)),
        seed=int(raw.get("seed", 0)),
    )
    return spec, config


def _read_rows(path) -> list:
    with open(path, newline="", encoding="utf-8") as handle:
        return [row for row in csv.reader(handle) if row and any(c.strip() for c in row)]


def fmt6(x):
    """Round a float to 6 significant digits for JSON reports; None when not finite."""
    x = float(x)
    if not math.isfinite(x):
        return None
    return float(f"{x:.6g}")


def config_digest(mapping: dict) -> str:
    """Stable sha256 over a canonical JSON encoding of the mapping."""
    canonical = json.dumps(mapping, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def write_json_report(path, payload: dict):
    Path(path).write_text(json.dumps(payload, indent=2, ensure_ascii=False) + "\n",
                          encoding="utf-8")


def write_csv(path, header, rows):
    """Write rows with full float precision and '\n' line endings."""
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(v) if isinstance(v, float) else v for v in row])
