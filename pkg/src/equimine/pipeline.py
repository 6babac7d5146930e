"""Batch pipeline: load inputs, run every stage, write deterministic reports."""

import json
from contextlib import contextmanager
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import allocation, equity, io, mcda, mining, sensnet, stats, topsis
from .errors import EquimineError, PipelineError, ValidationError

VARIATION_BAND = 0.07  # advertised robustness band for the perturbation sweep

REPORT_FILES = (
    "weights.json",
    "consistency.json",
    "equity.json",
    "topsis.json",
    "mining.json",
    "allocation.json",
    "correlation.json",
    "sensitivity.csv",
)


@dataclass
class RunConfig:
    indicators: Path
    pairwise: Path
    gdp: Path
    scenario: Path
    train: Path
    decision: Path = None
    income_mode: str = "cumulative"
    alloc_mode: str = "conserve"
    alloc_basis: str = "equity"
    bottom_count: int = 20
    multiplier: float = 1.2
    seed: int = None

    def __post_init__(self):
        if self.income_mode not in mining.INCOME_MODES:
            raise ValidationError(f"unknown income mode {self.income_mode!r}")
        if self.alloc_mode not in allocation.ALLOC_MODES:
            raise ValidationError(f"unknown allocation mode {self.alloc_mode!r}")
        if self.alloc_basis not in ("equity", "topsis"):
            raise ValidationError(f"unknown allocation basis {self.alloc_basis!r}")

    def digest(self) -> str:
        fields = {
            "indicators": str(self.indicators),
            "pairwise": str(self.pairwise),
            "gdp": str(self.gdp),
            "scenario": str(self.scenario),
            "train": str(self.train),
            "decision": None if self.decision is None else str(self.decision),
            "income_mode": self.income_mode,
            "alloc_mode": self.alloc_mode,
            "alloc_basis": self.alloc_basis,
            "bottom_count": self.bottom_count,
            "multiplier": self.multiplier,
            "seed": self.seed,
        }
        return io.config_digest(fields)


def load_run_config(path, **overrides) -> RunConfig:
    """Read a JSON run config; relative paths resolve against the file's dir.

    Keyword overrides (income_mode, alloc_mode, alloc_basis, seed, ...) win
    over file values when not None.
    """
    path = Path(path)
    raw = json.loads(path.read_text(encoding="utf-8"))
    base = path.parent

    def resolve(key, required=True):
        value = raw.get(key)
        if value is None:
            if required:
                raise ValidationError(f"run config is missing {key!r}")
            return None
        p = Path(value)
        return p if p.is_absolute() else base / p

    poverty = raw.get("poverty", {})
    config = RunConfig(
        indicators=resolve("indicators"),
        pairwise=resolve("pairwise"),
        gdp=resolve("gdp"),
        scenario=resolve("scenario"),
        train=resolve("train"),
        decision=resolve("decision", required=False),
        income_mode=raw.get("income_mode", "cumulative"),
        alloc_mode=raw.get("alloc_mode", "conserve"),
        alloc_basis=raw.get("alloc_basis", "equity"),
        bottom_count=int(poverty.get("bottom_count", 20)),
        multiplier=float(poverty.get("multiplier", 1.2)),
        seed=raw.get("seed"),
    )
    updates = {k: v for k, v in overrides.items() if v is not None}
    if updates:
        config = replace(config, **updates)
    for name in ("indicators", "pairwise", "gdp", "scenario", "train", "decision"):
        p = getattr(config, name)
        if p is not None and not Path(p).is_file():
            raise ValidationError(f"{name} file not found: {p}")
    return config


@contextmanager
def _stage(name):
    try:
        yield
    except PipelineError:
        raise
    except EquimineError as exc:
        raise PipelineError(name, str(exc)) from exc


def run_pipeline(config: RunConfig, out_dir) -> dict:
    """Run every stage and write the eight report artifacts into out_dir.

    Returns {artifact name: Path}. Raises PipelineError carrying the failing
    stage's name; reports written before the failure are left in place.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    digest = config.digest()
    written = {}

    # Consistency gate plus per-method weights.
    with _stage("consistency"):
        matrix = io.load_pairwise_csv(config.pairwise)
        report = mcda.consistency(matrix)
        written["consistency.json"] = _write(out, "consistency.json", {
            "config_digest": digest,
            "labels": matrix.labels,
            "lambda_max": io.fmt6(report.lambda_max),
            "ci": io.fmt6(report.ci),
            "ri": io.fmt6(report.ri),
            "cr": io.fmt6(report.cr),
            "passes": report.passes,
        })
        if not report.passes:
            raise PipelineError(
                "consistency",
                f"comparison matrix failed the consistency check (CR = {report.cr:.4f} >= 0.1)",
                {"cr": report.cr},
            )

    with _stage("weights"):
        by_method = {m: mcda.derive_weights(matrix, m).weights for m in mcda.METHODS}
        mean_weights = np.mean(list(by_method.values()), axis=0)
        written["weights.json"] = _write(out, "weights.json", {
            "config_digest": digest,
            "labels": matrix.labels,
            "methods": {m: [io.fmt6(w) for w in by_method[m]] for m in mcda.METHODS},
            "mean": [io.fmt6(w) for w in mean_weights],
        })

    with _stage("equity"):
        table = io.load_indicator_table(config.indicators)
        countries, years = table.require_complete_panel()
        if len(mean_weights) != 7:
            raise ValidationError(
                f"equity scoring needs a 7-criterion matrix, got {len(mean_weights)}"
            )
        scores = {
            (c, y): equity.country_score(table.records[(c, y)], mean_weights)
            for c in countries for y in years
        }
        score_grid = np.array([[scores[(c, y)] for c in countries] for y in years])
        ge = equity.global_equity_index(score_grid, countries=countries, years=years)
        written["equity.json"] = _write(out, "equity.json", {
            "config_digest": digest,
            "countries": countries,
            "years": years,
            "scores": [
                {"country": c,
                 "series": [{"year": y, "score": io.fmt6(scores[(c, y)])} for y in years]}
                for c in countries
            ],
            "global_equity_index": io.fmt6(ge),
        })

    with _stage("topsis"):
        if config.decision is not None:
            decision = io.load_decision_csv(config.decision)
            topsis_weights = None
        else:
            # Rank countries on their latest-year indicators, AHP-weighted.
            latest = years[-1]
            decision = topsis.DecisionMatrix(
                values=table.matrix(countries, latest),
                alternative_labels=countries,
                indicator_kinds=[topsis.IndicatorKind.benefit()] * 7,
                indicator_labels=list(io.INDICATOR_COLUMNS),
            )
            topsis_weights = mean_weights
        ranked = topsis.rank_alternatives(decision, weights=topsis_weights)
        order = {i: pos + 1 for pos, i in enumerate(ranked.ranking)}
        written["topsis.json"] = _write(out, "topsis.json", {
            "config_digest": digest,
            "indicators": decision.indicator_labels,
            "alternatives": [
                {
                    "label": decision.alternative_labels[i],
                    "d_plus": io.fmt6(ranked.d_plus[i]),
                    "d_minus": io.fmt6(ranked.d_minus[i]),
                    "s": io.fmt6(ranked.s[i]),
                    "s_normalized": io.fmt6(ranked.s_normalized[i]),
                    "rank": order[i],
                }
                for i in range(len(decision.alternative_labels))
            ],
            "ranking": [decision.alternative_labels[i] for i in ranked.ranking],
        })

    with _stage("mining"):
        params, window, scenario_mode, metadata = io.load_scenario(config.scenario)
        incomes = {m: mining.income(window, params, m) for m in mining.INCOME_MODES}
        profits = {m: mining.profit(incomes[m], window.cost) for m in mining.INCOME_MODES}
        written["mining.json"] = _write(out, "mining.json", {
            "config_digest": digest,
            "scenario": metadata.get("name"),
            "dof": io.fmt6(params.dof),
            "location": io.fmt6(params.location),
            "scale": io.fmt6(params.scale),
            "total_value": io.fmt6(params.total_value),
            "positive_mass": io.fmt6(params.positive_mass),
            "window": {"t1": io.fmt6(window.t1), "t2": io.fmt6(window.t2),
                       "cost": io.fmt6(window.cost)},
            "income": {m: io.fmt6(incomes[m]) for m in mining.INCOME_MODES},
            "profit": {m: io.fmt6(profits[m]) for m in mining.INCOME_MODES},
            "selected_mode": config.income_mode,
        })
        total_profit = profits[config.income_mode]

    with _stage("allocation"):
        gdp = io.load_gdp_csv(config.gdp)
        if set(gdp) != set(countries):
            raise ValidationError("GDP table countries do not match the indicator table")
        if config.alloc_basis == "equity":
            basis_scores = {c: scores[(c, years[-1])] for c in countries}
        else:
            labels = decision.alternative_labels
            if set(labels) != set(countries):
                raise ValidationError(
                    "allocation basis 'topsis' needs the ranking to cover the same countries"
                )
            basis_scores = {
                label: float(ranked.s_normalized[i]) for i, label in enumerate(labels)
            }
        policy = allocation.PovertyPolicy(bottom_count=config.bottom_count,
                                          multiplier=config.multiplier)
        gammas = allocation.poverty_multipliers(gdp, policy)
        result = allocation.allocate(total_profit, basis_scores, gammas,
                                     mode=config.alloc_mode)
        written["allocation.json"] = _write(out, "allocation.json", {
            "config_digest": digest,
            "basis": config.alloc_basis,
            "mode": config.alloc_mode,
            "total_profit": io.fmt6(result.total_profit),
            "over_allocation": io.fmt6(result.over_allocation),
            "shares": [
                {"country": s.label, "gamma": io.fmt6(s.gamma),
                 "raw_share": io.fmt6(s.raw_share),
                 "conserved_share": io.fmt6(s.conserved_share)}
                for s in result.shares
            ],
        })

    with _stage("correlation"):
        record_keys = [(c, y) for c in countries for y in years]
        score_series = np.array([scores[k] for k in record_keys])
        per_indicator = []
        for j, name in enumerate(io.INDICATOR_COLUMNS):
            values = np.array([table.records[k].as_array()[j] for k in record_keys])
            result = stats.t_test(stats.pearson(values, score_series), len(record_keys))
            per_indicator.append({
                "indicator": name,
                "r": io.fmt6(result.r),
                "t_stat": io.fmt6(result.t_stat),
                "critical_value": io.fmt6(result.critical_value),
                "significant": result.significant,
                "strength": result.strength,
                "direction": "positive" if result.r > 0 else ("negative" if result.r < 0 else "zero"),
            })
        written["correlation.json"] = _write(out, "correlation.json", {
            "config_digest": digest,
            "alpha": 0.05,
            "n": len(record_keys),
            "indicators": per_indicator,
        })

    with _stage("sensitivity"):
        spec, train_config = io.load_train_config(config.train)
        if config.seed is not None:
            train_config = replace(train_config, seed=config.seed)
        x = np.array([table.records[k].as_array() for k in record_keys])
        targets = scale_targets(score_series)
        sweep = sensnet.sensitivity_sweep(
            x, targets, spec, train_config, indicator_names=list(io.INDICATOR_COLUMNS)
        )
        sens_path = out / "sensitivity.csv"
        io.write_csv(sens_path, ("indicator", "value"),
                     [(n, float(v)) for n, v in zip(sweep.indicator_names, sweep.sensitivities)])
        written["sensitivity.csv"] = sens_path
        pert_path = out / "perturbation.csv"
        io.write_csv(pert_path, ("weight_id", "w", "output"), sweep.perturbation_rows)
        written["perturbation.csv"] = pert_path
        written["sensitivity.json"] = _write(out, "sensitivity.json", {
            "config_digest": digest,
            "seed": train_config.seed,
            "epochs": train_config.epochs,
            "learning_rate": io.fmt6(train_config.learning_rate),
            "layer_sizes": list(spec.sizes),
            "final_loss": io.fmt6(sweep.final_loss),
            "sensitivities": [
                {"indicator": n, "value": io.fmt6(v)}
                for n, v in zip(sweep.indicator_names, sweep.sensitivities)
            ],
            "max_output_variation": io.fmt6(sweep.max_variation),
            "variation_band": VARIATION_BAND,
            "within_band": bool(sweep.max_variation <= VARIATION_BAND),
        })

    return written


def scale_targets(y: np.ndarray) -> np.ndarray:
    # Sigmoid output lives in (0, 1); map scores into [0.2, 0.8] to avoid
    # saturated targets. Constant scores map to 0.5.
    lo, hi = y.min(), y.max()
    if hi == lo:
        return np.full_like(y, 0.5)
    return 0.2 + 0.6 * (y - lo) / (hi - lo)


def _write(out_dir: Path, name: str, payload: dict) -> Path:
    path = out_dir / name
    io.write_json_report(path, payload)
    return path
