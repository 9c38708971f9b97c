"""Fixed-versus-adaptive noise robustness sweep.

For every algorithm the threshold minimizing the K-ratio on the clean series
is held fixed; at each noise level the series is perturbed once and
classified twice, with the fixed threshold ("original") and with a threshold
re-optimized on the noisy series ("adaptive"). Both labelings are scored
against the same ground truth, and agreement is measured against the clean
labeling under the fixed threshold.

Noise level ``j`` of the sigma list uses seed ``seed + j``.
"""

from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence

from gazekit.errors import InputError, LengthMismatch
from gazekit.ingest import atomic_write_text, fmt
from gazekit.kratio import SweepGrid, curve_from_labeler, default_grid, k_ratio, labeler, optimal_threshold
from gazekit.metrics import MetricsReport, agreement, evaluate
from gazekit.model import Algorithm, GazeSeries, LabelSeries, TimeUnit
from gazekit.noise import DEFAULT_SIGMAS, NoiseSpec, add_noise, level_seed

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1

CSV_COLUMNS = (
    "algorithm",
    "condition",
    "sigma",
    "noise_seed",
    "threshold",
    "k_ratio",
    "accuracy",
    "f1_f",
    "f1_s",
    "precision_f",
    "recall_f",
    "precision_s",
    "recall_s",
    "agreement",
    "n_fix",
    "n_sac",
    "fix_pct",
    "delta_fix_pct",
)


@dataclass(frozen=True)
class SweepRow:
    algorithm: str
    condition: str  # "original" or "adaptive"
    sigma: float
    noise_seed: int
    threshold: float
    k_ratio: Optional[float]
    metrics: MetricsReport
    agreement: float
    n_fix: int
    n_sac: int
    fix_pct: float
    delta_fix_pct: float

    def csv_row(self) -> str:
        m = self.metrics
        values = (
            self.algorithm,
            self.condition,
            fmt(self.sigma),
            str(self.noise_seed),
            repr(self.threshold),
            self.k_ratio,
            m.accuracy,
            m.f1_f,
            m.f1_s,
            m.precision_f,
            m.recall_f,
            m.precision_s,
            m.recall_s,
            self.agreement,
            str(self.n_fix),
            str(self.n_sac),
            self.fix_pct,
            self.delta_fix_pct,
        )
        return ",".join(v if isinstance(v, str) else ("" if v is None else repr(float(v))) for v in values)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["metrics"] = self.metrics.to_dict()
        return d

    @classmethod
    def from_dict(cls, d: dict) -> SweepRow:
        d = dict(d)
        d["metrics"] = MetricsReport.from_dict(d["metrics"])
        return cls(**d)


@dataclass
class NoiseSweepResult:
    algorithms: list[str]
    sigmas: list[float]
    seed: int
    time_unit: str
    t_min_ms: float
    grids: dict[str, dict]
    fixed: dict[str, dict] = field(default_factory=dict)
    rows: list[SweepRow] = field(default_factory=list)

    def row(self, algorithm, condition: str, sigma: float) -> SweepRow:
        algorithm = Algorithm(algorithm).value
        for r in self.rows:
            if r.algorithm == algorithm and r.condition == condition and r.sigma == sigma:
                return r
        raise KeyError((algorithm, condition, sigma))

    def to_csv(self) -> str:
        lines = [f"# gazekit-schema={SCHEMA_VERSION}", f"# time_unit={self.time_unit}", ",".join(CSV_COLUMNS)]
        lines.extend(r.csv_row() for r in self.rows)
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        adaptive = {
            alg: [
                {"sigma": r.sigma, "threshold": r.threshold, "k_ratio": r.k_ratio}
                for r in self.rows
                if r.algorithm == alg and r.condition == "adaptive"
            ]
            for alg in self.algorithms
        }
        doc = {
            "schema": SCHEMA_VERSION,
            "time_unit": self.time_unit,
            "seed": self.seed,
            "t_min_ms": self.t_min_ms,
            "sigmas": self.sigmas,
            "algorithms": self.algorithms,
            "grids": self.grids,
            "fixed_thresholds": self.fixed,
            "adaptive_thresholds": adaptive,
            "rows": [r.to_dict() for r in self.rows],
        }
        return json.dumps(doc, indent=2) + "\n"


def _fingerprint(series: GazeSeries, truth: LabelSeries, config: dict) -> str:
    h = hashlib.sha256()
    for a in (series.t, series.x, series.y, truth.codes):
        h.update(a.tobytes())
    h.update(json.dumps(config, sort_keys=True).encode())
    return h.hexdigest()


def _rows_for(
    algorithm: Algorithm,
    sigma: float,
    noise_seed: int,
    noisy: GazeSeries,
    truth: LabelSeries,
    baseline: LabelSeries,
    fixed: float,
    grid: SweepGrid,
    unit: TimeUnit,
    t_min_ms: float,
) -> list[SweepRow]:
    classify = labeler(noisy, algorithm, unit, t_min_ms)
    adaptive_thr, adaptive_k = optimal_threshold(curve_from_labeler(classify, algorithm, grid))
    base_fix_pct = 100.0 * baseline.n_fixation / len(baseline)
    rows = []
    for condition, thr in (("original", fixed), ("adaptive", adaptive_thr)):
        labels = classify(thr)
        fix_pct = 100.0 * labels.n_fixation / len(labels)
        rows.append(
            SweepRow(
                algorithm=algorithm.value,
                condition=condition,
                sigma=float(sigma),
                noise_seed=noise_seed,
                threshold=float(thr),
                k_ratio=adaptive_k if condition == "adaptive" else k_ratio(labels),
                metrics=evaluate(labels, truth),
                agreement=agreement(labels, baseline),
                n_fix=labels.n_fixation,
                n_sac=labels.n_saccade,
                fix_pct=fix_pct,
                delta_fix_pct=base_fix_pct - fix_pct,
            )
        )
    return rows


def run_noise_sweep(
    series: GazeSeries,
    truth: LabelSeries,
    algorithms: Iterable[Algorithm] = tuple(Algorithm),
    sigmas: Sequence[float] = DEFAULT_SIGMAS,
    seed: int = 0,
    unit: TimeUnit = TimeUnit.PER_MS,
    t_min_ms: float = 50.0,
    grids: Optional[dict] = None,
    part_dir: Optional[Path] = None,
) -> NoiseSweepResult:
    """Run the sweep; with ``part_dir`` each noise level is flushed to disk and
    reused on a later call with identical inputs."""
    if len(series) != len(truth):
        raise LengthMismatch(len(series), len(truth))
    algorithms = [Algorithm(a) for a in algorithms]
    if not algorithms:
        raise InputError("at least one algorithm is required")
    sigmas = [float(s) for s in sigmas]
    if any(s < 0 for s in sigmas):
        raise InputError("sigmas must be >= 0")
    unit = TimeUnit(unit)
    grids = {Algorithm(a): g for a, g in (grids or {}).items()}
    grid_for = {a: grids.get(a) or default_grid(a, unit) for a in algorithms}

    result = NoiseSweepResult(
        algorithms=[a.value for a in algorithms],
        sigmas=sigmas,
        seed=int(seed),
        time_unit=unit.value,
        t_min_ms=float(t_min_ms),
        grids={a.value: grid_for[a].to_dict() for a in algorithms},
    )
    config = {k: v for k, v in asdict(result).items() if k in ("algorithms", "sigmas", "seed", "time_unit", "t_min_ms", "grids")}
    key = _fingerprint(series, truth, config)

    baselines = {}
    for alg in algorithms:
        classify = labeler(series, alg, unit, t_min_ms)
        thr, k = optimal_threshold(curve_from_labeler(classify, alg, grid_for[alg]))
        result.fixed[alg.value] = {"threshold": thr, "k_ratio": k}
        baselines[alg] = classify(thr)

    if part_dir is not None:
        part_dir = Path(part_dir)
        part_dir.mkdir(parents=True, exist_ok=True)

    for j, sigma in enumerate(sigmas):
        noise_seed = level_seed(seed, j)
        part = part_dir / f"level_{j:03d}.json" if part_dir is not None else None
        if part is not None and part.is_file():
            cached = json.loads(part.read_text(encoding="utf-8"))
            if cached.get("fingerprint") == key:
                log.info("reusing %s", part)
                result.rows.extend(SweepRow.from_dict(r) for r in cached["rows"])
                continue
        log.info("sigma=%s seed=%d", fmt(sigma), noise_seed)
        noisy = add_noise(series, NoiseSpec(sigma, noise_seed))
        level_rows = []
        for alg in algorithms:
            level_rows += _rows_for(
                alg, sigma, noise_seed, noisy, truth, baselines[alg],
                result.fixed[alg.value]["threshold"], grid_for[alg], unit, t_min_ms,
            )
        result.rows.extend(level_rows)
        if part is not None:
            atomic_write_text(part, json.dumps({"fingerprint": key, "rows": [r.to_dict() for r in level_rows]}) + "\n")

    order = {a.value: i for i, a in enumerate(algorithms)}
    result.rows.sort(key=lambda r: (order[r.algorithm], r.condition != "original", sigmas.index(r.sigma)))
    return result
