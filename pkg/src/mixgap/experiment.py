"""End-to-end size sweep: G_n vs its stretched image Q(G_n), as a report.

Rows are pure functions of ``(config, seed)``; every random stage draws
from a child of ``SeedSequence([seed, size_index])``.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import time
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any

import numpy as np

from .ball import VertexSet
from .errors import ConfigInvalid, MixgapError
from .expander import METHODS, generate_regular_expander, tree_size
from .gluing import build_gn
from .montecarlo import coupled_walk_experiment, empirical_hitting_time, hitting_time_bound
from .qi import apply_quasi_isometry, verify_quasi_isometry
from .spectral import spectral_gap
from .walk import WalkConfig, mixing_time

log = logging.getLogger(__name__)


@dataclass
class ExperimentConfig:
    d: int = 3
    sizes: list[int] = field(default_factory=lambda: [250, 500, 1000, 2000])
    r: int | None = None
    """Ball radius; ``None`` applies ``floor(r_coef * log2 n)`` capped by the tree fit."""
    r_coef: float = 1.2
    delta: float | None = 0.1
    ratio_lo: float | None = None
    ratio_hi: float | None = None
    depth_min: int = 2
    bridge_len: int = 2
    stretch: int = 10
    epsilon: float = 0.25
    laziness: float = 0.5
    seed: int = 0
    trials: int = 1000
    """Coupling trials per size."""
    coupling_horizon: int | None = None
    """Steps per coupling trial; ``None`` means ``20 * r``."""
    hitting_trials: int = 200
    t_max: int = 200_000
    method: str = "tree_graft"
    qi_sample_pairs: int = 10_000
    spectral_tol: float = 1e-8
    spectral_max_iter: int = 50_000
    dense_check_max_vertices: int = 1200
    record_timing: bool = False
    """Wall-clock columns break byte-identical reruns, so they are off by default."""

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        def bad(msg):
            raise ConfigInvalid(msg)

        if self.d < 3:
            bad("d must be >= 3")
        if not self.sizes or any(b <= a for a, b in zip(self.sizes, self.sizes[1:])):
            bad("sizes must be non-empty and strictly increasing")
        if any(n <= self.d for n in self.sizes):
            bad("every size must exceed d")
        if self.r is not None and self.r < 1:
            bad("r must be >= 1")
        if self.delta is None and (self.ratio_lo is None or self.ratio_hi is None):
            bad("give delta or both ratio_lo and ratio_hi")
        if self.delta is None and not 0 < self.ratio_lo <= 1 <= self.ratio_hi:
            bad("need 0 < ratio_lo <= 1 <= ratio_hi")
        if self.delta is not None and self.delta < 0:
            bad("delta must be >= 0")
        if self.depth_min < 2:
            bad("depth_min must be >= 2")
        if self.bridge_len < 2:
            bad("bridge_len must be >= 2")
        if self.stretch < 2:
            bad("stretch must be >= 2")
        if not 0 < self.epsilon < 1:
            bad("epsilon must lie in (0, 1)")
        if not 0 <= self.laziness < 1:
            bad("laziness must lie in [0, 1)")
        if self.method not in METHODS:
            bad(f"method must be one of {METHODS}")
        if self.trials < 0 or self.hitting_trials < 0 or self.t_max < 1:
            bad("trial counts must be >= 0 and t_max >= 1")

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        if not isinstance(data, dict):
            raise ConfigInvalid("config must be a JSON object")
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigInvalid(f"unknown config keys: {', '.join(unknown)}")
        try:
            return cls(**data)
        except TypeError as exc:
            raise ConfigInvalid(str(exc)) from exc

    @classmethod
    def from_json(cls, text: str) -> "ExperimentConfig":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigInvalid(f"config is not valid JSON: {exc}") from exc
        return cls.from_dict(data)

    def to_dict(self) -> dict:
        return asdict(self)


def radius_for(n: int, cfg: ExperimentConfig) -> int:
    """Ball radius for a core of ``n`` vertices.

    ``floor(r_coef * log2 n)``, capped so the planted tree plus the fresh
    vertices absorbing its leaves fit in ``n`` (no growth of the core).
    """
    if cfg.r is not None:
        return cfg.r
    want = max(1, int(math.floor(cfg.r_coef * math.log2(n))))
    cap = 1
    while True:
        t, leaves = tree_size(cfg.d, cap + 1)
        if (n - t) * cfg.d < leaves * (cfg.d - 1) or n - t <= cfg.d:
            break
        cap += 1
    return min(want, cap)


COLUMNS = [
    "size_index", "n_target", "seed", "n_h", "radius", "ball_size", "tree_ball_certified",
    "a_size", "gn_vertices", "gn_edges", "q_vertices", "q_edges",
    "log2_gn", "gn_over_a",
    "t_mix_g", "t_mix_g_root2", "t_mix_q", "t_mix_q_root2", "t_mix_ratio", "t_mix_g_dense",
    "gap_g", "gap_q", "gap_ratio",
    "qi_violations", "qi_pairs", "qi_max_ratio", "qi_near_surjective",
    "coupling_horizon", "meet_probability", "meet_stderr", "mean_meet_time", "met_inside_ball",
    "hit_mean_q", "hit_stderr_q", "hit_median_q", "hit_censored_q", "hit_bound_at_tmix_q",
    "seconds", "error",
]


@dataclass
class ExperimentReport:
    config: ExperimentConfig
    rows: list[dict[str, Any]] = field(default_factory=list)

    @property
    def has_errors(self) -> bool:
        return any(r.get("error") for r in self.rows)

    def summary(self) -> dict[str, Any]:
        ok = [r for r in self.rows if not r.get("error") and r.get("t_mix_g") is not None]
        out: dict[str, Any] = {"rows": len(self.rows), "rows_ok": len(ok)}
        if len(ok) >= 2:
            out["fit_t_mix_g_vs_log2_gn"] = least_squares(
                [r["log2_gn"] for r in ok], [r["t_mix_g"] for r in ok])
            okq = [r for r in ok if r.get("t_mix_q") is not None]
            if len(okq) >= 2:
                out["fit_t_mix_q_vs_gn_over_a"] = least_squares(
                    [r["gn_over_a"] for r in okq], [r["t_mix_q"] for r in okq])
                out["fit_t_mix_q_vs_log2_gn"] = least_squares(
                    [r["log2_gn"] for r in okq], [r["t_mix_q"] for r in okq])
        return out

    def to_json_obj(self) -> dict:
        return {"config": self.config.to_dict(), "columns": COLUMNS,
                "rows": self.rows, "summary": self.summary()}


def least_squares(x, y) -> dict[str, float]:
    """Slope, intercept and coefficient of determination of ``y ~ x``."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 - float((resid ** 2).sum()) / ss_tot if ss_tot > 0 else 1.0
    return {"slope": float(slope), "intercept": float(intercept), "r2": r2}


def _empty_row(i: int, n: int, seed: int) -> dict[str, Any]:
    row = {c: None for c in COLUMNS}
    row.update(size_index=i, n_target=n, seed=seed)
    return row


def stage_seeds(seed: int, size_index: int) -> tuple[int, int, int, int, int]:
    """Seeds for generation, walks, QI sampling, spectral start and hitting."""
    ss = np.random.SeedSequence([seed, size_index])
    return tuple(int(c.generate_state(1)[0]) for c in ss.spawn(5))


def run_size(cfg: ExperimentConfig, i: int, n: int) -> dict[str, Any]:
    """One report row; raises package errors for the caller to record."""
    from .oracle import dense_mixing_time

    s_gen, s_walk, s_qi, s_spec, s_hit = stage_seeds(cfg.seed, i)
    row = _empty_row(i, n, cfg.seed)
    r = radius_for(n, cfg)
    row["radius"] = r
    h = generate_regular_expander(n, cfg.d, 2 * r + 1, seed=s_gen, method=cfg.method)
    row["n_h"] = h.num_vertices
    gn, meta = build_gn(h, 0, 0, r, cfg.ratio_lo, cfg.ratio_hi, cfg.depth_min,
                        cfg.bridge_len, cfg.delta)
    row["ball_size"] = len(meta.balls[0])
    row["tree_ball_certified"] = True
    row["a_size"] = meta.a_size
    row["gn_vertices"] = gn.num_vertices
    row["gn_edges"] = gn.num_edges
    row["log2_gn"] = math.log2(gn.num_vertices)
    row["gn_over_a"] = gn.num_vertices / meta.a_size

    wcfg = WalkConfig(cfg.laziness, s_walk, cfg.t_max)
    tg1 = mixing_time(gn, meta.roots[0], cfg.epsilon, wcfg).t_mix
    tg2 = mixing_time(gn, meta.roots[1], cfg.epsilon, wcfg).t_mix
    row["t_mix_g"] = _worst(tg1, tg2)
    row["t_mix_g_root2"] = tg2
    if gn.num_vertices <= cfg.dense_check_max_vertices:
        row["t_mix_g_dense"] = dense_mixing_time(gn, meta.roots[0], cfg.epsilon,
                                                 cfg.laziness, cfg.t_max)

    q, qmap = apply_quasi_isometry(gn, list(meta.balls), cfg.stretch)
    row["q_vertices"] = q.num_vertices
    row["q_edges"] = q.num_edges
    tq1 = mixing_time(q, meta.roots[0], cfg.epsilon, wcfg).t_mix
    tq2 = mixing_time(q, meta.roots[1], cfg.epsilon, wcfg).t_mix
    row["t_mix_q"] = _worst(tq1, tq2)
    row["t_mix_q_root2"] = tq2
    if row["t_mix_g"] and row["t_mix_q"] is not None:
        row["t_mix_ratio"] = row["t_mix_q"] / row["t_mix_g"]

    rep = verify_quasi_isometry(gn, q, qmap, cfg.qi_sample_pairs, s_qi)
    row["qi_violations"] = rep.violations
    row["qi_pairs"] = rep.pairs_checked
    row["qi_max_ratio"] = rep.max_ratio
    row["qi_near_surjective"] = rep.near_surjective

    gg = spectral_gap(gn, cfg.laziness, cfg.spectral_tol, cfg.spectral_max_iter, s_spec).gap
    gq = spectral_gap(q, cfg.laziness, cfg.spectral_tol, cfg.spectral_max_iter, s_spec).gap
    row["gap_g"], row["gap_q"] = gg, gq
    row["gap_ratio"] = gq / gg if gg > 0 else None

    if meta.symmetric and cfg.bridge_len % 2 == 0 and cfg.trials:
        horizon = cfg.coupling_horizon if cfg.coupling_horizon is not None else 20 * r
        c = coupled_walk_experiment(gn, meta, cfg.trials, horizon,
                                    WalkConfig(cfg.laziness, s_walk, cfg.t_max))
        row["coupling_horizon"] = horizon
        row["meet_probability"] = c.meet_probability
        row["meet_stderr"] = c.meet_stderr
        row["mean_meet_time"] = c.mean_meet_time
        row["met_inside_ball"] = c.met_inside_ball_fraction

    if cfg.hitting_trials:
        s = VertexSet.of(list(meta.a_sets[0]) + list(meta.a_sets[1]), "Q")
        hs = empirical_hitting_time(q, s, "stationary", cfg.hitting_trials,
                                    WalkConfig(cfg.laziness, s_hit, cfg.t_max))
        row["hit_mean_q"] = hs.mean
        row["hit_stderr_q"] = hs.mean_stderr
        row["hit_median_q"] = hs.median
        row["hit_censored_q"] = hs.censored
        if row["t_mix_q"] is not None:
            row["hit_bound_at_tmix_q"] = hitting_time_bound(q, s, row["t_mix_q"]).probability_bound
    return row


def _worst(a, b):
    if a is None or b is None:
        return None
    return max(a, b)


def run_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    """Run every size; a failing size becomes a row carrying its error."""
    cfg.validate()
    report = ExperimentReport(cfg)
    for i, n in enumerate(cfg.sizes):
        t0 = time.perf_counter()
        try:
            row = run_size(cfg, i, n)
        except MixgapError as exc:
            log.warning("size %d failed: %s", n, exc)
            row = _empty_row(i, n, cfg.seed)
            row["error"] = f"{type(exc).__name__}: {exc}"
        if cfg.record_timing:
            row["seconds"] = time.perf_counter() - t0
        log.info("size %d done: t_mix_g=%s t_mix_q=%s", n, row.get("t_mix_g"), row.get("t_mix_q"))
        report.rows.append(row)
    return report


# ----------------------------------------------------------------------
def format_float(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    s = format(x, ".17g")
    if not any(c in s for c in ".en"):
        s += ".0"
    return s


class _Encoder(json.JSONEncoder):
    """JSON encoder writing every float with 17 significant digits."""

    def iterencode(self, o, _one_shot=False):
        enc = json.encoder.encode_basestring_ascii if self.ensure_ascii else json.encoder.encode_basestring
        it = json.encoder._make_iterencode(
            {}, self.default, enc, self.indent, format_float, self.key_separator,
            self.item_separator, self.sort_keys, self.skipkeys, _one_shot)
        return it(o, 0)

    def default(self, o):
        if isinstance(o, np.integer):
            return int(o)
        if isinstance(o, np.floating):
            return float(o)
        if isinstance(o, np.bool_):
            return bool(o)
        return super().default(o)


def dumps(obj) -> str:
    return json.dumps(obj, cls=_Encoder, sort_keys=True, indent=2) + "\n"


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return format_float(float(v))
    return str(v)


def report_csv(report: ExperimentReport) -> str:
    """CSV with ``COLUMNS`` then a ``config`` column holding the compact config JSON."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS + ["config"])
    conf = json.dumps(json.loads(dumps(report.config.to_dict())), sort_keys=True,
                      separators=(",", ":"))
    for row in report.rows:
        w.writerow([_cell(row.get(c)) for c in COLUMNS] + [conf])
    return buf.getvalue()


def report_json(report: ExperimentReport) -> str:
    return dumps(report.to_json_obj())


def emit_report(report: ExperimentReport, fmt: str = "csv", path: str | Path | None = None) -> str:
    """Render ``report`` as ``csv`` or ``json``; write to ``path`` when given."""
    if fmt == "csv":
        text = report_csv(report)
    elif fmt == "json":
        text = report_json(report)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if path is not None:
        Path(path).write_text(text)
    return text


def load_report_json(text: str) -> ExperimentReport:
    obj = json.loads(text)
    return ExperimentReport(ExperimentConfig.from_dict(obj["config"]), obj["rows"])
