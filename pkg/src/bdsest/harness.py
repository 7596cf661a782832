"""Seeded Monte Carlo estimation-risk experiments and report output."""
from __future__ import annotations

import csv
import io
import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import NamedTuple, Optional, Sequence

import numpy as np

from . import analytics
from .estimators import DEFAULT_RESOLUTION, PriorSpec, bme, build_grid, direct_inversion, grid_loglik, mle
from .measurements import STRATEGIES, MeasurementPlan, sample_outcomes
from .states import BellDiagonalState

log = logging.getLogger(__name__)

ESTIMATORS = ("di", "mle", "bme")
LOSSES = ("hs", "infidelity")


class ConfigError(ValueError):
    """Invalid experiment configuration."""


@dataclass(frozen=True)
class ExperimentConfig:
    strategy: str
    estimator: str
    loss: str = "hs"
    prior_alpha: tuple = (1.0, 1.0, 1.0, 1.0)
    n_values: tuple = (10,)
    samples: int = 1000
    grid_resolution: int = DEFAULT_RESOLUTION
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "n_values", tuple(int(n) for n in self.n_values))
        try:
            alpha = PriorSpec(self.prior_alpha).dirichlet_alpha
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        object.__setattr__(self, "prior_alpha", alpha)
        if self.strategy not in STRATEGIES:
            raise ConfigError(f"unknown strategy {self.strategy!r}")
        if self.estimator not in ESTIMATORS:
            raise ConfigError(f"unknown estimator {self.estimator!r}")
        if self.loss not in LOSSES:
            raise ConfigError(f"unknown loss {self.loss!r}")
        if self.samples < 1:
            raise ConfigError("samples must be >= 1")
        if self.grid_resolution < 1:
            raise ConfigError("grid resolution must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be a 64-bit unsigned integer")
        for n in self.n_values:
            try:
                MeasurementPlan(self.strategy, n)
            except ValueError as exc:
                raise ConfigError(str(exc)) from exc
            if n == 0 and self.estimator == "di" and self.strategy != "parity_random":
                raise ConfigError(f"direct inversion with {self.strategy!r} needs N >= 1")

    @property
    def prior(self) -> PriorSpec:
        return PriorSpec(self.prior_alpha)


class CurvePoint(NamedTuple):
    n: int
    mean_risk: float
    std_error: float
    analytic: Optional[float] = None


@dataclass(frozen=True)
class RiskCurve:
    config: ExperimentConfig
    points: tuple = field(default=())


class AnalyticPoint(NamedTuple):
    n: int
    value: float
    is_upper_bound: bool = False


def sample_prior_state(rng) -> BellDiagonalState:
    """Draw a state uniformly from the simplex (Dirichlet(1,1,1,1))."""
    rng = np.random.default_rng(rng)
    return BellDiagonalState(rng.dirichlet(np.ones(4)))


def trial_rng(seed: int, n_index: int, trial: int) -> np.random.Generator:
    """Independent stream for one trial, derived only from its coordinates."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(n_index, trial)))


# ---------------------------------------------------------------- analytic curves

_CLOSED_FORMS = {
    ("bell", "di"): (analytics.avg_risk_bsm_di, False),
    ("bell", "bme"): (analytics.avg_risk_bsm_bme, False),
    ("parity_random", "di"): (analytics.avg_risk_parity_random_di, False),
    ("parity_ordered", "di"): (analytics.avg_risk_parity_ordered_di, False),
    ("parity_ordered", "bme"): (analytics.bme_parity_upper_bound, True),
}


def has_closed_form(strategy: str, estimator: str) -> bool:
    return (strategy, estimator) in _CLOSED_FORMS


def analytic_curve(strategy: str, estimator: str, n_values: Sequence[int]) -> list[AnalyticPoint]:
    """Uniform-prior average HS risk where a closed form or bound is known."""
    try:
        fn, is_bound = _CLOSED_FORMS[(strategy, estimator)]
    except KeyError:
        raise ConfigError(f"no closed form for strategy={strategy!r}, estimator={estimator!r}") from None
    return [AnalyticPoint(int(n), float(fn(int(n))), is_bound) for n in n_values]


# ---------------------------------------------------------------- simulation

def _loss(name: str, theta_hat, theta) -> float:
    if name == "hs":
        return analytics.hs_loss(theta_hat, theta)
    if np.any(theta_hat < 0):
        theta_hat = analytics.project_to_simplex(theta_hat)
    return analytics.infidelity_loss(theta_hat, theta)


def _run_trials(strategy, estimators, losses, n, n_index, trials, grid_resolution, prior_alpha, seed):
    """Losses for a block of trials, shape (len(trials), len(estimators), len(losses))."""
    grid = build_grid(grid_resolution) if {"mle", "bme"} & set(estimators) else None
    prior = PriorSpec(prior_alpha)
    plan = MeasurementPlan(strategy, n)
    out = np.empty((len(trials), len(estimators), len(losses)))
    for row, trial in enumerate(trials):
        rng = trial_rng(seed, n_index, trial)
        state = sample_prior_state(rng)
        record = sample_outcomes(state, plan, rng)
        loglik = grid_loglik(record, grid) if grid is not None else None
        for col, name in enumerate(estimators):
            if name == "di":
                est = direct_inversion(record)
            elif name == "mle":
                est = mle(record, grid, loglik=loglik)
            else:
                est = bme(record, grid, prior, loglik=loglik)
            for k, loss in enumerate(losses):
                out[row, col, k] = _loss(loss, est.theta_hat, state.theta)
    return out


def simulate_losses(strategy: str, estimators: Sequence[str], losses: Sequence[str],
                    n_values: Sequence[int], samples: int, *, grid_resolution: int = DEFAULT_RESOLUTION,
                    prior_alpha=(1.0, 1.0, 1.0, 1.0), seed: int = 0, workers: int = 1) -> dict:
    """Per-trial losses for several estimators and losses on shared trials.

    Returns ``{n: array of shape (samples, len(estimators), len(losses))}``.
    Results depend only on the arguments, not on ``workers``.
    """
    out = {}
    chunks = max(1, workers) * 4
    for n_index, n in enumerate(n_values):
        trials = np.arange(samples)
        args = (strategy, tuple(estimators), tuple(losses), int(n), n_index)
        tail = (grid_resolution, tuple(prior_alpha), seed)
        if workers <= 1:
            out[n] = _run_trials(*args, trials, *tail)
        else:
            blocks = np.array_split(trials, chunks)
            with ProcessPoolExecutor(max_workers=workers) as pool:
                parts = list(pool.map(_run_trials, *zip(*[(*args, b, *tail) for b in blocks])))
            out[n] = np.concatenate(parts)
        log.debug("strategy=%s N=%d done", strategy, n)
    return out


def _summarize(values: np.ndarray) -> tuple[float, float]:
    # fixed-order reduction keeps results independent of how trials were scheduled
    mean = float(np.add.reduce(values) / values.size)
    if values.size < 2:
        return mean, 0.0
    return mean, float(np.std(values, ddof=1) / np.sqrt(values.size))


def _curve(config: ExperimentConfig, losses: dict, e: int, k: int) -> RiskCurve:
    analytic = {}
    if config.loss == "hs" and config.prior.is_uniform and has_closed_form(config.strategy, config.estimator):
        analytic = {p.n: p.value for p in analytic_curve(config.strategy, config.estimator, config.n_values)}
    points = []
    for n in config.n_values:
        mean, se = _summarize(losses[n][:, e, k])
        points.append(CurvePoint(n, mean, se, analytic.get(n)))
    return RiskCurve(config, tuple(points))


def run_experiment(config: ExperimentConfig, workers: int = 1) -> RiskCurve:
    """Monte Carlo average risk of one strategy/estimator/loss combination."""
    losses = simulate_losses(
        config.strategy, (config.estimator,), (config.loss,), config.n_values, config.samples,
        grid_resolution=config.grid_resolution, prior_alpha=config.prior_alpha,
        seed=config.seed, workers=workers,
    )
    return _curve(config, losses, 0, 0)


def run_comparison(strategy: str, estimators: Sequence[str], losses: Sequence[str],
                   n_values: Sequence[int], samples: int, *, grid_resolution: int = DEFAULT_RESOLUTION,
                   prior_alpha=(1.0, 1.0, 1.0, 1.0), seed: int = 0, workers: int = 1) -> dict:
    """Risk curves for every (estimator, loss) pair, evaluated on the same trials.

    Each curve equals what :func:`run_experiment` returns for the matching config.
    """
    configs = {
        (e, k): ExperimentConfig(strategy, e, k, prior_alpha, tuple(n_values), samples, grid_resolution, seed)
        for e in estimators for k in losses
    }
    raw = simulate_losses(strategy, estimators, losses, n_values, samples, grid_resolution=grid_resolution,
                          prior_alpha=prior_alpha, seed=seed, workers=workers)
    return {
        (e, k): _curve(configs[(e, k)], raw, ei, ki)
        for ei, e in enumerate(estimators) for ki, k in enumerate(losses)
    }


# ---------------------------------------------------------------- reports

def _config_dict(config: ExperimentConfig) -> dict:
    d = asdict(config)
    d["prior_alpha"] = list(d["prior_alpha"])
    d["n_values"] = list(d["n_values"])
    return d


def emit_report(curve: RiskCurve, fmt: str = "json") -> bytes:
    """Serialize a curve as UTF-8 JSON or CSV."""
    if fmt == "json":
        doc = {
            "config": _config_dict(curve.config),
            "points": [p._asdict() for p in curve.points],
        }
        return (json.dumps(doc, indent=2) + "\n").encode("utf-8")
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["n", "mean_risk", "std_error", "analytic"])
        for p in curve.points:
            writer.writerow([p.n, repr(p.mean_risk), repr(p.std_error),
                             "" if p.analytic is None else repr(p.analytic)])
        return buf.getvalue().encode("utf-8")
    raise ConfigError(f"unknown report format {fmt!r}")


def parse_report(data) -> RiskCurve:
    """Inverse of :func:`emit_report` for JSON."""
    doc = json.loads(data)
    cfg = doc["config"]
    config = ExperimentConfig(
        cfg["strategy"], cfg["estimator"], cfg["loss"], tuple(cfg["prior_alpha"]), tuple(cfg["n_values"]),
        cfg["samples"], cfg["grid_resolution"], cfg["seed"],
    )
    points = tuple(CurvePoint(p["n"], p["mean_risk"], p["std_error"], p["analytic"]) for p in doc["points"])
    return RiskCurve(config, points)
