"""Statistical validation of generated data and recommender accuracy.

Prevalence checks compare empirical condition shares against their
configured targets with 3-sigma binomial bounds. Recommender accuracy is
measured on a seeded random cell hold-out; when the matrix carries
full-precision noisy values those are used as ground truth, which puts an
analytic noise floor of std_dev * sqrt(2/pi) under any predictor's MAE.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, ValidationError
from .population import Citizen, PrevalenceConfig
from .rating_sim import RatingsMatrix
from .recommender import Recommender, SimilarityModel
from .rng import HOLDOUT_DOMAIN, substream

_MAX_REDRAWS = 10_000


@dataclass(frozen=True)
class PrevalenceCheck:
    condition: str
    target: float
    empirical: float
    bound: float

    @property
    def passed(self) -> bool:
        return abs(self.empirical - self.target) <= self.bound


def binomial_bound(p: float, n: int, z: float = 3.0) -> float:
    """z-sigma binomial bound on an empirical share of n samples."""
    return z * math.sqrt(p * (1.0 - p) / n)


def prevalence_report(
    population: list[Citizen], cfg: PrevalenceConfig
) -> list[PrevalenceCheck]:
    """Per-condition (target, empirical, 3-sigma bound) checks.

    Bounds are meaningful from roughly 1,000 citizens up.
    """
    if not population:
        raise ValidationError("cannot compute prevalences of an empty population")
    n = len(population)
    counts = dict.fromkeys(cfg.targets(), 0)
    for citizen in population:
        for name, severity in zip(counts, citizen.health.as_tuple()):
            if severity > 0:
                counts[name] += 1
    return [
        PrevalenceCheck(
            condition=name,
            target=target,
            empirical=counts[name] / n,
            bound=binomial_bound(target, n),
        )
        for name, target in cfg.targets().items()
    ]


@dataclass(frozen=True)
class HeldOutCell:
    """One hidden cell with its ground-truth value."""

    user_id: int
    route_id: str
    value: float


def holdout_split(
    matrix: RatingsMatrix, fraction: float, seed: int
) -> tuple[RatingsMatrix, list[HeldOutCell]]:
    """Split rated cells into a train matrix and a held-out test set.

    Each rated cell is hidden independently with the given probability,
    per-user substreams keyed by (seed, user id). A user's mask is redrawn
    until at least 2 train ratings remain; users with fewer than 2 rated
    cells make the split infeasible. Ground truth is the full-precision
    noisy value when present, the stored rating otherwise.
    """
    if not 0.0 < fraction < 1.0:
        raise ConfigurationError(f"hold-out fraction must be in (0, 1), got {fraction}")
    truth = matrix.exact if matrix.exact is not None else matrix.values
    train_values = matrix.values.copy()
    test: list[HeldOutCell] = []
    for i, user_id in enumerate(matrix.user_ids):
        rated = np.flatnonzero(~np.isnan(matrix.values[i]))
        if rated.size < 2:
            raise ConfigurationError(
                f"user {int(user_id)} has {rated.size} rating(s); "
                "hold-out needs at least 2 per user"
            )
        rng = substream(seed, HOLDOUT_DOMAIN, int(user_id))
        for attempt in range(_MAX_REDRAWS):
            held = rng.random(rated.size) < fraction
            if rated.size - int(held.sum()) >= 2:
                break
        else:
            raise ConfigurationError(
                f"could not keep 2 train ratings for user {int(user_id)} at "
                f"fraction {fraction}"
            )
        for j in rated[held]:
            train_values[i, j] = np.nan
            test.append(
                HeldOutCell(
                    user_id=int(user_id),
                    route_id=matrix.route_ids[j],
                    value=float(truth[i, j]),
                )
            )
    train = RatingsMatrix(
        user_ids=matrix.user_ids.copy(),
        route_ids=matrix.route_ids,
        values=train_values,
    )
    return train, test


def accuracy(predictions, cells: list[HeldOutCell]) -> tuple[float, float]:
    """(MAE, RMSE) of predictions keyed by (user_id, route_id) over test cells."""
    if not cells:
        raise ValidationError("no test cells to score")
    errors = []
    for cell in cells:
        key = (cell.user_id, cell.route_id)
        if key not in predictions:
            raise ValidationError(f"missing prediction for cell {key}")
        errors.append(predictions[key] - cell.value)
    errors = np.asarray(errors)
    mae = float(np.mean(np.abs(errors)))
    rmse = float(np.sqrt(np.mean(errors**2)))
    return mae, rmse


def precision_at_n(recommended: list[str], relevant) -> float:
    """Share of recommended ids that appear in the relevant set."""
    if not recommended:
        raise ValidationError("no recommendations to score")
    relevant = set(relevant)
    return sum(1 for rid in recommended if rid in relevant) / len(recommended)


def noise_floor(std_dev: float) -> float:
    """Expected |noise| of centered Gaussian rating noise: std * sqrt(2/pi)."""
    return std_dev * math.sqrt(2.0 / math.pi)


@dataclass(frozen=True)
class AccuracyReport:
    mae: float
    rmse: float
    n_test: int
    oracle_mae: float | None = None
    oracle_rmse: float | None = None


def evaluate_recommender(
    matrix: RatingsMatrix,
    model: SimilarityModel,
    fraction: float,
    seed: int,
) -> AccuracyReport:
    """Hold-out accuracy of the CF predictor on one matrix.

    When the matrix carries deterministic (pre-noise) values, the oracle
    predictor that returns them is scored as a baseline; its MAE sits at
    the noise floor.
    """
    train, cells = holdout_split(matrix, fraction, seed)
    recommender = Recommender(train, model)
    predictions = {
        (cell.user_id, cell.route_id): recommender.predict(cell.user_id, cell.route_id)
        for cell in cells
    }
    mae, rmse = accuracy(predictions, cells)
    oracle_mae = oracle_rmse = None
    if matrix.deterministic is not None:
        oracle = {
            (cell.user_id, cell.route_id): float(
                matrix.deterministic[
                    matrix.row_index(cell.user_id), matrix.col_index(cell.route_id)
                ]
            )
            for cell in cells
        }
        oracle_mae, oracle_rmse = accuracy(oracle, cells)
    return AccuracyReport(
        mae=mae,
        rmse=rmse,
        n_test=len(cells),
        oracle_mae=oracle_mae,
        oracle_rmse=oracle_rmse,
    )
