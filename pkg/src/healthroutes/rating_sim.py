"""Ratings synthesis: severity-weighted feature modifiers, aggregation, noise.

A citizen's modifier triple is the age-bracket row of the modifier table
plus each disease row scaled by its severity. Modifiers are added to the
per-route feature scores, each adjusted feature is clamped back to [0, 5],
the three are summed (0..15) and rescaled to [0, 10]. Gaussian noise is
added after rescaling, then clamped; stored ratings are integers (ties
rounded away from zero) with the full-precision values retained.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, ValidationError
from .population import Citizen
from .profiles import age_bracket
from .rng import NOISE_DOMAIN, substream
from .routes import FeatureScores, Route, catalog_scores

RATING_MAX = 10.0
RAW_MAX = 15.0
_SCALE = RATING_MAX / RAW_MAX

Triple = tuple[float, float, float]


@dataclass(frozen=True)
class ModifierTable:
    """Non-positive (distance, elevation, pavement) modifiers.

    One row per age bracket, applied at full weight, and one row per
    condition, scaled by the citizen's severity.
    """

    age_rows: tuple[Triple, Triple, Triple, Triple] = (
        (0.0, 0.0, 0.0),
        (-1.0, -1.0, 0.0),
        (-2.0, -2.0, 0.0),
        (-3.0, -3.0, -1.0),
    )
    visual: Triple = (0.0, 0.0, -1.0)
    respiratory: Triple = (0.0, -1.0, 0.0)
    mobility: Triple = (-1.0, -1.0, -3.0)
    heart: Triple = (-1.0, -2.0, 0.0)

    def __post_init__(self):
        if len(self.age_rows) != 4:
            raise ConfigurationError("modifier table needs exactly 4 age-bracket rows")
        for row in self.age_rows + self.disease_rows():
            if len(row) != 3 or any(entry > 0 for entry in row):
                raise ConfigurationError(f"modifier row {row} must be 3 non-positive entries")
        for younger, older in zip(self.age_rows, self.age_rows[1:]):
            if any(o > y for y, o in zip(younger, older)):
                raise ConfigurationError(
                    f"age rows must not relax with age: {older} after {younger}"
                )

    def disease_rows(self) -> tuple[Triple, Triple, Triple, Triple]:
        """Condition rows in severity-vector order (visual, respiratory, mobility, heart)."""
        return (self.visual, self.respiratory, self.mobility, self.heart)


DEFAULT_MODIFIERS = ModifierTable()


@dataclass(frozen=True)
class NoiseConfig:
    """Centered Gaussian rating noise; std_dev 0 or enabled=False disables it."""

    mean: float = 0.0
    std_dev: float = 1.5
    enabled: bool = True

    def __post_init__(self):
        if self.std_dev < 0:
            raise ConfigurationError(f"noise std_dev must be >= 0, got {self.std_dev}")


def citizen_modifiers(citizen: Citizen, table: ModifierTable = DEFAULT_MODIFIERS) -> Triple:
    """Per-feature modifier triple: age row plus severity-scaled disease rows."""
    totals = list(table.age_rows[age_bracket(citizen.age)])
    for severity, row in zip(citizen.health.as_tuple(), table.disease_rows()):
        for i in range(3):
            totals[i] += severity * row[i]
    return (totals[0], totals[1], totals[2])


def deterministic_rating(
    citizen: Citizen,
    scores: FeatureScores,
    table: ModifierTable = DEFAULT_MODIFIERS,
) -> float:
    """Noise-free rating in [0, 10].

    Each feature score is shifted by the citizen's modifier and clamped to
    [0, 5]; the clamped features are summed (0..15) and scaled by 2/3.
    """
    modifiers = citizen_modifiers(citizen, table)
    raw = 0.0
    for score, modifier in zip(scores.as_tuple(), modifiers):
        raw += min(max(score + modifier, 0.0), 5.0)
    return raw * _SCALE


def sample_noise(noise: NoiseConfig, rng: np.random.Generator, size: int | None = None):
    """Draw rating noise; zeros when disabled."""
    if not noise.enabled or noise.std_dev == 0:
        return 0.0 if size is None else np.zeros(size)
    return rng.normal(noise.mean, noise.std_dev, size)


def round_rating(value: float) -> int:
    """Round to the nearest integer, ties away from zero (values are >= 0)."""
    return int(np.floor(value + 0.5))


def noisy_value(deterministic: float, noise: NoiseConfig, rng: np.random.Generator) -> float:
    """Full-precision noisy rating: deterministic + noise, clamped to [0, 10]."""
    return float(min(max(deterministic + sample_noise(noise, rng), 0.0), RATING_MAX))


def noisy_rating(deterministic: float, noise: NoiseConfig, rng: np.random.Generator) -> int:
    """Stored (integer) noisy rating for one cell."""
    return round_rating(noisy_value(deterministic, noise, rng))


@dataclass
class RatingsMatrix:
    """Dense user x route ratings; NaN marks unrated cells in sparse matrices.

    ``values`` holds the stored integer ratings (as floats so NaN can mark
    holes). Generator output also carries ``exact`` (full-precision clamped
    noisy values) and ``deterministic`` (pre-noise values).
    """

    user_ids: np.ndarray
    route_ids: tuple[str, ...]
    values: np.ndarray
    exact: np.ndarray | None = None
    deterministic: np.ndarray | None = None
    _row_index: dict[int, int] = field(init=False, repr=False, default_factory=dict)
    _col_index: dict[str, int] = field(init=False, repr=False, default_factory=dict)

    def __post_init__(self):
        self.user_ids = np.asarray(self.user_ids, dtype=np.int64)
        self.values = np.asarray(self.values, dtype=float)
        expected = (len(self.user_ids), len(self.route_ids))
        if self.values.shape != expected:
            raise ValidationError(
                f"ratings shape {self.values.shape} does not match ids {expected}"
            )
        for extra in (self.exact, self.deterministic):
            if extra is not None and extra.shape != expected:
                raise ValidationError("auxiliary rating arrays must match the matrix shape")
        rated = self.values[~np.isnan(self.values)]
        if rated.size and (rated.min() < 0 or rated.max() > RATING_MAX):
            raise ValidationError("ratings must lie in [0, 10]")
        if len(set(self.user_ids.tolist())) != len(self.user_ids):
            raise ValidationError("duplicate user ids in ratings matrix")
        if len(set(self.route_ids)) != len(self.route_ids):
            raise ValidationError("duplicate route ids in ratings matrix")
        self._row_index = {int(uid): i for i, uid in enumerate(self.user_ids)}
        self._col_index = {rid: j for j, rid in enumerate(self.route_ids)}

    @property
    def n_users(self) -> int:
        return len(self.user_ids)

    @property
    def n_routes(self) -> int:
        return len(self.route_ids)

    @property
    def n_ratings(self) -> int:
        return int(np.count_nonzero(~np.isnan(self.values)))

    def is_complete(self) -> bool:
        return not np.isnan(self.values).any()

    def row_index(self, user_id: int) -> int:
        try:
            return self._row_index[user_id]
        except KeyError:
            raise ValidationError(f"unknown user id {user_id}") from None

    def col_index(self, route_id: str) -> int:
        try:
            return self._col_index[route_id]
        except KeyError:
            raise ValidationError(f"unknown route id {route_id!r}") from None


def generate_ratings(
    population: list[Citizen],
    catalog: list[Route],
    table: ModifierTable = DEFAULT_MODIFIERS,
    noise: NoiseConfig = NoiseConfig(),
    seed: int = 0,
) -> RatingsMatrix:
    """Complete ratings matrix over a population and a route catalog.

    Cell (u, r) equals noisy_rating(deterministic_rating(u, scores_r)) with
    the noise for row u drawn from the substream keyed by (seed, u), one
    draw per route in catalog order; every cell is therefore a pure
    function of (seed, user id, route position) and rows can be generated
    in parallel.
    """
    if not population:
        raise ValidationError("cannot rate with an empty population")
    if not catalog:
        raise ValidationError("cannot rate an empty route catalog")
    scores = catalog_scores(catalog)

    brackets = np.array([age_bracket(citizen.age) for citizen in population])
    severities = np.array([citizen.health.as_tuple() for citizen in population])
    age_rows = np.array(table.age_rows, dtype=float)
    disease_rows = np.array(table.disease_rows(), dtype=float)
    # Elementwise accumulation in severity-vector order matches the scalar
    # citizen_modifiers sum exactly (no BLAS reassociation).
    modifiers = age_rows[brackets].copy()
    for j in range(4):
        modifiers += severities[:, j : j + 1] * disease_rows[j]

    adjusted = np.clip(scores[np.newaxis, :, :] + modifiers[:, np.newaxis, :], 0.0, 5.0)
    deterministic = adjusted.sum(axis=2) * _SCALE

    exact = np.empty_like(deterministic)
    m = len(catalog)
    for i, citizen in enumerate(population):
        rng = substream(seed, NOISE_DOMAIN, citizen.id)
        eps = sample_noise(noise, rng, size=m)
        exact[i] = np.clip(deterministic[i] + eps, 0.0, RATING_MAX)
    values = np.floor(exact + 0.5)

    return RatingsMatrix(
        user_ids=np.array([citizen.id for citizen in population], dtype=np.int64),
        route_ids=tuple(route.id for route in catalog),
        values=values,
        exact=exact,
        deterministic=deterministic,
    )
