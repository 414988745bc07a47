"""Synthetic citizen sampling from demographic and prevalence configuration.

Ages follow a configurable bracket pyramid; each health condition is
assigned independently from its configured prevalence, except heart
disease which is gated to citizens above an age threshold and rescaled so
the population-wide prevalence still matches the target.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, ValidationError
from .rng import CITIZEN_DOMAIN, substream

AGE_MIN = 18
AGE_MAX = 90

CONDITION_NAMES = ("visual", "respiratory", "mobility", "heart")


@dataclass(frozen=True)
class HealthConditions:
    """Per-condition severities on the 0.1 grid in [0, 1]; 0.0 means absent."""

    visual: float = 0.0
    respiratory: float = 0.0
    mobility: float = 0.0
    heart: float = 0.0

    def __post_init__(self):
        for name, value in zip(CONDITION_NAMES, self.as_tuple()):
            if not 0.0 <= value <= 1.0 or abs(value * 10 - round(value * 10)) > 1e-9:
                raise ValidationError(
                    f"{name} severity {value!r} is not a multiple of 0.1 in [0, 1]"
                )

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.visual, self.respiratory, self.mobility, self.heart)


@dataclass(frozen=True)
class Citizen:
    """One simulated citizen.

    The age bounds are enforced here; the heart-disease age gate is
    enforced by the sampler against the configured threshold.
    """

    id: int
    age: int
    health: HealthConditions

    def __post_init__(self):
        if not AGE_MIN <= self.age <= AGE_MAX:
            raise ValidationError(
                f"citizen {self.id}: age {self.age} outside [{AGE_MIN}, {AGE_MAX}]"
            )


@dataclass(frozen=True)
class PrevalenceConfig:
    """Target prevalences per condition plus the heart-disease age gate."""

    p_visual: float = 0.034
    p_respiratory: float = 0.032
    p_mobility: float = 0.02
    p_cardio: float = 0.14
    heart_age_threshold: int = 45

    def __post_init__(self):
        for name, p in self.targets().items():
            if not 0.0 <= p <= 1.0:
                raise ConfigurationError(f"prevalence for {name} must be in [0, 1], got {p}")
        if not AGE_MIN <= self.heart_age_threshold <= AGE_MAX:
            raise ConfigurationError(
                f"heart_age_threshold {self.heart_age_threshold} outside "
                f"[{AGE_MIN}, {AGE_MAX}]"
            )

    def targets(self) -> dict[str, float]:
        """Condition name -> target population prevalence."""
        return {
            "visual": self.p_visual,
            "respiratory": self.p_respiratory,
            "mobility": self.p_mobility,
            "heart": self.p_cardio,
        }


@dataclass(frozen=True)
class AgePyramid:
    """Ordered integer age brackets (min_age, max_age, weight).

    Brackets must partition [18, 90] with inclusive bounds and no gaps or
    overlaps; weights are normalised to sum to 1 on construction.
    """

    brackets: tuple[tuple[int, int, float], ...]

    def __post_init__(self):
        if not self.brackets:
            raise ConfigurationError("age pyramid needs at least one bracket")
        total = 0.0
        previous_max = AGE_MIN - 1
        for lo, hi, weight in self.brackets:
            if lo != previous_max + 1:
                raise ConfigurationError(
                    f"bracket [{lo}, {hi}] leaves a gap or overlap after age {previous_max}"
                )
            if hi < lo:
                raise ConfigurationError(f"bracket [{lo}, {hi}] is empty")
            if weight < 0:
                raise ConfigurationError(f"bracket [{lo}, {hi}] has negative weight {weight}")
            total += weight
            previous_max = hi
        if previous_max != AGE_MAX:
            raise ConfigurationError(
                f"brackets must end at {AGE_MAX}, last bracket ends at {previous_max}"
            )
        if total <= 0:
            raise ConfigurationError("age pyramid weights sum to zero")
        normalised = tuple(
            (int(lo), int(hi), float(weight) / total) for lo, hi, weight in self.brackets
        )
        object.__setattr__(self, "brackets", normalised)

    def share_above(self, age: int) -> float:
        """Exact probability that a sampled age is strictly greater than `age`."""
        share = 0.0
        for lo, hi, weight in self.brackets:
            size = hi - lo + 1
            above = max(0, hi - max(age, lo - 1))
            share += weight * above / size
        return share


DEFAULT_PYRAMID = AgePyramid(
    brackets=(
        (18, 35, 0.27),
        (36, 50, 0.29),
        (51, 65, 0.24),
        (66, 90, 0.20),
    )
)


def sample_age(pyramid: AgePyramid, rng: np.random.Generator) -> int:
    """Draw an age: bracket chosen by weight, then uniform integer within it."""
    u = rng.random()
    cumulative = 0.0
    lo, hi = pyramid.brackets[-1][:2]
    for blo, bhi, weight in pyramid.brackets:
        cumulative += weight
        if u < cumulative:
            lo, hi = blo, bhi
            break
    return int(rng.integers(lo, hi + 1))


def heart_conditional_probability(cfg: PrevalenceConfig, pyramid: AgePyramid) -> float:
    """Conditional heart-disease probability for citizens above the age gate.

    Rescales the population target by the over-threshold share so that the
    overall prevalence still equals ``cfg.p_cardio``.
    """
    if cfg.p_cardio == 0:
        return 0.0
    share = pyramid.share_above(cfg.heart_age_threshold)
    if share <= 0 or cfg.p_cardio > share:
        raise ConfigurationError(
            f"over-{cfg.heart_age_threshold} population share {share:.4f} is below the "
            f"cardiovascular target {cfg.p_cardio}; conditional probability would exceed 1"
        )
    return cfg.p_cardio / share


def sample_conditions(
    age: int,
    cfg: PrevalenceConfig,
    pyramid: AgePyramid,
    rng: np.random.Generator,
) -> HealthConditions:
    """Sample the four condition severities for a citizen of the given age.

    Present conditions draw a severity uniformly from {0.1, ..., 1.0};
    absent conditions get 0.0. Heart disease only occurs above the
    configured age threshold, with probability rescaled by the pyramid's
    over-threshold share.
    """
    if not AGE_MIN <= age <= AGE_MAX:
        raise ValidationError(f"age {age} outside [{AGE_MIN}, {AGE_MAX}]")
    p_heart = heart_conditional_probability(cfg, pyramid)
    return _sample_conditions(age, cfg, p_heart, rng)


def _sample_conditions(
    age: int, cfg: PrevalenceConfig, p_heart: float, rng: np.random.Generator
) -> HealthConditions:
    u = rng.random(4)
    present = (
        u[0] < cfg.p_visual,
        u[1] < cfg.p_respiratory,
        u[2] < cfg.p_mobility,
        age > cfg.heart_age_threshold and u[3] < p_heart,
    )
    severities = tuple(
        int(rng.integers(1, 11)) / 10.0 if flag else 0.0 for flag in present
    )
    return HealthConditions(*severities)


def generate_population(
    n: int,
    pyramid: AgePyramid = DEFAULT_PYRAMID,
    cfg: PrevalenceConfig = PrevalenceConfig(),
    seed: int = 0,
) -> list[Citizen]:
    """Generate n citizens with ids 1..n, reproducibly from the seed.

    Each citizen is drawn from its own substream keyed by (seed, id), so
    generation is a pure function of (seed, n, pyramid, cfg) and is safe to
    parallelise over disjoint id ranges.
    """
    if n < 1:
        raise ValidationError(f"cannot generate an empty population (n={n})")
    p_heart = heart_conditional_probability(cfg, pyramid)
    citizens = []
    for cid in range(1, n + 1):
        rng = substream(seed, CITIZEN_DOMAIN, cid)
        age = sample_age(pyramid, rng)
        health = _sample_conditions(age, cfg, p_heart, rng)
        citizens.append(Citizen(id=cid, age=age, health=health))
    return citizens
