"""Citizen profile classification: 4 age brackets x 16 disease combinations.

A profile packs the age bracket (0..3, upper bounds 35/50/65/90, right
inclusive) with a 4-bit disease mask. Bit order is a package convention:
bit 0 visual, bit 1 respiratory, bit 2 mobility, bit 3 heart. The bit
order only affects profile labels, never the partition itself.
"""

from collections import Counter
from dataclasses import dataclass

from .errors import ValidationError
from .population import Citizen

PROFILE_COUNT = 64
MASK_BITS = ("visual", "respiratory", "mobility", "heart")

_BRACKET_UPPER_BOUNDS = (35, 50, 65)


def age_bracket(age: int) -> int:
    """Bracket index for an age; boundaries are right-inclusive (35 -> 0)."""
    for index, upper in enumerate(_BRACKET_UPPER_BOUNDS):
        if age <= upper:
            return index
    return 3


@dataclass(frozen=True, order=True)
class ProfileId:
    """One of the 64 (age bracket, disease combination) classes."""

    age_bracket: int
    disease_mask: int

    def __post_init__(self):
        if not 0 <= self.age_bracket <= 3:
            raise ValidationError(f"age bracket {self.age_bracket} outside 0..3")
        if not 0 <= self.disease_mask <= 15:
            raise ValidationError(f"disease mask {self.disease_mask} outside 0..15")

    @property
    def packed(self) -> int:
        """Packed id in 0..63: age_bracket * 16 + disease_mask."""
        return self.age_bracket * 16 + self.disease_mask

    @classmethod
    def from_packed(cls, packed: int) -> "ProfileId":
        if not 0 <= packed < PROFILE_COUNT:
            raise ValidationError(f"packed profile id {packed} outside 0..63")
        return cls(age_bracket=packed // 16, disease_mask=packed % 16)

    def diseases(self) -> tuple[str, ...]:
        """Names of the conditions present in this profile."""
        return tuple(
            name for bit, name in enumerate(MASK_BITS) if self.disease_mask >> bit & 1
        )


def classify(citizen: Citizen) -> ProfileId:
    """Profile of a citizen; a condition counts as present when severity > 0."""
    mask = 0
    for bit, severity in enumerate(citizen.health.as_tuple()):
        if severity > 0:
            mask |= 1 << bit
    return ProfileId(age_bracket=age_bracket(citizen.age), disease_mask=mask)


def profile_census(population: list[Citizen]) -> dict[int, int]:
    """Histogram of packed profile ids over a population."""
    if not population:
        raise ValidationError("cannot take a profile census of an empty population")
    return dict(Counter(classify(citizen).packed for citizen in population))
