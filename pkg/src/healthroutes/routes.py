"""Route catalog model, coordinate parsing and feature normalisation.

Route features (distance, elevation gain, pavement quality) are mapped
independently onto a [0, 5] ease scale: higher means easier for the
citizen. Elevation is anchored so 0 m scores 5 and the corpus maximum
scores 0; distance is min-max inverted over the corpus; the pavement
ordinal maps onto {1..5}.
"""

import math
import re
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import ParseError, ValidationError

EARTH_RADIUS_KM = 6371.0

MAX_FEATURE_SCORE = 5.0


class Pavement(Enum):
    """Pavement quality ordinal; the enum value is its [1..5] ease score."""

    VERY_POOR = 1
    POOR = 2
    AVERAGE = 3
    GOOD = 4
    VERY_GOOD = 5

    @property
    def label(self) -> str:
        return _PAVEMENT_LABELS[self]

    @classmethod
    def from_label(cls, text: str) -> "Pavement":
        key = " ".join(text.replace("_", " ").lower().split())
        for pavement, label in _PAVEMENT_LABELS.items():
            if key == label.lower():
                return pavement
        raise ParseError(f"unknown pavement quality {text!r}")


_PAVEMENT_LABELS = {
    Pavement.VERY_POOR: "Very poor",
    Pavement.POOR: "Poor",
    Pavement.AVERAGE: "Average",
    Pavement.GOOD: "Good",
    Pavement.VERY_GOOD: "Very good",
}


class RouteStatus(Enum):
    IDLE = "Idle"
    CAUTION = "Caution"

    @classmethod
    def from_label(cls, text: str) -> "RouteStatus":
        for status in cls:
            if text.strip().lower() == status.value.lower():
                return status
        raise ParseError(f"unknown route status {text!r}")


@dataclass(frozen=True)
class GeoPoint:
    """Geographic point in decimal degrees; ranges enforced on construction."""

    latitude: float
    longitude: float

    def __post_init__(self):
        if not -90.0 <= self.latitude <= 90.0:
            raise ValidationError(f"latitude {self.latitude} outside [-90, 90]")
        if not -180.0 <= self.longitude <= 180.0:
            raise ValidationError(f"longitude {self.longitude} outside [-180, 180]")


@dataclass(frozen=True)
class Route:
    """One catalog route with geographic endpoints and raw features."""

    id: str
    start: GeoPoint
    end: GeoPoint
    checkpoints: tuple[GeoPoint, ...]
    distance_km: float
    elevation_gain_m: float
    pavement: Pavement
    status: RouteStatus

    def __post_init__(self):
        if not self.id:
            raise ValidationError("route id must be non-empty")
        if self.distance_km <= 0:
            raise ValidationError(f"route {self.id}: distance {self.distance_km} km must be > 0")
        if self.elevation_gain_m < 0:
            raise ValidationError(
                f"route {self.id}: elevation gain {self.elevation_gain_m} m must be >= 0"
            )


@dataclass(frozen=True)
class FeatureScores:
    """Per-feature ease scores, each in [0, 5]."""

    distance: float
    elevation: float
    pavement: float

    def __post_init__(self):
        for name, value in zip(("distance", "elevation", "pavement"), self.as_tuple()):
            if not 0.0 <= value <= MAX_FEATURE_SCORE:
                raise ValidationError(f"{name} score {value} outside [0, 5]")

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.distance, self.elevation, self.pavement)


_DMS_RE = re.compile(
    r"""^\s*(?P<deg>\d+)\s*°\s*(?P<min>\d+)\s*'\s*(?P<sec>\d+(?:\.\d+)?)\s*"\s*(?P<hemi>[NSEW])\s*$"""
)

_DMS_COMPONENT_RE = re.compile(r"""\d+\s*°\s*\d+\s*'\s*\d+(?:\.\d+)?\s*"\s*[NSEW]""")


def parse_dms(text: str) -> float:
    """Parse one degrees-minutes-seconds component to decimal degrees.

    The hemisphere letter fixes the sign (negative for S/W) and the valid
    degree range (90 for N/S, 180 for E/W).

    Raises:
        ParseError: malformed text, minutes/seconds >= 60 or out-of-range value.
    """
    match = _DMS_RE.match(text)
    if match is None:
        raise ParseError(f"malformed DMS coordinate {text!r}")
    degrees = int(match["deg"])
    minutes = int(match["min"])
    seconds = float(match["sec"])
    if minutes >= 60:
        raise ParseError(f"minutes {minutes} out of range in {text!r}")
    if seconds >= 60:
        raise ParseError(f"seconds {seconds} out of range in {text!r}")
    value = degrees + minutes / 60.0 + seconds / 3600.0
    hemisphere = match["hemi"]
    limit = 90.0 if hemisphere in "NS" else 180.0
    if value > limit:
        raise ParseError(f"coordinate {text!r} exceeds {limit} degrees")
    return -value if hemisphere in "SW" else value


def format_dms(value: float, axis: str) -> str:
    """Format decimal degrees as a DMS string; inverse of parse_dms to < 0.5"."""
    if axis == "lat":
        hemisphere = "N" if value >= 0 else "S"
    elif axis == "lon":
        hemisphere = "E" if value >= 0 else "W"
    else:
        raise ValueError(f"axis must be 'lat' or 'lon', got {axis!r}")
    # Integer centiseconds avoid the 59.999" -> 60.00" carry bug.
    centiseconds = round(abs(value) * 360000)
    degrees, rest = divmod(centiseconds, 360000)
    minutes, rest = divmod(rest, 6000)
    return f"{degrees}°{minutes}'{rest / 100:.2f}\"{hemisphere}"


def parse_point(text: str) -> GeoPoint:
    """Parse a latitude/longitude pair in DMS or decimal-degree form.

    Accepts e.g. ``41°4'44.54"N 1°12'49.58"E`` (optionally comma separated)
    or ``41.079039 1.213772``.
    """
    components = _DMS_COMPONENT_RE.findall(text)
    if components:
        if len(components) != 2:
            raise ParseError(f"expected two DMS components in {text!r}")
        values = {}
        for component in components:
            axis = "lat" if component.strip()[-1] in "NS" else "lon"
            if axis in values:
                raise ParseError(f"duplicate {axis} component in {text!r}")
            values[axis] = parse_dms(component)
        if set(values) != {"lat", "lon"}:
            raise ParseError(f"need one N/S and one E/W component in {text!r}")
        return GeoPoint(latitude=values["lat"], longitude=values["lon"])
    tokens = text.replace(",", " ").split()
    if len(tokens) != 2:
        raise ParseError(f"expected 'lat lon' pair, got {text!r}")
    try:
        latitude, longitude = float(tokens[0]), float(tokens[1])
    except ValueError as exc:
        raise ParseError(f"non-numeric coordinate in {text!r}") from exc
    return GeoPoint(latitude=latitude, longitude=longitude)


def format_point(point: GeoPoint) -> str:
    """Canonical decimal form used in catalog files."""
    return f"{point.latitude:.6f} {point.longitude:.6f}"


def haversine_km(a: GeoPoint, b: GeoPoint) -> float:
    """Great-circle distance in km (Earth radius 6371.0 km)."""
    lat1, lat2 = math.radians(a.latitude), math.radians(b.latitude)
    dlat = lat2 - lat1
    dlon = math.radians(b.longitude - a.longitude)
    h = math.sin(dlat / 2) ** 2 + math.cos(lat1) * math.cos(lat2) * math.sin(dlon / 2) ** 2
    return 2 * EARTH_RADIUS_KM * math.asin(math.sqrt(h))


def normalize_features(route: Route, corpus: list[Route]) -> FeatureScores:
    """Ease scores of a route relative to a corpus containing it.

    Elevation: 5 * (1 - e / e_max); 0 m scores 5, the corpus maximum 0.
    Distance: min-max inverted over the corpus, shortest scores 5.
    Pavement: the ordinal's fixed {1..5} value.
    A feature whose normalisation would divide by zero (all-equal
    distances, all-zero elevations) scores 5 for every route.
    """
    if not corpus:
        raise ValidationError("route corpus is empty")
    if all(other.id != route.id for other in corpus):
        raise ValidationError(f"route {route.id!r} is not part of the corpus")
    elevation_max = max(other.elevation_gain_m for other in corpus)
    if elevation_max == 0:
        elevation = MAX_FEATURE_SCORE
    else:
        elevation = MAX_FEATURE_SCORE * (1.0 - route.elevation_gain_m / elevation_max)
    distances = [other.distance_km for other in corpus]
    d_min, d_max = min(distances), max(distances)
    if d_max == d_min:
        distance = MAX_FEATURE_SCORE
    else:
        distance = MAX_FEATURE_SCORE * (d_max - route.distance_km) / (d_max - d_min)
    return FeatureScores(
        distance=distance, elevation=elevation, pavement=float(route.pavement.value)
    )


def catalog_scores(corpus: list[Route]) -> np.ndarray:
    """(m, 3) array of (distance, elevation, pavement) scores in corpus order."""
    return np.array(
        [normalize_features(route, corpus).as_tuple() for route in corpus], dtype=float
    )
