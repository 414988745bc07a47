"""Stable, bit-reproducible file formats for citizens, routes, ratings and
run manifests.

All files are UTF-8, comma-delimited with LF newlines and a mandatory
header row. Severities are one-decimal fixed point and stored ratings are
integers, so writes are byte-identical across platforms. Readers reject
invalid data with the offending line and column.
"""

import csv
import hashlib
import json
from dataclasses import asdict, dataclass, is_dataclass
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .errors import HealthRoutesError, ValidationError
from .population import Citizen, HealthConditions
from .rating_sim import RATING_MAX, RatingsMatrix
from .routes import Pavement, Route, RouteStatus, format_point, haversine_km, parse_point

CITIZEN_COLUMNS = ("id", "age", "visual", "respiratory", "mobility", "heart")
ROUTE_COLUMNS = (
    "id",
    "start",
    "end",
    "checkpoints",
    "distance_km",
    "elevation_gain_m",
    "pavement",
    "status",
)
RATING_COLUMNS = ("user_id", "route_id", "rating")
RATING_EXTRA_COLUMNS = ("deterministic", "exact")

MANIFEST_FIELDS = ("seed", "version", "digests", "shapes", "outputs", "created")


def _open_write(path):
    return open(path, "w", encoding="utf-8", newline="")


def _check_header(row, expected, path):
    if row is None or tuple(row) != tuple(expected):
        raise ValidationError(
            f"{path}: expected header {','.join(expected)}, got "
            f"{','.join(row) if row else '<empty file>'}"
        )


def _fail(path, line, column, message):
    raise ValidationError(f"{path}:{line}: column {column!r}: {message}")


def write_citizens(path, population: list[Citizen]) -> None:
    """Write a population as CSV with one-decimal severities."""
    with _open_write(path) as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(CITIZEN_COLUMNS)
        for citizen in population:
            severities = citizen.health.as_tuple()
            writer.writerow(
                [citizen.id, citizen.age] + [f"{s:.1f}" for s in severities]
            )


def read_citizens(path) -> list[Citizen]:
    """Read a citizens file; inverse of write_citizens."""
    population = []
    seen_ids = set()
    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        _check_header(next(reader, None), CITIZEN_COLUMNS, path)
        for line, row in enumerate(reader, start=2):
            if len(row) != len(CITIZEN_COLUMNS):
                raise ValidationError(
                    f"{path}:{line}: expected {len(CITIZEN_COLUMNS)} columns, got {len(row)}"
                )
            try:
                cid = int(row[0])
            except ValueError:
                _fail(path, line, "id", f"not an integer: {row[0]!r}")
            try:
                age = int(row[1])
            except ValueError:
                _fail(path, line, "age", f"not an integer: {row[1]!r}")
            if cid in seen_ids:
                _fail(path, line, "id", f"duplicate citizen id {cid}")
            seen_ids.add(cid)
            severities = []
            for column, text in zip(CITIZEN_COLUMNS[2:], row[2:]):
                try:
                    value = float(text)
                except ValueError:
                    _fail(path, line, column, f"not a number: {text!r}")
                if not 0.0 <= value <= 1.0 or abs(value * 10 - round(value * 10)) > 1e-9:
                    _fail(path, line, column, f"severity {text!r} is off the 0.1 grid")
                severities.append(value)
            try:
                population.append(
                    Citizen(id=cid, age=age, health=HealthConditions(*severities))
                )
            except ValidationError as exc:
                raise ValidationError(f"{path}:{line}: {exc}") from None
    return population


def write_routes(path, catalog: list[Route]) -> None:
    """Write a catalog in canonical form (decimal degrees, fixed labels)."""
    with _open_write(path) as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(ROUTE_COLUMNS)
        for route in catalog:
            writer.writerow(
                [
                    route.id,
                    format_point(route.start),
                    format_point(route.end),
                    ";".join(format_point(p) for p in route.checkpoints),
                    f"{route.distance_km:g}",
                    f"{route.elevation_gain_m:g}",
                    route.pavement.label,
                    route.status.value,
                ]
            )


def read_routes(path) -> list[Route]:
    """Read a route catalog; coordinates may be DMS or decimal degrees.

    Rejects duplicate ids and routes whose declared distance is shorter
    than the straight-line start-end distance.
    """
    catalog = []
    seen_ids = set()
    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        _check_header(next(reader, None), ROUTE_COLUMNS, path)
        for line, row in enumerate(reader, start=2):
            if len(row) != len(ROUTE_COLUMNS):
                raise ValidationError(
                    f"{path}:{line}: expected {len(ROUTE_COLUMNS)} columns, got {len(row)}"
                )
            route_id = row[0].strip()
            if route_id in seen_ids:
                _fail(path, line, "id", f"duplicate route id {route_id!r}")
            seen_ids.add(route_id)
            fields = {"id": route_id}
            for column in ("start", "end"):
                text = row[ROUTE_COLUMNS.index(column)]
                try:
                    fields[column] = parse_point(text)
                except HealthRoutesError as exc:
                    _fail(path, line, column, str(exc))
            checkpoint_text = row[3].strip()
            checkpoints = []
            for token in filter(None, (t.strip() for t in checkpoint_text.split(";"))):
                try:
                    checkpoints.append(parse_point(token))
                except HealthRoutesError as exc:
                    _fail(path, line, "checkpoints", str(exc))
            for column, index in (("distance_km", 4), ("elevation_gain_m", 5)):
                try:
                    fields[column] = float(row[index])
                except ValueError:
                    _fail(path, line, column, f"not a number: {row[index]!r}")
            try:
                pavement = Pavement.from_label(row[6])
                status = RouteStatus.from_label(row[7])
                route = Route(
                    id=route_id,
                    start=fields["start"],
                    end=fields["end"],
                    checkpoints=tuple(checkpoints),
                    distance_km=fields["distance_km"],
                    elevation_gain_m=fields["elevation_gain_m"],
                    pavement=pavement,
                    status=status,
                )
            except HealthRoutesError as exc:
                raise ValidationError(f"{path}:{line}: {exc}") from None
            straight = haversine_km(route.start, route.end)
            if route.distance_km < straight - 1e-6:
                _fail(
                    path,
                    line,
                    "distance_km",
                    f"declared {route.distance_km} km is shorter than the "
                    f"straight-line start-end distance {straight:.3f} km",
                )
            catalog.append(route)
    return catalog


def write_ratings(path, matrix: RatingsMatrix, full_precision: bool = False) -> None:
    """Write rated cells in long format, row-major.

    With full_precision, the deterministic (pre-noise) and exact
    (pre-rounding) values are appended as extra columns when available.
    """
    extras = full_precision and matrix.deterministic is not None and matrix.exact is not None
    header = RATING_COLUMNS + RATING_EXTRA_COLUMNS if extras else RATING_COLUMNS
    with _open_write(path) as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for i, user_id in enumerate(matrix.user_ids):
            for j, route_id in enumerate(matrix.route_ids):
                value = matrix.values[i, j]
                if np.isnan(value):
                    continue
                record = [int(user_id), route_id, int(value)]
                if extras:
                    record.append(repr(float(matrix.deterministic[i, j])))
                    record.append(repr(float(matrix.exact[i, j])))
                writer.writerow(record)


def read_ratings(path) -> RatingsMatrix:
    """Read a long-format ratings file into a (possibly sparse) matrix.

    Stored ratings must be integers in [0, 10]. Unseen (user, route) cells
    become NaN; column order follows first appearance.
    """
    cells = {}
    user_ids: list[int] = []
    route_ids: list[str] = []
    user_seen = set()
    route_seen = set()
    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header is not None and tuple(header) == RATING_COLUMNS + RATING_EXTRA_COLUMNS:
            extras = True
        else:
            _check_header(header, RATING_COLUMNS, path)
            extras = False
        expected_len = len(RATING_COLUMNS) + (2 if extras else 0)
        for line, row in enumerate(reader, start=2):
            if len(row) != expected_len:
                raise ValidationError(
                    f"{path}:{line}: expected {expected_len} columns, got {len(row)}"
                )
            try:
                user_id = int(row[0])
            except ValueError:
                _fail(path, line, "user_id", f"not an integer: {row[0]!r}")
            route_id = row[1]
            try:
                rating = int(row[2])
            except ValueError:
                _fail(path, line, "rating", f"not an integer: {row[2]!r}")
            if not 0 <= rating <= RATING_MAX:
                _fail(path, line, "rating", f"rating {rating} outside [0, 10]")
            key = (user_id, route_id)
            if key in cells:
                _fail(path, line, "user_id", f"duplicate cell {key}")
            if extras:
                try:
                    cells[key] = (rating, float(row[3]), float(row[4]))
                except ValueError:
                    _fail(path, line, "deterministic", f"not a number in {row[3:5]!r}")
            else:
                cells[key] = (rating, None, None)
            if user_id not in user_seen:
                user_seen.add(user_id)
                user_ids.append(user_id)
            if route_id not in route_seen:
                route_seen.add(route_id)
                route_ids.append(route_id)
    if not cells:
        raise ValidationError(f"{path}: no ratings found")
    shape = (len(user_ids), len(route_ids))
    values = np.full(shape, np.nan)
    deterministic = np.full(shape, np.nan) if extras else None
    exact = np.full(shape, np.nan) if extras else None
    row_of = {uid: i for i, uid in enumerate(user_ids)}
    col_of = {rid: j for j, rid in enumerate(route_ids)}
    for (user_id, route_id), (rating, det, exc) in cells.items():
        i, j = row_of[user_id], col_of[route_id]
        values[i, j] = rating
        if extras:
            deterministic[i, j] = det
            exact[i, j] = exc
    return RatingsMatrix(
        user_ids=np.array(user_ids, dtype=np.int64),
        route_ids=tuple(route_ids),
        values=values,
        exact=exact,
        deterministic=deterministic,
    )


@dataclass
class RunManifest:
    """Reproducibility record emitted next to every generated dataset."""

    seed: int
    version: str
    digests: dict
    shapes: dict
    outputs: dict
    created: str = ""

    def __post_init__(self):
        if not self.created:
            self.created = datetime.now(timezone.utc).isoformat(timespec="seconds")


def config_digest(config) -> str:
    """SHA-256 over a canonical JSON rendering of a configuration object."""
    payload = asdict(config) if is_dataclass(config) else config
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def file_digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def manifest_path_for(data_path) -> Path:
    return Path(str(data_path) + ".manifest.json")


def write_manifest(path, manifest: RunManifest) -> None:
    payload = {name: getattr(manifest, name) for name in MANIFEST_FIELDS}
    with _open_write(path) as handle:
        json.dump(payload, handle, indent=2, sort_keys=True)
        handle.write("\n")


def read_manifest(path) -> RunManifest:
    with open(path, encoding="utf-8") as handle:
        payload = json.load(handle)
    missing = [name for name in MANIFEST_FIELDS if name not in payload]
    if missing:
        raise ValidationError(f"{path}: manifest missing fields {missing}")
    return RunManifest(**{name: payload[name] for name in MANIFEST_FIELDS})


def verify_manifest(manifest: RunManifest, digests: dict) -> list[str]:
    """Names whose digest differs from the manifest's record (empty = ok)."""
    return sorted(
        name
        for name, digest in digests.items()
        if manifest.digests.get(name, digest) != digest
    )
