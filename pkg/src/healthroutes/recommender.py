"""User-based collaborative filtering over the ratings matrix.

Similarity is computed over co-rated cells only (Pearson by default,
cosine optional). Predictions are mean-centered weighted averages over the
k most similar users with a defined, strictly positive similarity who
rated the target route; with no eligible neighbour the route's global mean
is used. Recommendations can be filtered against the citizen's health via
the deterministic rating pipeline.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, ValidationError
from .population import Citizen
from .rating_sim import ModifierTable, RatingsMatrix, deterministic_rating
from .routes import Route, RouteStatus, normalize_features

METRICS = ("pearson", "cosine")


@dataclass(frozen=True)
class SimilarityModel:
    """Neighbourhood model parameters."""

    metric: str = "pearson"
    k_neighbors: int = 30
    min_overlap: int = 3

    def __post_init__(self):
        if self.metric not in METRICS:
            raise ConfigurationError(f"metric must be one of {METRICS}, got {self.metric!r}")
        if self.k_neighbors < 1:
            raise ConfigurationError(f"k_neighbors must be >= 1, got {self.k_neighbors}")
        if self.min_overlap < 1:
            raise ConfigurationError(f"min_overlap must be >= 1, got {self.min_overlap}")


@dataclass(frozen=True)
class Recommendation:
    route_id: str
    predicted: float
    support: int


@dataclass(frozen=True)
class HealthFilterConfig:
    """Health-based candidate filter: minimum deterministic rating plus an
    optional strict gate on Caution routes for citizens with any condition."""

    catalog: tuple[Route, ...]
    table: ModifierTable
    threshold: float = 3.0
    strict: bool = False


def similarity(u_row, v_row, model: SimilarityModel) -> float | None:
    """Similarity of two rating rows over their co-rated cells.

    Returns None when undefined: fewer than min_overlap co-rated cells,
    zero variance under Pearson, or a zero-norm row under cosine.
    """
    u = np.asarray(u_row, dtype=float)
    v = np.asarray(v_row, dtype=float)
    if u.shape != v.shape:
        raise ValidationError(f"rating rows differ in length: {u.shape} vs {v.shape}")
    mask = ~np.isnan(u) & ~np.isnan(v)
    if int(mask.sum()) < model.min_overlap:
        return None
    x, y = u[mask], v[mask]
    if model.metric == "pearson":
        xc, yc = x - x.mean(), y - y.mean()
        var_x, var_y = float(xc @ xc), float(yc @ yc)
        if var_x <= 0 or var_y <= 0:
            return None
        value = float(xc @ yc) / np.sqrt(var_x * var_y)
    else:
        norm = float(x @ x) * float(y @ y)
        if norm <= 0:
            return None
        value = float(x @ y) / np.sqrt(norm)
    return float(np.clip(value, -1.0, 1.0))


class Recommender:
    """CF queries over one immutable matrix snapshot.

    Per-user similarity vectors are cached; caching never changes results,
    so concurrent readers are safe.
    """

    def __init__(self, matrix: RatingsMatrix, model: SimilarityModel = SimilarityModel()):
        self.matrix = matrix
        self.model = model
        self._values = matrix.values
        self._rated = ~np.isnan(self._values)
        self._zeroed = np.nan_to_num(self._values)
        with np.errstate(invalid="ignore"):
            counts = self._rated.sum(axis=1)
            sums = self._zeroed.sum(axis=1)
            self._row_means = np.where(counts > 0, sums / np.maximum(counts, 1), np.nan)
        self._sims: dict[int, np.ndarray] = {}

    def similarities(self, user_id: int) -> np.ndarray:
        """Similarities of a user to every row (NaN where undefined, incl. self)."""
        u = self.matrix.row_index(user_id)
        cached = self._sims.get(u)
        if cached is None:
            cached = self._similarities_to_all(u)
            self._sims[u] = cached
        return cached

    def _similarities_to_all(self, u: int) -> np.ndarray:
        rated = self._rated.astype(float)
        z = self._zeroed
        x = z[u]
        x_mask = rated[u]
        n = rated @ x_mask
        s_x = rated @ x
        s_y = z @ x_mask
        s_xx = rated @ (x * x)
        s_yy = (z * z) @ x_mask
        s_xy = z @ x
        with np.errstate(invalid="ignore", divide="ignore"):
            if self.model.metric == "pearson":
                cov = s_xy - s_x * s_y / n
                var_x = s_xx - s_x * s_x / n
                var_y = s_yy - s_y * s_y / n
                defined = (n >= self.model.min_overlap) & (var_x > 0) & (var_y > 0)
                sims = np.where(defined, cov / np.sqrt(var_x * var_y), np.nan)
            else:
                norm = s_xx * s_yy
                defined = (n >= self.model.min_overlap) & (norm > 0)
                sims = np.where(defined, s_xy / np.sqrt(norm), np.nan)
        sims = np.clip(sims, -1.0, 1.0)
        sims[u] = np.nan
        return sims

    def neighbors(self, user_id: int, route_id: str) -> list[int]:
        """Row indices of the k best eligible neighbours for one cell."""
        r = self.matrix.col_index(route_id)
        sims = self.similarities(user_id)
        eligible = np.flatnonzero(~np.isnan(sims) & (sims > 0) & self._rated[:, r])
        if eligible.size == 0:
            return []
        # Sort by similarity descending, ties by row index ascending.
        order = np.lexsort((eligible, -sims[eligible]))
        return eligible[order][: self.model.k_neighbors].tolist()

    def predict(self, user_id: int, route_id: str) -> float:
        """Predicted rating in [0, 10] for one (user, route) cell."""
        u = self.matrix.row_index(user_id)
        r = self.matrix.col_index(route_id)
        chosen = self.neighbors(user_id, route_id)
        if not chosen:
            return self._column_mean(r)
        sims = self.similarities(user_id)
        weights = sims[chosen]
        deviations = self._values[chosen, r] - self._row_means[chosen]
        mean_u = self._row_means[u]
        if np.isnan(mean_u):
            return self._column_mean(r)
        prediction = mean_u + float(weights @ deviations) / float(weights.sum())
        return float(np.clip(prediction, 0.0, 10.0))

    def _column_mean(self, r: int) -> float:
        rated = self._rated[:, r]
        if rated.any():
            return float(self._zeroed[rated, r].mean())
        if self._rated.any():
            return float(self._zeroed[self._rated].mean())
        raise ValidationError("matrix has no ratings to fall back on")

    def top_n(
        self,
        user_id: int,
        n: int,
        citizen: Citizen | None = None,
        health: HealthFilterConfig | None = None,
        include_rated: bool = False,
    ) -> list[Recommendation]:
        """Top-n recommendations, sorted by prediction desc then route id asc.

        Candidates are the routes the user has not rated, or every route
        when include_rated is set (complete-matrix mode). Candidates
        failing the health filter are removed; fewer than n results may
        remain.
        """
        if n < 1:
            raise ValidationError(f"n must be >= 1, got {n}")
        if health is not None and citizen is None:
            raise ConfigurationError("health filtering requires the citizen")
        u = self.matrix.row_index(user_id)
        routes_by_id = (
            {route.id: route for route in health.catalog} if health is not None else {}
        )
        results = []
        for r, route_id in enumerate(self.matrix.route_ids):
            if not include_rated and self._rated[u, r]:
                continue
            if health is not None:
                route = routes_by_id.get(route_id)
                if route is None:
                    raise ValidationError(f"route {route_id!r} missing from filter catalog")
                if not health_filter(
                    citizen,
                    route,
                    list(health.catalog),
                    health.table,
                    threshold=health.threshold,
                    strict=health.strict,
                ):
                    continue
            predicted = self.predict(user_id, route_id)
            support = len(self.neighbors(user_id, route_id))
            results.append(Recommendation(route_id, predicted, support))
        results.sort(key=lambda rec: (-rec.predicted, rec.route_id))
        return results[:n]


def predict(
    user_id: int, route_id: str, matrix: RatingsMatrix, model: SimilarityModel = SimilarityModel()
) -> float:
    """One-off prediction; build a Recommender for repeated queries."""
    return Recommender(matrix, model).predict(user_id, route_id)


def top_n(
    user_id: int,
    n: int,
    matrix: RatingsMatrix,
    model: SimilarityModel = SimilarityModel(),
    citizen: Citizen | None = None,
    health: HealthFilterConfig | None = None,
    include_rated: bool = False,
) -> list[Recommendation]:
    """One-off top-n; build a Recommender for repeated queries."""
    return Recommender(matrix, model).top_n(
        user_id, n, citizen=citizen, health=health, include_rated=include_rated
    )


def health_filter(
    citizen: Citizen,
    route: Route,
    catalog: list[Route],
    table: ModifierTable,
    threshold: float = 3.0,
    strict: bool = False,
) -> bool:
    """Whether a route is appropriate for a citizen.

    Fails when the citizen's deterministic rating of the route falls below
    the threshold, or (strict mode) when the route status is Caution and
    the citizen has any condition.
    """
    ok_threshold, ok_status = health_filter_verdicts(
        citizen, route, catalog, table, threshold=threshold, strict=strict
    )
    return ok_threshold and ok_status


def health_filter_verdicts(
    citizen: Citizen,
    route: Route,
    catalog: list[Route],
    table: ModifierTable,
    threshold: float = 3.0,
    strict: bool = False,
) -> tuple[bool, bool]:
    """(threshold verdict, status verdict) behind health_filter."""
    scores = normalize_features(route, catalog)
    ok_threshold = deterministic_rating(citizen, scores, table) >= threshold
    ok_status = not (
        strict
        and route.status is RouteStatus.CAUTION
        and any(s > 0 for s in citizen.health.as_tuple())
    )
    return ok_threshold, ok_status
