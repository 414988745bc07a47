"""Brute-force reference implementation of the CF prediction rules.

Deliberately independent of the package internals: ratings live in plain
lists of lists with None for unrated cells, and everything is explicit
Python loops. Used to cross-check the recommender on small instances.

Definitions mirrored here:
  * similarity over co-rated cells only; undefined below min_overlap,
    for zero variance (pearson) or a zero norm (cosine); result in [-1, 1]
  * neighbours of (u, r): users v != u with defined similarity > 0 that
    rated r, ordered by similarity descending then row index ascending,
    truncated to k
  * prediction: mean(u) + sum(sim * (rating_v - mean_v)) / sum(sim),
    clamped to [0, 10]; column mean fallback with no neighbours (overall
    mean if the column is empty)
  * top-n: candidate routes (unrated, or all in complete-matrix mode)
    sorted by prediction descending then route id ascending
"""

import math


def row_mean(row):
    rated = [x for x in row if x is not None]
    return sum(rated) / len(rated) if rated else None


def pearson(u_row, v_row, min_overlap):
    pairs = [(x, y) for x, y in zip(u_row, v_row) if x is not None and y is not None]
    if len(pairs) < min_overlap:
        return None
    n = len(pairs)
    mean_x = sum(x for x, _ in pairs) / n
    mean_y = sum(y for _, y in pairs) / n
    cov = sum((x - mean_x) * (y - mean_y) for x, y in pairs)
    var_x = sum((x - mean_x) ** 2 for x, _ in pairs)
    var_y = sum((y - mean_y) ** 2 for _, y in pairs)
    if var_x <= 0 or var_y <= 0:
        return None
    value = cov / math.sqrt(var_x * var_y)
    return max(-1.0, min(1.0, value))


def cosine(u_row, v_row, min_overlap):
    pairs = [(x, y) for x, y in zip(u_row, v_row) if x is not None and y is not None]
    if len(pairs) < min_overlap:
        return None
    dot = sum(x * y for x, y in pairs)
    norm_x = sum(x * x for x, _ in pairs)
    norm_y = sum(y * y for _, y in pairs)
    if norm_x <= 0 or norm_y <= 0:
        return None
    value = dot / math.sqrt(norm_x * norm_y)
    return max(-1.0, min(1.0, value))


def similarity(u_row, v_row, metric, min_overlap):
    if metric == "pearson":
        return pearson(u_row, v_row, min_overlap)
    return cosine(u_row, v_row, min_overlap)


def column_mean(rows, r):
    rated = [row[r] for row in rows if row[r] is not None]
    if rated:
        return sum(rated) / len(rated)
    everything = [x for row in rows for x in row if x is not None]
    return sum(everything) / len(everything)


def neighbors(rows, u, r, metric, k, min_overlap):
    candidates = []
    for v, row in enumerate(rows):
        if v == u or row[r] is None:
            continue
        sim = similarity(rows[u], row, metric, min_overlap)
        if sim is not None and sim > 0:
            candidates.append((v, sim))
    candidates.sort(key=lambda pair: (-pair[1], pair[0]))
    return candidates[:k]


def predict(rows, u, r, metric, k, min_overlap):
    chosen = neighbors(rows, u, r, metric, k, min_overlap)
    mean_u = row_mean(rows[u])
    if not chosen or mean_u is None:
        return column_mean(rows, r)
    numerator = sum(sim * (rows[v][r] - row_mean(rows[v])) for v, sim in chosen)
    denominator = sum(sim for _, sim in chosen)
    value = mean_u + numerator / denominator
    return max(0.0, min(10.0, value))


def top_n(rows, route_ids, u, n, metric, k, min_overlap, include_rated=False):
    scored = []
    for r, route_id in enumerate(route_ids):
        if not include_rated and rows[u][r] is not None:
            continue
        scored.append((route_id, predict(rows, u, r, metric, k, min_overlap)))
    scored.sort(key=lambda pair: (-pair[1], pair[0]))
    return scored[:n]
