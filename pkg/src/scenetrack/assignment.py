"""Gated minimum-cost bipartite matching."""
from __future__ import annotations

from typing import NamedTuple

import numpy as np
from scipy.optimize import linear_sum_assignment


class MatchResult(NamedTuple):
    matches: list[tuple[int, int, float]]
    unmatched_rows: list[int]
    unmatched_cols: list[int]

    @property
    def total_cost(self) -> float:
        return float(sum(c for _, _, c in self.matches))


_TIE_RTOL = 1e-9


def _check(costs) -> np.ndarray:
    costs = np.asarray(costs, dtype=float)
    if costs.ndim != 2:
        raise ValueError(f"cost matrix must be 2-D, got shape {costs.shape}")
    if not np.all(np.isfinite(costs)):
        raise ValueError("cost matrix contains non-finite entries")
    return costs


def _lexicographic_pairs(costs: np.ndarray, rows: np.ndarray, cols: np.ndarray, tol: float) -> list[tuple[int, int]]:
    # Fix rows in order, each to the smallest column that still admits an
    # optimal completion (or leave it out if none does). A pair can only be
    # part of an optimal matching if its reduced cost is zero, so only those
    # columns below the row's current one need a trial solve.
    n_rows, n_cols = costs.shape
    best = costs[rows, cols].sum()
    reduced = _reduced_costs(costs, rows, cols)
    tight = reduced <= tol if reduced is not None else np.ones(costs.shape, dtype=bool)
    big = 2.0 * (np.abs(costs).sum() + 1.0)
    work = costs.copy()
    current = dict(zip(rows.tolist(), cols.tolist()))
    pairs: list[tuple[int, int]] = []
    used: set[int] = set()
    for i in range(n_rows):
        if len(pairs) == min(n_rows, n_cols):
            break
        mine = current.get(i)
        limit = n_cols if mine is None else mine
        for j in np.flatnonzero(tight[i, :limit]).tolist():
            if j in used:
                continue
            trial = work.copy()
            trial[i, :] = big
            trial[:, j] = big
            trial[i, j] = work[i, j]
            r, c = linear_sum_assignment(trial)
            if abs(trial[r, c].sum() - best) <= tol:
                work, mine = trial, j
                current = dict(zip(r.tolist(), c.tolist()))
                break
        else:
            if mine is not None:
                # The current matching already gives row i its smallest column.
                work = work.copy()
                work[i, :] = big
                work[:, mine] = big
                work[i, mine] = costs[i, mine]
            else:
                # Row i is left out of every optimal matching consistent so far.
                work = work.copy()
                work[i, :] = big
                continue
        pairs.append((i, mine))
        used.add(mine)
    return pairs


def _orient(costs: np.ndarray, rows: np.ndarray, cols: np.ndarray):
    # Transpose if needed so that every row is matched; rows come back sorted.
    transposed = costs.shape[0] > costs.shape[1]
    if transposed:
        costs, rows, cols = costs.T, cols, rows
        order = np.argsort(rows)
        rows, cols = rows[order], cols[order]
    return costs, cols, costs[rows, cols], transposed


def _exchange_graph(costs: np.ndarray, cols: np.ndarray, own: np.ndarray) -> np.ndarray:
    # The graph described in ``_has_alternative_optimum``, for an oriented
    # matrix whose row ``i`` is matched to ``cols[i]`` at cost ``own[i]``.
    n, m = costs.shape
    graph = np.full((n + 1, n + 1), np.inf)
    graph[:n, :n] = costs[:, cols] - own[:, None]
    np.fill_diagonal(graph, np.inf)
    if m > n:
        free = np.ones(m, dtype=bool)
        free[cols] = False
        graph[:n, n] = costs[:, free].min(axis=1) - own
        graph[n, :n] = 0.0
    return graph


def _potentials(graph: np.ndarray) -> np.ndarray | None:
    # Bellman-Ford from a virtual source joined to every node at weight 0;
    # None if it does not settle (a rounding-level negative cycle).
    dist = np.zeros(len(graph))
    for _ in range(len(graph) + 1):
        relaxed = np.minimum(dist, (dist[:, None] + graph).min(axis=0))
        if np.array_equal(relaxed, dist):
            return dist
        dist = relaxed
    return None


def _reduced_costs(costs: np.ndarray, rows: np.ndarray, cols: np.ndarray) -> np.ndarray | None:
    """``c[i, j] - u[i] - v[j]`` for dual values certified by the matching.

    Nonnegative up to rounding, and zero on every pair of every optimal
    matching. Unused columns share the sink's potential.
    """
    oriented, ocols, own, transposed = _orient(costs, rows, cols)
    dist = _potentials(_exchange_graph(oriented, ocols, own))
    if dist is None:
        return None
    n, m = oriented.shape
    v = np.full(m, dist[n])
    v[ocols] = dist[:n]
    u = own - dist[:n]
    reduced = oriented - u[:, None] - v[None, :]
    return reduced.T if transposed else reduced


def _has_alternative_optimum(costs: np.ndarray, rows: np.ndarray, cols: np.ndarray, tol: float) -> bool:
    """Whether another maximum-cardinality matching has the same total cost.

    Exchange graph over the matched rows: edge ``i -> k`` means row ``i`` takes
    row ``k``'s column, weighted by the change in cost. A sink node stands for
    the unused columns (a chain may end by taking one, freeing the column of
    the row it started from). The given matching is optimal, so no cycle is
    negative; a second optimum exists iff some cycle has zero weight, i.e. the
    tight edges under shortest-path potentials contain a cycle.
    """
    oriented, ocols, own, _ = _orient(costs, rows, cols)
    n = len(own)
    # Every graph edge is an entry of ``slack``. A simple cycle uses one
    # out-edge per node, so an edge heavier than the sum of every node's most
    # negative out-edge cannot lie on a zero cycle. Usually only the matched
    # entries (slack 0) pass, and the matching is unique.
    slack = oriented - own[:, None]
    bound = -slack.min(axis=1).sum() + tol
    if np.count_nonzero(slack <= bound) == n:
        return False
    graph = _exchange_graph(oriented, ocols, own)
    graph = _peel(graph, graph <= bound)
    if graph.size == 0:
        return False
    dist = _potentials(graph)
    if dist is None:
        return True                      # rounding-level negative cycle: treat as a tie
    tight = dist[:, None] + graph - dist[None, :] <= tol
    return _peel(graph, tight).size > 0


def _peel(graph: np.ndarray, edges: np.ndarray) -> np.ndarray:
    # Drop nodes with no in- or out-edge in ``edges`` until none are left to
    # drop; every surviving node lies on a path that closes into a cycle.
    # Returns ``graph`` restricted to the survivors, other edges set to inf.
    while edges.size:
        keep = edges.any(axis=0) & edges.any(axis=1)
        if keep.all():
            return np.where(edges, graph, np.inf)
        graph, edges = graph[keep][:, keep], edges[keep][:, keep]
    return graph[:0, :0]


def solve(costs, max_cost: float, *, lexicographic: bool = True) -> MatchResult:
    """Minimum-cost assignment, then drop pairs costing more than ``max_cost``.

    The full matrix is solved first; gating happens afterwards, so a pair
    rejected by the gate is not replaced by a costlier alternative.
    Rectangular matrices leave the surplus rows or columns unmatched.

    Ties between equally cheap matchings (within a relative ``1e-9``) are
    broken toward the smallest ``(row, col)`` sequence, so the result does not
    depend on solver internals. The tie check is cheap; the tie-break itself
    re-solves once per candidate pair and only runs when a tie exists.
    ``lexicographic=False`` skips both and returns the solver's matching.
    """
    costs = _check(costs)
    if not np.isfinite(max_cost):
        raise ValueError("max_cost must be finite")
    n_rows, n_cols = costs.shape
    if n_rows == 0 or n_cols == 0:
        return MatchResult([], list(range(n_rows)), list(range(n_cols)))

    rows, cols = linear_sum_assignment(costs)
    tol = _TIE_RTOL * max(1.0, abs(float(costs[rows, cols].sum())))
    if lexicographic and _has_alternative_optimum(costs, rows, cols, tol):
        pairs = _lexicographic_pairs(costs, rows, cols, tol)
    else:
        pairs = np.column_stack([rows, cols])

    pairs = np.array(pairs, dtype=np.intp).reshape(-1, 2)
    pair_costs = costs[pairs[:, 0], pairs[:, 1]]
    kept = pairs[pair_costs <= max_cost]
    matches = list(zip(kept[:, 0].tolist(), kept[:, 1].tolist(), pair_costs[pair_costs <= max_cost].tolist()))
    matches.sort()
    row_taken = np.zeros(n_rows, dtype=bool)
    col_taken = np.zeros(n_cols, dtype=bool)
    row_taken[kept[:, 0]] = True
    col_taken[kept[:, 1]] = True
    return MatchResult(
        matches,
        np.flatnonzero(~row_taken).tolist(),
        np.flatnonzero(~col_taken).tolist(),
    )
