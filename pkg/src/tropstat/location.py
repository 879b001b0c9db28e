"""Tropical Fermat-Weber points and Frechet means.

The Fermat-Weber point is one optimal vertex of the location LP; the
Frechet mean is computed by direct convex minimization of the squared
tropical distance sum with deterministic multi-start.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .core import TropicalPoint, canonicalize, trop_distance
from .solver import (
    MIN,
    OPTIMAL,
    DescentConfig,
    LinearProgram,
    Solution,
    minimize_convex,
    solve_lp,
)
from .treeio import _leaves_for, pair_index, three_point_check

FW_LP = "FW_LP"
FRECHET_DESCENT = "FRECHET_DESCENT"


@dataclass
class LocationResult:
    point: TropicalPoint  # canonical representative
    objective: float
    method: str
    diagnostics: dict = field(default_factory=dict)


def _sample_arrays(sample: Sequence[TropicalPoint]) -> np.ndarray:
    if not sample:
        raise ValueError("empty sample")
    dims = {p.dim for p in sample}
    if len(dims) != 1:
        raise ValueError("sample points must share one dimension")
    return np.array([p.coords for p in sample], dtype=float)


def fw_objective(z: TropicalPoint, sample: Sequence[TropicalPoint]) -> float:
    """Sum of tropical distances from z to the sample."""
    V = _sample_arrays(sample)
    diff = z.as_array()[None, :] - V
    return float((diff.max(axis=1) - diff.min(axis=1)).sum())


def frechet_objective(z: TropicalPoint, sample: Sequence[TropicalPoint]) -> float:
    """Sum of squared tropical distances from z to the sample."""
    V = _sample_arrays(sample)
    diff = z.as_array()[None, :] - V
    d = diff.max(axis=1) - diff.min(axis=1)
    return float((d * d).sum())


def build_fw_lp(sample: Sequence[TropicalPoint]) -> LinearProgram:
    """The Fermat-Weber LP: minimize sum d_i over y_j - y_k - d_i <= v_j - v_k.

    One row per sample point and ordered coordinate pair (j, k), j != k;
    the y variables are free, the distance bounds d_i are nonnegative.
    """
    V = _sample_arrays(sample)
    s, e = V.shape
    nvars = e + s
    objective = [0.0] * e + [1.0] * s
    constraints = []
    for i in range(s):
        for j in range(e):
            for k in range(e):
                if j == k:
                    continue
                row = [0.0] * nvars
                row[j] += 1.0
                row[k] -= 1.0
                row[e + i] = -1.0
                constraints.append((row, "<=", float(V[i, j] - V[i, k])))
    bounds = [(None, None)] * e + [(0.0, None)] * s
    return LinearProgram(MIN, objective, constraints, bounds)


def fermat_weber(sample: Sequence[TropicalPoint]) -> LocationResult:
    """One optimal Fermat-Weber vertex via the deterministic simplex.

    The optimal set is a polytope; for an all-ultrametric sample it contains
    ultrametric points, so when the plain vertex falls outside the
    three-point locus an equally optimal vertex inside it is selected by
    re-solving over the cone of a candidate tree topology.
    """
    V = _sample_arrays(sample)
    s, e = V.shape
    sol = solve_lp(build_fw_lp(sample))
    if sol.status != OPTIMAL:
        raise RuntimeError(f"Fermat-Weber LP returned {sol.status}; inputs are finite "
                           "so this signals a solver defect")
    raw = tuple(float(v) for v in sol.x[:e])
    opt = float(sol.objective_value)
    diagnostics = {"raw_point": raw, "lp_status": sol.status,
                   "n_constraints": s * e * (e - 1), "closure_refined": False}
    refined = _refine_to_ultrametric(V, raw, opt)
    if refined is not None:
        raw = refined
        diagnostics["raw_point"] = raw
        diagnostics["closure_refined"] = True
    return LocationResult(
        point=canonicalize(raw),
        objective=opt,
        method=FW_LP,
        diagnostics=diagnostics,
    )


def _refine_to_ultrametric(V: np.ndarray, raw, opt: float):
    """Equally optimal ultrametric vertex for an all-ultrametric sample.

    Candidate topologies come from single linkage on the plain optimum
    (then on each sample point); the LP is re-solved with coordinates tied
    to node heights of the candidate tree, which confines it to that
    topology's cone.  Returns None when refinement does not apply.
    """
    s, e = V.shape
    try:
        n = _leaves_for(e)
    except ValueError:
        return None
    if not all(three_point_check(row, tol=1e-9) for row in V):
        return None
    if three_point_check(raw, tol=1e-9):
        return None
    for cand in [np.asarray(raw)] + [V[i] for i in range(s)]:
        merge_of_pair, edges, n_nodes = _single_linkage_merges(cand, n)
        lp, node_of = _cone_fw_lp(V, merge_of_pair, edges, n_nodes, n)
        sol = solve_lp(lp)
        if sol.status == OPTIMAL and sol.objective_value <= opt + 1e-7:
            return tuple(2.0 * float(sol.x[m]) for m in node_of)
    return None


def _single_linkage_merges(vec, n: int):
    """Single-linkage merge structure of a symmetric pair vector.

    Returns (merge node id per leaf pair, child->parent node edges, node
    count).  Ties break toward the smallest leaf labels.
    """

    def get(i, j):
        if i > j:
            i, j = j, i
        return vec[pair_index(i, j, n)]

    merge_of_pair = {}
    edges = []
    clusters = [((i,), None) for i in range(1, n + 1)]  # (members, node id)
    next_id = 0
    while len(clusters) > 1:
        best = None
        for a in range(len(clusters)):
            for b in range(a + 1, len(clusters)):
                d = min(
                    get(i, j)
                    for i in clusters[a][0]
                    for j in clusters[b][0]
                )
                key = (d, clusters[a][0][0], clusters[b][0][0])
                if best is None or key < best[0]:
                    best = (key, a, b)
        _, a, b = best
        (ma, ia), (mb, ib) = clusters[a], clusters[b]
        node = next_id
        next_id += 1
        for i in ma:
            for j in mb:
                merge_of_pair[(min(i, j), max(i, j))] = node
        for child in (ia, ib):
            if child is not None:
                edges.append((child, node))
        merged = (tuple(sorted(ma + mb)), node)
        clusters = [c for k, c in enumerate(clusters) if k not in (a, b)]
        clusters.append(merged)
        clusters.sort(key=lambda c: c[0][0])
    return merge_of_pair, edges, next_id


def _cone_fw_lp(V, merge_of_pair, edges, n_nodes, n):
    """The FW LP with y_p = 2 * height(lca of pair p) for a fixed topology."""
    from itertools import combinations

    s, e = V.shape
    nvars = n_nodes + s
    objective = [0.0] * n_nodes + [1.0] * s
    pairs = list(combinations(range(1, n + 1), 2))
    node_of = [merge_of_pair[p] for p in pairs]
    cons = []
    for i in range(s):
        for j in range(e):
            for k in range(e):
                if j == k:
                    continue
                row = [0.0] * nvars
                row[node_of[j]] += 2.0
                row[node_of[k]] -= 2.0
                row[n_nodes + i] = -1.0
                cons.append((row, "<=", float(V[i, j] - V[i, k])))
    for child, parent in edges:
        row = [0.0] * nvars
        row[child] = 1.0
        row[parent] = -1.0
        cons.append((row, "<=", 0.0))
    bounds = [(None, None)] * n_nodes + [(0.0, None)] * s
    return LinearProgram(MIN, objective, cons, bounds), node_of


def frechet_mean(
    sample: Sequence[TropicalPoint], config: Optional[DescentConfig] = None
) -> LocationResult:
    """Multi-start subgradient descent on the squared-distance sum.

    Starts at every sample point plus their coordinatewise median.
    """
    V = _sample_arrays(sample)

    def f(z: np.ndarray):
        diff = z[None, :] - V
        # lexicographically smallest extremal indices on ties (np.arg* default)
        imax = diff.argmax(axis=1)
        imin = diff.argmin(axis=1)
        d = diff[np.arange(len(V)), imax] - diff[np.arange(len(V)), imin]
        g = np.zeros_like(z)
        np.add.at(g, imax, 2.0 * d)
        np.add.at(g, imin, -2.0 * d)
        return float((d * d).sum()), g

    starts = [row for row in V] + [np.median(V, axis=0)]
    z, val = minimize_convex(f, V.shape[1], starts, config)
    raw = tuple(float(v) for v in z)
    return LocationResult(
        point=canonicalize(raw),
        objective=float(val),
        method=FRECHET_DESCENT,
        diagnostics={"raw_point": raw, "n_starts": len(starts)},
    )


def check_ultrametric_closure(
    result: LocationResult, n_leaves: int, tol: float = 1e-6
) -> bool:
    """Three-point condition on the solver's raw representative.

    The check is also recorded for the max-shift representative (largest
    coordinate pinned to 0) in result.diagnostics; the three-point
    condition compares coordinates pairwise, so the two agree.
    """
    e = n_leaves * (n_leaves - 1) // 2
    if result.point.dim != e:
        raise ValueError(f"dimension {result.point.dim} is not C({n_leaves},2)")
    raw = result.diagnostics.get("raw_point", result.point.coords)
    ok_raw = three_point_check(raw, tol=tol)
    mx = max(raw)
    ok_max_shift = three_point_check([v - mx for v in raw], tol=tol)
    result.diagnostics["ultrametric_closure"] = {
        "raw": ok_raw,
        "max_shift": ok_max_shift,
    }
    return ok_raw
