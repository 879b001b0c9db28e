"""Heuristics for the open-problem formulations: tropical LDA and regression.

Both features evaluate their stated objectives exactly but optimize them
with replaceable heuristics; every serialized output carries an
EXPERIMENTAL flag.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Optional, Sequence

import numpy as np

from .core import (
    TropicalPoint,
    TropicalPolytope,
    canonicalize,
    project_onto_polytope,
    trop_distance,
    tropical_combination,
)
from .location import fermat_weber

EXPERIMENTAL = True


@dataclass
class LdaCandidate:
    polytope: TropicalPolytope
    mu1: TropicalPoint
    mu2: TropicalPoint
    s1: float
    s2: float
    objective: float
    experimental: bool = EXPERIMENTAL


@dataclass
class RegressionModel:
    beta: tuple[float, ...]  # (intercept, slope shifts)
    residual_sum: float
    experimental: bool = EXPERIMENTAL


@dataclass
class RegressionConfig:
    n_starts: int = 4
    max_cycles: int = 60
    tol: float = 1e-10
    span: float = 4.0


@dataclass
class LdaConfig:
    grid: int = 8
    max_iters: int = 120
    perturb_scale: Optional[float] = None  # default 0.1 * data range


def trop_predict(beta: Sequence[float], x: Sequence[float]) -> float:
    """max(beta_0, beta_1 + x_1, ..., beta_e + x_e)."""
    beta = list(beta)
    x = list(x)
    if len(beta) != len(x) + 1:
        raise ValueError("beta must have one more entry than x")
    return max([beta[0]] + [b + v for b, v in zip(beta[1:], x)])


def regression_objective(beta, data) -> float:
    """Sum of squared residuals of the max-plus prediction."""
    if not data:
        raise ValueError("empty data")
    return sum((trop_predict(beta, x) - y) ** 2 for x, y in data)


def _golden_section(fun, lo, hi, iters=60):
    phi = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - phi * (b - a)
    d = a + phi * (b - a)
    fc, fd = fun(c), fun(d)
    for _ in range(iters):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - phi * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + phi * (b - a)
            fd = fun(d)
    mid = (a + b) / 2.0
    return mid, fun(mid)


def fit_regression(
    data, seed: int = 0, config: Optional[RegressionConfig] = None
) -> RegressionModel:
    """Cyclic coordinate descent with golden-section line search per beta."""
    if not data:
        raise ValueError("empty data")
    cfg = config or RegressionConfig()
    e = len(data[0][0])
    ys = [y for _, y in data]
    rng = np.random.default_rng(seed)

    starts = []
    med_y = float(np.median(ys))
    heur = [med_y] + [
        float(np.median([y - x[k] for x, y in data])) for k in range(e)
    ]
    starts.append(np.asarray(heur))
    scale = max(1.0, float(np.ptp(ys)))
    for _ in range(cfg.n_starts - 1):
        starts.append(np.asarray(heur) + rng.uniform(-scale, scale, size=e + 1))

    best_beta, best_val = None, np.inf
    for beta in starts:
        beta = beta.copy()
        val = regression_objective(beta, data)
        for _ in range(cfg.max_cycles):
            prev = val
            for k in range(e + 1):
                def fun(t, k=k):
                    trial = beta.copy()
                    trial[k] = t
                    return regression_objective(trial, data)

                t, ft = _golden_section(fun, beta[k] - cfg.span, beta[k] + cfg.span)
                if ft < val:
                    beta[k], val = t, ft
            if prev - val < cfg.tol:
                break
        if val < best_val:
            best_beta, best_val = beta.copy(), val
    return RegressionModel(tuple(float(b) for b in best_beta), float(best_val))


def _lattice(grid: int, spread: float, s: int):
    """Nested coefficient lattice: doubling grid refines the previous one."""
    axis = [-spread + 2.0 * spread * k / grid for k in range(grid + 1)]
    return product(*([axis] * (s - 1)))


def lda_objective(
    w: TropicalPolytope,
    S1: Sequence[TropicalPoint],
    S2: Sequence[TropicalPoint],
    grid: int = 8,
) -> LdaCandidate:
    """Evaluate the tropical LDA objective on a candidate polytope.

    The constrained Fermat-Weber points mu'_k are approximated over a
    deterministic lattice of tropical combinations of w's vertices.
    """
    if not S1 or not S2:
        raise ValueError("both samples must be nonempty")
    proj1 = [project_onto_polytope(u, w) for u in S1]
    proj2 = [project_onto_polytope(u, w) for u in S2]
    spread = max(
        [trop_distance(a, b) for a in w.vertices for b in w.vertices] + [1.0]
    )

    def inner_min(projs):
        best = None
        for tail in _lattice(grid, spread, w.n_vertices):
            z = tropical_combination((0.0,) + tuple(tail), w)
            val = sum(trop_distance(z, p) for p in projs)
            if best is None or val < best[1]:
                best = (z, val)
        return best

    mu1, s1 = inner_min(proj1)
    mu2, s2 = inner_min(proj2)
    return LdaCandidate(
        polytope=w,
        mu1=mu1,
        mu2=mu2,
        s1=s1,
        s2=s2,
        objective=trop_distance(mu1, mu2) - s1 - s2,
    )


def fit_lda(
    S1: Sequence[TropicalPoint],
    S2: Sequence[TropicalPoint],
    seed: int = 0,
    config: Optional[LdaConfig] = None,
) -> LdaCandidate:
    """Local search over 2-vertex polytopes seeded at the class FW points."""
    if not S1 or not S2:
        raise ValueError("both samples must be nonempty")
    cfg = config or LdaConfig()
    rng = np.random.default_rng(seed)
    v1 = fermat_weber(S1).point.as_array()
    v2 = fermat_weber(S2).point.as_array()
    if canonicalize(v1).close_to(canonicalize(v2)):
        v2 = v2 + 1.0 / np.arange(1, len(v2) + 1)  # degenerate seed split
    data = np.array([p.coords for p in list(S1) + list(S2)])
    scale = cfg.perturb_scale
    if scale is None:
        scale = 0.1 * max(float(np.ptp(data)), 1.0)

    def evaluate(a, b):
        w = TropicalPolytope((canonicalize(a), canonicalize(b)))
        return lda_objective(w, S1, S2, grid=cfg.grid)

    best = evaluate(v1, v2)
    verts = [v1.copy(), v2.copy()]
    for _ in range(cfg.max_iters):
        which = int(rng.integers(0, 2))
        coord = int(rng.integers(0, len(v1)))
        delta = float(rng.choice([-scale, scale]))
        trial = [verts[0].copy(), verts[1].copy()]
        trial[which][coord] += delta
        cand = evaluate(trial[0], trial[1])
        if cand.objective > best.objective + 1e-12:
            best, verts = cand, trial
    return best
