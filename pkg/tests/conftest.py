"""Shared fixtures: reference trees, ultrametric samples, grid oracles."""

from __future__ import annotations

import numpy as np
import pytest

from tropstat import (
    SimConfig,
    TropicalPoint,
    cophenetic,
    parse_newick,
    simulate_equidistant,
)

FIG_LEFT_NEWICK = "(((a:0.6,b:0.6):0.3,c:0.9):0.1,d:1.0);"
FIG_RIGHT_NEWICK = "((a:0.1,b:0.1):0.9,(c:0.5,d:0.5):0.5);"

FIG_LEFT_VECTOR = (1.2, 1.8, 2.0, 1.8, 2.0, 2.0)
FIG_RIGHT_VECTOR = (0.2, 2.0, 2.0, 2.0, 2.0, 1.0)


@pytest.fixture
def fig_left_tree():
    return parse_newick(FIG_LEFT_NEWICK)


@pytest.fixture
def fig_right_tree():
    return parse_newick(FIG_RIGHT_NEWICK)


def ultrametric_points(n_leaves: int, seed: int, count: int) -> list[TropicalPoint]:
    """Cophenetic vectors of random equidistant trees, as tropical points."""
    trees = simulate_equidistant(SimConfig(n_leaves, 1.0, seed, count))
    return [TropicalPoint(cophenetic(t).values) for t in trees]


def grid_minimum(sample, per_point, lo=-6.0, hi=6.0, step=0.01):
    """Brute-force minimum of a per-point-transformed distance sum on a grid.

    Only for 3-dimensional points: the canonical representative is
    (0, y2, y3), so the search space is a plane.  per_point maps the array
    of tropical distances (one per grid cell) before summation, e.g.
    identity for Fermat-Weber and squaring for the Frechet mean.
    """
    axis = np.arange(lo, hi + step / 2, step)
    Y2, Y3 = np.meshgrid(axis, axis, indexing="ij")
    V = np.array([p.coords for p in sample])
    V = V - V[:, :1]
    total = np.zeros_like(Y2)
    for v in V:
        d2 = Y2 - v[1]
        d3 = Y3 - v[2]
        mx = np.maximum(0.0, np.maximum(d2, d3))
        mn = np.minimum(0.0, np.minimum(d2, d3))
        total += per_point(mx - mn)
    return float(total.min())


def lattice_points_3d(rng, n, lo=-2.0, hi=2.0, step=0.01):
    """Random canonical 3-dim points with coordinates on a 0.01 lattice."""
    ticks = rng.integers(round(lo / step), round(hi / step) + 1, size=(n, 2))
    return [TropicalPoint((0.0, step * int(a), step * int(b))) for a, b in ticks]
