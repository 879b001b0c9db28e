"""Newick parsing/serialization, cophenetic maps, and ultrametric checks.

Dissimilarity vectors use lexicographic pair order (1,2),(1,3),...,(N-1,N)
over leaf names sorted lexicographically.  Leaves in the pair-index helpers
are 1-based (matching the usual [N] convention); vector positions are
0-based.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional

import numpy as np

STRUCT_TOL = 1e-9


class NewickError(ValueError):
    """Malformed Newick input; carries the character offset of the defect."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (offset {offset})")
        self.offset = offset


@dataclass
class TreeNode:
    name: Optional[str] = None
    length: float = 0.0
    children: list["TreeNode"] = field(default_factory=list)

    @property
    def is_leaf(self) -> bool:
        return not self.children


@dataclass
class PhyloTree:
    """Rooted, leaf-labeled tree with nonnegative branch lengths."""

    root: TreeNode

    def __post_init__(self):
        names = self.leaf_names()
        if len(names) != len(set(names)):
            raise ValueError("duplicate leaf labels")

    def leaf_names(self) -> list[str]:
        out: list[str] = []

        def walk(node):
            if node.is_leaf:
                out.append(node.name or "")
            for ch in node.children:
                walk(ch)

        walk(self.root)
        return sorted(out)

    @property
    def n_leaves(self) -> int:
        return len(self.leaf_names())


def parse_newick(text: str) -> PhyloTree:
    """Parse one Newick tree ("name:length" style, semicolon-terminated)."""
    s = text.strip()
    pos = 0

    def error(msg, at):
        raise NewickError(msg, at)

    def parse_clade(i: int) -> tuple[TreeNode, int]:
        node = TreeNode()
        if i < len(s) and s[i] == "(":
            open_at = i
            i += 1
            while True:
                child, i = parse_clade(i)
                node.children.append(child)
                if i >= len(s):
                    error("unbalanced parentheses", open_at)
                if s[i] == ",":
                    i += 1
                    continue
                if s[i] == ")":
                    i += 1
                    break
                error(f"unexpected character {s[i]!r}", i)
        # optional label
        j = i
        while j < len(s) and s[j] not in ",():;":
            j += 1
        label = s[i:j].strip()
        if label:
            node.name = label
        i = j
        # optional branch length
        if i < len(s) and s[i] == ":":
            i += 1
            j = i
            while j < len(s) and s[j] not in ",();:":
                j += 1
            try:
                length = float(s[i:j])
            except ValueError:
                error(f"bad branch length {s[i:j]!r}", i)
            if not math.isfinite(length):
                error("branch length must be finite", i)
            if length < 0:
                error("negative branch length", i)
            node.length = length
            i = j
        if node.is_leaf and not node.name:
            error("unnamed leaf", i)
        return node, i

    if not s:
        raise NewickError("empty input", 0)
    root, pos = parse_clade(pos)
    if pos >= len(s) or s[pos] != ";":
        raise NewickError("missing terminating semicolon", pos)
    if s[pos + 1 :].strip():
        raise NewickError("trailing garbage after semicolon", pos + 1)
    try:
        return PhyloTree(root)
    except ValueError as exc:
        raise NewickError(str(exc), 0) from exc


def serialize_newick(t: PhyloTree) -> str:
    """Canonical Newick string: children ordered by smallest leaf label."""

    def min_leaf(node) -> str:
        if node.is_leaf:
            return node.name or ""
        return min(min_leaf(ch) for ch in node.children)

    def fmt(node, with_length: bool) -> str:
        if node.is_leaf:
            body = node.name
        else:
            kids = sorted(node.children, key=min_leaf)
            body = "(" + ",".join(fmt(ch, True) for ch in kids) + ")"
            if node.name:
                body += node.name
        if with_length:
            body += ":" + _fmt_len(node.length)
        return body

    return fmt(t.root, t.root.length != 0.0) + ";"


def _fmt_len(x: float) -> str:
    return f"{x:.12g}"


def pair_index(i: int, j: int, n: int) -> int:
    """Lexicographic position of pair (i, j), 1 <= i < j <= n."""
    if not (1 <= i < j <= n):
        raise ValueError(f"bad pair ({i}, {j}) for n={n}")
    return (i - 1) * (2 * n - i) // 2 + (j - i - 1)


def index_pair(idx: int, n: int) -> tuple[int, int]:
    """Inverse of pair_index."""
    if not (0 <= idx < n * (n - 1) // 2):
        raise ValueError(f"index {idx} out of range for n={n}")
    i = 1
    offset = idx
    while offset >= n - i:
        offset -= n - i
        i += 1
    return i, i + offset + 1


@dataclass
class DissimilarityMap:
    """Pairwise-distance vector over n_leaves in lexicographic pair order."""

    n_leaves: int
    values: tuple[float, ...]
    leaf_names: tuple[str, ...]

    def __post_init__(self):
        e = self.n_leaves * (self.n_leaves - 1) // 2
        if len(self.values) != e:
            raise ValueError(f"expected {e} entries for {self.n_leaves} leaves")
        if len(self.leaf_names) != self.n_leaves:
            raise ValueError("one name per leaf required")
        if any(v < 0 for v in self.values):
            raise ValueError("dissimilarities must be nonnegative")
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))

    def get(self, i: int, j: int) -> float:
        if i == j:
            return 0.0
        if i > j:
            i, j = j, i
        return self.values[pair_index(i, j, self.n_leaves)]

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)


class UltrametricPoint(DissimilarityMap):
    """A dissimilarity map satisfying the three-point condition."""

    def __post_init__(self):
        super().__post_init__()
        if not three_point_check(self):
            raise ValueError("values fail the three-point condition")


def cophenetic(t: PhyloTree) -> DissimilarityMap:
    """Path-length dissimilarity map of a tree, leaves sorted by name."""
    names = t.leaf_names()
    if len(names) < 2:
        raise ValueError("need at least 2 leaves")
    order = {name: k for k, name in enumerate(names)}
    n = len(names)
    dist = np.zeros((n, n))

    def walk(node) -> dict[int, float]:
        if node.is_leaf:
            return {order[node.name]: node.length}
        merged: dict[int, float] = {}
        for ch in node.children:
            sub = walk(ch)
            for i, di in merged.items():
                for j, dj in sub.items():
                    dist[i, j] = dist[j, i] = di + dj
            merged.update(sub)
        return {i: d + node.length for i, d in merged.items()}

    walk(t.root)
    values = tuple(
        dist[i, j] for i, j in combinations(range(n), 2)
    )
    return DissimilarityMap(n, values, tuple(names))


def is_equidistant(t: PhyloTree, tol: float = STRUCT_TOL) -> tuple[bool, float]:
    """Whether all root-to-leaf path lengths agree within tol, plus the height."""
    depths: list[float] = []

    def walk(node, acc):
        acc += node.length
        if node.is_leaf:
            depths.append(acc)
        for ch in node.children:
            walk(ch, acc)

    walk(t.root, 0.0)
    height = max(depths)
    return (height - min(depths)) <= tol, height


def three_point_check(w, tol: float = STRUCT_TOL) -> bool:
    """Max of every triple {w(i,j), w(i,k), w(j,k)} attained at least twice."""
    if isinstance(w, DissimilarityMap):
        n, vals = w.n_leaves, w.values
    else:
        vals = tuple(w)
        n = _leaves_for(len(vals))
    if n < 3:
        raise ValueError("three-point condition needs at least 3 leaves")

    def get(i, j):
        return vals[pair_index(i, j, n)]

    for i, j, k in combinations(range(1, n + 1), 3):
        a, b, c = get(i, j), get(i, k), get(j, k)
        top = max(a, b, c)
        if sum(1 for v in (a, b, c) if v >= top - tol) < 2:
            return False
    return True


def _leaves_for(e: int) -> int:
    n = round((1 + math.isqrt(1 + 8 * e)) / 2)
    if n * (n - 1) // 2 != e:
        raise ValueError(f"vector length {e} is not a binomial C(N,2)")
    return n


def ultrametric_to_tree(u: DissimilarityMap, tol: float = STRUCT_TOL) -> PhyloTree:
    """The unique equidistant tree realizing an ultrametric.

    Single-linkage agglomeration placing each merge at height u(i,j)/2;
    exact for ultrametrics.  Ties break toward the smallest leaf label.
    """
    if not three_point_check(u, tol=tol):
        raise ValueError("input fails the three-point condition")
    names = list(u.leaf_names)
    # clusters: (min leaf name, node, height, member leaf 1-based ids)
    clusters = [
        (names[k], TreeNode(name=names[k]), 0.0, [k + 1]) for k in range(u.n_leaves)
    ]
    while len(clusters) > 1:
        best = None
        for a in range(len(clusters)):
            for b in range(a + 1, len(clusters)):
                d = min(
                    u.get(i, j) for i in clusters[a][3] for j in clusters[b][3]
                )
                key = (d, clusters[a][0], clusters[b][0])
                if best is None or key < best[0]:
                    best = (key, a, b)
        (d, _, _), a, b = best
        la, na, ha, ma = clusters[a]
        lb, nb, hb, mb = clusters[b]
        h = d / 2.0
        na.length = h - ha
        nb.length = h - hb
        parent = TreeNode(children=[na, nb])
        merged = (min(la, lb), parent, h, ma + mb)
        clusters = [c for k, c in enumerate(clusters) if k not in (a, b)]
        clusters.append(merged)
        clusters.sort(key=lambda c: c[0])
    return PhyloTree(clusters[0][1])


def topology_id(t: PhyloTree) -> str:
    """Canonical label-set nesting string, independent of branch lengths."""

    def walk(node) -> str:
        if node.is_leaf:
            return node.name or ""
        return "(" + ",".join(sorted(walk(ch) for ch in node.children)) + ")"

    return walk(t.root)
