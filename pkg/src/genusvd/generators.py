"""Deterministic graph families used as fixtures."""

from __future__ import annotations

import itertools
import random

from .treedecomp import Graph, TreeDecomposition


def complete(n: int) -> Graph:
    if n < 1:
        raise ValueError("n must be at least 1")
    return Graph.from_edges(n, itertools.combinations(range(1, n + 1), 2))


def complete_bipartite(a: int, b: int) -> Graph:
    if a < 1 or b < 1:
        raise ValueError("both sides must be nonempty")
    return Graph.from_edges(a + b, ((i, a + j) for i in range(1, a + 1) for j in range(1, b + 1)))


def grid(rows: int, cols: int) -> Graph:
    if rows < 1 or cols < 1:
        raise ValueError("grid dimensions must be at least 1")
    idx = lambda r, c: r * cols + c + 1
    edges = []
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                edges.append((idx(r, c), idx(r, c + 1)))
            if r + 1 < rows:
                edges.append((idx(r, c), idx(r + 1, c)))
    return Graph.from_edges(rows * cols, edges)


def wall(size: int) -> Graph:
    """Elementary wall with ``size`` rows of ``size`` bricks.

    Built from a ``(size+1) x (2*size+2)`` grid by keeping every horizontal
    edge, alternating the vertical ones between rows, and removing the two
    resulting degree-1 corners.
    """
    if size < 1:
        raise ValueError("size must be at least 1")
    rows, cols = size + 1, 2 * size + 2
    edges = set()
    for r in range(rows):
        for c in range(cols - 1):
            edges.add(((r, c), (r, c + 1)))
    for r in range(rows - 1):
        for c in range(cols):
            if c % 2 == r % 2:
                edges.add(((r, c), (r + 1, c)))
    # drop pendant corners so every vertex has degree 2 or 3
    while True:
        deg: dict = {}
        for u, v in edges:
            deg[u] = deg.get(u, 0) + 1
            deg[v] = deg.get(v, 0) + 1
        pendant = {x for x, d in deg.items() if d == 1}
        if not pendant:
            break
        edges = {e for e in edges if e[0] not in pendant and e[1] not in pendant}
    verts = sorted({x for e in edges for x in e})
    idx = {x: i for i, x in enumerate(verts, 1)}
    return Graph.from_edges(len(verts), sorted((idx[u], idx[v]) for u, v in edges))


def b_ell(ell: int) -> Graph:
    """``ell`` copies of K5 minus the edge v_i w_i, plus apexes v (to all v_i) and w (to all w_i).

    Vertex numbering: copy ``i`` (from 0) uses ``5i+1 .. 5i+5`` with
    ``v_i = 5i+1`` and ``w_i = 5i+2``; the apexes are ``v = 5*ell+1`` and
    ``w = 5*ell+2``.
    """
    if ell < 1:
        raise ValueError("ell must be at least 1")
    edges = []
    v, w = 5 * ell + 1, 5 * ell + 2
    for i in range(ell):
        block = range(5 * i + 1, 5 * i + 6)
        vi, wi = 5 * i + 1, 5 * i + 2
        edges.extend(e for e in itertools.combinations(block, 2) if e != (vi, wi))
        edges.append((vi, v))
        edges.append((wi, w))
    return Graph.from_edges(5 * ell + 2, edges)


def b_ell_decomposition(ell: int) -> TreeDecomposition:
    """A width-4 tree decomposition of :func:`b_ell`.

    A central bag ``{v, w}`` carries one path ``{v, v_i, a, b, c}`` --
    ``{v, w, a, b, c}`` -- ``{w, w_i, a, b, c}`` per copy.
    """
    v, w = 5 * ell + 1, 5 * ell + 2
    bags = {1: frozenset({v, w})}
    tree = []
    for i in range(ell):
        vi, wi, a, b, c = range(5 * i + 1, 5 * i + 6)
        base = len(bags) + 1
        bags[base] = frozenset({v, vi, a, b, c})
        bags[base + 1] = frozenset({v, w, a, b, c})
        bags[base + 2] = frozenset({w, wi, a, b, c})
        tree += [(1, base + 1), (base, base + 1), (base + 1, base + 2)]
    return TreeDecomposition(bags, tree, 5 * ell + 2)


def random_connected(n: int, m: int, seed: int) -> Graph:
    """Random recursive tree on a shuffled vertex order, plus uniformly chosen extra edges."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if not n - 1 <= m <= n * (n - 1) // 2:
        raise ValueError(f"no connected simple graph with {n} vertices and {m} edges")
    rng = random.Random(seed)
    order = list(range(1, n + 1))
    rng.shuffle(order)
    edges = set()
    for i in range(1, n):
        u, v = order[i], order[rng.randrange(i)]
        edges.add((min(u, v), max(u, v)))
    rest = [e for e in itertools.combinations(range(1, n + 1), 2) if e not in edges]
    edges.update(rng.sample(rest, m - (n - 1)))
    return Graph.from_edges(n, sorted(edges))
