"""Exhaustive Euler genus and vertex-deletion oracle over embedding schemes.

A scheme is a rotation of the edge-ends at each vertex plus a sign per edge.
Only flag-core is used, so the oracle shares no code with the DP.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

from .flags import Embedding, count_orbits, euler_genus
from .treedecomp import Graph

DEFAULT_MAX_SCHEMES = 5_000_000

EdgeEnd = tuple[int, int]  # (edge index, 0 for the first endpoint, 1 for the second)


class CeilingExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class EmbeddingScheme:
    """``rotation[v]`` lists the edge-ends at ``v`` in cyclic order; ``signature[i]`` is +1 or -1."""

    rotation: dict[int, tuple[EdgeEnd, ...]]
    signature: tuple[int, ...]

    def validate(self, edges: Sequence[tuple[int, int]]) -> None:
        if len(self.signature) != len(edges):
            raise ValueError("signature length differs from the edge count")
        if any(s not in (1, -1) for s in self.signature):
            raise ValueError("signs must be +1 or -1")
        expected = {}
        for i, (u, v) in enumerate(edges):
            expected.setdefault(u, []).append((i, 0))
            expected.setdefault(v, []).append((i, 1))
        for v, ends in expected.items():
            rot = self.rotation.get(v, ())
            if sorted(rot) != sorted(ends):
                raise ValueError(f"rotation at {v} is not a cyclic order of its edge-ends")
        extra = set(self.rotation) - set(expected)
        if any(self.rotation[v] for v in extra):
            raise ValueError("rotation given at a vertex without edges")


def _end_flags(end: EdgeEnd) -> tuple[int, int]:
    i, side = end
    base = 4 * i + 2 * side
    return base, base + 1


def _sigma_theta(signature: Sequence[int]) -> tuple[list[int], list[int]]:
    m = len(signature)
    sigma = [0] * (4 * m)
    theta = [0] * (4 * m)
    for i, sign in enumerate(signature):
        l0, r0, l1, r1 = 4 * i, 4 * i + 1, 4 * i + 2, 4 * i + 3
        sigma[l0], sigma[r0], sigma[l1], sigma[r1] = r0, l0, r1, l1
        if sign > 0:
            theta[l0], theta[r1], theta[r0], theta[l1] = r1, l0, l1, r0
        else:
            theta[l0], theta[l1], theta[r0], theta[r1] = l1, l0, r1, r0
    return sigma, theta


def _rotation_phi(phi: list[int], rot: Sequence[EdgeEnd]) -> None:
    d = len(rot)
    for j in range(d):
        r = _end_flags(rot[j])[1]
        l = _end_flags(rot[(j + 1) % d])[0]
        phi[r] = l
        phi[l] = r


def scheme_to_embedding(edges: Graph | Sequence[tuple[int, int]], s: EmbeddingScheme) -> Embedding:
    """Flag system of a scheme: four flags per edge, two per edge-end.

    ``edges`` may contain loops (a list of pairs), which a :class:`Graph` cannot.
    """
    edge_list = list(edges.edges) if isinstance(edges, Graph) else [tuple(e) for e in edges]
    s.validate(edge_list)
    sigma, theta = _sigma_theta(s.signature)
    phi = [0] * (4 * len(edge_list))
    for rot in s.rotation.values():
        if rot:
            _rotation_phi(phi, rot)
    e = Embedding(tuple(theta), tuple(sigma), tuple(phi))
    e.validate()
    return e


def _components(edges: Sequence[tuple[int, int]]) -> list[list[int]]:
    """Edge indices grouped by connected component."""
    parent: dict[int, int] = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in edges:
        parent[find(u)] = find(v)
    groups: dict[int, list[int]] = {}
    for i, (u, _) in enumerate(edges):
        groups.setdefault(find(u), []).append(i)
    return list(groups.values())


def _spanning_tree(edges: Sequence[tuple[int, int]]) -> set[int]:
    parent: dict[int, int] = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    tree = set()
    for i, (u, v) in enumerate(edges):
        a, b = find(u), find(v)
        if a != b:
            parent[a] = b
            tree.add(i)
    return tree


def _ends(edges: Sequence[tuple[int, int]]) -> dict[int, list[EdgeEnd]]:
    ends: dict[int, list[EdgeEnd]] = {}
    for i, (u, v) in enumerate(edges):
        ends.setdefault(u, []).append((i, 0))
        ends.setdefault(v, []).append((i, 1))
    return ends


def _cyclic_orders(items: Sequence[EdgeEnd]) -> list[tuple[EdgeEnd, ...]]:
    first, rest = items[0], items[1:]
    return [(first, *p) for p in itertools.permutations(rest)]


def _connected_count(edges, orientable: bool) -> int:
    ends = _ends(edges)
    rotations = math.prod(math.factorial(len(e) - 1) for e in ends.values())
    if orientable:
        return rotations
    return rotations * 2 ** (len(edges) - len(ends) + 1)


def scheme_count(g: Graph, orientable_only: bool = False) -> int:
    """Schemes the oracle may visit: the sum over components of (rotations x free signs)."""
    return sum(
        _connected_count([g.edges[i] for i in comp], orientable_only)
        for comp in _components(g.edges)
    )


def _has_triangle(edges) -> bool:
    adj: dict[int, set[int]] = {}
    for u, v in edges:
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    return any(adj[u] & adj[v] for u, v in edges)


def _lower_bound(edges, n_vertices: int, orientable: bool) -> int:
    m = len(edges)
    if m < n_vertices:  # a tree
        return 0
    # each face of a simple graph with a cycle has length >= girth
    girth = 3 if _has_triangle(edges) else 4
    bound = max(0, m - n_vertices + 2 - (2 * m) // girth)
    if orientable and bound % 2:
        bound += 1
    return bound


def _search(args) -> int:
    """Minimum genus over the schemes with the first rotation fixed to ``head``."""
    edges, verts, head_rot, orientable, target, best = args
    m = len(edges)
    n_v = len(verts)
    ends = _ends(edges)
    choices = [_cyclic_orders(ends[v]) for v in verts[1:]]
    free = [] if orientable else sorted(set(range(m)) - _spanning_tree(edges))
    phi = [0] * (4 * m)
    _rotation_phi(phi, head_rot)
    for signs in itertools.product((1, -1), repeat=len(free)):
        signature = [1] * m
        for i, s in zip(free, signs):
            signature[i] = s
        _, theta = _sigma_theta(signature)
        for rots in itertools.product(*choices):
            for rot in rots:
                _rotation_phi(phi, rot)
            faces = count_orbits(theta, phi)
            genus = m - n_v - faces + 2
            if genus < best:
                best = genus
                if best <= target:
                    return best
    return best


_cache: dict[tuple, int] = {}


def _connected_genus(edges, orientable: bool, max_schemes: int, threads: int) -> int:
    verts = sorted({x for e in edges for x in e})
    relabel = {v: i for i, v in enumerate(verts)}
    local = sorted(tuple(sorted((relabel[u], relabel[v]))) for u, v in edges)
    count = _connected_count(local, orientable)
    if count > max_schemes:
        raise CeilingExceeded(f"{count} schemes exceed the ceiling {max_schemes}")
    key = (tuple(local), orientable)
    if key in _cache:
        return _cache[key]
    n_v = len(verts)
    target = _lower_bound(local, n_v, orientable)
    ends = _ends(local)
    order = sorted(range(n_v), key=lambda v: -len(ends[v]))
    heads = _cyclic_orders(ends[order[0]])
    best = math.inf
    if threads > 1 and len(heads) > 1:
        jobs = [(local, order, h, orientable, target, math.inf) for h in heads]
        with ProcessPoolExecutor(threads) as pool:
            best = min(pool.map(_search, jobs))
    else:
        for h in heads:
            best = _search((local, order, h, orientable, target, best))
            if best <= target:
                break
    _cache[key] = int(best)
    return int(best)


def exact_genus(
    g: Graph,
    orientable_only: bool = False,
    max_schemes: int = DEFAULT_MAX_SCHEMES,
    threads: int = 1,
) -> int:
    """Minimum Euler genus of ``g`` (over orientable surfaces only if requested)."""
    total = 0
    for comp in _components(g.edges):
        edges = [g.edges[i] for i in comp]
        if len(edges) >= len({x for e in edges for x in e}):
            total += _connected_genus(edges, orientable_only, max_schemes, threads)
    return total


def brute_force_gvd(
    g: Graph,
    genus_bound: int,
    budget: int,
    orientable_only: bool = False,
    max_schemes: int = DEFAULT_MAX_SCHEMES,
) -> int | None:
    """Smallest ``|Y| <= budget`` with ``exact_genus(g - Y) <= genus_bound``, else None."""
    for size in range(min(budget, g.n) + 1):
        for ys in itertools.combinations(g.vertices, size):
            if exact_genus(g.remove_vertices(ys), orientable_only, max_schemes) <= genus_bound:
                return size
    return None


def all_schemes(edges: Sequence[tuple[int, int]], orientable_only: bool = False,
                full_signatures: bool = False) -> Iterable[EmbeddingScheme]:
    """Every scheme of an edge list; signs fixed on a spanning forest unless ``full_signatures``."""
    m = len(edges)
    ends = _ends(edges)
    verts = sorted(ends)
    choices = [_cyclic_orders(ends[v]) for v in verts]
    if orientable_only:
        free = []
    elif full_signatures:
        free = list(range(m))
    else:
        free = sorted(set(range(m)) - _spanning_tree(edges))
    for signs in itertools.product((1, -1), repeat=len(free)):
        signature = [1] * m
        for i, s in zip(free, signs):
            signature[i] = s
        for rots in itertools.product(*choices):
            yield EmbeddingScheme(dict(zip(verts, rots)), tuple(signature))


def scheme_genus(edges, s: EmbeddingScheme) -> int:
    return euler_genus(scheme_to_embedding(edges, s))
