import random

import networkx as nx
import pytest

from genusvd import oracle
from genusvd.canon import flag_system_key
from genusvd.flags import euler_genus, projective_loop
from genusvd.generators import complete, complete_bipartite, grid, random_connected
from genusvd.oracle import (
    CeilingExceeded,
    EmbeddingScheme,
    all_schemes,
    brute_force_gvd,
    exact_genus,
    scheme_count,
    scheme_genus,
    scheme_to_embedding,
)
from genusvd.treedecomp import Graph


def planar_scheme(g: Graph) -> EmbeddingScheme:
    ok, emb = nx.check_planarity(g.to_networkx())
    assert ok
    end_of = {}
    for i, (u, v) in enumerate(g.edges):
        end_of[(u, v)] = (i, 0)
        end_of[(v, u)] = (i, 1)
    rotation = {v: tuple(end_of[(v, w)] for w in emb.neighbors_cw_order(v)) for v in g.vertices if g.degree(v)}
    return EmbeddingScheme(rotation, (1,) * g.m)


def test_triangle_is_planar_for_every_rotation():
    g = complete(3)
    for s in all_schemes(g.edges, orientable_only=True):
        assert scheme_genus(g, s) == 0


def test_one_sided_loop():
    s = EmbeddingScheme({1: ((0, 0), (0, 1))}, (-1,))
    e = scheme_to_embedding([(1, 1)], s)
    assert euler_genus(e) == 1
    p = projective_loop()
    assert flag_system_key(e.theta, e.sigma, e.phi) == flag_system_key(p.theta, p.sigma, p.phi)
    s = EmbeddingScheme({1: ((0, 0), (0, 1))}, (1,))
    assert euler_genus(scheme_to_embedding([(1, 1)], s)) == 0


def test_planar_rotation_of_k4():
    g = complete(4)
    e = scheme_to_embedding(g, planar_scheme(g))
    assert euler_genus(e) == 0


def test_invalid_schemes_rejected():
    g = complete(3)
    with pytest.raises(ValueError):
        scheme_to_embedding(g, EmbeddingScheme({}, (1, 1, 1)))
    good = planar_scheme(g)
    with pytest.raises(ValueError):
        scheme_to_embedding(g, EmbeddingScheme(good.rotation, (1, 1)))
    with pytest.raises(ValueError):
        scheme_to_embedding(g, EmbeddingScheme(good.rotation, (1, 2, 1)))


@pytest.mark.parametrize(
    "graph, orientable, genus",
    [
        (complete(5), False, 1),
        (complete_bipartite(3, 3), False, 1),
        (complete(5), True, 2),
        (complete(4), False, 0),
        (grid(3, 3), False, 0),
    ],
)
def test_named_genera(graph, orientable, genus):
    assert exact_genus(graph, orientable) == genus


def test_genus_adds_over_components():
    k5 = complete(5)
    shifted = [(u + 5, v + 5) for u, v in complete_bipartite(3, 3).edges]
    g = Graph.from_edges(11, list(k5.edges) + shifted)
    assert exact_genus(g) == 2


def test_brute_force_examples():
    assert brute_force_gvd(complete(5), 0, 1) == 1
    assert brute_force_gvd(complete_bipartite(3, 3), 0, 1) == 1
    assert brute_force_gvd(grid(2, 3), 0, 0) == 0
    assert brute_force_gvd(complete(5), 0, 0) is None


def test_ceiling():
    oracle._cache.clear()
    assert scheme_count(complete(5)) == 7776 * 64
    assert scheme_count(complete(5), True) == 7776
    with pytest.raises(CeilingExceeded):
        exact_genus(complete(5), max_schemes=1000)


def test_threads_do_not_change_the_result():
    oracle._cache.clear()
    assert exact_genus(complete(5), threads=2) == 1
    oracle._cache.clear()
    assert exact_genus(complete_bipartite(3, 3), True, threads=2) == 2


def _genera(edges, full):
    return {scheme_genus(edges, s) for s in all_schemes(edges, full_signatures=full)}


def test_spanning_forest_signs_suffice():
    rng = random.Random(4)
    checked = 0
    for seed in range(200):
        n = rng.randint(3, 5)
        m = rng.randint(n - 1, min(7, n * (n - 1) // 2))
        g = random_connected(n, m, seed)
        if scheme_count(g) * 2 ** (n - 1) > 60000:
            continue
        assert _genera(g.edges, True) == _genera(g.edges, False)
        checked += 1
    assert checked >= 20


def test_monotone_under_edge_deletion():
    rng = random.Random(6)
    for seed in range(40):
        n = rng.randint(3, 6)
        m = rng.randint(n - 1, min(9, n * (n - 1) // 2))
        g = random_connected(n, m, seed)
        base = exact_genus(g)
        for i in range(g.m):
            smaller = Graph(g.n, g.edges[:i] + g.edges[i + 1 :])
            assert 0 <= exact_genus(smaller) <= base


def test_search_minimum_matches_full_scan():
    for g in (complete(4), complete_bipartite(2, 3), random_connected(5, 7, 1)):
        full = min(scheme_genus(g, s) for s in all_schemes(g.edges))
        oracle._cache.clear()
        assert exact_genus(g) == full


def test_agrees_with_planarity_test():
    rng = random.Random(9)
    for seed in range(60):
        n = rng.randint(4, 7)
        m = rng.randint(n - 1, min(12, n * (n - 1) // 2))
        g = random_connected(n, m, seed)
        if scheme_count(g) > 300_000:
            continue
        planar = nx.check_planarity(g.to_networkx())[0]
        assert (exact_genus(g) == 0) == planar
