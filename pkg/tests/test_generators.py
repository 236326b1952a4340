import networkx as nx
import pytest

from genusvd.generators import (
    b_ell,
    b_ell_decomposition,
    complete,
    complete_bipartite,
    grid,
    random_connected,
    wall,
)
from genusvd.oracle import exact_genus
from genusvd.treedecomp import format_graph, parse_graph


def test_complete():
    g = complete(5)
    assert (g.n, g.m) == (5, 10)


def test_complete_bipartite():
    g = complete_bipartite(3, 3)
    assert (g.n, g.m) == (6, 9)
    assert nx.is_bipartite(g.to_networkx())


def test_grid_is_planar():
    g = grid(3, 3)
    assert (g.n, g.m) == (9, 12)
    assert exact_genus(g) == 0


@pytest.mark.parametrize("size", [1, 2, 3, 4])
def test_wall_is_subcubic_and_planar(size):
    g = wall(size)
    degrees = [d for _, d in g.to_networkx().degree()]
    assert max(degrees) <= 3 and min(degrees) == 2
    assert nx.is_connected(g.to_networkx())
    assert nx.check_planarity(g.to_networkx())[0]


def test_wall_of_size_two():
    g = wall(2)
    # two rows of two bricks; the pendant corners of the underlying grid are gone
    assert max(dict(g.to_networkx().degree()).values()) == 3
    assert g.n == 16 and g.m == 19


@pytest.mark.parametrize("ell", [1, 2, 3])
def test_b_ell_counts(ell):
    g = b_ell(ell)
    assert g.n == 5 * ell + 2
    assert g.m == 11 * ell
    td = b_ell_decomposition(ell)
    td.validate(g)
    assert td.width == 4


def test_b_ell_two_is_not_planar():
    assert not nx.check_planarity(b_ell(2).to_networkx())[0]


def test_random_connected():
    g = random_connected(4, 3, 17)
    assert nx.is_tree(g.to_networkx())
    assert random_connected(8, 12, 5) == random_connected(8, 12, 5)
    assert random_connected(5, 10, 3) == complete(5)
    for seed in range(30):
        h = random_connected(9, 14, seed)
        assert h.m == 14 and nx.is_connected(h.to_networkx())


def test_random_connected_rejects_infeasible():
    with pytest.raises(ValueError):
        random_connected(5, 3, 0)
    with pytest.raises(ValueError):
        random_connected(4, 7, 0)


def test_outputs_round_trip_through_the_parser():
    for g in (complete(4), complete_bipartite(2, 3), grid(2, 4), wall(3), b_ell(2), random_connected(7, 9, 1)):
        assert parse_graph(format_graph(g)) == g
