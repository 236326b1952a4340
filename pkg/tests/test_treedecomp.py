import random

import networkx as nx
import pytest

from genusvd.generators import complete, complete_bipartite, grid, random_connected
from genusvd.treedecomp import (
    EDGE_LEAF,
    FORGET,
    INTRODUCE,
    JOIN,
    LEAF,
    DecompositionError,
    FormatError,
    Graph,
    Node,
    NiceDecomposition,
    TreeDecomposition,
    decompose,
    format_graph,
    format_td,
    heuristic_td,
    make_nice_td,
    parse_graph,
    parse_td,
    refine,
)


def test_parse_path():
    g = parse_graph("p tw 3 2\n1 2\n2 3\n")
    assert g.n == 3 and g.edges == ((1, 2), (2, 3))
    assert parse_graph(format_graph(g)) == g


def test_parse_skips_comments():
    g = parse_graph("c hello\np tw 2 1\nc mid\n2 1\n")
    assert g.edges == ((1, 2),)


@pytest.mark.parametrize(
    "text, line",
    [
        ("p tw 2 1\n1 1\n", 2),
        ("p tw 2 2\n1 2\n2 1\n", 3),
        ("p tw 2 1\n1 3\n", 2),
        ("1 2\n", 1),
        ("p tw 2 1\n1 x\n", 2),
        ("p tw 2\n", 1),
    ],
)
def test_parse_errors_name_the_line(text, line):
    with pytest.raises(FormatError) as info:
        parse_graph(text)
    assert info.value.line == line


def test_parse_edge_count_mismatch():
    with pytest.raises(FormatError):
        parse_graph("p tw 3 2\n1 2\n")


def test_td_round_trip_and_validation():
    g = parse_graph("p tw 3 2\n1 2\n2 3\n")
    td = parse_td("s td 2 2 3\nb 1 1 2\nb 2 2 3\n1 2\n", g)
    assert td.width == 1
    again = parse_td(format_td(td), g)
    assert again.bags == td.bags


def test_uncovered_edge_rejected():
    g = parse_graph("p tw 3 3\n1 2\n2 3\n1 3\n")
    with pytest.raises(DecompositionError) as info:
        parse_td("s td 2 2 3\nb 1 1 2\nb 2 2 3\n1 2\n", g)
    assert info.value.witness == (1, 3)


def test_disconnected_occurrences_rejected():
    g = parse_graph("p tw 3 2\n1 2\n2 3\n")
    with pytest.raises(DecompositionError) as info:
        parse_td("s td 3 3 3\nb 1 1 2\nb 2 3\nb 3 1 2 3\n1 2\n2 3\n", g)
    assert info.value.witness in (1, 2)


def test_td_format_errors():
    with pytest.raises(FormatError):
        parse_td("b 1 1\n")
    with pytest.raises(FormatError):
        parse_td("s td 2 1 1\nb 1 1\n")
    with pytest.raises(FormatError):
        parse_td("s td 1 2 2\nb 1 1\n")


def test_heuristic_widths():
    assert heuristic_td(random_connected(12, 11, 3)).width == 1
    assert heuristic_td(complete(5)).width == 4
    for g in (complete_bipartite(3, 3), grid(3, 4), Graph(3, ())):
        heuristic_td(g).validate(g)


def test_nice_form_of_triangle_bag():
    g = complete(3)
    td = TreeDecomposition({1: frozenset({1, 2, 3})}, [], 3)
    nice = make_nice_td(td)
    nice.validate(g)
    kinds = [n.kind for n in nice.nodes]
    assert kinds == [LEAF, INTRODUCE, INTRODUCE, INTRODUCE, FORGET, FORGET, FORGET]
    assert nice.nodes[nice.root].bag == frozenset()


def test_nice_input_stays_valid():
    g = complete(3)
    nice = make_nice_td(TreeDecomposition({1: frozenset({1, 2, 3})}, [], 3))
    again = make_nice_td(nice.to_tree_decomposition(3))
    again.validate(g)
    assert again.width == nice.width


def test_width_preserved_on_random_graphs():
    rng = random.Random(1)
    for seed in range(100):
        n = rng.randint(1, 12)
        m = rng.randint(n - 1, min(n * (n - 1) // 2, 2 * n))
        g = random_connected(n, m, seed)
        td = heuristic_td(g)
        nice = make_nice_td(td)
        nice.validate(g)
        assert nice.width == td.width


def test_refine_inserts_two_nodes_per_edge():
    for g in (complete(5), complete_bipartite(3, 3), grid(3, 3), random_connected(10, 14, 2)):
        nice = make_nice_td(heuristic_td(g))
        refined = refine(nice, g)
        refined.validate(g)
        assert len(refined.nodes) == len(nice.nodes) + 2 * g.m
        assert sum(n.kind == EDGE_LEAF for n in refined.nodes) == g.m
        assert refined.width == nice.width
        assert refined.capacity == refined.width + 1


def test_refine_forget_with_two_covered_edges():
    g = parse_graph("p tw 3 2\n1 2\n1 3\n")
    td = TreeDecomposition({1: frozenset({1, 2, 3})}, [], 3)
    nice = make_nice_td(td)
    refined = refine(nice, g)
    forget1 = next(i for i, n in enumerate(refined.nodes) if n.kind == FORGET and n.vertex == 1)
    below = refined.nodes[forget1].children[0]
    joins = []
    while refined.nodes[below].kind == JOIN:
        joins.append(below)
        kids = refined.nodes[below].children
        assert refined.nodes[kids[1]].kind == EDGE_LEAF
        below = kids[0]
    assert len(joins) == 2
    # the later forgets have no remaining edges and get nothing inserted
    for i, n in enumerate(refined.nodes):
        if n.kind == FORGET and n.vertex != 1:
            assert refined.nodes[n.children[0]].kind != JOIN


def test_labelling_is_injective_per_bag():
    for seed in range(20):
        g = random_connected(9, 15, seed)
        r = decompose(g)
        for node in r.nodes:
            labels = [r.labelling[v] for v in node.bag]
            assert len(set(labels)) == len(labels)
        assert max(r.labelling.values()) <= r.width + 1


def test_subgraph_sandwich_violations_detected():
    g = complete(3)
    r = decompose(g)
    r.node_edges[r.root] = frozenset()
    with pytest.raises(DecompositionError):
        r.validate(g)


def test_type_checker_rejects_bad_nodes():
    bad = NiceDecomposition([Node(LEAF, frozenset({1}))], 0)
    with pytest.raises(DecompositionError):
        bad.check_types()


def test_decompose_matches_networkx_bound():
    for seed in range(10):
        g = random_connected(10, 16, seed)
        w, _ = nx.algorithms.approximation.treewidth_min_fill_in(g.to_networkx())
        assert decompose(g).width == w
