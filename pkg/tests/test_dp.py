import random

import networkx as nx
import pytest

from genusvd.boundaried import BoundariedEmbedding
from genusvd.dp import (
    DPTable,
    INF,
    InconsistentTables,
    SolverSettings,
    process_node,
    run_dp,
    solve,
    solve_orientable,
    update_cell,
    verify_witness,
)
from genusvd.flags import euler_genus, single_edge
from genusvd.generators import b_ell, b_ell_decomposition, complete, complete_bipartite, grid, random_connected
from genusvd.nicify import canonical_key
from genusvd.oracle import brute_force_gvd
from genusvd.treedecomp import (
    EDGE_LEAF,
    FORGET,
    JOIN,
    DecompositionError,
    Graph,
    Node,
    decompose,
)

EMPTY = BoundariedEmbedding.empty(2)
X0 = frozenset()


def test_update_cell_takes_minimum():
    t = DPTable()
    assert update_cell(t, X0, ("k",), 3, ("leaf",), EMPTY)
    assert t.value(X0, ("k",)) == 3
    assert not update_cell(t, X0, ("k",), 3, ("leaf",), EMPTY)
    t2 = DPTable()
    update_cell(t2, X0, ("k",), 2, ("leaf",), EMPTY)
    assert not update_cell(t2, X0, ("k",), 3, ("leaf",), EMPTY)
    assert t2.value(X0, ("k",)) == 2
    t3 = DPTable()
    update_cell(t3, X0, ("k",), 3, ("leaf",), EMPTY)
    assert update_cell(t3, X0, ("k",), 1, ("leaf",), EMPTY)
    assert t3.value(X0, ("k",)) == 1
    assert t3.value(X0, ("other",)) == INF


def test_update_cell_checks_labels():
    t = DPTable({X0: frozenset({1})})
    edge = BoundariedEmbedding(single_edge(), 2, (1, 2, 2, 1))
    with pytest.raises(AssertionError):
        update_cell(t, X0, canonical_key(edge), 0, ("leaf",), edge)


def _settings(genus=0, capacity=2):
    return SolverSettings(genus_bound=genus, capacity=capacity)


def test_edge_leaf_table():
    node = Node(EDGE_LEAF, frozenset({1, 2}), edge=(1, 2))
    table = process_node(node, [], {1: 1, 2: 2}, _settings())
    row = table.cells[X0]
    assert len(row) == 1
    (cell,) = row.values()
    assert cell.value == 0
    assert cell.embedding.flag_labels == (1, 2, 2, 1)
    for X in (frozenset({1}), frozenset({2}), frozenset({1, 2})):
        (cell,) = table.cells[X].values()
        assert cell.embedding.flag_count == 0


def test_forget_of_deleted_vertex_adds_one():
    child = DPTable()
    update_cell(child, frozenset({1}), canonical_key(EMPTY), 2, ("leaf",), EMPTY)
    node = Node(FORGET, frozenset(), (0,), vertex=1)
    table = process_node(node, [child], {1: 1}, _settings())
    assert table.value(X0, canonical_key(EMPTY)) == 3


def test_forget_of_kept_vertex_unlabels_and_simplifies():
    child = DPTable()
    edge = BoundariedEmbedding(single_edge(), 2, (1, 2, 2, 1))
    update_cell(child, X0, canonical_key(edge), 1, ("leaf",), edge)
    node = Node(FORGET, frozenset({2}), (0,), vertex=1)
    table = process_node(node, [child], {1: 1, 2: 2}, _settings())
    # the now unlabelled size-2 endpoint is removed by make_nice
    assert table.value(X0, canonical_key(EMPTY)) == 1


def test_join_of_path_fragments():
    left, right = DPTable(), DPTable()
    a = BoundariedEmbedding(single_edge(), 3, (1, 2, 2, 1))
    b = BoundariedEmbedding(single_edge(), 3, (2, 3, 3, 2))
    update_cell(left, X0, canonical_key(a), 1, ("leaf",), a)
    update_cell(right, X0, canonical_key(b), 2, ("leaf",), b)
    node = Node(JOIN, frozenset({1, 2, 3}), (0, 1))
    table = process_node(node, [left, right], {1: 1, 2: 2, 3: 3}, _settings(capacity=3))
    cells = list(table.cells[X0].values())
    assert len(cells) == 1
    cell = cells[0]
    assert cell.value == 3
    assert cell.embedding.flag_count == 8
    assert euler_genus(cell.embedding.embedding) == 0


def test_join_requires_two_children():
    with pytest.raises((InconsistentTables, ValueError)):
        process_node(Node(JOIN, X0, (0,)), [DPTable()], {}, _settings())


def test_solve_examples():
    k5 = complete(5)
    assert not solve(k5, genus_bound=0, budget=0).answer
    res = solve(k5, genus_bound=0, budget=1)
    assert res.answer and res.minimum == 1 and len(res.witness) == 1
    assert res.verified
    res = solve(complete_bipartite(3, 3), genus_bound=1, budget=0)
    assert res.answer and res.witness == []


def test_orientable_examples():
    k5 = complete(5)
    assert not solve_orientable(k5, genus_bound=1, budget=0).answer
    assert solve_orientable(k5, genus_bound=2, budget=0).answer
    assert solve_orientable(grid(3, 3), genus_bound=0, budget=0).answer


def test_text_output():
    res = solve(complete(5), genus_bound=0, budget=1)
    assert res.text(emit_witness=False) == "YES 1"
    assert res.text().splitlines()[0] == "YES 1"
    assert solve(complete(5), genus_bound=0, budget=0).text() == "NO"


def test_rejects_invalid_decomposition():
    g = complete(3)
    bad = decompose(Graph.from_edges(3, [(1, 2), (2, 3)]))
    with pytest.raises(DecompositionError):
        solve(g, bad, 0, 0)
    with pytest.raises(ValueError):
        solve(g, genus_bound=-1, budget=0)


def test_edgeless_and_empty_graphs():
    assert solve(Graph(4, ()), genus_bound=0, budget=0).minimum == 0
    assert solve(Graph(0, ()), genus_bound=0, budget=0).answer


def test_disconnected_graph_genus_adds():
    k5 = complete(5)
    g = Graph.from_edges(10, list(k5.edges) + [(u + 5, v + 5) for u, v in k5.edges])
    assert solve(g, genus_bound=1, budget=0).minimum == 1
    assert solve(g, genus_bound=2, budget=0).minimum == 0


def test_agrees_with_oracle_on_small_graphs():
    rng = random.Random(2)
    for seed in range(40):
        n = rng.randint(2, 6)
        m = rng.randint(n - 1, min(10, n * (n - 1) // 2))
        g = random_connected(n, m, seed)
        for genus in (0, 1):
            expected = brute_force_gvd(g, genus, n)
            assert solve(g, genus_bound=genus, budget=n).minimum == expected
            expected_or = brute_force_gvd(g, 2 * genus, n, orientable_only=True)
            assert solve_orientable(g, genus_bound=2 * genus, budget=n).minimum == expected_or


def test_threads_and_pruning_do_not_change_results():
    g = b_ell(2)
    r = decompose(g, b_ell_decomposition(2))
    one = run_dp(r, 1)
    two = run_dp(r, 1, threads=2)
    assert one.optimum()[0] == two.optimum()[0]
    assert one.table_sizes() == two.table_sizes()
    pruned = solve(g, r, 0, 1, budget_prune=True)
    plain = solve(g, r, 0, 1)
    assert (pruned.answer, pruned.minimum) == (plain.answer, plain.minimum)


def test_witness_verification_paths():
    g = random_connected(8, 15, 8)
    res = solve(g, genus_bound=0, budget=g.n)
    ok, how = verify_witness(g, res.witness, 0, oracle_ceiling=0)
    assert ok and how == "dp"
    ok, how = verify_witness(g, res.witness, 0, oracle_ceiling=10**6)
    assert ok and how == "oracle"
    assert res.minimum > 0
    # a minimum witness cannot lose a vertex
    assert not verify_witness(g, res.witness[1:], 0)[0]
    assert nx.check_planarity(g.remove_vertices(res.witness).to_networkx())[0]


def test_b_ell_two_needs_a_deletion():
    g = b_ell(2)
    res = solve(g, decompose(g, b_ell_decomposition(2)), 0, 0)
    assert not res.answer
    assert res.minimum == 1
