"""Dynamic programming over a refined tree decomposition.

Each node ``t`` keeps a table indexed by a deleted bag subset ``X`` and the
canonical key of a nice boundaried embedding that only labels vertices of
``bag(t) - X``.  The stored value is the fewest deletions below the bag that
realise that embedding class; the root table yields the optimum.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

from .boundaried import BoundariedEmbedding, iter_merges
from .flags import check_orientable, euler_genus, single_edge
from .nicify import canonical_key, make_nice
from .treedecomp import (
    EDGE_LEAF,
    FORGET,
    INTRODUCE,
    JOIN,
    LEAF,
    Graph,
    Node,
    RefinedDecomposition,
    decompose,
)

INF = math.inf


class InconsistentTables(ValueError):
    pass


class Cell:
    __slots__ = ("value", "embedding", "provenance")

    def __init__(self, value, embedding: BoundariedEmbedding, provenance: tuple):
        self.value = value
        self.embedding = embedding
        self.provenance = provenance

    def __repr__(self):
        return f"Cell(value={self.value}, flags={self.embedding.flag_count}, prov={self.provenance[0]})"


class DPTable:
    """Cells of one node, grouped by the deleted subset ``X``."""

    def __init__(self, allowed_labels: dict[frozenset, frozenset] | None = None):
        self.cells: dict[frozenset, dict[tuple, Cell]] = {}
        self._allowed = allowed_labels

    def get(self, X: frozenset, key: tuple) -> Cell | None:
        return self.cells.get(X, {}).get(key)

    def value(self, X: frozenset, key: tuple):
        cell = self.get(X, key)
        return INF if cell is None else cell.value

    def items(self) -> Iterable[tuple[frozenset, tuple, Cell]]:
        for X, row in self.cells.items():
            for key, cell in row.items():
                yield X, key, cell

    def __len__(self) -> int:
        return sum(len(row) for row in self.cells.values())

    def allowed(self, X: frozenset) -> frozenset | None:
        if self._allowed is None:
            return None
        return self._allowed[X]


def update_cell(
    table: DPTable,
    X: frozenset,
    key: tuple,
    value,
    provenance: tuple = (),
    embedding: BoundariedEmbedding | None = None,
) -> bool:
    """Lower the cell to ``min(old, value)``; return whether it changed."""
    allowed = table.allowed(X)
    if allowed is not None and embedding is not None:
        used = embedding.label_range()
        if not used <= allowed:
            raise AssertionError(f"labels {sorted(used - allowed)} are not available at this node")
    row = table.cells.setdefault(X, {})
    cell = row.get(key)
    if cell is None:
        if value == INF:
            return False
        row[key] = Cell(value, embedding, provenance)
        return True
    if value < cell.value:
        cell.value = value
        cell.provenance = provenance
        if embedding is not None:
            cell.embedding = embedding
        return True
    return False


@dataclass
class SolverSettings:
    genus_bound: int
    orientable: bool = False
    budget_prune: int | None = None
    threads: int = 1
    capacity: int = 1


def _subsets(bag: frozenset) -> list[frozenset]:
    items = sorted(bag)
    return [frozenset(c) for r in range(len(items) + 1) for c in combinations(items, r)]


def _admissible(be: BoundariedEmbedding, s: SolverSettings) -> bool:
    return euler_genus(be.embedding) <= s.genus_bound and (
        not s.orientable or check_orientable(be.embedding)
    )


def _join_pair(args) -> list[tuple[tuple, BoundariedEmbedding]]:
    """Nice, admissible representatives of all merges of two cells."""
    e1, e2, s = args
    out: dict[tuple, BoundariedEmbedding] = {}
    if e2.flag_count == 0 or e1.flag_count == 0:
        be = e1 if e2.flag_count == 0 else e2
        return [(canonical_key(be), be)]
    shared = e1.label_range() & e2.label_range()
    for merged in iter_merges(e1, e2):
        emb = merged.embedding
        if euler_genus(emb) > s.genus_bound:
            continue
        if s.orientable and not check_orientable(emb):
            continue
        # a union of nice embeddings without fused vertices is already nice
        nice = make_nice(merged) if shared else merged
        key = canonical_key(nice)
        if key not in out:
            out[key] = nice
    return list(out.items())


def _join_batch(batch):
    return [_join_pair(args) for args in batch]


def process_node(
    node: Node,
    children: list[DPTable],
    labelling: dict[int, int],
    settings: SolverSettings,
    pool: ProcessPoolExecutor | None = None,
) -> DPTable:
    s = settings
    cap = s.capacity
    bag = node.bag
    allowed = {X: frozenset(labelling[v] for v in bag - X) for X in _subsets(bag)}
    table = DPTable(allowed)

    def prune(value) -> bool:
        return s.budget_prune is not None and value > s.budget_prune

    if node.kind == LEAF:
        if children:
            raise InconsistentTables("leaf with children")
        empty = BoundariedEmbedding.empty(cap)
        update_cell(table, frozenset(), canonical_key(empty), 0, ("leaf",), empty)
        return table

    if node.kind == EDGE_LEAF:
        if children:
            raise InconsistentTables("edge leaf with children")
        u, v = node.edge
        # flags x, y, y', x' sit at u, v, v, u
        lu, lv = labelling[u], labelling[v]
        edge = BoundariedEmbedding(single_edge(), cap, (lu, lv, lv, lu))
        empty = BoundariedEmbedding.empty(cap)
        edge_key, empty_key = canonical_key(edge), canonical_key(empty)
        for X in allowed:
            if u in X or v in X:
                update_cell(table, X, empty_key, 0, ("edge_leaf",), empty)
            else:
                update_cell(table, X, edge_key, 0, ("edge_leaf",), edge)
        return table

    if node.kind == INTRODUCE:
        (child,) = children
        v = node.vertex
        for X, key, cell in child.items():
            if v in X:
                raise InconsistentTables("introduced vertex already deleted below")
            prov = ("introduce", X, key)
            update_cell(table, X, key, cell.value, prov, cell.embedding)
            update_cell(table, X | {v}, key, cell.value, prov, cell.embedding)
        return table

    if node.kind == FORGET:
        (child,) = children
        v = node.vertex
        label = labelling[v]
        for X, key, cell in child.items():
            if v in X:
                val = cell.value + 1
                if not prune(val):
                    update_cell(table, X - {v}, key, val, ("forget_deleted", X, key), cell.embedding)
            else:
                nice = make_nice(cell.embedding.forget_label(label))
                update_cell(table, X, canonical_key(nice), cell.value, ("forget_kept", X, key), nice)
        return table

    if node.kind == JOIN:
        left, right = children
        jobs = []
        meta = []
        for X, row1 in left.cells.items():
            row2 = right.cells.get(X)
            if not row2:
                continue
            for k1, c1 in row1.items():
                for k2, c2 in row2.items():
                    val = c1.value + c2.value
                    if prune(val):
                        continue
                    jobs.append((c1.embedding, c2.embedding, s))
                    meta.append((X, k1, k2, val))
        if pool is not None and len(jobs) > 64:
            size = max(1, len(jobs) // (4 * s.threads))
            batches = [jobs[i : i + size] for i in range(0, len(jobs), size)]
            results = [r for batch in pool.map(_join_batch, batches) for r in batch]
        else:
            results = map(_join_pair, jobs)
        for (X, k1, k2, val), found in zip(meta, results):
            for key, nice in found:
                update_cell(table, X, key, val, ("join", X, k1, k2), nice)
        return table

    raise InconsistentTables(f"unknown node kind {node.kind!r}")


@dataclass
class DPRun:
    tables: list[DPTable]
    decomposition: RefinedDecomposition
    settings: SolverSettings
    seconds: float

    @property
    def root_table(self) -> DPTable:
        return self.tables[self.decomposition.root]

    def optimum(self) -> tuple[float, tuple | None]:
        best, best_key = INF, None
        for X, key, cell in self.root_table.items():
            if cell.value < best:
                best, best_key = cell.value, key
        return best, best_key

    def witness(self, key: tuple) -> list[int]:
        """Deleted vertices along the provenance of the root cell ``key``."""
        nodes = self.decomposition.nodes
        out = []
        stack = [(self.decomposition.root, frozenset(), key)]
        while stack:
            i, X, k = stack.pop()
            cell = self.tables[i].get(X, k)
            prov = cell.provenance
            node = nodes[i]
            kind = prov[0]
            if kind in ("leaf", "edge_leaf"):
                continue
            if kind == "introduce":
                stack.append((node.children[0], prov[1], prov[2]))
            elif kind in ("forget_deleted", "forget_kept"):
                if kind == "forget_deleted":
                    out.append(node.vertex)
                stack.append((node.children[0], prov[1], prov[2]))
            elif kind == "join":
                _, cX, k1, k2 = prov
                stack.append((node.children[0], cX, k1))
                stack.append((node.children[1], cX, k2))
        return sorted(out)

    def table_sizes(self) -> list[int]:
        return [len(t) for t in self.tables]


def run_dp(
    refined: RefinedDecomposition,
    genus_bound: int,
    orientable: bool = False,
    threads: int = 1,
    budget_prune: int | None = None,
) -> DPRun:
    settings = SolverSettings(genus_bound, orientable, budget_prune, threads, refined.capacity)
    start = time.perf_counter()
    tables: list[DPTable] = []
    pool = ProcessPoolExecutor(threads) if threads > 1 else None
    try:
        for node in refined.nodes:
            kids = [tables[c] for c in node.children]
            tables.append(process_node(node, kids, refined.labelling, settings, pool))
    finally:
        if pool is not None:
            pool.shutdown()
    return DPRun(tables, refined, settings, time.perf_counter() - start)


@dataclass
class SolveResult:
    answer: bool
    minimum: int
    witness: list[int]
    genus_bound: int
    budget: int
    orientable: bool = False
    verified: bool | None = None
    verified_by: str | None = None
    table_sizes: list[int] = field(default_factory=list)
    seconds: float = 0.0

    def text(self, emit_witness: bool = True) -> str:
        if not self.answer:
            return "NO"
        line = f"YES {self.minimum}"
        if emit_witness:
            line += "\n" + " ".join(str(v) for v in self.witness)
        return line


def solve(
    g: Graph,
    refined: RefinedDecomposition | None = None,
    genus_bound: int = 0,
    budget: int = 0,
    orientable: bool = False,
    verify: bool = True,
    threads: int = 1,
    budget_prune: bool = False,
    oracle_ceiling: int = 200_000,
) -> SolveResult:
    """Decide Genus Vertex Deletion and return an optimal deletion set.

    ``answer`` is True iff some set of at most ``budget`` vertices can be
    deleted leaving Euler genus at most ``genus_bound`` (orientable surfaces
    only when ``orientable``).  The witness is a minimum such set.
    """
    if genus_bound < 0 or budget < 0:
        raise ValueError("genus bound and budget must be nonnegative")
    if refined is None:
        refined = decompose(g)
    else:
        refined.validate(g)
    run = run_dp(refined, genus_bound, orientable, threads, budget if budget_prune else None)
    best, key = run.optimum()
    if key is None:
        # only reachable with budget pruning
        return SolveResult(False, budget + 1, [], genus_bound, budget, orientable,
                           table_sizes=run.table_sizes(), seconds=run.seconds)
    witness = run.witness(key)
    if len(witness) != best:
        raise AssertionError(f"witness size {len(witness)} differs from optimum {best}")
    result = SolveResult(
        best <= budget, int(best), witness, genus_bound, budget, orientable,
        table_sizes=run.table_sizes(), seconds=run.seconds,
    )
    if verify:
        result.verified, result.verified_by = verify_witness(
            g, witness, genus_bound, orientable, refined, oracle_ceiling
        )
        if not result.verified:
            raise AssertionError(f"witness {witness} does not certify genus <= {genus_bound}")
    return result


def solve_orientable(g: Graph, refined: RefinedDecomposition | None = None, genus_bound: int = 0,
                     budget: int = 0, **kwargs) -> SolveResult:
    return solve(g, refined, genus_bound, budget, orientable=True, **kwargs)


def verify_witness(
    g: Graph,
    witness: Iterable[int],
    genus_bound: int,
    orientable: bool = False,
    refined: RefinedDecomposition | None = None,
    oracle_ceiling: int = 200_000,
) -> tuple[bool, str]:
    """Check that ``g - witness`` has Euler genus at most ``genus_bound``.

    Uses the exhaustive oracle when the scheme count is within
    ``oracle_ceiling``, otherwise reruns the DP on ``g - witness`` with no
    deletions allowed.
    """
    from . import oracle

    rest = g.remove_vertices(witness)
    if oracle.scheme_count(rest, orientable) <= oracle_ceiling:
        return oracle.exact_genus(rest, orientable) <= genus_bound, "oracle"
    td = refined.to_tree_decomposition(g.n) if refined is not None else None
    rerun = run_dp(decompose(rest, td), genus_bound, orientable)
    zero_cells = [c for X, k, c in rerun.root_table.items() if c.value == 0]
    return bool(zero_cells), "dp"
