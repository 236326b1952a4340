"""Graphs, tree decompositions, nice form, and the edge-leaf refinement.

Graphs and decompositions are read and written in the PACE treewidth formats
(``.gr`` and ``.td``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import networkx as nx
from networkx.algorithms.approximation import treewidth_min_fill_in


class FormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class DecompositionError(ValueError):
    """A tree decomposition axiom fails; ``witness`` names the culprit."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


Edge = tuple[int, int]


def _norm(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """A simple graph on vertices ``1..n``."""

    n: int
    edges: tuple[Edge, ...]

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Iterable[int]]) -> "Graph":
        seen = set()
        for u, v in edges:
            if not (1 <= u <= n and 1 <= v <= n):
                raise ValueError(f"edge ({u}, {v}) has an endpoint outside 1..{n}")
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            e = _norm(u, v)
            if e in seen:
                raise ValueError(f"parallel edge {e}")
            seen.add(e)
        return cls(n, tuple(sorted(seen)))

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    @property
    def m(self) -> int:
        return len(self.edges)

    def adjacency(self) -> dict[int, set[int]]:
        adj: dict[int, set[int]] = {v: set() for v in self.vertices}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def degree(self, v: int) -> int:
        return sum(v in e for e in self.edges)

    def remove_vertices(self, removed: Iterable[int]) -> "Graph":
        """Delete vertices, keeping the numbering (deleted vertices become isolated)."""
        removed = set(removed)
        return Graph(self.n, tuple(e for e in self.edges if e[0] not in removed and e[1] not in removed))

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(self.vertices)
        g.add_edges_from(self.edges)
        return g


def parse_graph(text: str) -> Graph:
    header = None
    edges = []
    for i, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        toks = line.split()
        if toks[0] == "p":
            if header is not None:
                raise FormatError("duplicate header", i)
            if len(toks) != 4 or toks[1] != "tw":
                raise FormatError("expected 'p tw <n> <m>'", i)
            try:
                header = (int(toks[2]), int(toks[3]))
            except ValueError:
                raise FormatError("non-integer header field", i) from None
            continue
        if header is None:
            raise FormatError("edge before header", i)
        if len(toks) != 2:
            raise FormatError("expected '<u> <v>'", i)
        try:
            edges.append((int(toks[0]), int(toks[1]), i))
        except ValueError:
            raise FormatError("non-integer vertex", i) from None
    if header is None:
        raise FormatError("missing header")
    n, m = header
    if len(edges) != m:
        raise FormatError(f"header announces {m} edges, found {len(edges)}")
    seen = set()
    for u, v, i in edges:
        if not (1 <= u <= n and 1 <= v <= n):
            raise FormatError(f"vertex outside 1..{n}", i)
        if u == v:
            raise FormatError(f"loop at vertex {u}", i)
        if _norm(u, v) in seen:
            raise FormatError(f"parallel edge {u} {v}", i)
        seen.add(_norm(u, v))
    return Graph(n, tuple(sorted(seen)))


def format_graph(g: Graph) -> str:
    lines = [f"p tw {g.n} {g.m}"]
    lines += [f"{u} {v}" for u, v in g.edges]
    return "\n".join(lines) + "\n"


@dataclass
class TreeDecomposition:
    """Bags on an (unrooted) tree; rooted at ``root`` for dynamic programming."""

    bags: dict[int, frozenset[int]]
    tree_edges: list[tuple[int, int]]
    n_vertices: int
    root: int | None = None

    def __post_init__(self):
        if self.root is None and self.bags:
            self.root = min(self.bags)

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags.values()), default=0) - 1

    def neighbours(self) -> dict[int, list[int]]:
        adj: dict[int, list[int]] = {b: [] for b in self.bags}
        for a, b in self.tree_edges:
            adj[a].append(b)
            adj[b].append(a)
        return adj

    def validate(self, g: Graph) -> None:
        if not self.bags:
            if g.n:
                raise DecompositionError("empty decomposition of a nonempty graph")
            return
        for a, b in self.tree_edges:
            if a not in self.bags or b not in self.bags:
                raise DecompositionError(f"tree edge ({a}, {b}) names an unknown bag", (a, b))
        adj = self.neighbours()
        if len(self.tree_edges) != len(self.bags) - 1:
            raise DecompositionError("decomposition tree does not have |bags|-1 edges")
        seen = {self.root}
        stack = [self.root]
        while stack:
            for nb in adj[stack.pop()]:
                if nb not in seen:
                    seen.add(nb)
                    stack.append(nb)
        if len(seen) != len(self.bags):
            raise DecompositionError("decomposition tree is disconnected")
        for b, bag in self.bags.items():
            for v in bag:
                if not 1 <= v <= g.n:
                    raise DecompositionError(f"bag {b} holds unknown vertex {v}", v)
        for u, v in g.edges:
            if not any(u in bag and v in bag for bag in self.bags.values()):
                raise DecompositionError(f"edge ({u}, {v}) is not covered", (u, v))
        for v in g.vertices:
            occ = {b for b, bag in self.bags.items() if v in bag}
            if not occ:
                raise DecompositionError(f"vertex {v} is in no bag", v)
            start = next(iter(occ))
            reach = {start}
            stack = [start]
            while stack:
                for nb in adj[stack.pop()]:
                    if nb in occ and nb not in reach:
                        reach.add(nb)
                        stack.append(nb)
            if reach != occ:
                raise DecompositionError(f"bags containing vertex {v} are disconnected", v)


def parse_td(text: str, g: Graph | None = None) -> TreeDecomposition:
    header = None
    bags: dict[int, frozenset[int]] = {}
    tree_edges = []
    for i, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        toks = line.split()
        try:
            if toks[0] == "s":
                if len(toks) != 5 or toks[1] != "td":
                    raise FormatError("expected 's td <bags> <width+1> <n>'", i)
                header = tuple(int(t) for t in toks[2:])
            elif toks[0] == "b":
                if header is None:
                    raise FormatError("bag before header", i)
                b = int(toks[1])
                if b in bags:
                    raise FormatError(f"duplicate bag {b}", i)
                bags[b] = frozenset(int(t) for t in toks[2:])
            else:
                if header is None:
                    raise FormatError("tree edge before header", i)
                if len(toks) != 2:
                    raise FormatError("expected '<bag> <bag>'", i)
                tree_edges.append((int(toks[0]), int(toks[1])))
        except ValueError as exc:
            if isinstance(exc, FormatError):
                raise
            raise FormatError("non-integer field", i) from None
    if header is None:
        raise FormatError("missing header")
    nbags, size, n = header
    if len(bags) != nbags:
        raise FormatError(f"header announces {nbags} bags, found {len(bags)}")
    if bags and max(len(b) for b in bags.values()) != size:
        raise FormatError("header bag size does not match the largest bag")
    td = TreeDecomposition(bags, tree_edges, n)
    if g is not None:
        if n != g.n:
            raise DecompositionError(f"decomposition is for {n} vertices, graph has {g.n}")
        td.validate(g)
    return td


def format_td(td: TreeDecomposition) -> str:
    size = td.width + 1
    lines = [f"s td {len(td.bags)} {size} {td.n_vertices}"]
    for b in sorted(td.bags):
        lines.append(" ".join(["b", str(b)] + [str(v) for v in sorted(td.bags[b])]))
    lines += [f"{a} {b}" for a, b in td.tree_edges]
    return "\n".join(lines) + "\n"


def heuristic_td(g: Graph) -> TreeDecomposition:
    """Tree decomposition from a min-fill elimination ordering."""
    if g.n == 0:
        return TreeDecomposition({}, [], 0)
    _, tree = treewidth_min_fill_in(g.to_networkx())
    ids = {bag: i for i, bag in enumerate(sorted(tree.nodes, key=lambda b: sorted(b)), 1)}
    bags = {i: frozenset(bag) for bag, i in ids.items()}
    edges = sorted(_norm(ids[a], ids[b]) for a, b in tree.edges)
    return TreeDecomposition(bags, edges, g.n)


# nice decompositions

LEAF = "leaf"
INTRODUCE = "introduce"
FORGET = "forget"
JOIN = "join"
EDGE_LEAF = "edge_leaf"


@dataclass(frozen=True)
class Node:
    kind: str
    bag: frozenset[int]
    children: tuple[int, ...] = ()
    vertex: int | None = None
    edge: Edge | None = None


@dataclass
class NiceDecomposition:
    """Rooted tree of typed nodes; ``nodes`` is listed children-first."""

    nodes: list[Node]
    root: int

    @property
    def width(self) -> int:
        return max(len(n.bag) for n in self.nodes) - 1

    def postorder(self) -> list[int]:
        return list(range(len(self.nodes)))

    def parents(self) -> dict[int, int]:
        out = {}
        for i, node in enumerate(self.nodes):
            for c in node.children:
                out[c] = i
        return out

    def check_types(self) -> None:
        if self.nodes[self.root].bag:
            raise DecompositionError("root bag is not empty", self.root)
        for i, node in enumerate(self.nodes):
            ch = [self.nodes[c] for c in node.children]
            if any(c >= i for c in node.children):
                raise DecompositionError("nodes are not listed children-first", i)
            ok = False
            if node.kind == LEAF:
                ok = not ch and not node.bag
            elif node.kind == EDGE_LEAF:
                u, v = node.edge
                ok = not ch and u in node.bag and v in node.bag
            elif node.kind == INTRODUCE:
                ok = (
                    len(ch) == 1
                    and node.vertex not in ch[0].bag
                    and node.bag == ch[0].bag | {node.vertex}
                )
            elif node.kind == FORGET:
                ok = (
                    len(ch) == 1
                    and node.vertex in ch[0].bag
                    and node.bag == ch[0].bag - {node.vertex}
                )
            elif node.kind == JOIN:
                ok = len(ch) == 2 and all(c.bag == node.bag for c in ch)
            if not ok:
                raise DecompositionError(f"node {i} violates the {node.kind} rules", i)

    def to_tree_decomposition(self, n_vertices: int) -> TreeDecomposition:
        bags = {i + 1: node.bag for i, node in enumerate(self.nodes)}
        edges = [(i + 1, c + 1) for i, node in enumerate(self.nodes) for c in node.children]
        return TreeDecomposition(bags, edges, n_vertices, root=self.root + 1)

    def validate(self, g: Graph) -> None:
        self.check_types()
        self.to_tree_decomposition(g.n).validate(g)


def make_nice_td(td: TreeDecomposition) -> NiceDecomposition:
    """Equivalent nice decomposition of the same width (empty root and leaf bags)."""
    nodes: list[Node] = []

    def add(node: Node) -> int:
        nodes.append(node)
        return len(nodes) - 1

    def chain(top: int, src: frozenset[int], dst: frozenset[int]) -> int:
        bag = src
        for v in sorted(src - dst):
            bag = bag - {v}
            top = add(Node(FORGET, bag, (top,), vertex=v))
        for v in sorted(dst - src):
            bag = bag | {v}
            top = add(Node(INTRODUCE, bag, (top,), vertex=v))
        return top

    if not td.bags:
        add(Node(LEAF, frozenset()))
        return NiceDecomposition(nodes, 0)
    adj = td.neighbours()
    # iterative post-order over the rooted tree
    order = []
    parent = {td.root: None}
    stack = [td.root]
    while stack:
        b = stack.pop()
        order.append(b)
        for nb in sorted(adj[b], reverse=True):
            if nb not in parent:
                parent[nb] = b
                stack.append(nb)
    built: dict[int, int] = {}
    for b in reversed(order):
        bag = td.bags[b]
        kids = [c for c in adj[b] if parent.get(c) == b]
        tops = [chain(built[c], td.bags[c], bag) for c in sorted(kids)]
        if not tops:
            tops = [chain(add(Node(LEAF, frozenset())), frozenset(), bag)]
        top = tops[0]
        for other in tops[1:]:
            top = add(Node(JOIN, bag, (top, other)))
        built[b] = top
    root = chain(built[td.root], td.bags[td.root], frozenset())
    return NiceDecomposition(nodes, root)


@dataclass
class RefinedDecomposition(NiceDecomposition):
    """Nice decomposition with edge leaves, per-node edge sets and the bag labelling."""

    node_edges: list[frozenset[Edge]] = field(default_factory=list)
    labelling: dict[int, int] = field(default_factory=dict)
    capacity: int = 1

    def validate(self, g: Graph) -> None:
        super().validate(g)
        leaves = [n.edge for n in self.nodes if n.kind == EDGE_LEAF]
        if sorted(leaves) != sorted(g.edges):
            raise DecompositionError("edge leaves do not carry every edge exactly once")
        alpha: list[frozenset[int]] = []
        for i, node in enumerate(self.nodes):
            a = set(node.bag)
            for c in node.children:
                a |= alpha[c]
            alpha.append(frozenset(a))
            ch = node.children
            mine = self.node_edges[i]
            if node.kind == EDGE_LEAF and mine != {node.edge}:
                raise DecompositionError(f"edge leaf {i} has a wrong edge set", i)
            if node.kind in (INTRODUCE, FORGET) and mine != self.node_edges[ch[0]]:
                raise DecompositionError(f"node {i} changes the edge set", i)
            if node.kind == JOIN:
                e1, e2 = self.node_edges[ch[0]], self.node_edges[ch[1]]
                if e1 & e2 or mine != e1 | e2:
                    raise DecompositionError(f"join {i} is not an edge-disjoint union", i)
            if node.kind == LEAF and mine:
                raise DecompositionError(f"leaf {i} carries edges", i)
            induced = {e for e in g.edges if e[0] in alpha[i] and e[1] in alpha[i]}
            down = {e for e in induced if not (e[0] in node.bag and e[1] in node.bag)}
            if not (down <= mine <= induced):
                raise DecompositionError(f"edge set of node {i} is out of range", i)
            labels = [self.labelling[v] for v in node.bag]
            if len(set(labels)) != len(labels):
                raise DecompositionError(f"labelling is not injective on bag {i}", i)
            if any(not 1 <= l <= self.capacity for l in labels):
                raise DecompositionError(f"label outside 1..{self.capacity} at node {i}", i)


def refine(nice: NiceDecomposition, g: Graph) -> RefinedDecomposition:
    """Insert an edge leaf (under a new join) for every edge, at the forget node of its first endpoint."""
    adj = g.adjacency()
    nodes: list[Node] = []
    edges_of: list[frozenset[Edge]] = []
    remap: dict[int, int] = {}
    for i, node in enumerate(nice.nodes):
        kids = tuple(remap[c] for c in node.children)
        if node.kind == FORGET:
            child = kids[0]
            v = node.vertex
            cbag = nodes[child].bag
            covered = sorted(_norm(v, u) for u in adj[v] if u in node.bag)
            # t_l is attached to the old child, t_1 to the forget node
            below = child
            for e in reversed(covered):
                leaf = len(nodes)
                nodes.append(Node(EDGE_LEAF, cbag, edge=e))
                edges_of.append(frozenset([e]))
                nodes.append(Node(JOIN, cbag, (below, leaf)))
                edges_of.append(edges_of[below] | {e})
                below = len(nodes) - 1
            kids = (below,)
        new = Node(node.kind, node.bag, kids, node.vertex, node.edge)
        nodes.append(new)
        if not kids:
            edges_of.append(frozenset())
        elif new.kind == JOIN:
            edges_of.append(edges_of[kids[0]] | edges_of[kids[1]])
        else:
            edges_of.append(edges_of[kids[0]])
        remap[i] = len(nodes) - 1
    root = remap[nice.root]
    capacity = max(1, max(len(n.bag) for n in nodes))
    labelling = _bag_labelling(nodes, root, capacity)
    for v in g.vertices:
        labelling.setdefault(v, 1)
    return RefinedDecomposition(nodes, root, edges_of, labelling, capacity)


def _bag_labelling(nodes: list[Node], root: int, capacity: int) -> dict[int, int]:
    """Top-down labelling, reusing labels freed where a vertex leaves the bag."""
    lab: dict[int, int] = {}
    stack = [root]
    while stack:
        i = stack.pop()
        node = nodes[i]
        taken = {lab[v] for v in node.bag if v in lab}
        for v in sorted(node.bag):
            if v not in lab:
                free = min(l for l in range(1, capacity + 1) if l not in taken)
                lab[v] = free
                taken.add(free)
        stack.extend(node.children)
    return lab


def decompose(g: Graph, td: TreeDecomposition | None = None) -> RefinedDecomposition:
    """Validated refined decomposition of ``g`` from ``td`` (min-fill when omitted)."""
    if td is None:
        td = heuristic_td(g)
    td.validate(g)
    refined = refine(make_nice_td(td), g)
    refined.validate(g)
    return refined
