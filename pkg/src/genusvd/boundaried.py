"""t-boundaried embeddings: partial injective vertex labellings and merges."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Mapping

from .canon import flag_system_key
from .flags import (
    Embedding,
    InvalidFlagSystem,
    disjoint_union,
    dumps as dump_embedding,
    euler_genus,
    loads as load_embedding,
    orbit_ids,
)
from .ops import (
    LabelledBottom,
    Position,
    delete_edge_with_map,
    draw_edge,
)


class MergeLimitExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class BoundariedEmbedding:
    """An embedding with label capacity ``capacity`` and vertex labels in ``1..capacity``.

    ``flag_labels[f]`` is the label of the vertex containing ``f`` (0 when the
    vertex is unlabelled); it is constant on every vertex.
    """

    embedding: Embedding
    capacity: int
    flag_labels: tuple[int, ...]

    @classmethod
    def from_vertex_labels(
        cls, embedding: Embedding, capacity: int, labels: Mapping[int, int] | None = None
    ) -> "BoundariedEmbedding":
        """Build from ``{any flag of the vertex: label}``."""
        n = embedding.flag_count
        lab = [0] * n
        if labels:
            vid, _ = orbit_ids(embedding.sigma, embedding.phi)
            for flag, label in labels.items():
                v = vid[flag]
                for f in range(n):
                    if vid[f] == v:
                        lab[f] = label
        be = cls(embedding, capacity, tuple(lab))
        be.validate()
        return be

    @classmethod
    def unlabelled(cls, embedding: Embedding, capacity: int = 0) -> "BoundariedEmbedding":
        return cls(embedding, capacity, (0,) * embedding.flag_count)

    @classmethod
    def empty(cls, capacity: int = 0) -> "BoundariedEmbedding":
        return cls(Embedding.empty(), capacity, ())

    @property
    def flag_count(self) -> int:
        return self.embedding.flag_count

    @property
    def labels(self) -> dict[int, int]:
        """``{least flag of a labelled vertex: label}``."""
        out = {}
        for f, label in enumerate(self.flag_labels):
            if label and label not in out.values():
                out[f] = label
        return out

    def label_range(self) -> frozenset[int]:
        return frozenset(l for l in self.flag_labels if l)

    def vertex_of_label(self, label: int) -> list[int]:
        return [f for f, l in enumerate(self.flag_labels) if l == label]

    def genus(self) -> int:
        return euler_genus(self.embedding)

    def key(self) -> tuple:
        e = self.embedding
        return flag_system_key(e.theta, e.sigma, e.phi, self.flag_labels, self.capacity)

    def validate(self) -> None:
        e = self.embedding
        e.validate()
        if self.capacity < 0:
            raise InvalidFlagSystem("negative label capacity")
        lab = self.flag_labels
        if len(lab) != e.flag_count:
            raise InvalidFlagSystem("label table has the wrong length")
        vid, _ = orbit_ids(e.sigma, e.phi)
        owner: dict[int, int] = {}
        vlabel: dict[int, int] = {}
        for f, label in enumerate(lab):
            if not 0 <= label <= self.capacity:
                raise InvalidFlagSystem(f"label {label} outside 1..{self.capacity}")
            v = vid[f]
            if vlabel.setdefault(v, label) != label:
                raise InvalidFlagSystem(f"vertex of flag {f} carries two labels")
            if label and owner.setdefault(label, v) != v:
                raise InvalidFlagSystem(f"label {label} used on two vertices")

    def forget_label(self, label: int) -> "BoundariedEmbedding":
        if label not in self.flag_labels:
            return self
        return BoundariedEmbedding(
            self.embedding, self.capacity, tuple(0 if l == label else l for l in self.flag_labels)
        )

    def with_capacity(self, capacity: int) -> "BoundariedEmbedding":
        return BoundariedEmbedding(self.embedding, capacity, self.flag_labels)


def _vertex_blocks(sigma, phi, start: int) -> list[tuple[int, int]]:
    """Vertex cycle through ``start`` as a cyclic list of sigma-pair blocks ``(u, sigma(u))``."""
    blocks = []
    u = start
    while True:
        w = sigma[u]
        blocks.append((u, w))
        u = phi[w]
        if u == start:
            return blocks


def _block_orders(blocks_a, blocks_b) -> Iterator[list[tuple[int, int]]]:
    """All cyclic block sequences restricting to ``blocks_a`` and ``blocks_b`` (either direction)."""
    a, b = len(blocks_a), len(blocks_b)
    variants = []
    for r in range(b):
        rot = blocks_b[r:] + blocks_b[:r]
        variants.append(rot)
        variants.append([(w, u) for (u, w) in reversed(rot)])
    slots = a - 1 + b
    for var in variants:
        for chosen in itertools.combinations(range(slots), b):
            seq = [blocks_a[0]]
            ia, ib = 1, 0
            chosen_set = set(chosen)
            for s in range(slots):
                if s in chosen_set:
                    seq.append(var[ib])
                    ib += 1
                else:
                    seq.append(blocks_a[ia])
                    ia += 1
            yield seq


def merge_count(e1: BoundariedEmbedding, e2: BoundariedEmbedding) -> int:
    """Number of merges :func:`iter_merges` yields (before deduplication)."""
    total = 1
    for label in e1.label_range() & e2.label_range():
        a = len(e1.vertex_of_label(label)) // 2
        b = len(e2.vertex_of_label(label)) // 2
        total *= 2 * b * math.comb(a - 1 + b, b)
    return total


def iter_merges(e1: BoundariedEmbedding, e2: BoundariedEmbedding) -> Iterator[BoundariedEmbedding]:
    """Every merge of ``e1`` and ``e2``; flags of ``e2`` are shifted by ``e1.flag_count``.

    Equal-labelled vertex cycles are fused independently per label, so the
    result is the Cartesian product of per-label interleavings.  Isomorphic
    merges may repeat.
    """
    if e1.capacity != e2.capacity:
        raise ValueError("label capacities differ")
    union = disjoint_union(e1.embedding, e2.embedding)
    n1 = e1.flag_count
    labels = list(e1.flag_labels) + list(e2.flag_labels)
    sigma, phi = union.sigma, union.phi
    shared = sorted(e1.label_range() & e2.label_range())
    per_label = []
    for label in shared:
        s1 = e1.flag_labels.index(label)
        s2 = e2.flag_labels.index(label) + n1
        per_label.append(
            list(_block_orders(_vertex_blocks(sigma, phi, s1), _vertex_blocks(sigma, phi, s2)))
        )
    capacity = e1.capacity
    theta = union.theta
    lab = tuple(labels)
    for choice in itertools.product(*per_label):
        new_phi = list(phi)
        for seq in choice:
            m = len(seq)
            for i in range(m):
                w = seq[i][1]
                u = seq[(i + 1) % m][0]
                new_phi[w] = u
                new_phi[u] = w
        yield BoundariedEmbedding(Embedding(theta, sigma, tuple(new_phi)), capacity, lab)


def merge_all(e1: BoundariedEmbedding, e2: BoundariedEmbedding) -> dict[tuple, BoundariedEmbedding]:
    """All merges of ``e1`` and ``e2`` up to isomorphism, keyed by canonical key."""
    out: dict[tuple, BoundariedEmbedding] = {}
    for m in iter_merges(e1, e2):
        out.setdefault(m.key(), m)
    return out


def genus_min_merge(
    e1: BoundariedEmbedding, e2: BoundariedEmbedding, limit: int | None = 2_000_000
) -> int:
    """Minimum Euler genus over all merges (exhaustive)."""
    if limit is not None and merge_count(e1, e2) > limit:
        raise MergeLimitExceeded(f"more than {limit} merges")
    return min(euler_genus(m.embedding) for m in iter_merges(e1, e2))


def delete_edge_b(e: BoundariedEmbedding, edge_flag: int) -> BoundariedEmbedding:
    """Delete an edge, carrying labels along the surviving flags of each vertex."""
    out, ren = delete_edge_with_map(e.embedding, edge_flag)
    lab = [0] * out.flag_count
    for f, new in enumerate(ren):
        if new >= 0:
            lab[new] = e.flag_labels[f]
    return BoundariedEmbedding(out, e.capacity, tuple(lab))


def draw_edge_b(e: BoundariedEmbedding, pos: Position) -> BoundariedEmbedding:
    """Draw a new edge; a vertex created by ``LabelledBottom(l)`` gets label ``l``."""
    a, b = pos
    used = e.label_range()
    fresh = [anc.label for anc in (a, b) if isinstance(anc, LabelledBottom)]
    for label in fresh:
        if label in used:
            raise ValueError(f"label {label} is already used")
        if not 1 <= label <= e.capacity:
            raise ValueError(f"label {label} outside 1..{e.capacity}")
    if len(fresh) == 2 and fresh[0] == fresh[1]:
        raise ValueError("both new vertices would carry the same label")
    out = draw_edge(e.embedding, pos)
    n = e.flag_count
    x, y = n, n + 1
    vid, _ = orbit_ids(out.sigma, out.phi)
    lab = list(e.flag_labels) + [0, 0, 0, 0]
    vertex_label = {}
    for f in range(n):
        if lab[f]:
            vertex_label[vid[f]] = lab[f]
    # vertices made only of new flags take the label of the anchor that created them
    if isinstance(a, LabelledBottom):
        vertex_label.setdefault(vid[x], a.label)
    if isinstance(b, LabelledBottom):
        vertex_label.setdefault(vid[y], b.label)
    for f in range(n, n + 4):
        lab[f] = vertex_label.get(vid[f], 0)
    be = BoundariedEmbedding(out, e.capacity, tuple(lab))
    be.validate()
    return be


def dumps(be: BoundariedEmbedding) -> str:
    pairs = " ".join(f"{label} {f}" for f, label in sorted(be.labels.items()))
    return dump_embedding(be.embedding) + f"{be.capacity}\n{pairs}\n"


def loads(text: str) -> BoundariedEmbedding:
    lines = text.split("\n")
    emb = load_embedding("\n".join(lines[:4]))
    if len(lines) < 6:
        raise InvalidFlagSystem("missing capacity or label line")
    capacity = int(lines[4])
    nums = [int(tok) for tok in lines[5].split()]
    labels = {f: label for label, f in zip(nums[::2], nums[1::2])}
    return BoundariedEmbedding.from_vertex_labels(emb, capacity, labels)

