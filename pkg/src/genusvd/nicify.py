"""Nice boundaried embeddings, the simplifying operations, and enumeration."""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable

from .boundaried import BoundariedEmbedding, delete_edge_b, draw_edge_b
from .canon import flag_system_key
from .flags import Embedding, check_orientable, component_ids, euler_genus, orbit_ids
from .ops import BOTTOM, TOP, TOP_PRIME, LabelledBottom, Position, compaction

CanonicalKey = tuple


class NotApplicable(ValueError):
    """A simplifying operation was requested where its precondition fails."""


class ResourceLimitExceeded(RuntimeError):
    pass


def canonical_key(e: BoundariedEmbedding) -> CanonicalKey:
    emb = e.embedding
    return flag_system_key(emb.theta, emb.sigma, emb.phi, e.flag_labels, e.capacity)


def size_bound(capacity: int, genus: int) -> int:
    """Maximum flag count of a nice embedding with this capacity and genus."""
    return 48 * capacity + 24 * genus


@dataclass
class _Structure:
    vid: list[int]
    vsize: list[int]
    fid: list[int]
    fsize: list[int]
    cid: list[int]
    csize: list[int]

    @classmethod
    def of(cls, e: Embedding) -> "_Structure":
        vid, vsize = orbit_ids(e.sigma, e.phi)
        fid, fsize = orbit_ids(e.theta, e.phi)
        cid, k = component_ids(e.theta, e.sigma, e.phi)
        csize = [0] * k
        for c in cid:
            csize[c] += 1
        return cls(vid, vsize, fid, fsize, cid, csize)

    def isolated_vertex(self, f: int) -> bool:
        return self.vsize[self.vid[f]] == self.csize[self.cid[f]]


def _face_members(fid: list[int], count: int) -> list[list[int]]:
    members: list[list[int]] = [[] for _ in range(count)]
    for f, k in enumerate(fid):
        members[k].append(f)
    return members


def _violating_sides(e: BoundariedEmbedding, st: _Structure) -> Iterable[tuple[int, int]]:
    """Yield ``(x, face)`` for edge sides breaking the second niceness condition.

    ``x`` is the smaller flag of a theta-pair lying on face ``face`` of a
    two-faced edge, with no labelled flag elsewhere on that face.
    """
    emb = e.embedding
    th, si, ph = emb.theta, emb.sigma, emb.phi
    lab = e.flag_labels
    members = None
    for x in range(emb.flag_count):
        y = th[x]
        if y < x:
            continue
        if st.fid[x] == st.fid[si[x]]:
            continue
        if members is None:
            members = _face_members(st.fid, len(st.fsize))
        skip = (x, y, ph[x], ph[y])
        if not any(lab[z] and z not in skip for z in members[st.fid[x]]):
            yield x, st.fid[x]


def is_nice(e: BoundariedEmbedding) -> tuple[bool, tuple | None]:
    """Check both niceness conditions.

    Returns ``(True, None)`` or ``(False, witness)`` where the witness is
    ``("vertex", flag)`` or ``("edge", flag, face_index)``.
    """
    st = _Structure.of(e.embedding)
    lab = e.flag_labels
    for f in range(e.flag_count):
        if not lab[f] and st.vsize[st.vid[f]] < 6 and not st.isolated_vertex(f):
            return False, ("vertex", f)
    for x, face in _violating_sides(e, st):
        return False, ("edge", x, face)
    return True, None


def simplify_delete_size2(e: BoundariedEmbedding, edge_flag: int) -> BoundariedEmbedding:
    """Delete an edge that has an unlabelled size-2 endpoint."""
    emb = e.embedding
    si, ph = emb.sigma, emb.phi
    x = edge_flag
    y = emb.theta[x]
    ok = any(ph[f] == si[f] and not e.flag_labels[f] for f in (x, y))
    if not ok:
        raise NotApplicable("edge has no unlabelled size-2 endpoint")
    return delete_edge_b(e, edge_flag)


def simplify_delete_violating(
    e: BoundariedEmbedding, edge_flag: int, face_flag: int | None = None
) -> BoundariedEmbedding:
    """Delete a two-faced edge one of whose faces has no other labelled flag.

    ``face_flag`` selects the side (any flag of the edge on that face); by
    default both sides are tried.
    """
    emb = e.embedding
    st = _Structure.of(emb)
    th, si, ph = emb.theta, emb.sigma, emb.phi
    x = edge_flag
    if st.fid[x] == st.fid[si[x]]:
        raise NotApplicable("edge is incident to a single face")
    sides = (x, si[x]) if face_flag is None else (face_flag,)
    members = _face_members(st.fid, len(st.fsize))
    lab = e.flag_labels
    for s in sides:
        if s not in (x, th[x], si[x], th[si[x]]):
            raise NotApplicable("face flag is not on the edge")
        t = th[s]
        skip = (s, t, ph[s], ph[t])
        if not any(lab[z] and z not in skip for z in members[st.fid[s]]):
            return delete_edge_b(e, edge_flag)
    raise NotApplicable("both faces see a labelled flag")


def simplify_suppress4(e: BoundariedEmbedding, vertex_flag: int) -> BoundariedEmbedding:
    """Replace the two edges through an unlabelled, non-isolated size-4 vertex by one edge."""
    emb = e.embedding
    st = _Structure.of(emb)
    th, si, ph = emb.theta, emb.sigma, emb.phi
    x1 = vertex_flag
    if e.flag_labels[x1] or st.vsize[st.vid[x1]] != 4 or st.isolated_vertex(x1):
        raise NotApplicable("not an unlabelled non-isolated size-4 vertex")
    x2 = ph[x1]
    y1, y2 = th[x1], th[x2]
    removed = (x1, x2, si[x1], si[x2])
    theta = list(th)
    theta[y1], theta[y2] = y2, y1
    theta[si[y1]], theta[si[y2]] = si[y2], si[y1]
    n = emb.flag_count
    ren = compaction(n, removed)
    keep = [f for f in range(n) if ren[f] != -1]
    out = Embedding(
        tuple(ren[theta[f]] for f in keep),
        tuple(ren[si[f]] for f in keep),
        tuple(ren[ph[f]] for f in keep),
    )
    lab = tuple(e.flag_labels[f] for f in keep)
    return BoundariedEmbedding(out, e.capacity, lab)


def simplification_step(e: BoundariedEmbedding) -> BoundariedEmbedding | None:
    """Apply the first applicable simplifying operation, or return ``None`` if nice.

    Priority: size-2 deletions, then violating-edge deletions, then
    suppressions; flags are scanned in ascending order.
    """
    emb = e.embedding
    si, ph = emb.sigma, emb.phi
    lab = e.flag_labels
    n = emb.flag_count
    for f in range(n):
        if ph[f] == si[f] and not lab[f]:
            return delete_edge_b(e, f)
    st = _Structure.of(emb)
    for x, _ in _violating_sides(e, st):
        return delete_edge_b(e, x)
    for f in range(n):
        if not lab[f] and st.vsize[st.vid[f]] == 4 and not st.isolated_vertex(f):
            return simplify_suppress4(e, f)
    return None


def make_nice(e: BoundariedEmbedding, check_bound: bool = True) -> BoundariedEmbedding:
    """Exhaustively apply simplifying operations; the result is nice and equivalent."""
    cur = e
    while True:
        nxt = simplification_step(cur)
        if nxt is None:
            break
        cur = nxt
    if check_bound:
        g = euler_genus(cur.embedding)
        if cur.flag_count > size_bound(cur.capacity, g):
            raise AssertionError(
                f"nice embedding with {cur.flag_count} flags exceeds 48*{cur.capacity}+24*{g}"
            )
    return cur


# enumeration


def _anchors(e: BoundariedEmbedding, first: bool) -> tuple[list, list]:
    used = e.label_range()
    fresh = [LabelledBottom(l) for l in range(1, e.capacity + 1) if l not in used]
    flags = list(range(e.flag_count))
    a_opts = flags + [BOTTOM, TOP, TOP_PRIME] + fresh
    b_opts = flags + [BOTTOM] + fresh
    return a_opts, b_opts


def _extensions(args) -> list[tuple[CanonicalKey, BoundariedEmbedding]]:
    e, genus_bound, orientable_only = args
    out = {}
    a_opts, b_opts = _anchors(e, e.flag_count == 0)
    for a, b in itertools.product(a_opts, b_opts):
        if e.flag_count and not isinstance(a, int) and not isinstance(b, int):
            continue
        if isinstance(a, LabelledBottom) and a == b:
            continue
        new = draw_edge_b(e, Position(a, b))
        emb = new.embedding
        if euler_genus(emb) > genus_bound:
            continue
        if orientable_only and not check_orientable(emb):
            continue
        key = canonical_key(new)
        if key not in out:
            out[key] = new
    return list(out.items())


def connected_embeddings(
    capacity: int,
    genus_bound: int,
    max_flags: int,
    orientable_only: bool = False,
    threads: int = 1,
    max_states: int | None = None,
) -> dict[CanonicalKey, BoundariedEmbedding]:
    """All connected boundaried embeddings with at most ``max_flags`` flags and genus <= bound.

    Built level by level: every connected embedding with m edges arises from a
    connected one with m - 1 edges by drawing an edge at a position that
    touches an existing flag.
    """
    found: dict[CanonicalKey, BoundariedEmbedding] = {}
    level = {canonical_key(BoundariedEmbedding.empty(capacity)): BoundariedEmbedding.empty(capacity)}
    pool = ProcessPoolExecutor(threads) if threads > 1 else None
    try:
        while level:
            nxt: dict[CanonicalKey, BoundariedEmbedding] = {}
            items = [level[k] for k in sorted(level)]
            if items[0].flag_count + 4 > max_flags:
                break
            jobs = [(e, genus_bound, orientable_only) for e in items]
            results = pool.map(_extensions, jobs, chunksize=16) if pool else map(_extensions, jobs)
            for chunk in results:
                for key, new in chunk:
                    nxt.setdefault(key, new)
            found.update(nxt)
            if max_states is not None and len(found) > max_states:
                raise ResourceLimitExceeded(f"more than {max_states} embeddings explored")
            level = nxt
    finally:
        if pool:
            pool.shutdown()
    return found


def enumerate_nice(
    capacity: int,
    genus_bound: int,
    orientable_only: bool = False,
    threads: int = 1,
    max_flags: int | None = None,
    max_states: int | None = 200_000,
) -> dict[CanonicalKey, BoundariedEmbedding]:
    """All nice ``capacity``-boundaried embeddings of genus <= ``genus_bound``, up to isomorphism.

    The keys form the set of canonical keys; values are representatives.
    ``max_flags`` raises :class:`ResourceLimitExceeded` when the size bound of
    nice embeddings is larger than it.
    """
    bound = size_bound(capacity, genus_bound)
    if max_flags is not None and bound > max_flags:
        raise ResourceLimitExceeded(f"search space needs {bound} flags, ceiling is {max_flags}")
    comps = connected_embeddings(capacity, genus_bound, bound, orientable_only, threads, max_states)
    parts = []
    for key in sorted(comps):
        be = comps[key]
        if is_nice(be)[0]:
            parts.append((be, be.genus(), be.label_range()))
    out: dict[CanonicalKey, BoundariedEmbedding] = {}

    def extend(start: int, acc: list, genus: int, labels: frozenset, flags: int):
        be = _union([p[0] for p in acc], capacity)
        out.setdefault(canonical_key(be), be)
        for i in range(start, len(parts)):
            comp, g, ls = parts[i]
            if genus + g > genus_bound or labels & ls or flags + comp.flag_count > bound:
                continue
            extend(i, acc + [parts[i]], genus + g, labels | ls, flags + comp.flag_count)

    extend(0, [], 0, frozenset(), 0)
    return out


def _union(parts: list[BoundariedEmbedding], capacity: int) -> BoundariedEmbedding:
    th, si, ph, lab = [], [], [], []
    off = 0
    for be in parts:
        e = be.embedding
        th.extend(f + off for f in e.theta)
        si.extend(f + off for f in e.sigma)
        ph.extend(f + off for f in e.phi)
        lab.extend(be.flag_labels)
        off += be.flag_count
    return BoundariedEmbedding(Embedding(tuple(th), tuple(si), tuple(ph)), capacity, tuple(lab))
