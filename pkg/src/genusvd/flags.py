"""Flag systems: embeddings encoded as three fixed-point free involutions.

Flags are the integers ``0..n-1``.  An involution is stored as a tuple ``p``
of length ``n`` with ``p[p[i]] == i`` and ``p[i] != i``.

* ``theta`` pairs the two flags on the same side of an edge,
* ``sigma`` pairs the two flags at the same endpoint of an edge,
* ``phi`` pairs neighbouring flags of consecutive edges around a vertex.

Vertices, edges, faces and connected components are the orbits of
``<sigma, phi>``, ``<theta, sigma>``, ``<theta, phi>`` and
``<theta, sigma, phi>`` respectively.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence


class InvalidFlagSystem(ValueError):
    pass


def is_involution(p: Sequence[int]) -> bool:
    """True iff ``p`` is a fixed-point free involution of ``range(len(p))``."""
    n = len(p)
    for i, j in enumerate(p):
        if not 0 <= j < n or j == i or p[j] != i:
            return False
    return True


def involution_from_pairs(n: int, pairs: Iterable[Sequence[int]]) -> tuple[int, ...]:
    p = [-1] * n
    for a, b in pairs:
        if not (0 <= a < n and 0 <= b < n) or a == b or p[a] != -1 or p[b] != -1:
            raise InvalidFlagSystem(f"bad pair ({a}, {b}) for {n} flags")
        p[a] = b
        p[b] = a
    if -1 in p:
        raise InvalidFlagSystem(f"flag {p.index(-1)} is not paired")
    return tuple(p)


def involution_pairs(p: Sequence[int]) -> list[tuple[int, int]]:
    return [(i, j) for i, j in enumerate(p) if i < j]


def orbits(generators: Sequence[Sequence[int]], n: int | None = None) -> list[list[int]]:
    """Orbit partition of the group generated by ``generators``.

    Orbits are returned sorted, each as a sorted list, so the result is a
    canonical partition of ``range(n)``.
    """
    if n is None:
        n = len(generators[0]) if generators else 0
    for g in generators:
        if len(g) != n:
            raise ValueError("generators act on different flag universes")
    seen = [False] * n
    out = []
    for s in range(n):
        if seen[s]:
            continue
        seen[s] = True
        orbit = [s]
        stack = [s]
        while stack:
            f = stack.pop()
            for g in generators:
                h = g[f]
                if not seen[h]:
                    seen[h] = True
                    orbit.append(h)
                    stack.append(h)
        orbit.sort()
        out.append(orbit)
    return out


def orbit_ids(a: Sequence[int], b: Sequence[int]) -> tuple[list[int], list[int]]:
    """Label every flag with the index of its ``<a, b>``-orbit.

    Returns ``(ids, sizes)``.  Orbits of two fixed-point free involutions are
    alternating cycles, so a single walk suffices per orbit.
    """
    n = len(a)
    ids = [-1] * n
    sizes = []
    for s in range(n):
        if ids[s] != -1:
            continue
        k = len(sizes)
        f = s
        size = 0
        while True:
            ids[f] = k
            g = a[f]
            ids[g] = k
            size += 2
            f = b[g]
            if f == s:
                break
        sizes.append(size)
    return ids, sizes


def count_orbits(a: Sequence[int], b: Sequence[int]) -> int:
    n = len(a)
    seen = bytearray(n)
    count = 0
    for s in range(n):
        if seen[s]:
            continue
        count += 1
        f = s
        while True:
            seen[f] = 1
            g = a[f]
            seen[g] = 1
            f = b[g]
            if f == s:
                break
    return count


def component_ids(theta: Sequence[int], sigma: Sequence[int], phi: Sequence[int]) -> tuple[list[int], int]:
    n = len(theta)
    ids = [-1] * n
    k = 0
    for s in range(n):
        if ids[s] != -1:
            continue
        ids[s] = k
        stack = [s]
        while stack:
            f = stack.pop()
            for h in (theta[f], sigma[f], phi[f]):
                if ids[h] == -1:
                    ids[h] = k
                    stack.append(h)
        k += 1
    return ids, k


@dataclass(frozen=True)
class Embedding:
    """A (graph) embedding as a flag system ``(F, theta, sigma, phi)``."""

    theta: tuple[int, ...]
    sigma: tuple[int, ...]
    phi: tuple[int, ...]

    @property
    def flag_count(self) -> int:
        return len(self.theta)

    @classmethod
    def from_pairs(cls, n, theta, sigma, phi) -> "Embedding":
        return cls(
            involution_from_pairs(n, theta),
            involution_from_pairs(n, sigma),
            involution_from_pairs(n, phi),
        )

    @classmethod
    def empty(cls) -> "Embedding":
        return cls((), (), ())

    def validate(self, graph: bool = True) -> None:
        """Raise :class:`InvalidFlagSystem` unless this is a valid embedding.

        With ``graph=False`` only the hypergraph conditions are checked.
        """
        n = len(self.theta)
        if len(self.sigma) != n or len(self.phi) != n:
            raise InvalidFlagSystem("involutions act on different flag universes")
        if n % 2:
            raise InvalidFlagSystem("odd number of flags")
        for name in ("theta", "sigma", "phi"):
            if not is_involution(getattr(self, name)):
                raise InvalidFlagSystem(f"{name} is not a fixed-point free involution")
        if graph:
            th, si = self.theta, self.sigma
            for f in range(n):
                if th[f] == si[f] or th[si[f]] != si[th[f]]:
                    raise InvalidFlagSystem(f"edge at flag {f} does not have four flags")

    def is_valid(self, graph: bool = True) -> bool:
        try:
            self.validate(graph)
        except InvalidFlagSystem:
            return False
        return True

    # orbit families
    def vertices(self) -> list[list[int]]:
        return orbits([self.sigma, self.phi], self.flag_count)

    def edges(self) -> list[list[int]]:
        return orbits([self.theta, self.sigma], self.flag_count)

    def faces(self) -> list[list[int]]:
        return orbits([self.theta, self.phi], self.flag_count)

    def components(self) -> list[list[int]]:
        return orbits([self.theta, self.sigma, self.phi], self.flag_count)

    def __repr__(self) -> str:
        return (
            f"Embedding(n={self.flag_count}, theta={involution_pairs(self.theta)}, "
            f"sigma={involution_pairs(self.sigma)}, phi={involution_pairs(self.phi)})"
        )


def euler_genus(e: Embedding) -> int:
    """Euler genus ``|E| - |V| - |Faces| + 2|cc|`` of a graph embedding."""
    n = e.flag_count
    if n == 0:
        return 0
    th, si, ph = e.theta, e.sigma, e.phi
    _, cc = component_ids(th, si, ph)
    return n // 4 - count_orbits(si, ph) - count_orbits(th, ph) + 2 * cc


def hypergraph_genus(e: Embedding) -> int:
    """Genus of a hypergraph embedding; coincides with :func:`euler_genus` on graph embeddings."""
    n = e.flag_count
    if n == 0:
        return 0
    th, si, ph = e.theta, e.sigma, e.phi
    _, cc = component_ids(th, si, ph)
    return (
        n // 2
        - count_orbits(si, ph)
        - count_orbits(th, si)
        - count_orbits(th, ph)
        + 2 * cc
    )


def check_orientable(e: Embedding) -> bool:
    """True iff flags 2-colour so that every theta/sigma/phi pair is bichromatic."""
    n = e.flag_count
    colour = [-1] * n
    gens = (e.theta, e.sigma, e.phi)
    for s in range(n):
        if colour[s] != -1:
            continue
        colour[s] = 0
        stack = [s]
        while stack:
            f = stack.pop()
            c = colour[f]
            for g in gens:
                h = g[f]
                if colour[h] == -1:
                    colour[h] = 1 - c
                    stack.append(h)
                elif colour[h] == c:
                    return False
    return True


class Cycle:
    """A cyclic sequence identified with its reversal.

    Stored as the lexicographically least rotation among both reading
    directions, so ``==`` and ``hash`` are rotation and reversal invariant.
    """

    __slots__ = ("elements",)

    def __init__(self, elements: Iterable[int]):
        seq = list(elements)
        if len(set(seq)) != len(seq):
            raise ValueError("cycle elements must be distinct")
        self.elements = _least_rotation(seq)

    def __eq__(self, other):
        return isinstance(other, Cycle) and self.elements == other.elements

    def __hash__(self):
        return hash(self.elements)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __repr__(self):
        return f"Cycle{self.elements}"


def _least_rotation(seq: list[int]) -> tuple[int, ...]:
    if not seq:
        return ()
    best = None
    for s in (seq, seq[::-1]):
        i = s.index(min(s))
        cand = tuple(s[i:] + s[:i])
        if best is None or cand < best:
            best = cand
    return best


class ObjectKind(str, Enum):
    VERTEX = "vertex"
    EDGE = "edge"
    FACE = "face"


def _generator_pair(e: Embedding, kind) -> tuple[Sequence[int], Sequence[int]]:
    kind = ObjectKind(kind)
    if kind is ObjectKind.VERTEX:
        return e.sigma, e.phi
    if kind is ObjectKind.EDGE:
        return e.theta, e.sigma
    return e.theta, e.phi


def orbit_sequence(alpha: Sequence[int], beta: Sequence[int], seed: int) -> list[int]:
    """The orbit of ``seed`` in the order ``e, alpha(e), beta(alpha(e)), ...``."""
    seq = []
    f = seed
    while True:
        seq.append(f)
        g = alpha[f]
        seq.append(g)
        f = beta[g]
        if f == seed:
            return seq


def object_cycle(e: Embedding, kind, seed_flag: int) -> Cycle:
    if not 0 <= seed_flag < e.flag_count:
        raise ValueError(f"flag {seed_flag} out of range")
    a, b = _generator_pair(e, kind)
    return Cycle(orbit_sequence(a, b, seed_flag))


def restrict_cycle(c: Cycle, subset: Iterable[int]) -> Cycle | None:
    """Cross out elements not in ``subset``; ``None`` stands for the identity."""
    keep = set(subset)
    seq = [f for f in c.elements if f in keep]
    if len(seq) <= 1:
        return None
    return Cycle(seq)


def disjoint_union(*embeddings: Embedding) -> Embedding:
    th, si, ph = [], [], []
    off = 0
    for e in embeddings:
        th.extend(f + off for f in e.theta)
        si.extend(f + off for f in e.sigma)
        ph.extend(f + off for f in e.phi)
        off += e.flag_count
    return Embedding(tuple(th), tuple(si), tuple(ph))


def single_edge() -> Embedding:
    """One edge between two size-2 vertices on the sphere (flags x=0, y=1, y'=2, x'=3)."""
    return Embedding.from_pairs(4, [(0, 1), (3, 2)], [(0, 3), (1, 2)], [(0, 3), (1, 2)])


def sphere_loop() -> Embedding:
    """A loop bounding two size-2 faces (phi equals theta)."""
    return Embedding.from_pairs(4, [(0, 1), (3, 2)], [(0, 3), (1, 2)], [(0, 1), (3, 2)])


def projective_loop() -> Embedding:
    """A one-sided loop: the projective plane with a single vertex, edge and face."""
    return Embedding.from_pairs(4, [(0, 1), (3, 2)], [(0, 3), (1, 2)], [(0, 2), (3, 1)])


# text serialization: flag count, then the pair lists of theta, sigma, phi


def dumps(e: Embedding) -> str:
    lines = [str(e.flag_count)]
    for p in (e.theta, e.sigma, e.phi):
        lines.append(" ".join(f"{a} {b}" for a, b in involution_pairs(p)))
    return "\n".join(lines) + "\n"


def loads(text: str) -> Embedding:
    lines = text.split("\n")
    if len(lines) < 4:
        raise InvalidFlagSystem("expected four lines")
    try:
        n = int(lines[0])
        invs = []
        for line in lines[1:4]:
            nums = [int(tok) for tok in line.split()]
            if len(nums) % 2:
                raise InvalidFlagSystem("odd number of entries in a pair list")
            invs.append(involution_from_pairs(n, zip(nums[::2], nums[1::2])))
    except ValueError as exc:
        if isinstance(exc, InvalidFlagSystem):
            raise
        raise InvalidFlagSystem(str(exc)) from exc
    e = Embedding(*invs)
    e.validate()
    return e
