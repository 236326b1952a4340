"""Deleting and drawing edges, and the flag positions that make them inverse.

A new edge drawn into an embedding with ``n`` flags always receives the flags
``x = n``, ``y = n + 1``, ``y' = n + 2``, ``x' = n + 3``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Union

from .flags import Embedding, orbit_sequence


class Special(Enum):
    BOTTOM = "bot"
    TOP = "top"
    TOP_PRIME = "top'"

    def __repr__(self):
        return self.name


BOTTOM = Special.BOTTOM
TOP = Special.TOP
TOP_PRIME = Special.TOP_PRIME


@dataclass(frozen=True)
class LabelledBottom:
    """A fresh vertex that receives ``label`` (boundaried drawing only)."""

    label: int


Anchor = Union[int, Special, LabelledBottom]


class Position(NamedTuple):
    a: Anchor
    b: Anchor


def is_bottom(anchor: Anchor) -> bool:
    return anchor is BOTTOM or isinstance(anchor, LabelledBottom)


def edge_flags(e: Embedding, x: int) -> tuple[int, int, int, int]:
    """``(x, y, y', x')`` of the edge containing ``x``."""
    if not 0 <= x < e.flag_count:
        raise IndexError(f"flag {x} out of range")
    y = e.theta[x]
    return x, y, e.sigma[y], e.sigma[x]


def compaction(n: int, removed) -> list[int]:
    """Map old flag -> new flag (``-1`` for removed) keeping relative order."""
    removed = set(removed)
    out = []
    k = 0
    for f in range(n):
        if f in removed:
            out.append(-1)
        else:
            out.append(k)
            k += 1
    return out


def _relabel(perm: list[int], keep: list[int], ren: list[int]) -> tuple[int, ...]:
    return tuple(ren[perm[f]] for f in keep)


def detach_edge_phi(e: Embedding, edge_flag: int) -> list[int]:
    """phi after rerouting so that ``{x, x'}`` and ``{y, y'}`` are phi-orbits."""
    x, y, y1, x1 = edge_flags(e, edge_flag)
    phi = list(e.phi)
    for u, u1 in ((x, x1), (y, y1)):
        if phi[u] != u1:
            a, a1 = phi[u], phi[u1]
            phi[u], phi[u1] = u1, u
            phi[a], phi[a1] = a1, a
    return phi


def delete_edge_with_map(e: Embedding, edge_flag: int) -> tuple[Embedding, list[int]]:
    """Delete the edge containing ``edge_flag``; also return the flag renaming."""
    flags = edge_flags(e, edge_flag)
    phi = detach_edge_phi(e, edge_flag)
    n = e.flag_count
    ren = compaction(n, flags)
    keep = [f for f in range(n) if ren[f] != -1]
    out = Embedding(
        _relabel(e.theta, keep, ren),
        _relabel(e.sigma, keep, ren),
        _relabel(phi, keep, ren),
    )
    return out, ren


def delete_edge(e: Embedding, edge_flag: int) -> Embedding:
    return delete_edge_with_map(e, edge_flag)[0]


def position(e: Embedding, x: int) -> Position:
    """Where the edge of ``x`` is attached: drawing it there after deletion restores ``e``."""
    x, y, y1, x1 = edge_flags(e, x)
    phi, sigma = e.phi, e.sigma
    a = phi[x]
    if phi[y] not in (x, x1):
        b = phi[y]
    else:
        b = phi[sigma[phi[y]]]
    if a == x1:
        a = BOTTOM
    elif a == y:
        a = TOP
    elif a == y1:
        a = TOP_PRIME
    if b == y1:
        b = BOTTOM
    return Position(a, b)


def map_position(pos: Position, renaming: list[int]) -> Position:
    """Translate concrete anchors through a flag renaming (e.g. from deletion)."""

    def tr(anchor):
        if isinstance(anchor, int):
            new = renaming[anchor]
            if new < 0:
                raise ValueError(f"anchor flag {anchor} was removed")
            return new
        return anchor

    return Position(tr(pos.a), tr(pos.b))


def draw_edge(e: Embedding, pos: Position) -> Embedding:
    """Draw a new edge ``(x, y, y', x')`` at ``pos``."""
    a, b = pos
    n = e.flag_count
    for anchor in (a, b):
        if isinstance(anchor, int) and not 0 <= anchor < n:
            raise IndexError(f"anchor flag {anchor} out of range")
    if b is TOP or b is TOP_PRIME:
        raise ValueError("the second anchor cannot be TOP or TOP'")
    x, y, y1, x1 = n, n + 1, n + 2, n + 3
    theta = list(e.theta) + [y, x, x1, y1]
    sigma = list(e.sigma) + [x1, y1, y, x]
    phi = list(e.phi) + [x1, y1, y, x]
    if is_bottom(a):
        a = x1
    elif a is TOP:
        a = y
    elif a is TOP_PRIME:
        a = y1
    if is_bottom(b):
        b = y1
    if b != y1:
        b1 = phi[b]
        phi[y], phi[b] = b, y
        phi[y1], phi[b1] = b1, y1
    if a != x1:
        a1 = phi[a]
        phi[x], phi[a] = a, x
        phi[x1], phi[a1] = a1, x1
    return Embedding(tuple(theta), tuple(sigma), tuple(phi))


def is_drawn_along_boundary(e: Embedding, pos: Position) -> bool:
    """True iff the face through ``a`` reads ``phi(a), a, P, b, phi(b), P'``."""
    a, b = pos
    if not (isinstance(a, int) and isinstance(b, int)) or a == b:
        return False
    # walk from a leaving by theta; b must be reached with a phi step next
    seq = orbit_sequence(e.theta, e.phi, a)
    try:
        i = seq.index(b)
    except ValueError:
        return False
    return i % 2 == 1
