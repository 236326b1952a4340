"""Renaming-invariant canonical keys for (boundaried) flag systems."""

from __future__ import annotations

from typing import Sequence

from .flags import component_ids, orbit_ids

_UNLABELLED = 1 << 20


def _component_code(
    starts: list[int],
    th: Sequence[int],
    si: Sequence[int],
    ph: Sequence[int],
    lab: Sequence[int],
) -> tuple[int, ...]:
    best: list[int] | None = None
    for s in starts:
        idx = {s: 0}
        order = [s]
        code: list[int] = []
        # 0: equal to best so far, -1: already smaller
        state = 0 if best is not None else -1
        i = 0
        pos = 0
        aborted = False
        while i < len(order):
            f = order[i]
            for g in (th[f], si[f], ph[f]):
                j = idx.get(g)
                if j is None:
                    j = len(order)
                    idx[g] = j
                    order.append(g)
                code.append(j)
            code.append(lab[f])
            if state == 0:
                while pos < len(code):
                    c, d = code[pos], best[pos]
                    pos += 1
                    if c < d:
                        state = -1
                        break
                    if c > d:
                        aborted = True
                        break
                if aborted:
                    break
            i += 1
        if not aborted and state == -1:
            best = code
    return tuple(best)


def flag_system_key(
    th: Sequence[int],
    si: Sequence[int],
    ph: Sequence[int],
    lab: Sequence[int] | None = None,
    extra: int = 0,
) -> tuple:
    """Canonical key of the flag system with optional per-flag labels.

    Two systems get equal keys iff a flag bijection maps the three
    involutions and the labels onto each other.
    """
    n = len(th)
    if lab is None:
        lab = (0,) * n
    if n == 0:
        return (extra,)
    comp, ncomp = component_ids(th, si, ph)
    vid, vsize = orbit_ids(si, ph)
    fid, fsize = orbit_ids(th, ph)
    members: list[list[int]] = [[] for _ in range(ncomp)]
    for f in range(n):
        members[comp[f]].append(f)
    codes = []
    for flags in members:
        best_inv = None
        starts: list[int] = []
        for f in flags:
            inv = (lab[f] or _UNLABELLED, vsize[vid[f]], fsize[fid[f]])
            if best_inv is None or inv < best_inv:
                best_inv = inv
                starts = [f]
            elif inv == best_inv:
                starts.append(f)
        codes.append(_component_code(starts, th, si, ph, lab))
    codes.sort()
    return (extra, *codes)
