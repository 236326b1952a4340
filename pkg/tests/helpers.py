"""Random embeddings and small graphs shared by the test modules."""

from __future__ import annotations

import random

from hypothesis import strategies as st

from genusvd.boundaried import BoundariedEmbedding
from genusvd.flags import Embedding, orbit_ids


def edge_blocks(m: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """theta and sigma for ``m`` edges with flags ``4i .. 4i+3`` laid out as x, y, y', x'."""
    theta, sigma = [], []
    for i in range(m):
        x, y, y2, x2 = 4 * i, 4 * i + 1, 4 * i + 2, 4 * i + 3
        theta += [y, x, x2, y2]
        sigma += [x2, y2, y, x]
    return tuple(theta), tuple(sigma)


def embedding_from_matching(m: int, order: list[int]) -> Embedding:
    """phi pairs consecutive entries of ``order`` (a permutation of the 4m flags)."""
    theta, sigma = edge_blocks(m)
    phi = [0] * (4 * m)
    for a, b in zip(order[::2], order[1::2]):
        phi[a], phi[b] = b, a
    return Embedding(theta, sigma, tuple(phi))


def random_embedding(rng: random.Random, max_flags: int) -> Embedding:
    m = rng.randint(0, max_flags // 4)
    order = list(range(4 * m))
    rng.shuffle(order)
    return embedding_from_matching(m, order)


def label_vertices(e: Embedding, capacity: int, count: int, rng: random.Random) -> BoundariedEmbedding:
    vid, sizes = orbit_ids(e.sigma, e.phi)
    reps = {}
    for f, v in enumerate(vid):
        reps.setdefault(v, f)
    chosen = rng.sample(sorted(reps), min(count, len(reps), capacity))
    labels = rng.sample(range(1, capacity + 1), len(chosen))
    return BoundariedEmbedding.from_vertex_labels(e, capacity, {reps[v]: l for v, l in zip(chosen, labels)})


def random_boundaried(rng: random.Random, max_flags: int, max_labels: int) -> BoundariedEmbedding:
    e = random_embedding(rng, max_flags)
    capacity = rng.randint(0, max_labels)
    return label_vertices(e, capacity, rng.randint(0, capacity), rng)


@st.composite
def embeddings(draw, max_edges: int = 5) -> Embedding:
    m = draw(st.integers(0, max_edges))
    order = draw(st.permutations(range(4 * m)))
    return embedding_from_matching(m, list(order))


@st.composite
def boundaried_embeddings(draw, max_edges: int = 5, max_labels: int = 3) -> BoundariedEmbedding:
    e = draw(embeddings(max_edges))
    capacity = draw(st.integers(0, max_labels))
    seed = draw(st.integers(0, 2**32 - 1))
    rng = random.Random(seed)
    return label_vertices(e, capacity, rng.randint(0, capacity), rng)


# one line per acceptance criterion, printed by the terminal-summary hook
ACCEPTANCE_LINES: list[str] = []
