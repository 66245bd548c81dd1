"""Shared generators for random framed links and linking matrices."""

from __future__ import annotations

import random

from hypothesis import strategies as st

from cykit.link import FramedLink, LinkingMatrix


def random_word(rng: random.Random, steps: int = 8, max_width: int = 6) -> list[tuple[str, int]]:
    """A closed slice word: random cups, caps and crossings, then caps to close."""
    w = 0
    out = []
    for _ in range(steps):
        ops = ["cup"] if w < max_width else []
        if w >= 2:
            ops += ["cap", "x+", "x-", "x+", "x-"]
        kind = rng.choice(ops)
        if kind == "cup":
            p = rng.randint(0, w)
            w += 2
        else:
            p = rng.randint(0, w - 2)
            w -= 2 if kind == "cap" else 0
        out.append((kind, p))
    while w:
        out.append(("cap", 0))
        w -= 2
    return out


@st.composite
def framed_links(draw, steps: int = 8, max_width: int = 6, min_components: int = 1, framing: int = 2):
    rng = random.Random(draw(st.integers(0, 2 ** 32)))
    while True:
        L = FramedLink.build(random_word(rng, steps, max_width))
        if L.n_components >= min_components:
            break
    fr = [draw(st.integers(-framing, framing)) for _ in range(L.n_components)]
    return L.with_framings(fr)


@st.composite
def symmetric_matrices(draw, max_size: int = 5, bound: int = 3, min_size: int = 0):
    n = draw(st.integers(min_size, max_size))
    q = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            q[i][j] = q[j][i] = draw(st.integers(-bound, bound))
    return LinkingMatrix.of(q)
