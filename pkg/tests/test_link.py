from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cykit import category as cat
from cykit.errors import (
    BackendMismatch,
    ColorOutOfRange,
    IndexOutOfRange,
    InvariantViolation,
    MalformedDiagram,
    NotBlowDownable,
)
from cykit.kernels import compiled_histogram, python_histogram
from cykit.link import (
    FramedLink,
    LinkingMatrix,
    blow,
    cable,
    evaluate_pointed,
    handle_slide,
    hopf_link,
    kirby_color_sum,
    linking_matrix,
    unknot,
    unlink,
)
from cykit.scalar import CycScalar

from strategies import framed_links, symmetric_matrices

POINTED = [cat.svect(), cat.semion(), cat.toric_code(), cat.cyclic_pointed(3, 2), cat.cyclic_pointed(4, 1),
           cat.cyclic_pointed(5, 4), cat.product(cat.svect(), cat.semion())]

HOPF_WORD = [("cup", 0), ("cup", 2), ("x-", 1), ("x-", 1), ("cap", 2), ("cap", 0)]


def brute_force_sum(q: LinkingMatrix, R) -> CycScalar:
    """Sum over colorings using only twists and S-matrix entries (pointed: d = 1)."""
    total = CycScalar.rational(0, R.order)
    n = q.size
    for col in itertools.product(range(R.rank), repeat=n):
        term = CycScalar.rational(1, R.order)
        for i in range(n):
            term = term * R.dims[col[i]] * R.twists[col[i]] ** q.q[i][i]
            for j in range(i + 1, n):
                term = term * R.smatrix[col[i]][col[j]] ** q.q[i][j]
        total = total + term
    return total


def test_hopf_word_has_linking_number_one():
    L = FramedLink.build(HOPF_WORD)
    assert L.n_components == 2
    assert L.linking_numbers()[0][1] == 1
    assert linking_matrix(hopf_link((0, 0))).q == ((0, 1), (1, 0))


def test_positive_crossings_flip_the_sign():
    word = [(k.replace("x-", "x+"), p) for k, p in HOPF_WORD]
    assert FramedLink.build(word).linking_numbers()[0][1] == -1


def test_kink_has_writhe():
    L = FramedLink.build([("cup", 0), ("cup", 2), ("x+", 1), ("cap", 1), ("cap", 0)])
    assert L.n_components == 1
    assert abs(L.writhes()[0]) == 1


@pytest.mark.parametrize(
    "word",
    [
        [("cap", 0)],
        [("cup", 0), ("cap", 1)],
        [("cup", 0)],
        [("cup", 0), ("x+", 1), ("cap", 0)],
        [("cup", 3), ("cap", 0)],
        [("wiggle", 0)],
    ],
)
def test_malformed_words(word):
    with pytest.raises(MalformedDiagram):
        FramedLink.build(word)


def test_framing_count_checked():
    with pytest.raises(InvariantViolation):
        FramedLink(tuple(HOPF_WORD), (0,))


def test_asymmetric_matrix_rejected():
    with pytest.raises(InvariantViolation) as info:
        LinkingMatrix.of([[0, 1], [2, 0]])
    assert info.value.invariant == "symmetry"


def test_unlink_and_union():
    L = unlink([1, -1, 0])
    assert linking_matrix(L).q == ((1, 0, 0), (0, -1, 0), (0, 0, 0))
    U = hopf_link((2, 3)).disjoint_union(unknot(-1))
    assert linking_matrix(U).q == ((2, 1, 0), (1, 3, 0), (0, 0, -1))


@given(framed_links())
def test_linking_matrix_is_symmetric_with_framings_on_diagonal(L):
    q = linking_matrix(L).q
    n = len(q)
    assert all(q[i][j] == q[j][i] for i in range(n) for j in range(n))
    assert [q[i][i] for i in range(n)] == list(L.framings)


@given(framed_links(steps=6, max_width=4))
def test_cabling_preserves_closedness(L):
    widths = [1 + (k % 3) for k in range(L.n_components)]
    C = cable(L, widths)
    K = FramedLink.build(C.slices)
    assert K.n_components == sum(widths)
    assert len(C.cup_tags) == sum(1 for k, _ in C.slices if k == "cup")


# -- kernels and pointed sums ----------------------------------------------------------------


def brute_histogram(q, t, b, M):
    n = len(q)
    h = np.zeros(M, dtype=np.int64)
    k = len(t)
    for col in itertools.product(range(k), repeat=n):
        e = sum(q[i][i] * t[col[i]] for i in range(n))
        e += sum(q[i][j] * b[col[i]][col[j]] for i in range(n) for j in range(i + 1, n))
        h[e % M] += 1
    return h


KERNELS = [python_histogram] + ([compiled_histogram] if compiled_histogram is not None else [])


@pytest.mark.parametrize("kernel", KERNELS, ids=lambda f: f.__module__)
@given(q=symmetric_matrices(max_size=4, min_size=1), n=st.integers(1, 5))
def test_histogram_kernels_match_brute_force(kernel, q, n):
    M = 2 * n
    a = np.arange(n, dtype=np.int64)
    t, b = (a * a) % M, (2 * np.outer(a, a)) % M
    arr = np.array(q.q, dtype=np.int64) % M
    got = np.asarray(kernel(arr, t, b, M))
    assert np.array_equal(got, brute_histogram(arr.tolist(), t.tolist(), b.tolist(), M))


@pytest.mark.parametrize("R", POINTED, ids=lambda R: R.name)
@given(q=symmetric_matrices(max_size=4))
def test_pointed_sum_matches_brute_force(R, q):
    assert kirby_color_sum(q, R) == brute_force_sum(q, R)


def test_evaluate_pointed_single_coloring():
    R = cat.semion()
    assert evaluate_pointed(LinkingMatrix.of([[1]]), R, [1]) == R.twists[1]
    with pytest.raises(ColorOutOfRange):
        evaluate_pointed(LinkingMatrix.of([[1]]), R, [2])


def test_tl_needs_a_diagram():
    with pytest.raises(BackendMismatch):
        kirby_color_sum(LinkingMatrix.of([[1]]), cat.tl(3))


# -- moves -----------------------------------------------------------------------------------


@given(symmetric_matrices(max_size=5, min_size=2), st.data())
def test_matrix_slide_is_a_congruence(q, data):
    n = q.size
    i, j = data.draw(st.lists(st.integers(0, n - 1), min_size=2, max_size=2, unique=True))
    s = data.draw(st.sampled_from([1, -1]))
    q2 = handle_slide(q, i, j, s)
    E = np.eye(n, dtype=np.int64)
    E[j, i] = s
    want = E.T @ np.array(q.q) @ E
    assert np.array_equal(np.array(q2.q), want)
    assert q2.q[i][i] == q.q[i][i] + q.q[j][j] + 2 * s * q.q[i][j]


@pytest.mark.parametrize("R", POINTED, ids=lambda R: R.name)
@given(q=symmetric_matrices(max_size=5, min_size=2), data=st.data())
def test_matrix_slides_preserve_pointed_sum(R, q, data):
    i, j = data.draw(st.lists(st.integers(0, q.size - 1), min_size=2, max_size=2, unique=True))
    s = data.draw(st.sampled_from([1, -1]))
    assert kirby_color_sum(handle_slide(q, i, j, s), R) == kirby_color_sum(q, R)


@given(framed_links(min_components=2), st.data())
def test_diagram_slide_realizes_matrix_slide(L, data):
    i, j = data.draw(st.lists(st.integers(0, L.n_components - 1), min_size=2, max_size=2, unique=True))
    s = data.draw(st.sampled_from([1, -1]))
    res = handle_slide(L, i, j, s)
    q = handle_slide(linking_matrix(L), i, j, s)
    want = tuple(tuple(q.q[a][b] * sa * sb for b, sb in res.correspondence) for a, sa in res.correspondence)
    assert linking_matrix(res.link).q == want
    assert sorted(old for old, _ in res.correspondence) == list(range(L.n_components))


@given(framed_links(steps=7, max_width=4, min_components=2, framing=1), st.data())
def test_diagram_slides_preserve_tl3(L, data):
    i, j = data.draw(st.lists(st.integers(0, L.n_components - 1), min_size=2, max_size=2, unique=True))
    s = data.draw(st.sampled_from([1, -1]))
    R = cat.tl(3)
    assert kirby_color_sum(handle_slide(L, i, j, s).link, R) == kirby_color_sum(L, R)


def test_slide_on_split_link():
    L = unlink([1, 0, -1, 2])
    res = handle_slide(L, 3, 0, 1)
    band = next(k for k, (old, _) in enumerate(res.correspondence) if old == 3)
    assert linking_matrix(res.link).q[band][band] == 3
    for R in (cat.tl(3), cat.tl(4)):
        assert kirby_color_sum(res.link, R) == kirby_color_sum(L, R)


@pytest.mark.parametrize("i,j", [(0, 0), (0, 2), (-1, 0)])
def test_slide_index_errors(i, j):
    with pytest.raises(IndexOutOfRange):
        handle_slide(LinkingMatrix.of([[0, 1], [1, 0]]), i, j, 1)


@pytest.mark.parametrize("R", POINTED + [cat.tl(3), cat.tl(4)], ids=lambda R: R.name)
@pytest.mark.parametrize("s", [1, -1])
def test_blow_up_multiplies_by_gauss_sum(R, s):
    # a split +-1-framed unknot contributes sum_X theta_X^{+-1} d_X^2
    L = hopf_link((1, 0))
    before = kirby_color_sum(L, R)
    after = kirby_color_sum(blow(L, "up", s), R)
    assert after == before * cat.gauss_sum(R, s)


def test_blow_down_round_trip():
    L = hopf_link((0, 2))
    up = blow(L, "up", -1)
    assert blow(up, "down", index=2) == L
    q = LinkingMatrix.of([[2, 1], [1, 0]])
    assert blow(blow(q, "up", 1), "down", index=2) == q


def test_blow_down_rejects_linked_component():
    with pytest.raises(NotBlowDownable):
        blow(hopf_link((1, 0)), "down", index=0)
    with pytest.raises(NotBlowDownable):
        blow(LinkingMatrix.of([[1, 1], [1, 0]]), "down", index=0)
    with pytest.raises(IndexOutOfRange):
        blow(unknot(1), "down", index=3)
