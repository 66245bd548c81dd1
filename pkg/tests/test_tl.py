from __future__ import annotations

import cmath

import pytest

from cykit import category as cat
from cykit.errors import BackendMismatch, ColorOutOfRange, ResourceLimit
from cykit.link import FramedLink, hopf_link, kirby_color_sum, unknot, unlink
from cykit.scalar import CycScalar
from cykit.tl import compose, evaluate_tl, identity_diagram, jones_wenzl, tl_diagrams

TOL = 1e-9
KINK = [("cup", 0), ("cup", 2), ("x+", 1), ("cap", 1), ("cap", 0)]


def catalan(n: int) -> int:
    c = 1
    for k in range(n):
        c = c * 2 * (2 * k + 1) // (k + 2)
    return c


@pytest.mark.parametrize("n", range(0, 6))
def test_tl_basis_size_is_catalan(n):
    assert len(tl_diagrams(n)) == catalan(n)


def test_identity_is_a_unit_for_composition():
    for d in tl_diagrams(3):
        assert compose(identity_diagram(3), d) == (d, 0)
        assert compose(d, identity_diagram(3)) == (d, 0)


def _mul(x: dict, y: dict, loop: CycScalar) -> dict:
    out: dict = {}
    for d1, c1 in x.items():
        for d2, c2 in y.items():
            d, loops = compose(d1, d2)
            out[d] = out.get(d, CycScalar.rational(0)) + c1 * c2 * loop ** loops
    return {d: c for d, c in out.items() if not c.is_zero()}


@pytest.mark.parametrize("n,r", [(2, 4), (3, 5), (4, 6), (3, 7)])
def test_jones_wenzl_is_idempotent_and_killed_by_hooks(n, r):
    A = CycScalar.zeta(4 * r)
    loop = -(A ** 2) - A ** -2
    p = jones_wenzl(n, r)
    assert _mul(p, p, loop) == p
    for d in tl_diagrams(n):
        if d != identity_diagram(n):
            assert _mul(p, {d: CycScalar.rational(1)}, loop) == {}


def test_jones_wenzl_beyond_level_is_refused():
    with pytest.raises(ColorOutOfRange):
        jones_wenzl(3, 3)


@pytest.mark.parametrize("r", range(3, 7))
def test_unknot_gives_dimensions(r):
    R = cat.tl(r)
    for m in range(R.rank):
        assert evaluate_tl(unknot(0), R, [m]) == R.dims[m]


@pytest.mark.parametrize("r", range(3, 7))
def test_framing_multiplies_by_twist(r):
    R = cat.tl(r)
    for m in range(R.rank):
        for f in (-2, -1, 1, 2):
            assert evaluate_tl(unknot(f), R, [m]) == R.twists[m] ** f * R.dims[m]


@pytest.mark.parametrize("r", [3, 4, 5])
def test_kinked_unknot_respects_framing(r):
    R = cat.tl(r)
    L = FramedLink.build(KINK)
    for f in (-1, 0, 1):
        for m in range(R.rank):
            assert evaluate_tl(L.with_framings([f]), R, [m]) == R.twists[m] ** f * R.dims[m]


def test_positive_kink_matches_kauffman_convention():
    # a positively twisted strand equals -A^3 times the straight strand
    R = cat.tl(5)
    A = cmath.exp(2j * cmath.pi / 20)
    assert abs(R.twists[1].to_complex() - (-(A ** 3))) < TOL


@pytest.mark.parametrize("r", [3, 4, 5])
def test_hopf_link_gives_smatrix(r):
    R = cat.tl(r)
    for a in range(R.rank):
        for b in range(R.rank):
            assert evaluate_tl(hopf_link((0, 0)), R, [a, b]) == R.smatrix[a][b]


def test_split_union_multiplies():
    R = cat.tl(4)
    assert evaluate_tl(unlink([0, 1]), R, [1, 2]) == R.dims[1] * R.twists[2] * R.dims[2]


def test_galois_conjugate_level():
    R = cat.tl(5, 3)
    for m in range(R.rank):
        assert evaluate_tl(unknot(1), R, [m]) == R.twists[m] * R.dims[m]


def test_color_and_backend_errors():
    R = cat.tl(3)
    with pytest.raises(ColorOutOfRange):
        evaluate_tl(unknot(0), R, [2])
    with pytest.raises(ColorOutOfRange):
        evaluate_tl(hopf_link(), R, [1])
    with pytest.raises(BackendMismatch):
        evaluate_tl(unknot(0), cat.svect(), [0])


def test_width_cap_is_enforced():
    R = cat.tl(6)
    with pytest.raises(ResourceLimit):
        evaluate_tl(hopf_link(), R, [4, 4], width_cap=6)
    assert evaluate_tl(hopf_link(), R, [4, 4], width_cap=16) == R.smatrix[4][4]


@pytest.mark.parametrize("r", [3, 4])
def test_kirby_sum_of_cp2(r):
    R = cat.tl(r)
    assert kirby_color_sum(unknot(1), R) == cat.gauss_sum(R, 1)
    assert kirby_color_sum(unknot(-1), R) == cat.gauss_sum(R, -1)
