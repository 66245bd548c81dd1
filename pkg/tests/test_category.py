from __future__ import annotations

import cmath

import pytest

from cykit import category as cat
from cykit.category import (
    check_identities,
    gauss_sum,
    global_dimension,
    gluck_operator,
    has_fermion,
    symmetric_center,
    transparent_simples,
    validate,
)
from cykit.errors import BadLevel, NonInvolutiveTransparentTwist, NonQuadraticForm
from cykit.scalar import CycScalar, zeta

TOL = 1e-9
SUITE = cat.builtin_suite()


def numeric_gauss(n: int, p: int, sign: int) -> complex:
    return sum(cmath.exp(sign * 2j * cmath.pi * p * a * a / (2 * n)) for a in range(n))


@pytest.mark.parametrize("R", SUITE, ids=lambda R: R.name)
def test_builtins_validate(R):
    failing = [c.name for c in validate(R) if not c.passed]
    assert failing == []


@pytest.mark.parametrize("R", SUITE, ids=lambda R: R.name)
def test_identities_hold(R):
    assert [c.name for c in check_identities(R) if not c.passed] == []


def test_suite_sizes():
    assert len(cat.pointed_suite()) == 61
    assert len(SUITE) >= 20


@pytest.mark.parametrize("n", range(1, 9))
def test_cyclic_gauss_sums_match_numeric(n):
    for p in cat.cyclic_forms(n):
        R = cat.cyclic_pointed(n, p)
        for s in (1, -1):
            assert abs(gauss_sum(R, s).to_complex() - numeric_gauss(n, p, s)) < TOL


def test_cyclic_forms_parity():
    # theta(a) = zeta_{2n}^{p a^2} needs p even when n is odd
    assert cat.cyclic_forms(3) == [0, 2, 4]
    assert cat.cyclic_forms(4) == list(range(8))
    with pytest.raises(NonQuadraticForm):
        cat.cyclic_pointed(3, 1)


def test_semion_values():
    R = cat.semion()
    assert gauss_sum(R, 1) == 1 + zeta(4)
    assert gauss_sum(R, -1) == 1 - zeta(4)
    assert global_dimension(R) == 2
    assert not has_fermion(R)


def test_svect_is_its_own_center():
    R = cat.svect()
    assert transparent_simples(R) == [0, 1]
    assert has_fermion(R)
    assert gauss_sum(R, 1) == 0 and gauss_sum(R, -1) == 0
    assert global_dimension(symmetric_center(R)) == 2


def test_toric_code_is_modular():
    R = cat.toric_code()
    assert transparent_simples(R) == [0]
    assert gauss_sum(R, 1) == 2
    assert global_dimension(R) == 4


@pytest.mark.parametrize("r", range(3, 8))
def test_tl_data_matches_closed_forms(r):
    R = cat.tl(r)
    A = cmath.exp(2j * cmath.pi / (4 * r))
    q = A * A
    for n in range(r - 1):
        qint = (q ** (n + 1) - q ** -(n + 1)) / (q - 1 / q)
        assert abs(R.dims[n].to_complex() - (-1) ** n * qint) < TOL
        assert abs(R.twists[n].to_complex() - (-1) ** n * A ** (n * (n + 2))) < TOL
    assert transparent_simples(R) == [0]


def test_tl_fusion_truncates():
    R = cat.tl(4)
    # 1 (x) 1 = 0 + 2 and 2 (x) 2 = 0 at level 2
    assert R.fusion_product(1, 1) == {0: 1, 2: 1}
    assert R.fusion_product(2, 2) == {0: 1}


@pytest.mark.parametrize("r,k", [(2, 1), (3, 2), (4, 2), (0, 1)])
def test_tl_bad_levels(r, k):
    with pytest.raises(BadLevel):
        cat.tl(r, k)


def test_galois_conjugate_tl():
    a, b = cat.tl(5), cat.tl(5, 3)
    assert [x.galois(3) for x in a.dims] == list(b.dims)


def test_product_multiplies_invariants():
    R = cat.product(cat.svect(), cat.tl(3))
    assert R.rank == 4
    assert global_dimension(R) == global_dimension(cat.svect()) * global_dimension(cat.tl(3))
    assert gauss_sum(R, 1) == 0
    assert has_fermion(R)


def test_pointed_product_stays_pointed():
    R = cat.product(cat.svect(), cat.semion())
    assert R.pointed_data is not None
    assert R.simples[3] == "(f,s)"


@pytest.mark.parametrize("name,want", [("svect", "sVect"), ("toric", "toric_code"), ("tl(5,3)", "tl(5,3)"),
                                       ("cyclic(5,2)", "Z5[p=2]"), ("product(svect,semion)", "sVect*semion")])
def test_builtin_names(name, want):
    assert cat.builtin(name).name == want


def test_unknown_builtin():
    with pytest.raises(KeyError):
        cat.builtin("fibonacci")


def test_pointed_from_table():
    R = cat.pointed([2, 2], {(0, 0): 1, (1, 0): 1, (0, 1): 1, (1, 1): -1}, order=2)
    assert R.simples == ("0:0", "0:1", "1:0", "1:1")
    assert gauss_sum(R, 1) == 2


def test_non_quadratic_twist_rejected():
    with pytest.raises(NonQuadraticForm):
        cat.pointed([2], [CycScalar.rational(1), zeta(8)], order=8)


def test_non_involutive_transparent_twist():
    # a symmetric pointed category on Z/3 with theta = zeta_3 everywhere is not a valid
    # ribbon structure; the fermion test must refuse it rather than guess
    R = cat.pointed([3], [1, zeta(3), zeta(3)], order=3, strict=False)
    R = cat.RibbonData(R.order, R.simples, R.dual, R.fusion, R.dims, R.twists,
                       tuple(tuple(CycScalar.rational(1) for _ in range(3)) for _ in range(3)), "generic", "bad")
    with pytest.raises(NonInvolutiveTransparentTwist):
        has_fermion(R)


@pytest.mark.parametrize("R", SUITE, ids=lambda R: R.name)
def test_gluck_operator_is_an_involution(R):
    G = gluck_operator(R)
    assert all(G[i][i] ** 2 == 1 for i in range(len(G)))
    assert (all(G[i][i] == 1 for i in range(len(G)))) == (not gauss_sum(R, 1).is_zero())
