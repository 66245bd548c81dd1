from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cykit import category as cat
from cykit.errors import NotSemisimple, SplitFieldNeeded
from cykit.frobenius import (
    FrobeniusAlgebra,
    check_axioms,
    derive_comul,
    direct_sum,
    group_algebra,
    indecomposable_count,
    is_semisimple,
    primitive_idempotents,
    truncated_polynomial_algebra,
    window,
)
from cykit.scalar import CycScalar

ONE, ZERO = CycScalar.rational(1), CycScalar.rational(0)


def diag(values):
    n = len(values)
    return [[CycScalar.rational(values[i]) if i == j else ZERO for j in range(n)] for i in range(n)]


@pytest.mark.parametrize("n", range(1, 7))
def test_group_algebra_window_is_n_times_identity(n):
    A = group_algebra(n)
    assert all(c.passed for c in check_axioms(A))
    assert window(A) == diag([n] * n)
    assert is_semisimple(A)


def test_scaled_counit_scales_window_inversely():
    A = group_algebra(3, counit_at_identity=Fraction(1, 2))
    assert window(A) == diag([6, 6, 6])


def test_dual_numbers_are_not_semisimple():
    A = truncated_polynomial_algebra(2, [0, 1])
    assert all(c.passed for c in check_axioms(A))
    assert not is_semisimple(A)
    # m o Delta sends 1 to 2x and kills x
    w = window(A)
    assert w[1][0] == 2 and w[0][0] == 0 and w[0][1] == 0 and w[1][1] == 0
    with pytest.raises(NotSemisimple):
        indecomposable_count(A)


def test_degenerate_counit_fails_pairing_check():
    A = truncated_polynomial_algebra(2, [1, 0])
    names = {c.name: c.passed for c in check_axioms(A)}
    assert names["pairing nondegenerate"] is False
    assert names["frobenius relation"] is False


def test_comultiplication_inverts_pairing_on_group_algebra():
    A = group_algebra(4)
    delta = derive_comul(A)
    # Delta(1) = sum_g g (x) g^{-1}
    for j in range(4):
        for k in range(4):
            assert delta[0][j][k] == (1 if (j + k) % 4 == 0 else 0)


@pytest.mark.parametrize("R", [cat.svect(), cat.semion(), cat.toric_code(), cat.tl(3), cat.tl(4), cat.tl(5)],
                         ids=lambda R: R.name)
def test_fusion_algebras_are_semisimple_frobenius(R):
    A = cat.fusion_algebra(R)
    assert all(c.passed for c in check_axioms(A))
    assert is_semisimple(A)
    assert indecomposable_count(A) == R.rank


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_idempotents_of_cyclic_group_algebra(n):
    A = group_algebra(n)
    idems = primitive_idempotents(A, order=n)
    assert len(idems) == n
    total = [sum((e[k] for e in idems), ZERO) for k in range(n)]
    assert total == list(A.unit)
    for a, e in enumerate(idems):
        assert A.multiply(e, e) == e
        for f in idems[a + 1:]:
            assert A.multiply(e, f) == [ZERO] * n


def test_idempotents_need_the_splitting_field():
    with pytest.raises(SplitFieldNeeded):
        primitive_idempotents(group_algebra(3), order=1)


def test_direct_sum_window_is_block_diagonal():
    A = direct_sum(group_algebra(2), group_algebra(3))
    assert window(A) == diag([2, 2, 3, 3, 3])


@given(st.lists(st.fractions(min_value=-4, max_value=4, max_denominator=3).filter(lambda x: x != 0),
                min_size=1, max_size=4))
def test_semisimple_iff_window_invertible_on_products_of_fields(weights):
    # product of copies of Q with counit weights w_i: window is diag(1/w_i)
    n = len(weights)
    labels = [f"e{i}" for i in range(n)]
    mult = [[[1 if i == j == k else 0 for k in range(n)] for j in range(n)] for i in range(n)]
    A = FrobeniusAlgebra.build(labels, mult, [1] * n, weights)
    assert window(A) == diag([1 / w for w in weights])
    assert is_semisimple(A)
