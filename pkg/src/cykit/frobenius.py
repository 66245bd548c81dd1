"""Commutative Frobenius algebras given by structure constants.

An algebra is specified by its multiplication ``mult[i][j][k]`` (coefficient
of ``b_k`` in ``b_i b_j``), a unit vector and a counit vector.  The
comultiplication is never supplied; it is derived from the pairing
``beta(a, b) = counit(a b)``.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from . import linalg
from .errors import DegeneratePairing, DivisionByZero, NotSemisimple, SplitFieldNeeded
from .scalar import CycScalar, Rational, common_order, cyclotomic_polynomial, euler_phi

__all__ = [
    "FrobeniusAlgebra",
    "Check",
    "check_axioms",
    "derive_comul",
    "window",
    "is_semisimple",
    "indecomposable_count",
    "primitive_idempotents",
    "group_algebra",
    "truncated_polynomial_algebra",
    "direct_sum",
]


def _s(x: CycScalar | Rational) -> CycScalar:
    return x if isinstance(x, CycScalar) else CycScalar.rational(x)


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class FrobeniusAlgebra:
    basis_labels: tuple[str, ...]
    mult: tuple[tuple[tuple[CycScalar, ...], ...], ...]
    unit: tuple[CycScalar, ...]
    counit: tuple[CycScalar, ...]
    name: str = field(default="", compare=False)

    @classmethod
    def build(cls, labels: Sequence[str], mult, unit, counit, name: str = "") -> FrobeniusAlgebra:
        n = len(labels)
        m = tuple(tuple(tuple(_s(mult[i][j][k]) for k in range(n)) for j in range(n)) for i in range(n))
        return cls(tuple(labels), m, tuple(_s(x) for x in unit), tuple(_s(x) for x in counit), name)

    @property
    def dim(self) -> int:
        return len(self.basis_labels)

    @cached_property
    def order(self) -> int:
        vals = [x for a in self.mult for b in a for x in b] + list(self.unit) + list(self.counit)
        return common_order(vals)

    # -- elementwise helpers -----------------------------------------------

    def multiply(self, a: Sequence[CycScalar], b: Sequence[CycScalar]) -> list[CycScalar]:
        n = self.dim
        out = [CycScalar.rational(0)] * n
        for i in range(n):
            if not a[i]:
                continue
            for j in range(n):
                if not b[j]:
                    continue
                c = a[i] * b[j]
                row = self.mult[i][j]
                for k in range(n):
                    if row[k]:
                        out[k] = out[k] + c * row[k]
        return out

    def basis_vector(self, i: int) -> list[CycScalar]:
        return [CycScalar.rational(1 if j == i else 0) for j in range(self.dim)]

    def left_mult_matrix(self, a: Sequence[CycScalar]) -> list[list[CycScalar]]:
        """Matrix of x -> a x (columns are images of basis vectors)."""
        cols = [self.multiply(a, self.basis_vector(j)) for j in range(self.dim)]
        return [[cols[j][i] for j in range(self.dim)] for i in range(self.dim)]

    @cached_property
    def pairing(self) -> list[list[CycScalar]]:
        n = self.dim
        return [[sum((self.mult[i][j][k] * self.counit[k] for k in range(n)), CycScalar.rational(0))
                 for j in range(n)] for i in range(n)]

    @cached_property
    def pairing_inverse(self) -> list[list[CycScalar]]:
        try:
            return linalg.inverse(self.pairing)
        except DivisionByZero:
            raise DegeneratePairing("the pairing counit(a*b) is degenerate") from None


# --------------------------------------------------------------------------


def derive_comul(A: FrobeniusAlgebra) -> list[list[list[CycScalar]]]:
    """``delta[i][j][k]``: coefficient of ``b_j (x) b_k`` in Delta(b_i).

    Delta(a) = sum_l (a b_l) (x) b^l with {b^l} the pairing-dual basis.
    """
    n = A.dim
    pinv = A.pairing_inverse
    zero = CycScalar.rational(0)
    out = [[[zero] * n for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for l in range(n):
            for j in range(n):
                c = A.mult[i][l][j]
                if not c:
                    continue
                for k in range(n):
                    if pinv[l][k]:
                        out[i][j][k] = out[i][j][k] + c * pinv[l][k]
    return out


def window(A: FrobeniusAlgebra) -> list[list[CycScalar]]:
    """Matrix of m o Delta; column i is the image of b_i."""
    n = A.dim
    delta = derive_comul(A)
    zero = CycScalar.rational(0)
    w = [[zero] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            for k in range(n):
                c = delta[i][j][k]
                if not c:
                    continue
                for l in range(n):
                    if A.mult[j][k][l]:
                        w[l][i] = w[l][i] + c * A.mult[j][k][l]
    return w


def is_semisimple(A: FrobeniusAlgebra) -> bool:
    return bool(linalg.det(window(A)))


def indecomposable_count(A: FrobeniusAlgebra) -> int:
    # commutative semisimple in characteristic zero: splits into dim(A) copies
    # of the ground field over the algebraic closure
    if not is_semisimple(A):
        raise NotSemisimple("window endomorphism is singular")
    return A.dim


def check_axioms(A: FrobeniusAlgebra) -> list[Check]:
    n = A.dim
    m = A.mult
    checks: list[Check] = []
    basis = [A.basis_vector(i) for i in range(n)]

    bad = [(i, j) for i in range(n) for j in range(n) if m[i][j] != m[j][i]]
    checks.append(Check("commutativity", not bad, f"b{bad[0]}" if bad else ""))

    bad_assoc = None
    for i, j, k in itertools.product(range(n), repeat=3):
        lhs = A.multiply(A.multiply(basis[i], basis[j]), basis[k])
        rhs = A.multiply(basis[i], A.multiply(basis[j], basis[k]))
        if lhs != rhs:
            bad_assoc = (i, j, k)
            break
    checks.append(Check("associativity", bad_assoc is None,
                        f"fails on {bad_assoc}" if bad_assoc else ""))

    unit = list(A.unit)
    bad_unit = [i for i in range(n) if A.multiply(unit, basis[i]) != basis[i]]
    checks.append(Check("unitality", not bad_unit, f"fails on b{bad_unit[0]}" if bad_unit else ""))

    try:
        A.pairing_inverse
        nondeg = True
    except DegeneratePairing:
        nondeg = False
    checks.append(Check("pairing nondegenerate", nondeg))
    if not nondeg:
        for name in ("counit compatibility", "cocommutativity", "frobenius relation"):
            checks.append(Check(name, False, "comultiplication undefined"))
        return checks

    delta = derive_comul(A)
    zero = CycScalar.rational(0)

    ok = True
    for i in range(n):
        left = [sum((A.counit[j] * delta[i][j][k] for j in range(n)), zero) for k in range(n)]
        right = [sum((A.counit[k] * delta[i][j][k] for k in range(n)), zero) for j in range(n)]
        if left != basis[i] or right != basis[i]:
            ok = False
            break
    checks.append(Check("counit compatibility", ok))

    cocomm = all(delta[i][j][k] == delta[i][k][j]
                 for i in range(n) for j in range(n) for k in range(n))
    checks.append(Check("cocommutativity", cocomm))

    checks.append(Check("frobenius relation", _frobenius_relation_holds(A, delta)))
    return checks


def _frobenius_relation_holds(A: FrobeniusAlgebra, delta) -> bool:
    """(id (x) m)(Delta (x) id) = (m (x) id)(id (x) Delta), both equal to Delta o m."""
    n = A.dim
    m = A.mult
    zero = CycScalar.rational(0)
    for a in range(n):
        for b in range(n):
            lhs = [[zero] * n for _ in range(n)]
            mid = [[zero] * n for _ in range(n)]
            for j in range(n):
                for k in range(n):
                    c = delta[a][j][k]
                    if c:
                        for l in range(n):
                            if m[k][b][l]:
                                lhs[j][l] = lhs[j][l] + c * m[k][b][l]
                    c = delta[b][j][k]
                    if c:
                        for l in range(n):
                            if m[a][j][l]:
                                mid[l][k] = mid[l][k] + c * m[a][j][l]
            if lhs != mid:
                return False
            rhs = [[zero] * n for _ in range(n)]
            for l in range(n):
                if m[a][b][l]:
                    for j in range(n):
                        for k in range(n):
                            if delta[l][j][k]:
                                rhs[j][k] = rhs[j][k] + m[a][b][l] * delta[l][j][k]
            if lhs != rhs:
                return False
    return True


# --------------------------------------------------------------------------
# idempotents


def _minimal_polynomial(A: FrobeniusAlgebra, a: list[CycScalar]) -> list[CycScalar]:
    """Monic minimal polynomial of ``a`` (lowest degree first) by Krylov iteration."""
    powers = [list(A.unit)]
    while True:
        nxt = A.multiply(powers[-1], a)
        k = len(powers)
        # solve sum_{i<k} c_i powers[i] = nxt
        mat = [[powers[j][r] for j in range(k)] for r in range(A.dim)]
        sol = _solve_consistent(mat, nxt)
        if sol is not None:
            return [-c for c in sol] + [CycScalar.rational(1)]
        powers.append(nxt)


def _solve_consistent(mat, rhs):
    """Least-structure solve of an overdetermined consistent system; None if inconsistent."""
    rows = len(mat)
    cols = len(mat[0]) if rows else 0
    a = [list(mat[r]) + [rhs[r]] for r in range(rows)]
    pivots = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if a[i][c]), None)
        if p is None:
            return None  # powers are independent by construction, so this is unreachable
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    if any(a[i][cols] for i in range(r, rows)):
        return None
    sol = [CycScalar.rational(0)] * cols
    for i, c in enumerate(pivots):
        sol[c] = a[i][cols]
    return sol


def _roots_in_field(poly: list[CycScalar], order: int) -> list[CycScalar] | None:
    """All roots of a squarefree polynomial over Q(zeta_order), or None if it does not split."""
    if len(poly) == 2:
        return [-poly[0] / poly[1]]
    import sympy
    from sympy import QQ

    if euler_phi(order) == 1:
        if not all(c.is_rational() for c in poly):
            return None
        dom = QQ

        def to_dom(c: CycScalar):
            f = c.to_fraction()
            return QQ(f.numerator, f.denominator)

        def from_dom(v) -> CycScalar:
            return CycScalar.rational(Fraction(int(v.numerator), int(v.denominator)))
    else:
        dom = QQ.algebraic_field(sympy.exp(2 * sympy.pi * sympy.I / order))
        if tuple(int(c) for c in dom.mod.to_list()[::-1]) != cyclotomic_polynomial(order):
            raise SplitFieldNeeded(f"unexpected presentation of Q(zeta_{order})")
        phi = euler_phi(order)

        def to_dom(c: CycScalar):
            return dom.new([QQ(v.numerator, v.denominator) for v in c.embed(order).coeffs][::-1])

        def from_dom(v) -> CycScalar:
            low_first = [Fraction(int(t.numerator), int(t.denominator)) for t in v.to_list()[::-1]]
            return CycScalar.from_coeffs(low_first + [Fraction(0)] * (phi - len(low_first)), order)

    p = sympy.Poly.from_list([to_dom(c) for c in poly[::-1]], sympy.Symbol("x"), domain=dom)
    _, factors = p.factor_list()
    roots = []
    for f, _mult in factors:
        if f.degree() != 1:
            return None
        lead, const = f.rep.to_list()
        roots.append(-from_dom(dom.quo(const, lead)))
    return roots


def primitive_idempotents(A: FrobeniusAlgebra, order: int | None = None) -> list[list[CycScalar]]:
    """Complete orthogonal set of primitive idempotents over Q(zeta_order).

    Raises :class:`SplitFieldNeeded` when the multiplication operator of a
    generating element has an eigenvalue outside the working field.
    """
    if not is_semisimple(A):
        raise NotSemisimple("window endomorphism is singular")
    n = A.dim
    work = math.lcm(A.order, order or 1)
    if n == 1:
        return [list(A.unit)]
    candidates = [[(j + 1) ** t for j in range(n)] for t in range(1, 4)]
    candidates += [[((j * 7 + 3) % 11) - 5 for j in range(n)], [(-1) ** j * (j + 2) for j in range(n)]]
    for coeffs in candidates:
        a = [CycScalar.rational(c) for c in coeffs]
        mp = _minimal_polynomial(A, a)
        if len(mp) - 1 != n:
            continue
        roots = _roots_in_field(mp, work)
        if roots is None:
            raise SplitFieldNeeded(
                f"minimal polynomial of a generating element does not split over Q(zeta_{work})")
        idems = []
        for k, lam in enumerate(roots):
            e = list(A.unit)
            for l, mu in enumerate(roots):
                if l == k:
                    continue
                factor = [x - mu * u for x, u in zip(a, A.unit)]
                e = A.multiply(e, factor)
                inv = (lam - mu).inverse()
                e = [x * inv for x in e]
            idems.append(e)
        return idems
    raise SplitFieldNeeded("no generating element found among the probe elements")


# --------------------------------------------------------------------------
# standard examples


def group_algebra(n: int, counit_at_identity: Rational = 1) -> FrobeniusAlgebra:
    """k[Z/n] with counit the (scaled) indicator of the identity."""
    labels = ["1"] + [f"g{k}" if k > 1 else "g" for k in range(1, n)]
    mult = [[[1 if (i + j) % n == k else 0 for k in range(n)] for j in range(n)] for i in range(n)]
    unit = [1] + [0] * (n - 1)
    counit = [counit_at_identity] + [0] * (n - 1)
    return FrobeniusAlgebra.build(labels, mult, unit, counit, name=f"k[Z/{n}]")


def truncated_polynomial_algebra(n: int, counit: Sequence[Rational]) -> FrobeniusAlgebra:
    """k[x]/(x^n) with basis 1, x, ..., x^(n-1)."""
    labels = ["1"] + ["x" if k == 1 else f"x{k}" for k in range(1, n)]
    mult = [[[1 if i + j == k else 0 for k in range(n)] for j in range(n)] for i in range(n)]
    unit = [1] + [0] * (n - 1)
    return FrobeniusAlgebra.build(labels, mult, unit, counit, name=f"k[x]/(x^{n})")


def direct_sum(A: FrobeniusAlgebra, B: FrobeniusAlgebra) -> FrobeniusAlgebra:
    n, m = A.dim, B.dim
    zero = CycScalar.rational(0)
    labels = [f"{x}.1" for x in A.basis_labels] + [f"{x}.2" for x in B.basis_labels]
    t = n + m
    mult = [[[zero] * t for _ in range(t)] for _ in range(t)]
    for i in range(n):
        for j in range(n):
            for k in range(n):
                mult[i][j][k] = A.mult[i][j][k]
    for i in range(m):
        for j in range(m):
            for k in range(m):
                mult[n + i][n + j][n + k] = B.mult[i][j][k]
    return FrobeniusAlgebra.build(labels, mult, list(A.unit) + list(B.unit),
                                  list(A.counit) + list(B.counit), name=f"{A.name}+{B.name}")
