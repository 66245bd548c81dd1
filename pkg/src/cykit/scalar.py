"""Exact arithmetic in cyclotomic fields Q(zeta_N).

A :class:`CycScalar` stores integer numerators in the power basis
``1, z, ..., z^(phi(N)-1)`` (``z = exp(2 pi i / N)``) over one shared positive
denominator, always reduced modulo the N-th cyclotomic polynomial.  Binary
operations first embed both operands into Q(zeta_lcm).
"""

from __future__ import annotations

import cmath
import math
import re
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence, Union

from .errors import BadOrder, DivisionByZero, IncompatibleOrder, ParseError

Rational = Union[int, Fraction]

__all__ = [
    "CycScalar",
    "cyclotomic_polynomial",
    "euler_phi",
    "make",
    "zeta",
    "rational",
    "field_ops",
    "invert",
    "conjugate",
    "embed",
    "parse_cyc",
    "render",
    "common_order",
]


# --------------------------------------------------------------------------
# per-order tables


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, lowest degree first."""
    if n < 1:
        raise BadOrder(f"cyclotomic order must be positive, got {n}")
    num = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            num = _exact_divide(num, cyclotomic_polynomial(d))
    return tuple(num)


def _exact_divide(num: list[int], den: Sequence[int]) -> list[int]:
    num = list(num)
    dn = len(den) - 1
    out = [0] * (len(num) - dn)
    for i in range(len(num) - 1, dn - 1, -1):
        c = num[i]  # den is monic
        out[i - dn] = c
        if c:
            for j in range(dn + 1):
                num[i - dn + j] -= c * den[j]
    assert not any(num[:dn]), "non-exact cyclotomic division"
    return out


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    return len(cyclotomic_polynomial(n)) - 1


@lru_cache(maxsize=None)
def _power_table(n: int) -> tuple[tuple[int, ...], ...]:
    """Reduced coordinates of z^k for k = 0..n-1."""
    phi_poly = cyclotomic_polynomial(n)
    deg = len(phi_poly) - 1
    rows = []
    cur = [1] + [0] * (deg - 1) if deg > 0 else []
    for _ in range(n):
        rows.append(tuple(cur))
        # multiply by z, then subtract top * Phi_n
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            cur = [c - top * p for c, p in zip(cur, phi_poly[:deg])]
    return tuple(rows)


@lru_cache(maxsize=None)
def _mobius(n: int) -> int:
    result, m, p = 1, n, 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            result = -result
        p += 1
    if m > 1:
        result = -result
    return result


@lru_cache(maxsize=None)
def _normalized_traces(n: int) -> tuple[Fraction, ...]:
    """Tr(z^k) / phi(n) for the basis powers k < phi(n); invariant under embedding."""
    out = []
    for k in range(euler_phi(n)):
        d = n // math.gcd(k, n)
        out.append(Fraction(_mobius(d), euler_phi(d)))
    return tuple(out)


def _normalize(order: int, num: Sequence[int], den: int) -> tuple[tuple[int, ...], int]:
    if den == 0:
        raise DivisionByZero("zero denominator")
    if den < 0:
        num = [-x for x in num]
        den = -den
    g = math.gcd(den, *num)
    if g > 1:
        num = [x // g for x in num]
        den //= g
    if not any(num):
        den = 1
    return tuple(num), den


def _reduce_powers(order: int, by_power: Mapping[int, int]) -> list[int]:
    table = _power_table(order)
    out = [0] * euler_phi(order)
    for k, c in by_power.items():
        if c:
            row = table[k % order]
            for j, r in enumerate(row):
                if r:
                    out[j] += c * r
    return out


# --------------------------------------------------------------------------


class CycScalar:
    """Element of Q(zeta_N) in canonical reduced form; immutable."""

    __slots__ = ("_order", "_num", "_den")

    def __init__(self, order: int, num: Sequence[int], den: int = 1) -> None:
        if order < 1:
            raise BadOrder(f"cyclotomic order must be positive, got {order}")
        if len(num) != euler_phi(order):
            raise ValueError(f"expected {euler_phi(order)} coordinates at order {order}")
        self._order = order
        self._num, self._den = _normalize(order, num, den)

    @classmethod
    def _raw(cls, order: int, num: tuple[int, ...], den: int) -> CycScalar:
        obj = object.__new__(cls)
        obj._order = order
        obj._num, obj._den = _normalize(order, num, den)
        return obj

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_coeffs(cls, coeffs: Sequence[Rational], order: int) -> CycScalar:
        """From reduced-basis coordinates (length phi(order))."""
        fr = [Fraction(c) for c in coeffs]
        den = math.lcm(*(c.denominator for c in fr)) if fr else 1
        return cls(order, [int(c * den) for c in fr], den)

    @classmethod
    def from_powers(cls, powers: Mapping[int, Rational] | Sequence[Rational], order: int) -> CycScalar:
        """From coefficients of arbitrary powers of zeta_order (reduced here)."""
        if order < 1:
            raise BadOrder(f"cyclotomic order must be positive, got {order}")
        if isinstance(powers, Mapping):
            items = list(powers.items())
        else:
            if len(powers) > order:
                raise ValueError(f"power index out of range [0, {order})")
            items = list(enumerate(powers))
        fr = [(k, Fraction(c)) for k, c in items]
        den = math.lcm(*(c.denominator for _, c in fr)) if fr else 1
        by_power: dict[int, int] = {}
        for k, c in fr:
            by_power[k % order] = by_power.get(k % order, 0) + int(c * den)
        return cls._raw(order, tuple(_reduce_powers(order, by_power)), den)

    @classmethod
    def rational(cls, q: Rational, order: int = 1) -> CycScalar:
        q = Fraction(q)
        num = [0] * euler_phi(order)
        num[0] = q.numerator
        return cls._raw(order, tuple(num), q.denominator)

    @classmethod
    def zeta(cls, order: int, power: int = 1) -> CycScalar:
        return cls.from_powers({power % order: 1}, order)

    # -- accessors ---------------------------------------------------------

    @property
    def order(self) -> int:
        return self._order

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(x, self._den) for x in self._num)

    @property
    def numerators(self) -> tuple[int, ...]:
        return self._num

    @property
    def denominator(self) -> int:
        return self._den

    def is_zero(self) -> bool:
        return not any(self._num)

    def __bool__(self) -> bool:
        return any(self._num)

    def is_rational(self) -> bool:
        return not any(self._num[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return Fraction(self._num[0], self._den)

    def to_complex(self) -> complex:
        n = self._order
        return sum(
            (x * cmath.exp(2j * cmath.pi * k / n) for k, x in enumerate(self._num) if x),
            0j,
        ) / self._den

    # -- structural ops ----------------------------------------------------

    def embed(self, order: int) -> CycScalar:
        """Image under zeta_N -> zeta_M^(M/N)."""
        n = self._order
        if order == n:
            return self
        if order < 1 or order % n:
            raise IncompatibleOrder(f"order {n} does not divide {order}")
        step = order // n
        by_power = {k * step: x for k, x in enumerate(self._num) if x}
        return CycScalar._raw(order, tuple(_reduce_powers(order, by_power)), self._den)

    def conjugate(self) -> CycScalar:
        n = self._order
        by_power = {(-k) % n: x for k, x in enumerate(self._num) if x}
        return CycScalar._raw(n, tuple(_reduce_powers(n, by_power)), self._den)

    def galois(self, k: int) -> CycScalar:
        """Apply zeta -> zeta^k for k coprime to the order."""
        n = self._order
        if math.gcd(k, n) != 1:
            raise ValueError(f"{k} is not a unit modulo {n}")
        by_power = {(j * k) % n: x for j, x in enumerate(self._num) if x}
        return CycScalar._raw(n, tuple(_reduce_powers(n, by_power)), self._den)

    def mul_zeta(self, power: int) -> CycScalar:
        """Multiply by zeta_N^power (cheap path used by the skein engine)."""
        n = self._order
        by_power = {(k + power) % n: x for k, x in enumerate(self._num) if x}
        return CycScalar._raw(n, tuple(_reduce_powers(n, by_power)), self._den)

    def inverse(self) -> CycScalar:
        if not self:
            raise DivisionByZero("inverse of zero")
        n = self._order
        if self.is_rational():
            num = [0] * euler_phi(n)
            num[0] = self._den
            return CycScalar._raw(n, tuple(num), self._num[0])
        from .linalg import solve

        phi = euler_phi(n)
        # columns: self * z^j in reduced coordinates (numerators only)
        cols = []
        for j in range(phi):
            by_power: dict[int, int] = {}
            for k, x in enumerate(self._num):
                if x:
                    by_power[k + j] = by_power.get(k + j, 0) + x
            cols.append(_reduce_powers(n, by_power))
        mat = [[Fraction(cols[j][i]) for j in range(phi)] for i in range(phi)]
        rhs = [Fraction(0)] * phi
        rhs[0] = Fraction(self._den)
        return CycScalar.from_coeffs(solve(mat, rhs), n)

    # -- arithmetic --------------------------------------------------------

    @staticmethod
    def _coerce(other: object) -> CycScalar | None:
        if isinstance(other, CycScalar):
            return other
        if isinstance(other, (int, Fraction)):
            return CycScalar.rational(other)
        return None

    def _unify(self, other: CycScalar) -> tuple[CycScalar, CycScalar]:
        if self._order == other._order:
            return self, other
        m = math.lcm(self._order, other._order)
        return self.embed(m), other.embed(m)

    def __add__(self, other: object) -> CycScalar:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self._unify(o)
        if a._den == b._den:
            num = tuple(x + y for x, y in zip(a._num, b._num))
            return CycScalar._raw(a._order, num, a._den)
        num = tuple(x * b._den + y * a._den for x, y in zip(a._num, b._num))
        return CycScalar._raw(a._order, num, a._den * b._den)

    __radd__ = __add__

    def __neg__(self) -> CycScalar:
        return CycScalar._raw(self._order, tuple(-x for x in self._num), self._den)

    def __pos__(self) -> CycScalar:
        return self

    def __sub__(self, other: object) -> CycScalar:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: object) -> CycScalar:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other: object) -> CycScalar:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_rational():
            c = o._num[0]
            return CycScalar._raw(self._order, tuple(x * c for x in self._num), self._den * o._den)
        if self.is_rational():
            c = self._num[0]
            return CycScalar._raw(o._order, tuple(x * c for x in o._num), self._den * o._den)
        a, b = self._unify(o)
        n = a._order
        phi = len(a._num)
        conv = [0] * (2 * phi - 1)
        for i, x in enumerate(a._num):
            if x:
                for j, y in enumerate(b._num):
                    if y:
                        conv[i + j] += x * y
        out = list(conv[:phi])
        table = _power_table(n)
        for k in range(phi, 2 * phi - 1):
            c = conv[k]
            if c:
                for j, r in enumerate(table[k % n]):
                    if r:
                        out[j] += c * r
        return CycScalar._raw(n, tuple(out), a._den * b._den)

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> CycScalar:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other: object) -> CycScalar:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int) -> CycScalar:
        if not isinstance(k, int):
            return NotImplemented
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        result = CycScalar.rational(1, self._order)
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # -- comparison --------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self._order == o._order:
            return self._den == o._den and self._num == o._num
        a, b = self._unify(o)
        return a._den == b._den and a._num == b._num

    def __hash__(self) -> int:
        tr = _normalized_traces(self._order)
        return hash(sum((Fraction(x) * t for x, t in zip(self._num, tr) if x), Fraction(0)) / self._den)

    # -- display -----------------------------------------------------------

    def render(self, order: int | None = None, symbol: str = "z") -> str:
        x = self if order is None else self.embed(order)
        return _render_coeffs(x.coeffs, symbol)

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"CycScalar({self.render()!r}, order={self._order})"


def _render_coeffs(coeffs: Sequence[Fraction], symbol: str = "z") -> str:
    parts: list[tuple[bool, str]] = []
    for k, c in enumerate(coeffs):
        if c == 0:
            continue
        neg = c < 0
        a = -c if neg else c
        if k == 0:
            body = str(a)
        else:
            mono = symbol if k == 1 else f"{symbol}^{k}"
            body = mono if a == 1 else f"{a}*{mono}"
        parts.append((neg, body))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] else "") + parts[0][1]
    for neg, body in parts[1:]:
        out += (" - " if neg else " + ") + body
    return out


# --------------------------------------------------------------------------
# functional surface


def make(coeff_list: Mapping[int, Rational] | Sequence[Rational], order: int) -> CycScalar:
    """Canonical element from coefficients indexed by powers of zeta_order."""
    if isinstance(coeff_list, Mapping):
        for k in coeff_list:
            if not 0 <= k < max(order, 1):
                raise ValueError(f"power {k} outside [0, {order})")
    return CycScalar.from_powers(coeff_list, order)


def zeta(order: int, power: int = 1) -> CycScalar:
    return CycScalar.zeta(order, power)


def rational(q: Rational, order: int = 1) -> CycScalar:
    return CycScalar.rational(q, order)


def field_ops(a: CycScalar, b: CycScalar, op: str) -> CycScalar:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def invert(a: CycScalar) -> CycScalar:
    return a.inverse()


def conjugate(a: CycScalar) -> CycScalar:
    return a.conjugate()


def embed(a: CycScalar, order: int) -> CycScalar:
    return a.embed(order)


def common_order(values: Iterable[CycScalar | Rational]) -> int:
    n = 1
    for v in values:
        if isinstance(v, CycScalar):
            n = math.lcm(n, v.order)
    return n


def render(a: CycScalar | Rational, order: int | None = None) -> str:
    if not isinstance(a, CycScalar):
        a = CycScalar.rational(a)
    if order is not None and order % a.order == 0:
        return a.render(order)
    return a.render()


# --------------------------------------------------------------------------
# expression parser:  expr := term (('+'|'-') term)* ; term := unary ('*' unary)*
# unary := ('+'|'-') unary | power ; power := atom ('^' int)? ;
# atom := int ('/' int)? | 'z' | '(' expr ')'

_TOKEN = re.compile(r"\s*(?:(\d+)|(z)|(\^)|([-+*/()]))")


def parse_cyc(text: str, order: int, *, line: int | None = None, source: str | None = None) -> CycScalar:
    """Parse a cyclotomic expression in ``z = zeta_order``."""
    tokens: list[tuple[str, str, int]] = []
    pos = 0
    text_stripped = text.rstrip()
    while pos < len(text_stripped):
        m = _TOKEN.match(text_stripped, pos)
        if not m:
            bad = len(text_stripped) - len(text_stripped[pos:].lstrip())
            raise ParseError(f"unexpected character {text_stripped[bad]!r} in expression",
                             line, bad + 1, source)
        col = m.start(m.lastindex) + 1
        if m.group(1):
            tokens.append(("int", m.group(1), col))
        elif m.group(2):
            tokens.append(("z", "z", col))
        elif m.group(3):
            tokens.append(("^", "^", col))
        else:
            tokens.append((m.group(4), m.group(4), col))
        pos = m.end()
    if not tokens:
        raise ParseError("empty expression", line, 1, source)

    i = 0

    def peek() -> tuple[str, str, int] | None:
        return tokens[i] if i < len(tokens) else None

    def take(kind: str) -> tuple[str, str, int]:
        nonlocal i
        t = peek()
        if t is None or t[0] != kind:
            where = t[2] if t else len(text_stripped) + 1
            found = t[1] if t else "end of expression"
            raise ParseError(f"expected {kind!r}, found {found!r}", line, where, source)
        i += 1
        return t

    z = CycScalar.zeta(order, 1)
    one = CycScalar.rational(1, order)

    def expr() -> CycScalar:
        nonlocal i
        v = term()
        while (t := peek()) is not None and t[0] in "+-":
            i += 1
            rhs = term()
            v = v + rhs if t[0] == "+" else v - rhs
        return v

    def term() -> CycScalar:
        nonlocal i
        v = unary()
        while (t := peek()) is not None and t[0] == "*":
            i += 1
            v = v * unary()
        return v

    def unary() -> CycScalar:
        nonlocal i
        t = peek()
        if t is not None and t[0] in "+-":
            i += 1
            v = unary()
            return -v if t[0] == "-" else v
        return power()

    def power() -> CycScalar:
        nonlocal i
        base = atom()
        t = peek()
        if t is not None and t[0] == "^":
            i += 1
            sign = 1
            s = peek()
            if s is not None and s[0] == "-":
                i += 1
                sign = -1
            k = int(take("int")[1]) * sign
            if base == z:
                return CycScalar.zeta(order, k)
            return base ** k
        return base

    def atom() -> CycScalar:
        nonlocal i
        t = peek()
        if t is None:
            raise ParseError("unexpected end of expression", line, len(text_stripped) + 1, source)
        if t[0] == "int":
            i += 1
            num = int(t[1])
            s = peek()
            if s is not None and s[0] == "/":
                i += 1
                den = int(take("int")[1])
                if den == 0:
                    raise ParseError("zero denominator", line, s[2], source)
                return one * Fraction(num, den)
            return one * num
        if t[0] == "z":
            i += 1
            return z
        if t[0] == "(":
            i += 1
            v = expr()
            take(")")
            return v
        raise ParseError(f"unexpected token {t[1]!r}", line, t[2], source)

    value = expr()
    if i != len(tokens):
        t = tokens[i]
        raise ParseError(f"unexpected token {t[1]!r}", line, t[2], source)
    return value
