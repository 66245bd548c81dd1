"""Combinatorial ribbon fusion category data.

A :class:`RibbonData` carries the decategorified shadow of a ribbon fusion
category: simples, duals, fusion coefficients, quantum dimensions, twists and
the S-matrix (the 0-framed Hopf link on pairs of simples).  Builtins cover
pointed categories, Temperley-Lieb categories at roots of unity and Deligne
products of those.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Mapping, Sequence

from .errors import BadLevel, NonInvolutiveTransparentTwist, NonQuadraticForm, NotClosed
from .frobenius import Check, FrobeniusAlgebra
from .scalar import CycScalar, Rational

__all__ = [
    "PointedData",
    "RibbonData",
    "validate",
    "pointed",
    "cyclic_pointed",
    "svect",
    "semion",
    "toric_code",
    "trivial",
    "tl",
    "product",
    "builtin",
    "builtin_suite",
    "pointed_suite",
    "global_dimension",
    "gauss_sum",
    "transparent_simples",
    "symmetric_center",
    "has_fermion",
    "fusion_algebra",
    "gluck_operator",
    "check_identities",
    "quantum_integer",
]


@dataclass(frozen=True)
class PointedData:
    """Exponent tables of a pointed category's quadratic form.

    ``theta(a) = zeta_M^(scale * t[a])`` and the double braiding is
    ``beta(a, b) = zeta_M^(scale * b[a][b])``.  Forms sharing ``base_key`` share
    the tables ``t``/``b`` and differ only in ``scale``, so coloring
    histograms can be reused across them.
    """

    group: tuple[int, ...]
    elements: tuple[tuple[int, ...], ...]
    modulus: int
    t: tuple[int, ...]
    b: tuple[tuple[int, ...], ...]
    scale: int
    base_key: tuple


@dataclass(frozen=True, eq=False)
class RibbonData:
    order: int
    simples: tuple[str, ...]
    dual: tuple[int, ...]
    fusion: tuple[tuple[tuple[int, ...], ...], ...]
    dims: tuple[CycScalar, ...]
    twists: tuple[CycScalar, ...]
    smatrix: tuple[tuple[CycScalar, ...], ...]
    backend_tag: str = "generic"
    name: str = ""
    pointed_data: PointedData | None = field(default=None, repr=False)
    tl_params: tuple[int, int] | None = None
    factors: tuple[RibbonData, ...] = field(default=(), repr=False)

    @property
    def rank(self) -> int:
        return len(self.simples)

    def index(self, label: str) -> int:
        try:
            return self.simples.index(label)
        except ValueError:
            raise KeyError(f"{self.name or 'category'} has no simple {label!r}") from None

    @cached_property
    def twists_inv(self) -> tuple[CycScalar, ...]:
        return tuple(t.inverse() for t in self.twists)

    def fusion_product(self, i: int, j: int) -> dict[int, int]:
        return {k: c for k, c in enumerate(self.fusion[i][j]) if c}

    def __repr__(self) -> str:
        return f"RibbonData({self.name or '?'}, rank={self.rank}, order={self.order}, {self.backend_tag})"


def _c(x: CycScalar | Rational, order: int = 1) -> CycScalar:
    return x if isinstance(x, CycScalar) else CycScalar.rational(x, order)


# -- validation ---------------------------------------------------------------


def _is_root_of_unity(x: CycScalar, order: int) -> bool:
    # roots of unity in Q(zeta_N) have order dividing lcm(2, N)
    if x.is_zero():
        return False
    L = math.lcm(2, order, x.order)
    return x ** L == 1


def validate(R: RibbonData) -> list[Check]:
    """Named pass/fail checks for every structural invariant of ``R``."""
    n = R.rank
    rng = range(n)
    N = R.fusion
    checks: list[Check] = []

    def add(name: str, ok: bool, detail: str = "") -> None:
        checks.append(Check(name, bool(ok), "" if ok else detail))

    shapes_ok = (len(R.dual) == n and len(R.dims) == n and len(R.twists) == n
                 and len(N) == n and all(len(r) == n and all(len(c) == n for c in r) for r in N)
                 and len(R.smatrix) == n and all(len(r) == n for r in R.smatrix))
    add("shapes", shapes_ok, "array sizes disagree with the number of simples")
    if not shapes_ok:
        return checks

    bad = [(j, k) for j in rng for k in rng if N[0][j][k] != (j == k) or N[j][0][k] != (j == k)]
    add("unit fusion", not bad, f"N(I,j,k) != delta(j,k) at {bad[:3]}")
    add("dual involution", all(0 <= R.dual[i] < n and R.dual[R.dual[i]] == i for i in rng) and R.dual[0] == 0,
        "dual is not an involution fixing the unit")
    bad = [i for i in rng if N[i][R.dual[i]][0] != 1]
    add("dual pairing", not bad, f"N(i, dual i, I) != 1 for {[R.simples[i] for i in bad]}")
    bad = [(i, j) for i in rng for j in rng for k in rng if N[i][j][k] < 0]
    add("fusion nonnegative", not bad, f"negative coefficient at {bad[:3]}")
    bad = [(i, j) for i in rng for j in rng if N[i][j] != N[j][i]]
    add("fusion commutative", not bad, f"N(i,j,-) != N(j,i,-) at {bad[:3]}")
    assoc_bad = []
    for i, j, k in itertools.product(rng, repeat=3):
        for m in rng:
            lhs = sum(N[i][j][p] * N[p][k][m] for p in rng)
            rhs = sum(N[j][k][p] * N[i][p][m] for p in rng)
            if lhs != rhs:
                assoc_bad.append((i, j, k, m))
                break
        if assoc_bad:
            break
    add("fusion associative", not assoc_bad, f"associativity fails at {assoc_bad[:1]}")

    bad = []
    for i in rng:
        for j in rng:
            rhs = sum((R.dims[k] * N[i][j][k] for k in rng), _c(0))
            if R.dims[i] * R.dims[j] != rhs:
                bad.append((R.simples[i], R.simples[j]))
    add("dimensions multiplicative", not bad, f"d_i d_j != sum N d_k at {bad[:3]}")
    add("dual dimensions", all(R.dims[R.dual[i]] == R.dims[i] for i in rng), "d(dual i) != d(i)")

    add("unit twist", R.twists[0] == 1, "theta_I != 1")
    bad = [R.simples[i] for i in rng if R.twists[R.dual[i]] != R.twists[i]]
    add("dual twists", not bad, f"theta(dual i) != theta(i) for {bad}")
    bad = [R.simples[i] for i in rng if not _is_root_of_unity(R.twists[i], R.order)]
    add("twists roots of unity", not bad, f"twist is not a root of unity in Q(zeta_{R.order}) for {bad}")

    S = R.smatrix
    bad = [(i, j) for i in rng for j in rng if S[i][j] != S[j][i]]
    add("smatrix symmetric", not bad, f"asymmetric at {bad[:3]}")
    bad = [R.simples[j] for j in rng if S[0][j] != R.dims[j]]
    add("smatrix unit row", not bad, f"s(I, j) != d_j for {bad}")

    add("global dimension nonzero", not global_dimension(R).is_zero(), "sum of d_i^2 vanishes")
    return checks


# -- builders -----------------------------------------------------------------


def _group_elements(group: Sequence[int]) -> list[tuple[int, ...]]:
    return list(itertools.product(*(range(n) for n in group)))


def _element_label(a: tuple[int, ...]) -> str:
    return ":".join(str(x) for x in a)


def _discrete_log(x: CycScalar, L: int) -> int | None:
    for k in range(L):
        if CycScalar.zeta(L, k) == x:
            return k
    return None


def pointed(group: Sequence[int], theta: Mapping[tuple[int, ...] | int | str, CycScalar] | Sequence[CycScalar],
            *, order: int | None = None, labels: Sequence[str] | None = None, name: str = "",
            strict: bool = True) -> RibbonData:
    """Pointed category on the abelian group ``prod Z/n_i`` with twist ``theta``.

    ``theta`` maps elements (tuples, ints for cyclic groups, or labels) to
    twists, or lists them in mixed-radix order (last factor fastest).
    With ``strict`` a form that is not quadratic raises NonQuadraticForm;
    otherwise the data is built anyway (generic backend) so ``validate`` can
    report the failures.
    """
    group = tuple(int(n) for n in group)
    if any(n < 1 for n in group):
        raise NonQuadraticForm(f"cyclic factors must be positive, got {group}")
    elements = _group_elements(group)
    index = {a: i for i, a in enumerate(elements)}
    labels = list(labels) if labels is not None else [_element_label(a) for a in elements]
    if len(labels) != len(elements):
        raise NonQuadraticForm("label count differs from group order")

    if isinstance(theta, Mapping):
        th: list[CycScalar | None] = [None] * len(elements)
        for key, val in theta.items():
            if isinstance(key, str):
                pos = labels.index(key) if key in labels else index.get(tuple(int(x) for x in key.split(":")))
            elif isinstance(key, int):
                pos = index.get((key % group[0],)) if len(group) == 1 else None
            else:
                pos = index.get(tuple(key))
            if pos is None:
                raise NonQuadraticForm(f"theta key {key!r} is not a group element")
            th[pos] = _c(val)
        zero = tuple(0 for _ in group)
        if th[index[zero]] is None:
            th[index[zero]] = _c(1)
        missing = [labels[i] for i, x in enumerate(th) if x is None]
        if missing:
            raise NonQuadraticForm(f"theta not given for {missing}")
        thetas = [x for x in th if x is not None]
    else:
        thetas = [_c(x) for x in theta]
        if len(thetas) != len(elements):
            raise NonQuadraticForm(f"expected {len(elements)} theta values, got {len(thetas)}")

    if order is None:
        order = 1
        for x in thetas:
            order = math.lcm(order, x.order)
    n = len(elements)

    def add(a, b):
        return tuple((x + y) % m for x, y, m in zip(a, b, group))

    def neg(a):
        return tuple((-x) % m for x, m in zip(a, group))

    fusion = tuple(tuple(tuple(int(index[add(a, b)] == k) for k in range(n)) for b in elements) for a in elements)
    dual = tuple(index[neg(a)] for a in elements)
    dims = tuple(CycScalar.rational(1, order) for _ in elements)

    L = math.lcm(2, order)
    logs = [_discrete_log(x, L) for x in thetas]
    problem = None
    if any(v is None for v in logs):
        problem = "twists must be roots of unity"
    else:
        t = [int(v) for v in logs]
        if t[0] % L:
            problem = "theta(0) must be 1"
        elif any(t[i] != t[dual[i]] for i in range(n)):
            problem = "theta(-a) must equal theta(a)"
        else:
            bt = [[(t[index[add(a, b)]] - t[i] - t[j]) % L for j, b in enumerate(elements)]
                  for i, a in enumerate(elements)]
            for i, a in enumerate(elements):
                for j, b in enumerate(elements):
                    ab = index[add(a, b)]
                    if any((bt[ab][k] - bt[i][k] - bt[j][k]) % L for k in range(n)):
                        problem = "the associated braiding is not bilinear"
                        break
                if problem:
                    break

    if problem is not None:
        if strict:
            raise NonQuadraticForm(problem)
        smat = tuple(tuple(thetas[index[add(a, b)]] / (thetas[i] * thetas[j]) if not (thetas[i] * thetas[j]).is_zero()
                           else CycScalar.rational(0, order)
                           for j, b in enumerate(elements)) for i, a in enumerate(elements))
        return RibbonData(order, tuple(labels), dual, fusion, dims, tuple(thetas), smat, "generic",
                          name or f"pointed{group}")

    smat = tuple(tuple(CycScalar.zeta(L, bt[i][j]).embed(math.lcm(L, order)) for j in range(n)) for i in range(n))
    pdata = _pointed_tables(group, elements, t, bt, L)
    return RibbonData(order, tuple(labels), dual, fusion, dims, tuple(thetas), smat, "pointed",
                      name or f"pointed{group}", pdata)


def _pointed_tables(group, elements, t, bt, L) -> PointedData:
    # on a cyclic group every quadratic form is theta(a) = zeta_{2n}^(p a^2)
    if len(group) == 1:
        n = group[0]
        M = 2 * n
        big = math.lcm(L, M)
        for p in range(M):
            if all((p * a * a * (big // M) - t[a] * (big // L)) % big == 0 for a in range(n)):
                base_t = tuple(a * a % M for a in range(n))
                base_b = tuple(tuple(2 * a * b % M for b in range(n)) for a in range(n))
                return PointedData(group, tuple(elements), M, base_t, base_b, p, ("cyclic", n))
    tt = tuple(int(x) for x in t)
    bb = tuple(tuple(int(x) for x in row) for row in bt)
    return PointedData(group, tuple(elements), L, tt, bb, 1, ("table", group, tt))


def cyclic_pointed(n: int, p: int, *, name: str = "") -> RibbonData:
    """Z/n with theta(a) = zeta_{2n}^(p a^2); ``p`` must be even when n is odd."""
    if n < 1:
        raise NonQuadraticForm("group order must be positive")
    M = 2 * n
    if n % 2 and p % 2:
        raise NonQuadraticForm(f"theta(1) = zeta_{M}^{p} is not quadratic on Z/{n} (needs even p)")
    thetas = [CycScalar.zeta(M, p * a * a) for a in range(n)]
    return pointed((n,), thetas, order=M, name=name or f"Z{n}[p={p % M}]")


def cyclic_forms(n: int) -> list[int]:
    """Admissible scales p in [0, 2n) for quadratic forms on Z/n."""
    return [p for p in range(2 * n) if n % 2 == 0 or p % 2 == 0]


def svect() -> RibbonData:
    return pointed((2,), [1, -1], order=2, labels=["1", "f"], name="sVect")


def semion() -> RibbonData:
    return pointed((2,), [1, CycScalar.zeta(4)], order=4, labels=["1", "s"], name="semion")


def toric_code() -> RibbonData:
    # elements (0,0), (0,1), (1,0), (1,1) = 1, e, m, f
    return pointed((2, 2), [1, 1, 1, -1], order=2, labels=["1", "e", "m", "f"], name="toric_code")


def trivial() -> RibbonData:
    return pointed((1,), [1], order=1, labels=["1"], name="trivial")


def quantum_integer(n: int, A: CycScalar) -> CycScalar:
    """[n] = sum_{j<n} A^(2(n-1-2j)); equals (A^2n - A^-2n)/(A^2 - A^-2)."""
    total = CycScalar.rational(0, A.order)
    for j in range(abs(n)):
        total = total + A ** (2 * (abs(n) - 1 - 2 * j))
    return total if n >= 0 else -total


def tl_fusion_coefficient(a: int, b: int, c: int, r: int) -> int:
    top = r - 2
    if (a + b + c) % 2 or c < abs(a - b) or c > min(a + b, 2 * top - a - b):
        return 0
    return 1


@lru_cache(maxsize=None)
def tl(r: int, root_power: int = 1) -> RibbonData:
    """Temperley-Lieb category at A = zeta_{4r}^root_power with simples 0..r-2."""
    if r < 3:
        raise BadLevel(f"level r must be >= 3, got {r}")
    N = 4 * r
    if math.gcd(root_power, N) != 1:
        raise BadLevel(f"root_power {root_power} is not coprime to {N}")
    A = CycScalar.zeta(N, root_power)
    top = r - 2
    cols = range(top + 1)
    qi = {k: quantum_integer(k, A) for k in range((top + 1) ** 2 + 1)}
    dims = tuple((-1) ** n * qi[n + 1] for n in cols)
    twists = tuple((-1) ** n * A ** (n * n + 2 * n) for n in cols)
    smat = tuple(tuple((-1) ** (m + n) * qi[(m + 1) * (n + 1)] for n in cols) for m in cols)
    fusion = tuple(tuple(tuple(tl_fusion_coefficient(a, b, c, r) for c in cols) for b in cols) for a in cols)
    return RibbonData(N, tuple(str(n) for n in cols), tuple(cols), fusion, dims, twists, smat, "tl",
                      f"tl({r},{root_power})" if root_power != 1 else f"tl({r})", None, (r, root_power))


def product(R1: RibbonData, R2: RibbonData) -> RibbonData:
    """Deligne product with componentwise data; pointed x pointed stays pointed."""
    if R1.pointed_data is not None and R2.pointed_data is not None:
        p1, p2 = R1.pointed_data, R2.pointed_data
        group = p1.group + p2.group
        order = math.lcm(R1.order, R2.order)
        thetas = [R1.twists[i] * R2.twists[j] for i in range(R1.rank) for j in range(R2.rank)]
        labels = [f"({x},{y})" for x in R1.simples for y in R2.simples]
        return pointed(group, thetas, order=order, labels=labels, name=f"{R1.name}*{R2.name}")
    pairs = [(i, j) for i in range(R1.rank) for j in range(R2.rank)]
    idx = {p: k for k, p in enumerate(pairs)}
    fusion = tuple(tuple(tuple(R1.fusion[a][c][e] * R2.fusion[b][d][f] for (e, f) in pairs)
                         for (c, d) in pairs) for (a, b) in pairs)
    return RibbonData(
        order=math.lcm(R1.order, R2.order),
        simples=tuple(f"({R1.simples[i]},{R2.simples[j]})" for i, j in pairs),
        dual=tuple(idx[(R1.dual[i], R2.dual[j])] for i, j in pairs),
        fusion=fusion,
        dims=tuple(R1.dims[i] * R2.dims[j] for i, j in pairs),
        twists=tuple(R1.twists[i] * R2.twists[j] for i, j in pairs),
        smatrix=tuple(tuple(R1.smatrix[a][c] * R2.smatrix[b][d] for (c, d) in pairs) for (a, b) in pairs),
        backend_tag="product",
        name=f"{R1.name}*{R2.name}",
        factors=(R1, R2),
    )


_BUILTIN_NAMES = {
    "svect": svect,
    "semion": semion,
    "toric_code": toric_code,
    "toric": toric_code,
    "trivial": trivial,
}


def builtin(name: str) -> RibbonData:
    """Parse a builtin name.

    Accepted forms: ``svect``, ``semion``, ``toric_code``, ``trivial``,
    ``cyclic(n,p)``, ``tl(r)``, ``tl(r,k)``, ``product(X,Y)``.
    """
    s = name.strip()
    key = s.lower()
    if key in _BUILTIN_NAMES:
        return _BUILTIN_NAMES[key]()
    m = re.fullmatch(r"(\w+)\((.*)\)", s)
    if not m:
        raise KeyError(f"unknown builtin category {name!r}")
    head, body = m.group(1).lower(), m.group(2)
    if head == "product":
        depth = 0
        for pos, ch in enumerate(body):
            depth += ch == "("
            depth -= ch == ")"
            if ch == "," and depth == 0:
                return product(builtin(body[:pos]), builtin(body[pos + 1:]))
        raise KeyError(f"product needs two arguments: {name!r}")
    try:
        args = [int(x) for x in body.split(",")]
    except ValueError:
        raise KeyError(f"bad arguments in {name!r}") from None
    if head == "tl" and len(args) in (1, 2):
        return tl(*args)
    if head == "cyclic" and len(args) == 2:
        return cyclic_pointed(*args)
    raise KeyError(f"unknown builtin category {name!r}")


def pointed_suite(max_n: int = 8) -> list[RibbonData]:
    """Every quadratic form on Z/n for n <= max_n plus the named pointed builtins."""
    out = [cyclic_pointed(n, p) for n in range(1, max_n + 1) for p in cyclic_forms(n)]
    out += [svect(), semion(), toric_code(), product(svect(), semion()), product(svect(), toric_code())]
    return out


def builtin_suite() -> list[RibbonData]:
    """Pointed suite, tl(3..6) and Deligne products mixing sVect with modular factors."""
    out = pointed_suite()
    out += [tl(r) for r in range(3, 7)]
    out += [tl(5, 3), product(svect(), tl(3)), product(svect(), tl(4)), product(semion(), tl(3))]
    return out


# -- derived quantities --------------------------------------------------------


def global_dimension(R: RibbonData) -> CycScalar:
    total = CycScalar.rational(0, R.order)
    for d in R.dims:
        total = total + d * d
    return total


def gauss_sum(R: RibbonData, sign: int | str = 1) -> CycScalar:
    """tau^{+-} = sum_i theta_i^{+-1} d_i^2."""
    if sign in ("+", 1):
        tw = R.twists
    elif sign in ("-", -1):
        tw = R.twists_inv
    else:
        raise ValueError(f"sign must be + or -, got {sign!r}")
    total = CycScalar.rational(0, R.order)
    for t, d in zip(tw, R.dims):
        total = total + t * d * d
    return total


def transparent_simples(R: RibbonData) -> list[int]:
    """Indices X with s(X, Y) = d_X d_Y for every Y."""
    return [x for x in range(R.rank)
            if all(R.smatrix[x][y] == R.dims[x] * R.dims[y] for y in range(R.rank))]


def symmetric_center(R: RibbonData) -> RibbonData:
    keep = transparent_simples(R)
    pos = {x: i for i, x in enumerate(keep)}
    for x in keep:
        if R.dual[x] not in pos:
            raise NotClosed(f"dual of transparent {R.simples[x]} is not transparent")
        for y in keep:
            for z, c in R.fusion_product(x, y).items():
                if z not in pos:
                    raise NotClosed(f"{R.simples[x]} (x) {R.simples[y]} contains non-transparent {R.simples[z]}")
    return RibbonData(
        order=R.order,
        simples=tuple(R.simples[x] for x in keep),
        dual=tuple(pos[R.dual[x]] for x in keep),
        fusion=tuple(tuple(tuple(R.fusion[x][y][z] for z in keep) for y in keep) for x in keep),
        dims=tuple(R.dims[x] for x in keep),
        twists=tuple(R.twists[x] for x in keep),
        smatrix=tuple(tuple(R.smatrix[x][y] for y in keep) for x in keep),
        backend_tag="generic",
        name=f"Zsym({R.name})",
    )


def has_fermion(R: RibbonData) -> bool:
    found = False
    for x in transparent_simples(R):
        t = R.twists[x]
        if t == -1:
            found = True
        elif t != 1:
            raise NonInvolutiveTransparentTwist(f"transparent {R.simples[x]} has twist {t}, expected +-1")
    return found


def fusion_algebra(R: RibbonData) -> FrobeniusAlgebra:
    """Linearized Grothendieck ring with counit the indicator of the unit."""
    n = R.rank
    one = CycScalar.rational(1, R.order)
    zero = CycScalar.rational(0, R.order)
    mult = [[[one if R.fusion[i][j][k] == 1 else CycScalar.rational(R.fusion[i][j][k], R.order)
              for k in range(n)] for j in range(n)] for i in range(n)]
    e0 = [one] + [zero] * (n - 1)
    return FrobeniusAlgebra.build(R.simples, mult, e0, e0, name=f"K({R.name})")


def gluck_operator(R: RibbonData) -> list[list[CycScalar]]:
    """diag(theta_X) on the fusion algebra of the symmetric center."""
    keep = transparent_simples(R)
    zero = CycScalar.rational(0, R.order)
    return [[R.twists[x] if i == j else zero for j in range(len(keep))] for i, x in enumerate(keep)]


def check_identities(R: RibbonData) -> list[Check]:
    """Exact Gauss-sum identities per simple.

    * ``theta_Y sum_X theta_X d_X s(X,Y) = d_Y tau+`` for each Y,
    * ``tau+ tau- = D tau+(Zsym)``,
    * ``theta_Y tau+ = tau+`` for each transparent Y.
    """
    tp = gauss_sum(R, 1)
    tm = gauss_sum(R, -1)
    out = []
    for y in range(R.rank):
        acc = CycScalar.rational(0, R.order)
        for x in range(R.rank):
            acc = acc + R.twists[x] * R.dims[x] * R.smatrix[x][y]
        lhs = R.twists[y] * acc
        rhs = R.dims[y] * tp
        ok = lhs == rhs
        out.append(Check(f"s-row gauss sum [{R.simples[y]}]", ok, "" if ok else f"{lhs} != {rhs}"))
    center = symmetric_center(R)
    lhs = tp * tm
    rhs = global_dimension(R) * gauss_sum(center, 1)
    ok = lhs == rhs
    out.append(Check("gauss product", ok, "" if ok else f"{lhs} != {rhs}"))
    for y in transparent_simples(R):
        ok = R.twists[y] * tp == tp
        out.append(Check(f"transparent twist [{R.simples[y]}]", ok, "" if ok else "theta_Y tau+ != tau+"))
    return out
