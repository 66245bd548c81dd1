"""Closed 4-manifolds as 2-handle presentations and their CYK invariants."""

from __future__ import annotations

from dataclasses import dataclass

from . import linalg
from .category import (
    RibbonData,
    gauss_sum,
    global_dimension,
    has_fermion,
    symmetric_center,
)
from .errors import (
    ExponentNotIntegral,
    HandlesUnsupported,
    InvariantViolation,
    K3Unavailable,
    KindMismatch,
    NotRealizable,
    ParityViolation,
    RohlinViolation,
    UnsupportedPi1Fermionic,
)
from .link import FramedLink, LinkingMatrix, hopf_link, kirby_color_sum, linking_matrix, unknot
from .scalar import CycScalar

__all__ = [
    "HandlePresentation",
    "ManifoldInvariants",
    "GeneratorValues",
    "ReferenceDecomposition",
    "E8",
    "K3_MATRIX",
    "cyk",
    "invariants_from_presentation",
    "builtin_manifold",
    "connected_sum",
    "connected_sum_many",
    "classify_stable",
    "closed_form_value",
    "cyk_generators",
]


@dataclass(frozen=True)
class HandlePresentation:
    body: FramedLink | LinkingMatrix
    h1_count: int = 0
    h3_count: int = 0
    name: str = ""

    @property
    def matrix(self) -> LinkingMatrix:
        return linking_matrix(self.body)

    @property
    def n_handles(self) -> int:
        return len(self.body)

    def require_closed(self) -> None:
        if self.h1_count or self.h3_count:
            raise HandlesUnsupported(f"presentation has {self.h1_count} 1-handles and {self.h3_count} 3-handles; "
                                     f"only 2-handle presentations are evaluated")


@dataclass(frozen=True)
class ManifoldInvariants:
    chi: int
    sigma: int
    spin: bool
    pi1: str = "trivial"

    def __post_init__(self) -> None:
        if self.pi1 not in ("trivial", "Z"):
            raise InvariantViolation("pi1", f"pi1 must be 'trivial' or 'Z', got {self.pi1!r}")


@dataclass(frozen=True)
class GeneratorValues:
    z_s4: CycScalar
    zt_cp2: CycScalar
    zt_cp2bar: CycScalar
    zt_s2s2: CycScalar
    zt_k3: CycScalar | None
    fermionic: bool

    def check(self) -> None:
        problems = []
        if self.z_s4.is_zero():
            problems.append("z_s4 = 0")
        if self.zt_s2s2.is_zero():
            problems.append("zt_s2s2 = 0")
        if self.fermionic:
            if not (self.zt_cp2.is_zero() and self.zt_cp2bar.is_zero()):
                problems.append("fermionic but a CP2 value is nonzero")
            if self.zt_k3 is not None and self.zt_k3.is_zero():
                problems.append("fermionic but zt_k3 = 0")
        elif self.zt_cp2.is_zero() or self.zt_cp2bar.is_zero():
            problems.append("not fermionic but a CP2 value vanishes")
        if problems:
            raise InvariantViolation("generator values", "; ".join(problems))


@dataclass(frozen=True)
class ReferenceDecomposition:
    """Reference connected sum; ``input_s2s2`` copies of S2xS2 go on the input side."""

    a_cp2: int = 0
    a_cp2bar: int = 0
    a_s2s2: int = 0
    a_k3: int = 0
    a_k3bar: int = 0
    input_s2s2: int = 0

    def terms(self) -> list[tuple[int, str]]:
        names = [(self.a_k3, "K3"), (self.a_k3bar, "K3bar"), (self.a_s2s2, "S2xS2"),
                 (self.a_cp2, "CP2"), (self.a_cp2bar, "CP2bar")]
        return [(k, nm) for k, nm in names if k]

    def render(self) -> str:
        t = self.terms()
        return " # ".join(f"{k} * {nm}" for k, nm in t) if t else "S4"

    def invariants(self) -> ManifoldInvariants:
        """(chi, sigma, parity) of the reference sum with the input-side copies removed."""
        chi = 2 + 22 * (self.a_k3 + self.a_k3bar) + 2 * self.a_s2s2 + self.a_cp2 + self.a_cp2bar
        chi -= 2 * self.input_s2s2
        sigma = 16 * (self.a_k3bar - self.a_k3) + self.a_cp2 - self.a_cp2bar
        return ManifoldInvariants(chi, sigma, self.a_cp2 == 0 and self.a_cp2bar == 0)


# -- builtin presentations ----------------------------------------------------------------

# Cartan matrix of E8: chain 0-2-3-4-5-6-7 with node 1 attached to 3
_E8_EDGES = [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)]
E8 = tuple(tuple(2 if i == j else (-1 if (i, j) in _E8_EDGES or (j, i) in _E8_EDGES else 0)
                 for j in range(8)) for i in range(8))


def _k3_matrix() -> LinkingMatrix:
    minus_e8 = LinkingMatrix.of([[-x for x in row] for row in E8])
    H = LinkingMatrix.of([[0, 1], [1, 0]])
    m = minus_e8.block_sum(minus_e8)
    for _ in range(3):
        m = m.block_sum(H)
    return m


K3_MATRIX = _k3_matrix()


def builtin_manifold(name: str) -> HandlePresentation:
    key = name.strip().lower().replace("×", "x")
    if key == "s4":
        return HandlePresentation(FramedLink.build([], []), name="S4")
    if key == "cp2":
        return HandlePresentation(unknot(1), name="CP2")
    if key in ("cp2bar", "-cp2"):
        return HandlePresentation(unknot(-1), name="CP2bar")
    if key in ("s2xs2", "s2s2"):
        return HandlePresentation(hopf_link((0, 0)), name="S2xS2")
    if key == "k3":
        return HandlePresentation(K3_MATRIX, name="K3")
    raise KeyError(f"unknown builtin manifold {name!r}")


def connected_sum(p1: HandlePresentation, p2: HandlePresentation, *, kind: str | None = None) -> HandlePresentation:
    """Disjoint union of links, or block sum of matrices (mixed input yields a matrix)."""
    both_links = isinstance(p1.body, FramedLink) and isinstance(p2.body, FramedLink)
    if kind == "link" and not both_links:
        raise KindMismatch("a diagram-level connected sum needs two link presentations")
    if kind not in (None, "link", "matrix"):
        raise KindMismatch(f"unknown body kind {kind!r}")
    name = f"{p1.name}#{p2.name}" if p1.name and p2.name else (p1.name or p2.name)
    h1, h3 = p1.h1_count + p2.h1_count, p1.h3_count + p2.h3_count
    if both_links and kind != "matrix":
        return HandlePresentation(p1.body.disjoint_union(p2.body), h1, h3, name)
    return HandlePresentation(p1.matrix.block_sum(p2.matrix), h1, h3, name)


def connected_sum_many(parts: list[HandlePresentation]) -> HandlePresentation:
    out = builtin_manifold("S4")
    for p in parts:
        out = connected_sum(out, p)
    if parts:
        out = HandlePresentation(out.body, out.h1_count, out.h3_count, "#".join(p.name for p in parts))
    return out


# -- invariants ---------------------------------------------------------------------------


def invariants_from_presentation(p: HandlePresentation) -> ManifoldInvariants:
    p.require_closed()
    q = p.matrix.q
    return ManifoldInvariants(2 + len(q), linalg.signature(q) if q else 0,
                              all(q[i][i] % 2 == 0 for i in range(len(q))))


def cyk(p: HandlePresentation, R: RibbonData, *, width_cap: int = 16) -> CycScalar:
    """D times the Kirby-colored sum over the 2-handle link."""
    p.require_closed()
    return global_dimension(R) * kirby_color_sum(p.body, R, width_cap=width_cap)


def cyk_generators(R: RibbonData) -> GeneratorValues:
    D = global_dimension(R)
    center_dim = global_dimension(symmetric_center(R))
    k3 = None
    if R.pointed_data is not None:
        k3 = kirby_color_sum(K3_MATRIX, R)
    g = GeneratorValues(D, gauss_sum(R, 1), gauss_sum(R, -1), D * center_dim, k3, has_fermion(R))
    g.check()
    return g


# -- classification -----------------------------------------------------------------------


def _half(x: int, what: str) -> int:
    if x % 2:
        raise ExponentNotIntegral(f"{what} = {x}/2 is not an integer")
    return x // 2


def classify_stable(inv: ManifoldInvariants, stab: str = "S2S2") -> ReferenceDecomposition:
    """Reference connected sum in the stable class of ``inv``.

    Checks run in order: parity, Rohlin, realizability.
    """
    stab = stab.upper().replace("X", "")
    if stab not in ("S2S2", "CP2"):
        raise ValueError(f"stabilizer must be S2S2 or CP2, got {stab!r}")
    if inv.pi1 != "trivial":
        raise NotRealizable("the classifier covers simply connected manifolds only")
    chi, sigma = inv.chi, inv.sigma
    if (chi + sigma) % 2:
        raise ParityViolation(f"chi + sigma = {chi + sigma} is odd")
    if inv.spin and sigma % 16:
        raise RohlinViolation(f"spin with sigma = {sigma} not divisible by 16")
    if chi - 2 < abs(sigma):
        raise NotRealizable(f"b2 = {chi - 2} cannot carry signature {sigma}")
    if not inv.spin and chi == 2:
        raise NotRealizable("an odd intersection form needs b2 >= 1")
    if stab == "CP2" or not inv.spin:
        return ReferenceDecomposition(a_cp2=(chi + sigma - 2) // 2, a_cp2bar=(chi - sigma - 2) // 2)
    s = abs(sigma) // 16
    rest = (chi - 2 - 22 * s) // 2
    k3, k3bar = (s, 0) if sigma <= 0 else (0, s)
    if rest >= 0:
        return ReferenceDecomposition(a_s2s2=rest, a_k3=k3, a_k3bar=k3bar)
    return ReferenceDecomposition(a_k3=k3, a_k3bar=k3bar, input_s2s2=-rest)


def closed_form_value(g: GeneratorValues, inv: ManifoldInvariants) -> CycScalar:
    """Z(M) from generator values and (chi, sigma, spin, pi1)."""
    chi, sigma = inv.chi, inv.sigma
    if inv.pi1 == "Z":
        if g.fermionic:
            raise UnsupportedPi1Fermionic("closed form for pi1 = Z covers fermion-free theories only")
        a = _half(chi + sigma, "(chi + sigma)")
        b = _half(chi - sigma, "(chi - sigma)")
        # Z~(M) = Z(S4)^-1 Z~(CP2)^a Z~(CP2bar)^b and Z(M) = Z(S4) Z~(M)
        return g.zt_cp2 ** a * g.zt_cp2bar ** b
    if not g.fermionic:
        a = _half(chi + sigma - 2, "(chi + sigma - 2)")
        b = _half(chi - sigma - 2, "(chi - sigma - 2)")
        return g.z_s4 * g.zt_cp2 ** a * g.zt_cp2bar ** b
    if not inv.spin:
        return g.z_s4 * 0
    if sigma % 16:
        raise RohlinViolation(f"spin with sigma = {sigma} not divisible by 16")
    e_k3 = -sigma // 16
    e_s2 = _half(chi - 2 + 11 * sigma // 8, "(chi - 2 + 11 sigma/8)")
    if e_k3 == 0:
        return g.z_s4 * g.zt_s2s2 ** e_s2
    if g.zt_k3 is None:
        raise K3Unavailable("no K3 generator value for this backend")
    return g.z_s4 * g.zt_k3 ** e_k3 * g.zt_s2s2 ** e_s2
