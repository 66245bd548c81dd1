from __future__ import annotations

import pytest
from hypothesis import given

from cykit import category as cat
from cykit import formats as F
from cykit.errors import InvariantViolation, ParseError
from cykit.frobenius import check_axioms, group_algebra, window
from cykit.link import FramedLink, LinkingMatrix, linking_matrix
from cykit.manifold import HandlePresentation, ManifoldInvariants
from cykit.scalar import zeta

from strategies import framed_links, symmetric_matrices

HOPF = """# Hopf link
strands_start = 0
cup 1
cup 3
x- 2
x- 2
cap 3
cap 1
framing = 0,0
"""

Z2_ALGEBRA = """order = 1
basis = 1,g
m.1.1 = 1, 0
m.1.g = 0, 1
m.g.g = 1, 0
unit = 1, 0
counit = 1, 0
"""


def test_link_file():
    L = F.parse_link(HOPF)
    assert linking_matrix(L).q == ((0, 1), (1, 0))
    assert L.slices[0] == ("cup", 0)


@given(framed_links())
def test_link_round_trip(L):
    assert F.parse_link(F.render_link(L)) == L


@given(symmetric_matrices())
def test_matrix_round_trip(q):
    assert F.parse_matrix(F.render_matrix(q)) == q


def test_matrix_one_line_form():
    assert F.parse_matrix("n = 2; 0 1; 1 0") == LinkingMatrix.of([[0, 1], [1, 0]])


def test_asymmetric_matrix_names_the_invariant():
    with pytest.raises(InvariantViolation) as info:
        F.parse_matrix("n = 2\n0 1\n2 0\n")
    assert info.value.invariant == "symmetry"


@pytest.mark.parametrize(
    "text,line,col",
    [
        ("strands_start = 0\ncup 0\ncap 1\nframing = 0\n", 2, 5),
        ("strands_start = 0\nhop 1\nframing = 0\n", 2, 1),
        ("strands_start = 0\ncup x\ncap 1\nframing = 0\n", 2, 5),
        ("strands_start = 1\ncup 1\ncap 1\nframing = 0\n", 1, 17),
    ],
)
def test_link_errors_are_located(text, line, col):
    with pytest.raises(ParseError) as info:
        F.parse_link(text)
    assert (info.value.line, info.value.column) == (line, col)


@pytest.mark.parametrize(
    "text",
    ["cup 1\ncap 1\nframing = 0\n", "strands_start = 0\ncup 1\ncap 1\n", "strands_start = 0\ncup 1\nframing = 0\n",
     "strands_start = 0\ncup 1\ncap 1\nframing = 0,0\n"],
)
def test_link_structural_errors(text):
    with pytest.raises((ParseError, InvariantViolation)):
        F.parse_link(text)


@pytest.mark.parametrize(
    "text,line",
    [("n = 2\n0 1\n1\n", 3), ("n = 2\n0 1\n", 2), ("0 1\n", 1), ("n = two\n", 1), ("n = 1\nx\n", 2)],
)
def test_matrix_errors(text, line):
    with pytest.raises(ParseError) as info:
        F.parse_matrix(text)
    assert info.value.line == line


def test_algebra_file():
    A = F.parse_algebra(Z2_ALGEBRA)
    assert all(c.passed for c in check_axioms(A))
    assert window(A) == window(group_algebra(2))


def test_algebra_render_round_trip():
    A = group_algebra(3)
    B = F.parse_algebra(F.render_algebra(A))
    assert B.mult == A.mult and B.unit == A.unit and B.counit == A.counit


def test_algebra_missing_products_fall_back_to_symmetry():
    text = Z2_ALGEBRA.replace("m.1.g = 0, 1\n", "m.g.1 = 0, 1\n")
    assert F.parse_algebra(text).mult == F.parse_algebra(Z2_ALGEBRA).mult


@pytest.mark.parametrize(
    "text,line,col",
    [
        (Z2_ALGEBRA.replace("m.g.g = 1, 0", "m.g.g = 1 + q, 0"), 5, 13),
        (Z2_ALGEBRA.replace("m.g.g", "m.g.h"), 5, 1),
        (Z2_ALGEBRA.replace("unit = 1, 0", "unit = 1"), 6, 1),
        (Z2_ALGEBRA + "order = 2\n", 8, 1),
    ],
)
def test_algebra_errors(text, line, col):
    with pytest.raises(ParseError) as info:
        F.parse_algebra(text)
    assert (info.value.line, info.value.column) == (line, col)


@pytest.mark.parametrize("kind,name", [("svect", "sVect"), ("toric", "toric_code"), ("semion", "semion"),
                                       ("trivial", "trivial")])
def test_shorthand_categories(kind, name):
    assert F.parse_category(f"kind = {kind}\n").name == name


def test_pointed_category_file():
    R = F.parse_category("kind = pointed\norder = 4\ngroup = 2\ntheta.0 = 1\ntheta.1 = z\n")
    assert R.twists == (1, zeta(4))
    assert R.pointed_data is not None


def test_pointed_product_group_elements():
    text = "kind = pointed\norder = 2\ngroup = 2,2\ntheta.0:0 = 1\ntheta.1:0 = 1\ntheta.0:1 = 1\ntheta.1:1 = -1\n"
    R = F.parse_category(text)
    assert cat.gauss_sum(R, 1) == 2


def test_tl_category_file():
    assert F.parse_category("kind = tl\nlevel_r = 5\nroot_power = 3\n").name == "tl(5,3)"


def test_generic_category_file():
    text = """kind = generic
order = 1
simples = 1,f
N.1.1.1 = 1
N.1.f.f = 1
N.f.1.f = 1
N.f.f.1 = 1
dim.1 = 1
dim.f = 1
twist.1 = 1
twist.f = -1
S.1.1 = 1
S.1.f = 1
S.f.f = 1
"""
    R = F.parse_category(text)
    assert all(c.passed for c in cat.validate(R))
    assert cat.has_fermion(R)


@pytest.mark.parametrize(
    "text,line",
    [
        ("kind = pointed\norder = 4\ngroup = 2\ntheta.2 = 1\n", 4),
        ("kind = monoidal\n", 1),
        ("kind = tl\nlevel_r = three\n", 2),
        ("kind = generic\norder = 1\nsimples = 1\ndim.x = 1\n", 4),
    ],
)
def test_category_errors(text, line):
    with pytest.raises(ParseError) as info:
        F.parse_category(text)
    assert info.value.line == line


def test_manifold_files():
    p = F.parse_manifold("kind = matrix\nname = K\nn = 1\n1\n")
    assert p == HandlePresentation(LinkingMatrix.of([[1]]), name="K")
    q = F.parse_manifold("kind = link\n" + HOPF)
    assert isinstance(q.body, FramedLink)
    assert F.parse_manifold(F.render_manifold(q)) == q
    assert F.parse_manifold("kind = matrix\nh1 = 1\nn = 0\n").h1_count == 1


def test_invariants_file():
    assert F.parse_invariants("chi = 24\nsigma = -16\nspin = true\n") == ManifoldInvariants(24, -16, True)
    assert F.parse_invariants("chi = 0\nsigma = 0\npi1 = Z\n").pi1 == "Z"
    with pytest.raises(ParseError):
        F.parse_invariants("chi = 4\nsigma = 0\nspin = maybe\n")


@pytest.mark.parametrize(
    "text,kind",
    [(HOPF, "link"), ("n = 1\n1\n", "matrix"), ("kind = svect\n", "category"), ("kind = matrix\nn = 0\n", "manifold"),
     (Z2_ALGEBRA, "algebra"), ("chi = 2\nsigma = 0\n", "invariants")],
)
def test_detect_kind(text, kind):
    assert F.detect_kind(text) == kind


def test_parse_file_reports_source(tmp_path):
    p = tmp_path / "bad.link"
    p.write_text("strands_start = 0\ncup 1\ncap 9\nframing = 0\n")
    with pytest.raises(ParseError) as info:
        F.parse_file(p)
    assert info.value.source == str(p)
    assert str(p) in str(info.value)


def test_parse_file_kind_check(tmp_path):
    p = tmp_path / "c.cat"
    p.write_text("kind = svect\n")
    with pytest.raises(ParseError):
        F.parse_file(p, "manifold")
    q = tmp_path / "m.mat"
    q.write_text("n = 1\n-1\n")
    kind, value = F.parse_file(q, "manifold")
    assert kind == "manifold" and value.matrix.q == ((-1,),)
