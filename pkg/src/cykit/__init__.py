"""Exact Crane-Yetter-Kauffman invariants of closed 4-manifolds.

Scalars live in cyclotomic fields and every computation is exact.  The
coloring-sum kernel has a compiled core (``cykit._kernels``) with a numpy
fallback; ``cykit.kernels.BACKEND`` reports which one is active.
"""

from __future__ import annotations

from .category import (
    RibbonData,
    builtin,
    builtin_suite,
    check_identities,
    gauss_sum,
    global_dimension,
    has_fermion,
    pointed,
    pointed_suite,
    product,
    semion,
    svect,
    symmetric_center,
    tl,
    toric_code,
    validate,
)
from .errors import CykError, InvariantViolation, ParseError
from .frobenius import FrobeniusAlgebra, is_semisimple, window
from .kernels import BACKEND
from .link import FramedLink, LinkingMatrix, blow, handle_slide, hopf_link, kirby_color_sum, unknot, unlink
from .manifold import (
    HandlePresentation,
    ManifoldInvariants,
    builtin_manifold,
    classify_stable,
    closed_form_value,
    connected_sum,
    cyk,
    cyk_generators,
    invariants_from_presentation,
)
from .scalar import CycScalar, parse_cyc, zeta

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CycScalar",
    "CykError",
    "FramedLink",
    "FrobeniusAlgebra",
    "HandlePresentation",
    "InvariantViolation",
    "LinkingMatrix",
    "ManifoldInvariants",
    "ParseError",
    "RibbonData",
    "blow",
    "builtin",
    "builtin_manifold",
    "builtin_suite",
    "check_identities",
    "classify_stable",
    "closed_form_value",
    "connected_sum",
    "cyk",
    "cyk_generators",
    "gauss_sum",
    "global_dimension",
    "handle_slide",
    "has_fermion",
    "hopf_link",
    "invariants_from_presentation",
    "is_semisimple",
    "kirby_color_sum",
    "parse_cyc",
    "pointed",
    "pointed_suite",
    "product",
    "semion",
    "svect",
    "symmetric_center",
    "tl",
    "toric_code",
    "unknot",
    "unlink",
    "validate",
    "window",
    "zeta",
]
