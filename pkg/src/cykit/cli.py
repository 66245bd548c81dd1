"""Command-line entry point: ``cykit <command> [inputs] [flags]``.

Inputs are file paths; ``@name`` picks a builtin category (``@svect``,
``@tl(4)``, ``@cyclic(5,2)``) or manifold (``@CP2``, ``@K3``).  Errors print
as ``error[CODE]: message`` on stderr; exit status is 0 on success, 1 on a
domain error and 2 on a parse error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Callable, Sequence

from . import category as cat
from . import formats
from .category import RibbonData
from .errors import CykError, InvariantViolation, ParseError, SplitFieldNeeded
from .frobenius import (
    FrobeniusAlgebra,
    check_axioms,
    indecomposable_count,
    is_semisimple,
    primitive_idempotents,
    window,
)
from .link import FramedLink, LinkingMatrix, handle_slide
from .manifold import (
    HandlePresentation,
    ManifoldInvariants,
    builtin_manifold,
    classify_stable,
    closed_form_value,
    cyk,
    cyk_generators,
    invariants_from_presentation,
)
from .scalar import CycScalar

__all__ = ["main", "build_parser"]

Emit = Callable[[str], None]


class _Ctx:
    def __init__(self, args: argparse.Namespace, emit: Emit) -> None:
        self.args = args
        self.emit = emit

    def scalar(self, x: CycScalar, order: int | None = None) -> str:
        return x.render(order) if order and order % x.order == 0 else x.render()

    def approx(self, x: CycScalar) -> str:
        d = self.args.approx_digits
        z = x.to_complex()
        re_, im = round(z.real, d) + 0.0, round(z.imag, d) + 0.0
        if im == 0:
            return f"{re_:.{d}f}"
        sign = "+" if im > 0 else "-"
        return f"{re_:.{d}f} {sign} {abs(im):.{d}f}i"


# -- input resolution ------------------------------------------------------------------------


class _InputError(Exception):
    """Wraps an invariant violation met while reading input, so it exits as a parse failure."""

    def __init__(self, inner: CykError) -> None:
        super().__init__(str(inner))
        self.inner = inner


def _parse(ref: str, expected=None):
    try:
        return formats.parse_file(ref, expected)
    except InvariantViolation as exc:
        raise _InputError(exc) from None


def _load_category(ref: str) -> RibbonData:
    if ref.startswith("@"):
        try:
            return cat.builtin(ref[1:])
        except KeyError as exc:
            raise ParseError(exc.args[0], None, None, ref) from None
    _, value = _parse(ref, "category")
    return value


def _load_manifold(ref: str) -> HandlePresentation:
    if ref.startswith("@"):
        try:
            return builtin_manifold(ref[1:])
        except KeyError as exc:
            raise ParseError(exc.args[0], None, None, ref) from None
    _, value = _parse(ref, "manifold")
    return value


def _load_any(ref: str):
    if ref.startswith("@"):
        try:
            return "category", cat.builtin(ref[1:])
        except KeyError:
            return "manifold", _load_manifold(ref)
    return _parse(ref)


# -- reports ---------------------------------------------------------------------------------


def _checks(ctx: _Ctx, checks) -> bool:
    ok = True
    for c in checks:
        ok &= c.passed
        tail = f" ({c.detail})" if c.detail else ""
        ctx.emit(f"  {'ok  ' if c.passed else 'FAIL'} {c.name}{tail}")
    return ok


def _describe_presentation(ctx: _Ctx, p: HandlePresentation) -> None:
    body = p.body
    kind = "link" if isinstance(body, FramedLink) else "matrix"
    ctx.emit(f"body = {kind}")
    if isinstance(body, FramedLink):
        ctx.emit(f"components = {body.n_components}")
        ctx.emit(f"max_width = {body.max_width}")
    ctx.emit("linking_matrix = " + (str(p.matrix).replace("\n", "; ") or "(empty)"))
    if p.h1_count or p.h3_count:
        ctx.emit(f"h1 = {p.h1_count}")
        ctx.emit(f"h3 = {p.h3_count}")
        return
    inv = invariants_from_presentation(p)
    ctx.emit(f"chi = {inv.chi}")
    ctx.emit(f"sigma = {inv.sigma}")
    ctx.emit(f"spin = {str(inv.spin).lower()}")


def cmd_validate(ctx: _Ctx) -> int:
    ok = True
    for ref in ctx.args.inputs:
        kind, value = _load_any(ref)
        ctx.emit(f"[{ref}] {kind}")
        if kind == "category":
            ok &= _checks(ctx, cat.validate(value))
        elif kind == "algebra":
            ok &= _checks(ctx, check_axioms(value))
        elif kind == "invariants":
            ctx.emit(f"  chi = {value.chi}, sigma = {value.sigma}, spin = {str(value.spin).lower()}, pi1 = {value.pi1}")
        else:
            p = value if isinstance(value, HandlePresentation) else HandlePresentation(value)
            _describe_presentation(_Ctx(ctx.args, lambda s: ctx.emit("  " + s)), p)
    ctx.emit(f"result = {'valid' if ok else 'invalid'}")
    return 0 if ok else 1


def cmd_gauss(ctx: _Ctx) -> int:
    R = _load_category(ctx.args.inputs[0])
    N = R.order
    ctx.emit(f"category = {R.name}")
    ctx.emit(f"order = {N}")
    ctx.emit(f"tau+ = {ctx.scalar(cat.gauss_sum(R, 1), N)}")
    ctx.emit(f"tau- = {ctx.scalar(cat.gauss_sum(R, -1), N)}")
    ctx.emit(f"D = {ctx.scalar(cat.global_dimension(R), N)}")
    ctx.emit(f"has_fermion = {str(cat.has_fermion(R)).lower()}")
    return 0


def cmd_center(ctx: _Ctx) -> int:
    R = _load_category(ctx.args.inputs[0])
    N = R.order
    keep = cat.transparent_simples(R)
    Z = cat.symmetric_center(R)
    ctx.emit(f"category = {R.name}")
    ctx.emit("transparent = " + ", ".join(R.simples[x] for x in keep))
    ctx.emit("twists = " + ", ".join(ctx.scalar(t, N) for t in Z.twists))
    ctx.emit(f"center_dimension = {ctx.scalar(cat.global_dimension(Z), N)}")
    ctx.emit(f"has_fermion = {str(cat.has_fermion(R)).lower()}")
    G = cat.gluck_operator(R)
    ctx.emit(f"gluck_is_identity = {str(all(G[i][i] == 1 for i in range(len(G)))).lower()}")
    return 0


def _idempotents(A: FrobeniusAlgebra, cap: int) -> tuple[int, list[list[CycScalar]]] | None:
    """Split over Q(zeta_M) for the smallest M, a multiple of the algebra's order, up to ``cap``."""
    base = A.order
    M = base
    while M <= max(cap, base):
        try:
            return M, primitive_idempotents(A, order=M)
        except SplitFieldNeeded:
            M += base
    return None


def cmd_frobenius(ctx: _Ctx) -> int:
    kind, value = _load_any(ctx.args.inputs[0])
    if kind == "category":
        A = cat.fusion_algebra(value)
    elif kind == "algebra":
        A = value
    else:
        raise ParseError(f"expected an algebra or category file, found a {kind} file", 1, None, ctx.args.inputs[0])
    N = A.order
    ctx.emit(f"algebra = {A.name or 'A'}")
    ctx.emit(f"dim = {A.dim}")
    ctx.emit("axioms:")
    ok = _checks(ctx, check_axioms(A))
    if not ok:
        ctx.emit("semisimple = unknown")
        return 1
    ctx.emit("window:")
    for row in window(A):
        ctx.emit("  [" + ", ".join(ctx.scalar(x, N) for x in row) + "]")
    ss = is_semisimple(A)
    ctx.emit(f"semisimple = {str(ss).lower()}")
    if not ss:
        return 0
    ctx.emit(f"indecomposables = {indecomposable_count(A)}")
    split = _idempotents(A, ctx.args.order_cap)
    if split is None:
        ctx.emit(f"idempotents = not split over any order <= {ctx.args.order_cap}")
        return 0
    M, idems = split
    ctx.emit(f"idempotents over order {M}:")
    for e in idems:
        ctx.emit("  [" + ", ".join(ctx.scalar(x, M) for x in e) + "]")
    return 0


def cmd_cyk(ctx: _Ctx) -> int:
    R = _load_category(ctx.args.inputs[0])
    p = _load_manifold(ctx.args.inputs[1])
    v = cyk(p, R, width_cap=ctx.args.width_cap)
    ctx.emit(f"category = {R.name}")
    ctx.emit(f"manifold = {p.name or ctx.args.inputs[1]}")
    ctx.emit(f"value = {ctx.scalar(v, R.order)}")
    ctx.emit(f"approx = {ctx.approx(v)}")
    return 0


def _render_opt(ctx: _Ctx, x: CycScalar | None, N: int) -> str:
    return "unavailable" if x is None else ctx.scalar(x, N)


def cmd_generators(ctx: _Ctx) -> int:
    R = _load_category(ctx.args.inputs[0])
    g = cyk_generators(R)
    N = R.order
    ctx.emit(f"category = {R.name}")
    ctx.emit(f"z_s4 = {ctx.scalar(g.z_s4, N)}")
    ctx.emit(f"zt_cp2 = {ctx.scalar(g.zt_cp2, N)}")
    ctx.emit(f"zt_cp2bar = {ctx.scalar(g.zt_cp2bar, N)}")
    ctx.emit(f"zt_s2s2 = {ctx.scalar(g.zt_s2s2, N)}")
    ctx.emit(f"zt_k3 = {_render_opt(ctx, g.zt_k3, N)}")
    ctx.emit(f"fermionic = {str(g.fermionic).lower()}")
    return 0


def _invariants_from_args(ctx: _Ctx, inputs: Sequence[str]) -> ManifoldInvariants:
    a = ctx.args
    if inputs:
        kind, value = _load_any(inputs[0])
        if kind == "invariants":
            return value
        if kind == "manifold":
            return invariants_from_presentation(value)
        if kind in ("link", "matrix"):
            return invariants_from_presentation(HandlePresentation(value))
        raise ParseError(f"expected a manifold or invariants file, found a {kind} file", 1, None, inputs[0])
    if a.chi is None or a.sigma is None:
        raise ParseError("give --chi and --sigma, or an input file", None, None, "command line")
    return ManifoldInvariants(a.chi, a.sigma, a.spin, a.pi1)


def cmd_classify(ctx: _Ctx) -> int:
    inv = _invariants_from_args(ctx, ctx.args.inputs)
    d = classify_stable(inv, ctx.args.stab)
    ctx.emit(f"chi = {inv.chi}")
    ctx.emit(f"sigma = {inv.sigma}")
    ctx.emit(f"spin = {str(inv.spin).lower()}")
    ctx.emit(f"stabilizer = {ctx.args.stab.upper()}")
    ctx.emit(f"reference = {d.render()}")
    if d.input_s2s2:
        ctx.emit(f"input_stabilization = {d.input_s2s2} * S2xS2")
    return 0


def cmd_closed_form(ctx: _Ctx) -> int:
    R = _load_category(ctx.args.inputs[0])
    inv = _invariants_from_args(ctx, ctx.args.inputs[1:])
    g = cyk_generators(R)
    v = closed_form_value(g, inv)
    ctx.emit(f"category = {R.name}")
    ctx.emit(f"chi = {inv.chi}")
    ctx.emit(f"sigma = {inv.sigma}")
    ctx.emit(f"spin = {str(inv.spin).lower()}")
    ctx.emit(f"pi1 = {inv.pi1}")
    ctx.emit(f"value = {ctx.scalar(v, R.order)}")
    ctx.emit(f"approx = {ctx.approx(v)}")
    return 0


def cmd_slide(ctx: _Ctx) -> int:
    a = ctx.args
    if len(a.inputs) != 4:
        raise ParseError("usage: slide FILE I J SIGN (1-based handle indices, SIGN = +1 or -1)",
                         None, None, "command line")
    path, *nums = a.inputs
    try:
        i, j, s = (int(x) for x in nums)
    except ValueError:
        raise ParseError("slide indices and sign must be integers", None, None, "command line") from None
    if s not in (1, -1):
        raise ParseError("slide sign must be +1 or -1", None, None, "command line")
    p = _load_manifold(path)
    p.require_closed()
    result = handle_slide(p.body, i - 1, j - 1, s)
    body = result if isinstance(result, LinkingMatrix) else result.link
    out = HandlePresentation(body, p.h1_count, p.h3_count, p.name)
    text = formats.render_manifold(out)
    target = a.output or (None if path.startswith("@") else path)
    if target is None or target == "-":
        for line in text.rstrip("\n").split("\n"):
            ctx.emit(line)
    else:
        Path(target).write_text(text)
        ctx.emit(f"wrote {target}")
    if not isinstance(result, LinkingMatrix):
        corr = ", ".join(f"{k + 1}<-{'+' if sg > 0 else '-'}{old + 1}"
                         for k, (old, sg) in enumerate(result.correspondence))
        ctx.emit(f"components = {corr}")
    return 0


def cmd_selftest(ctx: _Ctx) -> int:
    from . import selftest

    only = [int(x) for x in ctx.args.inputs] if ctx.args.inputs else None
    ok = selftest.run(only, ctx.emit)
    ctx.emit(f"selftest = {'pass' if ok else 'fail'}")
    return 0 if ok else 1


COMMANDS: dict[str, tuple[Callable[[_Ctx], int], int, str]] = {
    "validate": (cmd_validate, 1, "check one or more input files"),
    "gauss": (cmd_gauss, 1, "Gauss sums, global dimension, fermion test"),
    "center": (cmd_center, 1, "transparent simples and the symmetric center"),
    "frobenius": (cmd_frobenius, 1, "axioms, window, semisimplicity, idempotents"),
    "cyk": (cmd_cyk, 2, "invariant of a presentation: CATEGORY MANIFOLD"),
    "generators": (cmd_generators, 1, "generator values of a category"),
    "classify": (cmd_classify, 0, "stable reference decomposition"),
    "closed-form": (cmd_closed_form, 1, "closed-form value: CATEGORY [MANIFOLD | --chi --sigma ...]"),
    "slide": (cmd_slide, 4, "handle slide: FILE I J SIGN, rewrites FILE"),
    "selftest": (cmd_selftest, 0, "run the acceptance suite"),
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cykit", description="Exact Crane-Yetter-Kauffman invariants of 4-manifolds.")
    ap.add_argument("command", choices=sorted(COMMANDS), metavar="command",
                    help="; ".join(f"{k}: {v[2]}" for k, v in COMMANDS.items()))
    ap.add_argument("inputs", nargs="*", help="input files or @builtin names")
    ap.add_argument("--order-cap", type=int, default=24, help="largest cyclotomic order tried when splitting idempotents")
    ap.add_argument("--width-cap", type=int, default=16, help="largest cabled width for the TL backend")
    ap.add_argument("--approx-digits", type=int, default=6, help="digits in 'approx =' lines")
    ap.add_argument("--chi", type=int)
    ap.add_argument("--sigma", type=int)
    ap.add_argument("--spin", action="store_true")
    ap.add_argument("--pi1", choices=("trivial", "Z"), default="trivial")
    ap.add_argument("--stab", type=str.upper, choices=("S2S2", "CP2"), default="S2S2")
    ap.add_argument("-o", "--output", help="slide: write here instead of rewriting the input ('-' for stdout)")
    return ap


def _error_line(exc: CykError) -> str:
    return f"error[{exc.code}]: {exc}"


def main(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    fn, min_inputs, _ = COMMANDS[args.command]
    if len(args.inputs) < min_inputs:
        print(f"error[P000]: {args.command} needs at least {min_inputs} input(s)", file=err)
        return 2
    lines: list[str] = []
    ctx = _Ctx(args, lines.append if args.command != "selftest" else (lambda s: print(s, file=out, flush=True)))
    try:
        code = fn(ctx)
    except ParseError as exc:
        print(_error_line(exc), file=err)
        return 2
    except _InputError as exc:
        print(_error_line(exc.inner), file=err)
        return 2
    except CykError as exc:
        print(_error_line(exc), file=err)
        return 1
    except RecursionError:
        print("error[E001]: input too deeply nested", file=err)
        return 1
    # a report is printed only once it is complete
    for line in lines:
        print(line, file=out)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
