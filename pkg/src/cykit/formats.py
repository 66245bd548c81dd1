"""Line-oriented text formats: parsers with located errors and canonical renderers.

Every format is ``key = value`` lines plus, for links and matrices, bare
payload lines.  ``#`` starts a comment.  Positions in link files are 1-based.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from . import category as cat
from .category import RibbonData
from .errors import CykError, InvariantViolation, ParseError
from .frobenius import FrobeniusAlgebra
from .link import FramedLink, LinkingMatrix
from .manifold import HandlePresentation, ManifoldInvariants
from .scalar import CycScalar, parse_cyc

__all__ = [
    "Line",
    "read_lines",
    "parse_algebra",
    "parse_category",
    "parse_link",
    "parse_matrix",
    "parse_manifold",
    "parse_invariants",
    "parse_file",
    "detect_kind",
    "render_link",
    "render_matrix",
    "render_manifold",
]


@dataclass(frozen=True)
class Line:
    number: int
    text: str
    source: str | None = None

    def error(self, message: str, column: int | None = None) -> ParseError:
        return ParseError(message, self.number, column, self.source)


def read_lines(text: str, source: str | None = None) -> list[Line]:
    out = []
    for k, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            out.append(Line(k, body, source))
    return out


_KEY = re.compile(r"^([A-Za-z_][\w.:,()+-]*)\s*=\s*(.*)$")


def _kv(line: Line) -> tuple[str, str] | None:
    m = _KEY.match(line.text)
    return (m.group(1), m.group(2).strip()) if m else None


def _int(line: Line, text: str, what: str) -> int:
    try:
        return int(text.strip())
    except ValueError:
        col = line.text.find(text.strip()) + 1 or None
        raise line.error(f"{what} must be an integer, got {text.strip()!r}", col) from None


def _ints(line: Line, text: str, what: str, sep: str = ",") -> list[int]:
    parts = [p for p in (text.split(sep) if sep else text.split())]
    return [_int(line, p, what) for p in parts if p.strip()]


def _cyc(line: Line, text: str, order: int) -> CycScalar:
    try:
        return parse_cyc(text, order, line=line.number, source=line.source)
    except ParseError as exc:
        # shift the column to the position of the expression within the line
        offset = line.text.find(text)
        col = (exc.column or 1) + max(offset, 0)
        raise ParseError(exc.message, line.number, col, line.source) from None


def _split_vector(text: str) -> list[str]:
    out, depth, cur = [], 0, ""
    for ch in text:
        if ch == "," and depth == 0:
            out.append(cur)
            cur = ""
            continue
        depth += ch == "("
        depth -= ch == ")"
        cur += ch
    out.append(cur)
    return [x.strip() for x in out]


def _collect(lines: list[Line]) -> tuple[dict[str, tuple[Line, str]], list[Line]]:
    keys: dict[str, tuple[Line, str]] = {}
    bare: list[Line] = []
    for ln in lines:
        kv = _kv(ln)
        if kv is None:
            bare.append(ln)
            continue
        k, v = kv
        if k in keys:
            raise ln.error(f"duplicate key {k!r} (first on line {keys[k][0].number})", 1)
        keys[k] = (ln, v)
    return keys, bare


def _need(keys, key: str, lines: list[Line], source: str | None) -> tuple[Line, str]:
    if key not in keys:
        last = lines[-1].number if lines else 1
        raise ParseError(f"missing required key {key!r}", last, None, source)
    return keys[key]


def _order(keys, lines, source) -> int:
    ln, v = _need(keys, "order", lines, source)
    n = _int(ln, v, "order")
    if n < 1:
        raise ln.error("order must be positive", 1)
    return n


# -- algebra -------------------------------------------------------------------------------


def parse_algebra(text: str, source: str | None = None) -> FrobeniusAlgebra:
    lines = read_lines(text, source)
    keys, bare = _collect(lines)
    if bare:
        raise bare[0].error(f"expected 'key = value', got {bare[0].text!r}", 1)
    N = _order(keys, lines, source)
    ln, v = _need(keys, "basis", lines, source)
    labels = [x.strip() for x in v.split(",") if x.strip()]
    if not labels or len(set(labels)) != len(labels):
        raise ln.error("basis must list distinct labels", 1)
    n = len(labels)
    pos = {x: i for i, x in enumerate(labels)}

    def vector(key: str) -> list[CycScalar]:
        ln, v = _need(keys, key, lines, source)
        parts = _split_vector(v)
        if len(parts) != n:
            raise ln.error(f"{key} needs {n} entries, got {len(parts)}", 1)
        return [_cyc(ln, p, N) for p in parts]

    zero = [CycScalar.rational(0, N)] * n
    mult: list[list[list[CycScalar] | None]] = [[None] * n for _ in range(n)]
    for key, (ln, _) in keys.items():
        if key.startswith("m."):
            parts = key.split(".")
            if len(parts) != 3 or parts[1] not in pos or parts[2] not in pos:
                raise ln.error(f"bad product key {key!r}; expected m.<a>.<b> with basis labels", 1)
            mult[pos[parts[1]]][pos[parts[2]]] = vector(key)
        elif key not in ("order", "basis", "unit", "counit", "name"):
            raise ln.error(f"unknown key {key!r}", 1)
    full = [[mult[i][j] if mult[i][j] is not None else (mult[j][i] if mult[j][i] is not None else zero)
             for j in range(n)] for i in range(n)]
    name = keys["name"][1] if "name" in keys else ""
    return FrobeniusAlgebra.build(labels, full, vector("unit"), vector("counit"), name=name)


def render_algebra(A: FrobeniusAlgebra) -> str:
    N = A.order
    out = [f"order = {N}", f"basis = {','.join(A.basis_labels)}"]
    for i, a in enumerate(A.basis_labels):
        for j, b in enumerate(A.basis_labels):
            out.append(f"m.{a}.{b} = " + ", ".join(x.render(N) for x in A.mult[i][j]))
    out.append("unit = " + ", ".join(x.render(N) for x in A.unit))
    out.append("counit = " + ", ".join(x.render(N) for x in A.counit))
    return "\n".join(out) + "\n"


# -- category ------------------------------------------------------------------------------


def parse_category(text: str, source: str | None = None) -> RibbonData:
    lines = read_lines(text, source)
    keys, bare = _collect(lines)
    if bare:
        raise bare[0].error(f"expected 'key = value', got {bare[0].text!r}", 1)
    ln, kind = _need(keys, "kind", lines, source)
    kind = kind.lower()
    simple = {"svect": cat.svect, "toric": cat.toric_code, "toric_code": cat.toric_code,
              "semion": cat.semion, "trivial": cat.trivial}
    if kind in simple:
        return simple[kind]()
    if kind == "tl":
        lr, r = _need(keys, "level_r", lines, source)
        k = 1
        if "root_power" in keys:
            lk, kv = keys["root_power"]
            k = _int(lk, kv, "root_power")
        return cat.tl(_int(lr, r, "level_r"), k)
    if kind == "pointed":
        N = _order(keys, lines, source)
        lg, g = _need(keys, "group", lines, source)
        group = _ints(lg, g, "group factor")
        if not group or any(x < 1 for x in group):
            raise lg.error("group factors must be positive integers", 1)
        theta = {}
        for key, (lt, v) in keys.items():
            if key.startswith("theta."):
                elt = key[len("theta."):].strip("()")
                try:
                    coords = tuple(int(x) for x in re.split(r"[:,]", elt))
                except ValueError:
                    raise lt.error(f"bad group element {elt!r}", 1) from None
                if len(coords) != len(group) or any(not 0 <= c < m for c, m in zip(coords, group)):
                    raise lt.error(f"{elt!r} is not an element of {'x'.join(f'Z/{m}' for m in group)}", 1)
                theta[coords] = _cyc(lt, v, N)
            elif key not in ("kind", "order", "group", "name"):
                raise lt.error(f"unknown key {key!r}", 1)
        name = keys["name"][1] if "name" in keys else ""
        return cat.pointed(group, theta, order=N, name=name)
    if kind == "generic":
        return _parse_generic(keys, lines, source)
    raise ln.error(f"unknown category kind {kind!r}", 1)


def _parse_generic(keys, lines, source) -> RibbonData:
    N = _order(keys, lines, source)
    ls, s = _need(keys, "simples", lines, source)
    simples = [x.strip() for x in s.split(",") if x.strip()]
    if not simples or len(set(simples)) != len(simples):
        raise ls.error("simples must list distinct labels (unit first)", 1)
    n = len(simples)
    pos = {x: i for i, x in enumerate(simples)}
    dual = list(range(n))
    fusion = [[[0] * n for _ in range(n)] for _ in range(n)]
    dims: list[CycScalar | None] = [None] * n
    twists: list[CycScalar | None] = [None] * n
    smat: list[list[CycScalar | None]] = [[None] * n for _ in range(n)]

    def labels_of(ln: Line, key: str, count: int) -> list[int]:
        parts = key.split(".")[1:]
        if len(parts) != count or any(p not in pos for p in parts):
            raise ln.error(f"bad key {key!r}: expected {count} simple label(s)", 1)
        return [pos[p] for p in parts]

    for key, (ln, v) in keys.items():
        head = key.split(".", 1)[0]
        if head == "dual":
            (x,) = labels_of(ln, key, 1)
            if v.strip() not in pos:
                raise ln.error(f"unknown simple {v.strip()!r}", 1)
            dual[x] = pos[v.strip()]
        elif head == "N":
            x, y, z = labels_of(ln, key, 3)
            fusion[x][y][z] = _int(ln, v, "fusion coefficient")
        elif head == "dim":
            (x,) = labels_of(ln, key, 1)
            dims[x] = _cyc(ln, v, N)
        elif head == "twist":
            (x,) = labels_of(ln, key, 1)
            twists[x] = _cyc(ln, v, N)
        elif head == "S":
            x, y = labels_of(ln, key, 2)
            smat[x][y] = _cyc(ln, v, N)
        elif key not in ("kind", "order", "simples", "name"):
            raise ln.error(f"unknown key {key!r}", 1)
    last = lines[-1].number if lines else 1
    for i in range(n):
        if dims[i] is None:
            raise ParseError(f"missing dim.{simples[i]}", last, None, source)
        if twists[i] is None:
            raise ParseError(f"missing twist.{simples[i]}", last, None, source)
        for j in range(n):
            if smat[i][j] is None:
                if smat[j][i] is None:
                    raise ParseError(f"missing S.{simples[i]}.{simples[j]}", last, None, source)
                smat[i][j] = smat[j][i]
    name = keys["name"][1] if "name" in keys else "generic"
    return RibbonData(N, tuple(simples), tuple(dual),
                      tuple(tuple(tuple(r) for r in plane) for plane in fusion),
                      tuple(dims), tuple(twists), tuple(tuple(r) for r in smat), "generic", name)


# -- links, matrices, manifolds -------------------------------------------------------------

_SLICE = re.compile(r"^(cup|cap|x\+|x-)\s+(\S+)$")


def _parse_link_lines(lines: list[Line], source: str | None) -> FramedLink:
    slices = []
    framings = None
    started = False
    for ln in lines:
        kv = _kv(ln)
        if kv is not None:
            k, v = kv
            if k == "strands_start":
                if _int(ln, v, "strands_start") != 0:
                    raise ln.error("strands_start must be 0 (closed diagrams only)", len(ln.text) - len(v) + 1)
                started = True
            elif k == "framing":
                framings = _ints(ln, v, "framing") if v else []
            elif k not in ("kind", "name"):
                raise ln.error(f"unknown key {k!r}", 1)
            continue
        m = _SLICE.match(ln.text)
        if not m:
            raise ln.error(f"expected 'cup|cap|x+|x- <position>', got {ln.text!r}", 1)
        p = _int(ln, m.group(2), "strand position")
        if p < 1:
            raise ln.error("strand positions are 1-based", m.start(2) + 1)
        slices.append((m.group(1), p - 1))
    last = lines[-1].number if lines else 1
    if not started:
        raise ParseError("missing header 'strands_start = 0'", lines[0].number if lines else 1, None, source)
    if framings is None:
        raise ParseError("missing footer 'framing = ...'", last, None, source)
    try:
        return FramedLink(tuple(slices), tuple(framings))
    except CykError as exc:
        if isinstance(exc, InvariantViolation):
            raise
        raise ParseError(str(exc), last, None, source) from None


def parse_link(text: str, source: str | None = None) -> FramedLink:
    return _parse_link_lines(read_lines(text, source), source)


def _parse_matrix_lines(lines: list[Line], source: str | None) -> LinkingMatrix:
    # allow "n = 2; 0 1; 1 0" on one line
    flat: list[Line] = []
    for ln in lines:
        for piece in ln.text.split(";"):
            if piece.strip():
                flat.append(Line(ln.number, piece.strip(), ln.source))
    size = None
    rows: list[list[int]] = []
    for ln in flat:
        kv = _kv(ln)
        if kv is not None:
            k, v = kv
            if k == "n":
                size = _int(ln, v, "n")
                if size < 0:
                    raise ln.error("n must be nonnegative", 1)
            elif k not in ("kind", "name"):
                raise ln.error(f"unknown key {k!r}", 1)
            continue
        if size is None:
            raise ln.error("matrix rows before 'n = <size>'", 1)
        row = _ints(ln, ln.text, "matrix entry", sep="")
        if len(row) != size:
            raise ln.error(f"row has {len(row)} entries, expected {size}", 1)
        rows.append(row)
    last = flat[-1].number if flat else 1
    if size is None:
        raise ParseError("missing 'n = <size>'", last, None, source)
    if len(rows) != size:
        raise ParseError(f"expected {size} rows, got {len(rows)}", last, None, source)
    return LinkingMatrix.of(rows)


def parse_matrix(text: str, source: str | None = None) -> LinkingMatrix:
    return _parse_matrix_lines(read_lines(text, source), source)


def parse_manifold(text: str, source: str | None = None) -> HandlePresentation:
    lines = read_lines(text, source)
    kind = name = None
    h1 = h3 = 0
    payload = []
    for ln in lines:
        kv = _kv(ln)
        if kv and kv[0] == "kind":
            kind = kv[1].lower()
        elif kv and kv[0] == "name":
            name = kv[1]
        elif kv and kv[0] in ("h1", "h3"):
            val = _int(ln, kv[1], kv[0])
            h1, h3 = (val, h3) if kv[0] == "h1" else (h1, val)
        else:
            payload.append(ln)
    if kind not in ("link", "matrix"):
        raise ParseError("manifold files need 'kind = link' or 'kind = matrix'", lines[0].number if lines else 1,
                         None, source)
    body = _parse_link_lines(payload, source) if kind == "link" else _parse_matrix_lines(payload, source)
    return HandlePresentation(body, h1, h3, name or "")


_TRUE = {"true", "yes", "1", "spin"}
_FALSE = {"false", "no", "0", "nonspin", "non-spin"}


def parse_invariants(text: str, source: str | None = None) -> ManifoldInvariants:
    lines = read_lines(text, source)
    keys, bare = _collect(lines)
    if bare:
        raise bare[0].error(f"expected 'key = value', got {bare[0].text!r}", 1)
    lc, chi = _need(keys, "chi", lines, source)
    ls, sigma = _need(keys, "sigma", lines, source)
    spin = False
    if "spin" in keys:
        lp, v = keys["spin"]
        if v.lower() in _TRUE:
            spin = True
        elif v.lower() not in _FALSE:
            raise lp.error(f"spin must be true or false, got {v!r}", 1)
    pi1 = "trivial"
    if "pi1" in keys:
        lp, v = keys["pi1"]
        if v not in ("trivial", "Z", "1", "z"):
            raise lp.error(f"pi1 must be trivial or Z, got {v!r}", 1)
        pi1 = "Z" if v in ("Z", "z") else "trivial"
    for key, (ln, _) in keys.items():
        if key not in ("chi", "sigma", "spin", "pi1", "name"):
            raise ln.error(f"unknown key {key!r}", 1)
    return ManifoldInvariants(_int(lc, chi, "chi"), _int(ls, sigma, "sigma"), spin, pi1)


# -- renderers -------------------------------------------------------------------------------


def render_link(L: FramedLink, header: Iterable[str] = ()) -> str:
    out = list(header) + ["strands_start = 0"]
    out += [f"{k} {p + 1}" for k, p in L.slices]
    out.append("framing = " + ",".join(str(f) for f in L.framings))
    return "\n".join(out) + "\n"


def render_matrix(q: LinkingMatrix, header: Iterable[str] = ()) -> str:
    out = list(header) + [f"n = {q.size}"]
    out += [" ".join(str(x) for x in row) for row in q.q]
    return "\n".join(out) + "\n"


def render_manifold(p: HandlePresentation) -> str:
    head = ["kind = link" if isinstance(p.body, FramedLink) else "kind = matrix"]
    if p.name:
        head.append(f"name = {p.name}")
    if p.h1_count:
        head.append(f"h1 = {p.h1_count}")
    if p.h3_count:
        head.append(f"h3 = {p.h3_count}")
    if isinstance(p.body, FramedLink):
        return render_link(p.body, head)
    return render_matrix(p.body, head)


# -- detection -------------------------------------------------------------------------------


def detect_kind(text: str) -> str:
    """Guess the file format: algebra, category, link, matrix, manifold or invariants."""
    keys = {}
    for ln in read_lines(text):
        kv = _kv(ln)
        if kv:
            keys.setdefault(kv[0], kv[1].lower())
    if keys.get("kind") in ("link", "matrix"):
        return "manifold"
    if "kind" in keys:
        return "category"
    if "basis" in keys:
        return "algebra"
    if "strands_start" in keys:
        return "link"
    if "n" in keys or text.strip().startswith("n"):
        return "matrix"
    if "chi" in keys:
        return "invariants"
    raise ParseError("cannot tell which file format this is", 1, None, None)


_PARSERS = {
    "algebra": parse_algebra,
    "category": parse_category,
    "link": parse_link,
    "matrix": parse_matrix,
    "manifold": parse_manifold,
    "invariants": parse_invariants,
}


def parse_file(path: str | Path, expected: str | Iterable[str] | None = None):
    """Parse ``path``; returns ``(kind, value)``."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc.strerror}", None, None, str(path)) from None
    try:
        kind = detect_kind(text)
    except ParseError:
        raise ParseError("cannot tell which file format this is", 1, None, str(path)) from None
    allowed = [expected] if isinstance(expected, str) else list(expected or [])
    if allowed and kind not in allowed:
        # a bare link or matrix is also a manifold presentation
        if "manifold" in allowed and kind in ("link", "matrix"):
            value = _PARSERS[kind](text, str(path))
            return "manifold", HandlePresentation(value)
        raise ParseError(f"expected a {' or '.join(allowed)} file, found a {kind} file", 1, None, str(path))
    return kind, _PARSERS[kind](text, str(path))
