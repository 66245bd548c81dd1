"""Framed links as slice words, linking matrices and Kirby moves.

A slice word is read bottom to top.  Each slice acts on the current row of
vertical strands (0-based positions in this API, 1-based in files):

* ``cup p``  inserts a new arc whose legs sit at ``p`` and ``p + 1``;
* ``cap p``  joins the strands at ``p`` and ``p + 1``;
* ``x+ p``   crosses ``p`` and ``p + 1``, the strand entering bottom-left goes over;
* ``x- p``   crosses ``p`` and ``p + 1``, the strand entering bottom-right goes over.

Components are ordered by their first cup and oriented upward along the
left leg of that cup.  Framings are explicit and authoritative; the diagram
writhe only enters as a correction factor during skein evaluation.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .category import RibbonData
from .errors import (
    BackendMismatch,
    ColorOutOfRange,
    IndexOutOfRange,
    InvariantViolation,
    MalformedDiagram,
    NotBlowDownable,
)
from .scalar import CycScalar

__all__ = [
    "Slice",
    "FramedLink",
    "LinkingMatrix",
    "Trace",
    "linking_matrix",
    "evaluate_pointed",
    "kirby_color_sum",
    "handle_slide",
    "blow",
    "unknot",
    "hopf_link",
    "unlink",
    "cable",
]

KINDS = ("cup", "cap", "x+", "x-")

Slice = tuple[str, int]


# -- linking matrices -------------------------------------------------------------


@dataclass(frozen=True)
class LinkingMatrix:
    q: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        rows = tuple(tuple(int(x) for x in row) for row in self.q)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise InvariantViolation("square", f"linking matrix rows must have length {n}")
        for i in range(n):
            for j in range(i + 1, n):
                if rows[i][j] != rows[j][i]:
                    raise InvariantViolation("symmetry", f"q[{i + 1}][{j + 1}] = {rows[i][j]} but "
                                                         f"q[{j + 1}][{i + 1}] = {rows[j][i]}")
        object.__setattr__(self, "q", rows)

    @classmethod
    def of(cls, rows: Iterable[Iterable[int]]) -> LinkingMatrix:
        return cls(tuple(tuple(r) for r in rows))

    @property
    def size(self) -> int:
        return len(self.q)

    def __len__(self) -> int:
        return len(self.q)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        return self.q[ij[0]][ij[1]]

    def as_array(self) -> np.ndarray:
        return np.array(self.q, dtype=np.int64).reshape(self.size, self.size)

    def framings(self) -> tuple[int, ...]:
        return tuple(self.q[i][i] for i in range(self.size))

    def block_sum(self, other: LinkingMatrix) -> LinkingMatrix:
        n, m = self.size, other.size
        rows = [list(r) + [0] * m for r in self.q] + [[0] * n + list(r) for r in other.q]
        return LinkingMatrix.of(rows)

    def permuted(self, perm: Sequence[tuple[int, int]]) -> LinkingMatrix:
        """Rows/columns reindexed by ``perm[new] = (old, sign)``."""
        return LinkingMatrix.of([[perm[a][1] * perm[b][1] * self.q[perm[a][0]][perm[b][0]]
                                  for b in range(len(perm))] for a in range(len(perm))])

    def __str__(self) -> str:
        return "\n".join(" ".join(str(x) for x in row) for row in self.q) if self.q else "(empty)"


# -- diagrams ------------------------------------------------------------------------


@dataclass(frozen=True)
class Trace:
    """Combinatorics of a slice word, computed once per diagram.

    Strands are identified by ``(cup ordinal, leg)``.  ``crossings`` lists
    ``(slice index, kind, left strand, right strand)`` with the strands as
    they enter the crossing from below.
    """

    cup_slices: tuple[int, ...]
    component_of_cup: tuple[int, ...]
    direction: dict
    crossings: tuple[tuple[int, str, tuple[int, int], tuple[int, int]], ...]
    levels: tuple[tuple[tuple[int, int], ...], ...]
    n_components: int

    def component(self, strand: tuple[int, int]) -> int:
        return self.component_of_cup[strand[0]]

    def crossing_sign(self, kind: str, left: tuple[int, int], right: tuple[int, int]) -> int:
        same = self.direction[left] == self.direction[right]
        s = 1 if same else -1
        return s if kind == "x+" else -s


def _trace(slices: Sequence[Slice]) -> Trace:
    row: list[tuple[int, int]] = []
    parent: list[int] = []
    cup_slices: list[int] = []
    cap_pairs: list[tuple[tuple[int, int], tuple[int, int]]] = []
    crossings = []
    levels = [()]

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for idx, (kind, p) in enumerate(slices):
        w = len(row)
        where = f"slice {idx + 1} ({kind} {p + 1})"
        if kind == "cup":
            if not 0 <= p <= w:
                raise MalformedDiagram(f"{where}: cup position outside 1..{w + 1}")
            k = len(cup_slices)
            cup_slices.append(idx)
            parent.append(k)
            row[p:p] = [(k, 0), (k, 1)]
        elif kind in ("cap", "x+", "x-"):
            if not 0 <= p < w - 1:
                raise MalformedDiagram(f"{where}: needs strands at {p + 1} and {p + 2}, row has {w}")
            a, b = row[p], row[p + 1]
            if kind == "cap":
                cap_pairs.append((a, b))
                ra, rb = find(a[0]), find(b[0])
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)
                del row[p:p + 2]
            else:
                crossings.append((idx, kind, a, b))
                row[p], row[p + 1] = b, a
        else:
            raise MalformedDiagram(f"slice {idx + 1}: unknown kind {kind!r}")
        levels.append(tuple(row))
    if row:
        raise MalformedDiagram(f"diagram ends with {len(row)} open strands")

    roots: dict[int, int] = {}
    comp_of_cup = []
    for k in range(len(cup_slices)):
        r = find(k)
        if r not in roots:
            roots[r] = len(roots)
        comp_of_cup.append(roots[r])

    cap_of: dict[tuple[int, int], tuple[int, int]] = {}
    for a, b in cap_pairs:
        cap_of[a] = b
        cap_of[b] = a
    direction: dict[tuple[int, int], int] = {}
    seen_comp = set()
    for k in range(len(cup_slices)):
        c = comp_of_cup[k]
        if c in seen_comp:
            continue
        seen_comp.add(c)
        s = (k, 0)
        while s not in direction:
            direction[s] = 1
            down = cap_of[s]
            direction[down] = -1
            s = (down[0], 1 - down[1])
    return Trace(tuple(cup_slices), tuple(comp_of_cup), direction, tuple(crossings), tuple(levels), len(roots))


@dataclass(frozen=True)
class FramedLink:
    slices: tuple[Slice, ...]
    framings: tuple[int, ...]
    name: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        sl = tuple((str(k), int(p)) for k, p in self.slices)
        object.__setattr__(self, "slices", sl)
        object.__setattr__(self, "framings", tuple(int(f) for f in self.framings))
        tr = _trace(sl)
        if len(self.framings) != tr.n_components:
            raise InvariantViolation("framings", f"{tr.n_components} components but "
                                                 f"{len(self.framings)} framings")
        object.__setattr__(self, "_trace_cache", tr)

    @classmethod
    def build(cls, slices: Iterable[Slice], framings: Iterable[int] | None = None, name: str = "") -> FramedLink:
        sl = tuple(slices)
        if framings is None:
            framings = (0,) * _trace(sl).n_components
        return cls(sl, tuple(framings), name)

    @property
    def trace(self) -> Trace:
        return self._trace_cache  # type: ignore[attr-defined]

    @property
    def n_components(self) -> int:
        return self.trace.n_components

    def __len__(self) -> int:
        return self.n_components

    @cached_property
    def max_width(self) -> int:
        return max((len(level) for level in self.trace.levels), default=0)

    def crossing_signs(self) -> list[tuple[int, int, int]]:
        """``(component a, component b, sign)`` for every crossing."""
        tr = self.trace
        return [(tr.component(a), tr.component(b), tr.crossing_sign(kind, a, b))
                for _, kind, a, b in tr.crossings]

    def writhes(self) -> tuple[int, ...]:
        w = [0] * self.n_components
        for a, b, s in self.crossing_signs():
            if a == b:
                w[a] += s
        return tuple(w)

    def linking_numbers(self) -> list[list[int]]:
        n = self.n_components
        twice = [[0] * n for _ in range(n)]
        for a, b, s in self.crossing_signs():
            if a != b:
                twice[a][b] += s
                twice[b][a] += s
        for a in range(n):
            for b in range(n):
                if twice[a][b] % 2:
                    raise MalformedDiagram(f"odd crossing count between components {a + 1} and {b + 1}")
        return [[twice[a][b] // 2 for b in range(n)] for a in range(n)]

    def with_framings(self, framings: Sequence[int]) -> FramedLink:
        return FramedLink(self.slices, tuple(framings), self.name)

    def disjoint_union(self, other: FramedLink) -> FramedLink:
        # both words are closed, so the second simply follows the first
        return FramedLink(self.slices + other.slices, self.framings + other.framings)


def linking_matrix(L: FramedLink | LinkingMatrix) -> LinkingMatrix:
    if isinstance(L, LinkingMatrix):
        return L
    lk = L.linking_numbers()
    for i, f in enumerate(L.framings):
        lk[i][i] = f
    return LinkingMatrix.of(lk)


def unknot(framing: int = 0) -> FramedLink:
    return FramedLink.build([("cup", 0), ("cap", 0)], [framing], "unknot")


def unlink(framings: Sequence[int]) -> FramedLink:
    sl: list[Slice] = []
    for _ in framings:
        sl += [("cup", 0), ("cap", 0)]
    return FramedLink.build(sl, framings, "unlink")


def hopf_link(framings: Sequence[int] = (0, 0)) -> FramedLink:
    """Hopf link with linking number +1."""
    sl = [("cup", 0), ("cup", 2), ("x-", 1), ("x-", 1), ("cap", 2), ("cap", 0)]
    return FramedLink.build(sl, framings, "hopf")


# -- cabling ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Cabled:
    """Result of replacing component ``c`` by ``widths[c]`` parallel copies.

    ``cup_tags[k] = (component, copy)`` for the k-th cup of the new word and
    ``first_cup_slice[c]`` is the index (in the new word) of the last nested
    cup emitted for component c's first cup, after which its upward block
    occupies ``first_cup_pos[c] .. + widths[c] - 1``.
    """

    slices: tuple[Slice, ...]
    cup_tags: tuple[tuple[int, int], ...]
    first_cup_slice: dict
    first_cup_pos: dict


def cable(L: FramedLink, widths: Sequence[int]) -> Cabled:
    """Blackboard cabling: copy ``k`` runs at offset ``k`` on upward strands."""
    tr = L.trace
    row: list[tuple[int, int]] = []
    out: list[Slice] = []
    tags: list[tuple[int, int]] = []
    first_slice: dict[int, int] = {}
    first_pos: dict[int, int] = {}
    cup_ord = 0

    def width(s: tuple[int, int]) -> int:
        return widths[tr.component(s)]

    def pos(p: int) -> int:
        return sum(width(s) for s in row[:p])

    for kind, p in L.slices:
        P = pos(p)
        if kind == "cup":
            k = cup_ord
            cup_ord += 1
            c = tr.component_of_cup[k]
            w = widths[c]
            left_up = tr.direction[(k, 0)] == 1
            for off in range(w):
                out.append(("cup", P + off))
                tags.append((c, off if left_up else w - 1 - off))
            if c not in first_slice and w:
                first_slice[c] = len(out) - 1
                first_pos[c] = P
            row[p:p] = [(k, 0), (k, 1)]
        elif kind == "cap":
            w = width(row[p])
            for off in reversed(range(w)):
                out.append(("cap", P + off))
            del row[p:p + 2]
        else:
            wa, wb = width(row[p]), width(row[p + 1])
            for t in reversed(range(wa)):
                for s in range(wb):
                    out.append((kind, P + t + s))
            row[p], row[p + 1] = row[p + 1], row[p]
    return Cabled(tuple(out), tuple(tags), first_slice, first_pos)


# -- pointed evaluation ------------------------------------------------------------


def _require_pointed(R: RibbonData) -> None:
    if R.pointed_data is None:
        raise BackendMismatch(f"{R.name} has no pointed backend (backend {R.backend_tag})")


def evaluate_pointed(q: FramedLink | LinkingMatrix, R: RibbonData, coloring: Sequence[int]) -> CycScalar:
    """prod theta(c_i)^q_ii * prod_{i<j} beta(c_i, c_j)^q_ij for a pointed category."""
    _require_pointed(R)
    lm = linking_matrix(q)
    n = lm.size
    if len(coloring) != n:
        raise ColorOutOfRange(f"coloring has {len(coloring)} entries for {n} components")
    for c in coloring:
        if not 0 <= c < R.rank:
            raise ColorOutOfRange(f"color {c} outside 0..{R.rank - 1}")
    pd = R.pointed_data
    e = 0
    for i in range(n):
        e += lm.q[i][i] * pd.t[coloring[i]]
        for j in range(i + 1, n):
            e += lm.q[i][j] * pd.b[coloring[i]][coloring[j]]
    return CycScalar.zeta(pd.modulus, pd.scale * e).embed(math.lcm(pd.modulus, R.order))


_HIST_CACHE: dict = {}
_HIST_LOCK = threading.Lock()


def _split_blocks(q: np.ndarray) -> list[list[int]]:
    n = q.shape[0]
    seen = [False] * n
    blocks = []
    for s in range(n):
        if seen[s]:
            continue
        stack, comp = [s], []
        seen[s] = True
        while stack:
            v = stack.pop()
            comp.append(v)
            for u in range(n):
                if not seen[u] and q[v, u]:
                    seen[u] = True
                    stack.append(u)
        blocks.append(sorted(comp))
    return blocks


def coloring_histogram(q: np.ndarray, R: RibbonData) -> np.ndarray:
    """Histogram of coloring exponents for one connected block (cached)."""
    pd = R.pointed_data
    M = pd.modulus
    qm = np.asarray(q, dtype=np.int64) % M
    key = (pd.base_key, qm.shape[0], qm.tobytes())
    hist = _HIST_CACHE.get(key)
    if hist is None:
        hist = kernels.coloring_histogram(qm, np.array(pd.t, dtype=np.int64),
                                          np.array(pd.b, dtype=np.int64).reshape(len(pd.t), len(pd.t)), M)
        hist.setflags(write=False)
        with _HIST_LOCK:
            hist = _HIST_CACHE.setdefault(key, hist)
    return hist


def clear_cache() -> None:
    with _HIST_LOCK:
        _HIST_CACHE.clear()


def _pointed_sum(lm: LinkingMatrix, R: RibbonData) -> CycScalar:
    pd = R.pointed_data
    M = pd.modulus
    order = math.lcm(M, R.order)
    q = lm.as_array() % M
    total = CycScalar.rational(1, order)
    for block in _split_blocks(q):
        hist = coloring_histogram(q[np.ix_(block, block)], R)
        powers: dict[int, int] = {}
        for k in np.nonzero(hist)[0]:
            e = (pd.scale * int(k)) % M
            powers[e] = powers.get(e, 0) + int(hist[k])
        total = total * CycScalar.from_powers(powers, M).embed(order)
        if total.is_zero():
            break
    return total


def kirby_color_sum(p: FramedLink | LinkingMatrix, R: RibbonData, *, width_cap: int = 16) -> CycScalar:
    """sum over colorings of (prod d_{c_i}) times the colored link evaluation."""
    if R.pointed_data is not None:
        return _pointed_sum(linking_matrix(p), R)
    if R.backend_tag == "tl" and isinstance(p, FramedLink):
        from .tl import kirby_color_sum_tl
        return kirby_color_sum_tl(p, R, width_cap=width_cap)
    if R.backend_tag == "tl":
        raise BackendMismatch("the Temperley-Lieb backend needs a link diagram, not a matrix")
    if R.factors:
        # colorings of a Deligne product are pairs, so the sum factors
        total = CycScalar.rational(1, R.order)
        for F in R.factors:
            total = total * kirby_color_sum(p, F, width_cap=width_cap)
        return total
    raise BackendMismatch(f"no evaluation backend for {R.name} ({R.backend_tag})")


# -- Kirby moves -------------------------------------------------------------------------


def _check_index(n: int, *idx: int) -> None:
    for i in idx:
        if not 0 <= i < n:
            raise IndexOutOfRange(f"component index {i + 1} outside 1..{n}")


def _slide_matrix(lm: LinkingMatrix, i: int, j: int, sign: int) -> LinkingMatrix:
    n = lm.size
    q = [list(r) for r in lm.q]
    # E adds sign * column j to column i; q' = E^T q E
    for r in range(n):
        q[r][i] += sign * q[r][j]
    for c in range(n):
        q[i][c] += sign * q[j][c]
    return LinkingMatrix.of(q)


@dataclass(frozen=True)
class SlideResult:
    """Diagram slide output.

    ``correspondence[new] = (old, sign)``: new component ``new`` is old
    component ``old`` (the band sum for ``old == i``) with orientation
    multiplied by ``sign``.
    """

    link: FramedLink
    correspondence: tuple[tuple[int, int], ...]


def handle_slide(p, i: int, j: int, sign: int = 1):
    """Slide component ``i`` over component ``j`` (0-based).

    Matrix input returns the transformed matrix.  Diagram input returns a
    :class:`SlideResult` whose link realizes the band sum of ``i`` with a
    framing pushoff of ``j``.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    n = len(p)
    _check_index(n, i, j)
    if i == j:
        raise IndexOutOfRange("cannot slide a component over itself")
    if isinstance(p, LinkingMatrix):
        return _slide_matrix(p, i, j, sign)
    return _slide_diagram(p, i, j, sign)


def _shares_level(L: FramedLink, a: int, b: int) -> bool:
    tr = L.trace
    return any({a, b} <= {tr.component(s) for s in row} for row in tr.levels)


def _stretch(L: FramedLink, a: int, b: int) -> FramedLink:
    """Isotope so that components ``a`` and ``b`` meet a common level.

    The earlier-ending component keeps its final arc open: the two strands
    are dragged over everything to the right edge and capped at the very end.
    """
    tr = L.trace
    last = {c: max(k for k, row in enumerate(tr.levels) if any(tr.component(x) == c for x in row))
            for c in (a, b)}
    cut = min(last.values())  # the final cap of the earlier-ending component
    _, p = L.slices[cut]
    width = len(tr.levels[cut])
    drag: list[Slice] = []
    for q in range(p, width - 2):
        drag += [("x+", q + 1), ("x+", q)]
    word = list(L.slices[:cut]) + drag + list(L.slices[cut + 1:]) + [("cap", 0)]
    return FramedLink(tuple(word), L.framings, L.name)


def _slide_diagram(L: FramedLink, i: int, j: int, sign: int) -> SlideResult:
    if not _shares_level(L, i, j):
        L = _stretch(L, i, j)
    lm = linking_matrix(L)
    n = L.n_components
    widths = [1] * n
    widths[j] = 2
    cab = cable(L, widths)
    word = list(cab.slices)
    tags = list(cab.cup_tags)

    # twist the pushoff until lk(j, j') equals the framing of j
    t = L.framings[j] - L.writhes()[j]
    at, P = cab.first_cup_slice[j], cab.first_cup_pos[j]
    twist = [("x+" if t > 0 else "x-", P)] * (2 * abs(t))
    word[at + 1:at + 1] = twist

    # identity of every strand in the doubled word: (old component, copy)
    tr = _trace(word)

    def ident(s):
        return tags[s[0]]

    level = None
    for lev, row in enumerate(tr.levels):
        ids = [ident(s) for s in row]
        if (i, 0) in ids and (j, 1) in ids:
            level = lev
            break
    if level is None:  # pragma: no cover - a closed component always shares a level after cabling
        raise MalformedDiagram("no level meets both components")
    row = tr.levels[level]
    a = next(k for k, s in enumerate(row) if ident(s) == (i, 0))
    want = -tr.direction[row[a]] if sign == 1 else tr.direction[row[a]]
    cands = [k for k, s in enumerate(row) if ident(s) == (j, 1) and tr.direction[s] == want]
    b = min(cands, key=lambda k: abs(k - a))

    band: list[Slice] = []
    if a < b:
        band += [("x+", k) for k in range(a, b - 1)]
        band += [("cap", b - 1), ("cup", b - 1)]
        band += [("x-", k) for k in range(b - 2, a - 1, -1)]
    else:
        band += [("x-", k) for k in range(a - 1, b, -1)]
        band += [("cap", b), ("cup", b)]
        band += [("x+", k) for k in range(b + 1, a)]
    word[level:level] = band
    # the saddle cup belongs to the band sum; insert its tag in cup order
    cups_before = sum(1 for k, _ in word[:level] if k == "cup")
    tags.insert(cups_before, (i, 0))

    new_tr = _trace(word)
    m = new_tr.n_components
    old_of_new: list[tuple[int, int]] = [(-1, 0)] * m
    for k, (c, copy) in enumerate(tags):
        nc = new_tr.component_of_cup[k]
        old = i if (c, copy) == (j, 1) else c
        if old_of_new[nc][0] == -1:
            old_of_new[nc] = (old, 0)
    # orientation: compare the left leg of each old component's first cup
    for nc in range(m):
        old = old_of_new[nc][0]
        k = next(k for k, (c, copy) in enumerate(tags) if (c, copy) == (old, 0))
        old_of_new[nc] = (old, new_tr.direction[(k, 0)])
    framings = []
    for nc in range(m):
        old = old_of_new[nc][0]
        if old == i:
            framings.append(lm.q[i][i] + lm.q[j][j] + 2 * sign * lm.q[i][j])
        else:
            framings.append(lm.q[old][old])
    return SlideResult(FramedLink(tuple(word), tuple(framings), L.name), tuple(old_of_new))


def blow(p, direction: str, sign: int = 1, index: int | None = None):
    """Blow up (append a split unknot framed ``sign``) or blow down ``index``."""
    if direction == "up":
        if sign not in (1, -1):
            raise ValueError("blow-up sign must be +1 or -1")
        if isinstance(p, LinkingMatrix):
            return p.block_sum(LinkingMatrix.of([[sign]]))
        return p.disjoint_union(unknot(sign))
    if direction != "down":
        raise ValueError(f"direction must be up or down, got {direction!r}")
    n = len(p)
    if index is None:
        raise IndexOutOfRange("blow-down needs a component index")
    _check_index(n, index)
    lm = linking_matrix(p)
    if abs(lm.q[index][index]) != 1 or any(lm.q[index][k] for k in range(n) if k != index):
        raise NotBlowDownable(f"component {index + 1} is not a split +-1-framed unknot in the matrix")
    if isinstance(p, LinkingMatrix):
        keep = [k for k in range(n) if k != index]
        return LinkingMatrix.of([[p.q[a][b] for b in keep] for a in keep])
    return _drop_component(p, index)


def _drop_component(L: FramedLink, index: int) -> FramedLink:
    tr = L.trace
    for _, _, a, b in tr.crossings:
        if index in (tr.component(a), tr.component(b)):
            raise NotBlowDownable(f"component {index + 1} has crossings in the diagram")
    row: list[tuple[int, int]] = []
    out: list[Slice] = []
    cup = 0

    def vis(p: int) -> int:
        return sum(1 for s in row[:p] if tr.component(s) != index)

    for kind, p in L.slices:
        if kind == "cup":
            k = cup
            cup += 1
            if tr.component_of_cup[k] != index:
                out.append(("cup", vis(p)))
            row[p:p] = [(k, 0), (k, 1)]
        elif kind == "cap":
            if tr.component(row[p]) != index:
                out.append(("cap", vis(p)))
            del row[p:p + 2]
        else:
            out.append((kind, vis(p)))
            row[p], row[p + 1] = row[p + 1], row[p]
    framings = [f for k, f in enumerate(L.framings) if k != index]
    return FramedLink(tuple(out), tuple(framings), L.name)
