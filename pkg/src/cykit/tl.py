"""Skein evaluation of colored framed links in Temperley-Lieb categories.

States are linear combinations of planar perfect matchings (cup diagrams on
the current row of strands).  Coefficients live in the group ring
``Z[x]/(x^N - 1)`` with ``x = zeta_N``, ``N = 4r``, stored as integer
vectors and reduced modulo the cyclotomic polynomial after every slice so
they stay small.  Jones-Wenzl projectors are expanded once per
``(r, root_power, n)`` and kept with a single integer denominator.
"""

from __future__ import annotations

import itertools
import math
import threading
from functools import lru_cache
from typing import Sequence

import numpy as np

from .category import RibbonData, quantum_integer
from .errors import BackendMismatch, ColorOutOfRange, ResourceLimit
from .link import FramedLink, cable
from .scalar import CycScalar, _power_table, euler_phi

__all__ = ["evaluate_tl", "kirby_color_sum_tl", "jones_wenzl", "tl_diagrams", "compose", "DEFAULT_WIDTH_CAP"]

DEFAULT_WIDTH_CAP = 16

Matching = tuple[int, ...]


# -- planar matchings ------------------------------------------------------------


@lru_cache(maxsize=1 << 18)
def _cup(m: Matching, p: int) -> Matching:
    shift = [x if x < p else x + 2 for x in range(len(m))]
    out = [0] * (len(m) + 2)
    for x, y in enumerate(m):
        out[shift[x]] = shift[y]
    out[p], out[p + 1] = p + 1, p
    return tuple(out)


@lru_cache(maxsize=1 << 18)
def _cap(m: Matching, p: int) -> tuple[Matching, int]:
    """Join strands p and p+1; returns the new matching and closed-loop count."""
    a, b = m[p], m[p + 1]
    lst = list(m)
    loops = 0
    if a == p + 1:
        loops = 1
    else:
        lst[a], lst[b] = b, a
    keep = [x for x in range(len(m)) if x not in (p, p + 1)]
    new = {x: k for k, x in enumerate(keep)}
    return tuple(new[lst[x]] for x in keep), loops


@lru_cache(maxsize=1 << 18)
def _hook(m: Matching, p: int) -> tuple[Matching, int]:
    """Apply e_p (cap then cup at p)."""
    capped, loops = _cap(m, p)
    return _cup(capped, p), loops


@lru_cache(maxsize=1 << 18)
def _glue(m: Matching, P: int, d: Matching) -> tuple[Matching, int]:
    """Stack the TL_n diagram ``d`` on strands P..P+n-1 of the cup diagram ``m``.

    ``d`` matches 2n points: bottom 0..n-1, top n..2n-1.
    """
    w = len(m)
    n = len(d) // 2
    # outer points, in output order: ("s", x) for x outside the block, ("d", n + i) for tops
    outer = [("s", x) for x in range(P)] + [("d", n + i) for i in range(n)] + [("s", x) for x in range(P + n, w)]
    pos = {pt: k for k, pt in enumerate(outer)}
    out = [0] * len(outer)
    visited_glue = set()
    for pt in outer:
        side, x = pt
        while True:
            if side == "s":
                y = m[x]
                if not P <= y < P + n:
                    end = ("s", y)
                    break
                visited_glue.add(y - P)
                side, x = "d", y - P
                y = d[x]
                if y >= n:
                    end = ("d", y)
                    break
                visited_glue.add(y)
                side, x = "s", P + y
            else:
                y = d[x]
                if y >= n:
                    end = ("d", y)
                    break
                visited_glue.add(y)
                side, x = "s", P + y
                y = m[x]
                if not P <= y < P + n:
                    end = ("s", y)
                    break
                visited_glue.add(y - P)
                side, x = "d", y - P
        out[pos[pt]] = pos[end]
    # every glued point off the outer paths lies on a closed loop
    loops = 0
    for g in range(n):
        if g in visited_glue:
            continue
        loops += 1
        x = g
        while True:
            visited_glue.add(x)
            y = d[x]  # bottom-to-bottom arc inside d
            visited_glue.add(y)
            z = m[P + y] - P  # back through the state
            if z == g:
                break
            x = z
    return tuple(out), loops


def identity_diagram(n: int) -> Matching:
    return tuple(list(range(n, 2 * n)) + list(range(n)))


def hook_diagram(n: int, p: int) -> Matching:
    d = list(identity_diagram(n))
    d[p], d[p + 1] = p + 1, p
    d[n + p], d[n + p + 1] = n + p + 1, n + p
    return tuple(d)


def compose(top: Matching, bottom: Matching) -> tuple[Matching, int]:
    """``top`` stacked above ``bottom`` (both TL_n diagrams)."""
    n = len(bottom) // 2
    return _glue(bottom, n, top)


def tensor_id(d: Matching) -> Matching:
    n = len(d) // 2
    idx = [x if x < n else x + 1 for x in range(2 * n)]
    out = [0] * (2 * n + 2)
    for x, y in enumerate(d):
        out[idx[x]] = idx[y]
    out[n], out[2 * n + 1] = 2 * n + 1, n
    return tuple(out)


def tl_diagrams(n: int) -> list[Matching]:
    """All planar matchings on 2n points (basis of TL_n)."""
    def rec(points: tuple[int, ...]) -> list[list[tuple[int, int]]]:
        if not points:
            return [[]]
        first = points[0]
        res = []
        for k in range(1, len(points), 2):
            inner, rest = points[1:k], points[k + 1:]
            for a in rec(inner):
                for b in rec(rest):
                    res.append([(first, points[k])] + a + b)
        return res
    # boundary order around the rectangle: bottom left-to-right, top right-to-left
    ring = tuple(range(n)) + tuple(range(2 * n - 1, n - 1, -1))
    out = []
    for pairs in rec(ring):
        d = [0] * (2 * n)
        for a, b in pairs:
            d[a], d[b] = b, a
        out.append(tuple(d))
    return out


# -- Jones-Wenzl ------------------------------------------------------------------------


class _WriteOnce:
    """Shared cache: concurrent readers, idempotent writers."""

    def __init__(self) -> None:
        self._data: dict = {}
        self._lock = threading.Lock()

    def get_or_compute(self, key, fn):
        val = self._data.get(key)
        if val is None:
            val = fn()
            with self._lock:
                val = self._data.setdefault(key, val)
        return val


_JW = _WriteOnce()


def jones_wenzl(n: int, r: int, root_power: int = 1) -> dict[Matching, CycScalar]:
    """JW_n as a combination of TL_n diagrams (Wenzl recursion), loop value -A^2 - A^-2."""
    def compute() -> dict[Matching, CycScalar]:
        N = 4 * r
        A = CycScalar.zeta(N, root_power)
        if n == 0:
            return {(): CycScalar.rational(1, N)}
        if n == 1:
            return {identity_diagram(1): CycScalar.rational(1, N)}
        prev = jones_wenzl(n - 1, r, root_power)
        k = n - 1
        delta = lambda j: (-1) ** j * quantum_integer(j + 1, A)  # noqa: E731
        if delta(k).is_zero():
            raise ColorOutOfRange(f"JW_{n} does not exist at level r={r}")
        loop = -(A ** 2) - A ** -2
        coef = delta(k - 1) / delta(k)
        lifted = {tensor_id(d): c for d, c in prev.items()}
        e = hook_diagram(n, n - 2)
        # (JW x 1) e (JW x 1)
        middle: dict[Matching, CycScalar] = {}
        for d1, c1 in lifted.items():
            de, l1 = compose(e, d1)
            for d2, c2 in lifted.items():
                d3, l2 = compose(d2, de)
                val = c1 * c2 * loop ** (l1 + l2)
                middle[d3] = middle.get(d3, CycScalar.rational(0, N)) + val
        out = dict(lifted)
        for d, c in middle.items():
            out[d] = out.get(d, CycScalar.rational(0, N)) - coef * c
        return {d: c for d, c in out.items() if not c.is_zero()}

    return _JW.get_or_compute((n, r, root_power), compute)


@lru_cache(maxsize=None)
def _jw_integral(n: int, r: int, root_power: int) -> tuple[tuple[tuple[Matching, np.ndarray], ...], int]:
    jw = jones_wenzl(n, r, root_power)
    N = 4 * r
    den = math.lcm(*(c.embed(N).denominator for c in jw.values()))
    terms = []
    for d, c in jw.items():
        c = c.embed(N)
        vec = np.zeros(N, dtype=np.int64)
        scale = den // c.denominator
        for k, x in enumerate(c.numerators):
            vec[k] = x * scale
        terms.append((d, vec))
    return tuple(terms), den


# -- evaluation --------------------------------------------------------------------------


class _Ring:
    """Arithmetic helpers for Z[x]/(x^N - 1) rows reduced mod Phi_N."""

    def __init__(self, N: int, root_power: int) -> None:
        self.N = N
        self.a = root_power % N
        table = _power_table(N)
        phi = euler_phi(N)
        R = np.zeros((N, N), dtype=np.int64)
        for k in range(N):
            R[k, :phi] = table[k]
        self.reduce_mat = R

    def mul_power(self, v: np.ndarray, k: int) -> np.ndarray:
        return np.roll(v, k % self.N, axis=-1)

    def mul_loop(self, v: np.ndarray) -> np.ndarray:
        # -A^2 - A^-2
        return -np.roll(v, (2 * self.a) % self.N, axis=-1) - np.roll(v, (-2 * self.a) % self.N, axis=-1)

    def reduce(self, v: np.ndarray) -> np.ndarray:
        out = v @ self.reduce_mat
        if np.abs(out).max(initial=0) > 1 << 60:
            raise ResourceLimit("coefficient growth exceeds 64-bit range")
        return out

    def convolve(self, v: np.ndarray, c: np.ndarray) -> np.ndarray:
        out = np.zeros_like(v)
        for k in np.nonzero(c)[0]:
            out += c[k] * np.roll(v, int(k), axis=-1)
        return out


def _accumulate(keys: list[Matching], vecs: np.ndarray, N: int) -> tuple[list[Matching], np.ndarray]:
    index: dict[Matching, int] = {}
    idx = np.empty(len(keys), dtype=np.int64)
    for k, m in enumerate(keys):
        idx[k] = index.setdefault(m, len(index))
    out = np.zeros((len(index), N), dtype=np.int64)
    np.add.at(out, idx, vecs)
    return list(index), out


def _check_colors(L: FramedLink, R: RibbonData, colors: Sequence[int]) -> None:
    if len(colors) != L.n_components:
        raise ColorOutOfRange(f"{len(colors)} colors for {L.n_components} components")
    top = R.tl_params[0] - 2
    for c in colors:
        if not 0 <= c <= top:
            raise ColorOutOfRange(f"color {c} outside 0..{top}")


def evaluate_tl(L: FramedLink, R: RibbonData, colors: Sequence[int], *,
                width_cap: int = DEFAULT_WIDTH_CAP) -> CycScalar:
    """Colored framed-link value in ``tl(r, root_power)`` with explicit framing correction."""
    if R.tl_params is None:
        raise BackendMismatch(f"{R.name} is not a Temperley-Lieb category")
    _check_colors(L, R, colors)
    r, kpow = R.tl_params
    N = 4 * r
    ring = _Ring(N, kpow)
    widths = list(colors)
    cab = cable(L, widths)
    jw_after = {s: (cab.first_cup_pos[c], widths[c]) for c, s in cab.first_cup_slice.items() if widths[c] > 1}

    width = 0
    peak = 0
    for kind, _ in cab.slices:
        width += 2 if kind == "cup" else -2 if kind == "cap" else 0
        peak = max(peak, width)
    if peak > width_cap:
        raise ResourceLimit(f"cabled diagram needs {peak} strands, cap is {width_cap}")

    keys: list[Matching] = [()]
    vecs = np.zeros((1, N), dtype=np.int64)
    vecs[0, 0] = 1
    den = 1
    a = ring.a
    for idx, (kind, p) in enumerate(cab.slices):
        if kind == "cup":
            keys = [_cup(m, p) for m in keys]
        elif kind == "cap":
            new_keys, loop_rows = [], []
            for k, m in enumerate(keys):
                nm, loops = _cap(m, p)
                new_keys.append(nm)
                loop_rows.append(loops)
            lr = np.array(loop_rows, dtype=bool)
            if lr.any():
                vecs = vecs.copy()
                vecs[lr] = ring.mul_loop(vecs[lr])
            keys, vecs = _accumulate(new_keys, vecs, N)
        else:
            # x+ = A id + A^-1 e_p ; x- = A^-1 id + A e_p
            s = 1 if kind == "x+" else -1
            hooked, loop_rows = [], []
            for m in keys:
                nm, loops = _hook(m, p)
                hooked.append(nm)
                loop_rows.append(loops)
            hv = ring.mul_power(vecs, -s * a)
            lr = np.array(loop_rows, dtype=bool)
            if lr.any():
                hv[lr] = ring.mul_loop(hv[lr])
            keys, vecs = _accumulate(keys + hooked, np.vstack([ring.mul_power(vecs, s * a), hv]), N)
        if idx in jw_after:
            P, n = jw_after[idx]
            terms, jden = _jw_integral(n, r, kpow)
            den *= jden
            new_keys, rows = [], []
            for d, c in terms:
                conv = ring.convolve(vecs, c)
                for k, m in enumerate(keys):
                    nm, loops = _glue(m, P, d)
                    v = conv[k]
                    for _ in range(loops):
                        v = ring.mul_loop(v)
                    new_keys.append(nm)
                    rows.append(v)
            keys, vecs = _accumulate(new_keys, np.array(rows, dtype=np.int64).reshape(-1, N), N)
        vecs = ring.reduce(vecs)
        nz = np.any(vecs != 0, axis=1)
        if not nz.all():
            keys = [m for m, keep in zip(keys, nz) if keep]
            vecs = vecs[nz]

    phi = euler_phi(N)
    if keys:
        assert keys == [()]
        total = CycScalar(N, [int(x) for x in vecs[0, :phi]], den)
    else:
        total = CycScalar.rational(0, N)
    # framing correction: theta_c^(f - w) per component
    writhes = L.writhes()
    for comp, c in enumerate(colors):
        e = L.framings[comp] - writhes[comp]
        if c and e:
            total = total * R.twists[c] ** e
    return total


def kirby_color_sum_tl(L: FramedLink, R: RibbonData, *, width_cap: int = DEFAULT_WIDTH_CAP) -> CycScalar:
    r = R.tl_params[0]
    total = CycScalar.rational(0, 4 * r)
    for colors in itertools.product(range(r - 1), repeat=L.n_components):
        weight = CycScalar.rational(1, 4 * r)
        for c in colors:
            weight = weight * R.dims[c]
        total = total + weight * evaluate_tl(L, R, colors, width_cap=width_cap)
    return total
