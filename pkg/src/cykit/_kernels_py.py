"""Pure-Python (numpy) fallback for the coloring-sum kernel.

Same contract as the compiled ``coloring_histogram``: histogram over
``G^n`` of ``sum_i q_ii t[c_i] + sum_{i<j} q_ij b[c_i, c_j] mod M``.
The trailing variables are enumerated as one vectorized block; leading
variables (only when the block would be too large) are looped in Python.
"""

from __future__ import annotations

import itertools

import numpy as np

BLOCK_LIMIT = 1 << 21


def _axis_view(table: np.ndarray, axes: tuple[int, ...], ndim: int) -> np.ndarray:
    """Reshape ``table`` so its dimensions sit on ``axes`` of an ``ndim`` tensor."""
    shape = [1] * ndim
    for ax, size in zip(axes, table.shape):
        shape[ax] = size
    return table.reshape(shape)


def coloring_histogram(q, t, b, modulus: int) -> np.ndarray:
    q = np.asarray(q, dtype=np.int64) % modulus
    t = np.asarray(t, dtype=np.int64) % modulus
    b = np.asarray(b, dtype=np.int64) % modulus
    n = q.shape[0]
    m = t.shape[0]
    hist = np.zeros(modulus, dtype=np.int64)
    if n == 0:
        hist[0] = 1
        return hist
    if m == 0:
        return hist

    inner = n
    while inner > 1 and m ** inner > BLOCK_LIMIT:
        inner -= 1
    outer = n - inner

    # exponents over the trailing variables, built by broadcast adds of small
    # tables; each term is below the modulus, so one reduction at the end suffices
    terms = n * (n + 1) // 2 + 1
    dtype = np.int16 if terms * modulus < np.iinfo(np.int16).max else np.int32
    block = np.zeros((m,) * inner, dtype=dtype)
    for a in range(inner):
        k = outer + a
        block += _axis_view(((q[k, k] * t) % modulus).astype(dtype), (a,), inner)
        for bb in range(a):
            i = outer + bb
            if q[i, k]:
                block += _axis_view(((q[i, k] * b) % modulus).astype(dtype), (bb, a), inner)

    for outer_colors in itertools.product(range(m), repeat=outer):
        const = 0
        for i in range(outer):
            const += q[i, i] * t[outer_colors[i]]
            for j in range(i + 1, outer):
                const += q[i, j] * b[outer_colors[i], outer_colors[j]]
        total = block + dtype(const % modulus)
        for a in range(inner):
            k = outer + a
            lin = np.zeros(m, dtype=np.int64)
            for i in range(outer):
                if q[i, k]:
                    lin += q[i, k] * b[outer_colors[i]]
            if lin.any():
                total += _axis_view((lin % modulus).astype(dtype), (a,), inner)
        hist += np.bincount((total % modulus).ravel(), minlength=modulus)
    return hist
