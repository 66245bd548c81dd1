"""Kernel selection: compiled extension when importable, numpy fallback otherwise.

Set ``CYKIT_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _kernels_py

python_histogram = _kernels_py.coloring_histogram

try:
    if os.environ.get("CYKIT_PURE_PYTHON"):
        raise ImportError("pure-Python kernels requested")
    from ._kernels import coloring_histogram as compiled_histogram
except ImportError:
    compiled_histogram = None

BACKEND = "compiled" if compiled_histogram is not None else "python"
coloring_histogram = compiled_histogram if compiled_histogram is not None else python_histogram

__all__ = ["BACKEND", "coloring_histogram", "compiled_histogram", "python_histogram"]
