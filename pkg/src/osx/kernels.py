"""Kernel backend selection.

The compiled extension is used when it imports; ``OSX_PURE_PYTHON=1`` forces
the pure-Python reference implementation.
"""
from __future__ import annotations

import os

if os.environ.get("OSX_PURE_PYTHON", "") not in ("", "0"):
    from osx._kernels_py import free_reduce, max_stretch_words

    BACKEND = "python"
else:
    try:
        from osx._kernels import free_reduce, max_stretch_words

        BACKEND = "cython"
    except ImportError:  # extension not built
        from osx._kernels_py import free_reduce, max_stretch_words

        BACKEND = "python"

__all__ = ["BACKEND", "free_reduce", "max_stretch_words"]
