"""Backend selection for the hot loops.

The compiled extension is used when it imports and every mask involved fits
in 64 bits; otherwise calls go to the pure-Python twin.  Set
``PGKIT_PURE_PYTHON=1`` to force the fallback.
"""
from __future__ import annotations

import os

from . import _pykernels

try:
    if os.environ.get("PGKIT_PURE_PYTHON", "") not in ("", "0"):
        raise ImportError("pure Python forced by PGKIT_PURE_PYTHON")
    from . import _kernels as _compiled
except ImportError:
    _compiled = None

BACKEND = "cython" if _compiled is not None else "python"

_FALLBACK = _pykernels


def _pick(*widths: int, backend: str | None = None):
    if backend == "python":
        return _FALLBACK
    if backend == "cython":
        if _compiled is None:
            raise RuntimeError("compiled kernels are not available")
        if max(widths, default=0) > 64:
            raise ValueError("compiled kernels need masks of at most 64 bits")
        return _compiled
    if _compiled is not None and max(widths, default=0) <= 64:
        return _compiled
    return _FALLBACK


def _width(masks) -> int:
    return max((int(m).bit_length() for m in masks), default=0)


def exact_cover(row_masks, universe, candidates, prefix=(), *, backend=None):
    impl = _pick(int(universe).bit_length(), _width(row_masks), backend=backend)
    return impl.exact_cover(row_masks, universe, candidates, tuple(prefix))


def subset_partitions(row_masks, k, universe, *, backend=None):
    impl = _pick(int(universe).bit_length(), _width(row_masks), backend=backend)
    return impl.subset_partitions(row_masks, k, universe)


def pasch_scan(table, masks, symmetrized, pruned, lo, hi, *, backend=None):
    impl = _pick(_width(masks), backend=backend)
    return impl.pasch_scan(table, masks, bool(symmetrized), bool(pruned), lo, hi)


def transversal_scan(masks, ordered, lo, hi, *, backend=None):
    impl = _pick(_width(masks), backend=backend)
    return impl.transversal_scan(masks, bool(ordered), lo, hi)


def available_backends() -> list[str]:
    return ["python"] + (["cython"] if _compiled is not None else [])
