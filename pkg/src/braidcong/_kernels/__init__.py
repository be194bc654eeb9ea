"""Kernel backend selection.

The compiled extension is preferred when importable; the pure backend is
used otherwise, or when ``BRAIDCONG_PURE=1`` is set. Both backends share
discovery and scan order, so results are identical either way; only speed
differs (see benchmarks/bench_kernels.py).
"""

from __future__ import annotations

import os

from . import pykernels

_compiled = None
if os.environ.get("BRAIDCONG_PURE") != "1":
    try:
        from . import _core as _compiled  # type: ignore[no-redef]
    except ImportError:
        _compiled = None

BACKEND = "compiled" if _compiled is not None else "pure"


def matmul_mod(a: bytes, b: bytes, n: int, ell: int) -> bytes:
    if _compiled is not None and ell <= 256:
        return _compiled.matmul_mod(a, b, n, ell)
    return pykernels.matmul_mod(a, b, n, ell)


def bfs_closure(mults: list[bytes], n: int, ell: int, cap: int):
    if _compiled is not None and ell <= 256:
        return _compiled.bfs_closure(mults, n, ell, cap)
    return pykernels.bfs_closure(mults, n, ell, cap)


def todd_coxeter(ngens: int, relators: list[tuple[int, ...]], cap: int, strategy: str = "felsch"):
    if _compiled is not None and strategy == "felsch":
        return _compiled.todd_coxeter(ngens, relators, cap, strategy)
    return pykernels.todd_coxeter(ngens, relators, cap, strategy)
