"""Fault-injection hooks for soundness testing.

Every hook is off by default. Tests flip one on (via :func:`corrupt` or the
``BRAIDCONG_MUTATE`` environment variable) to confirm that the verification
suite catches a corrupted core formula instead of silently passing.
"""

from __future__ import annotations

import os
from contextlib import contextmanager

NAMES = frozenset(
    {"burau_block", "form_sign", "parity_shift", "certificate_exponent"}
)

_active: set[str] = set()


def enabled(name: str) -> bool:
    if name not in NAMES:
        raise ValueError(f"unknown mutation hook {name!r}")
    return name in _active or os.environ.get("BRAIDCONG_MUTATE") == name


@contextmanager
def corrupt(name: str):
    """Enable one mutation for the duration of a ``with`` block."""
    if name not in NAMES:
        raise ValueError(f"unknown mutation hook {name!r}")
    _active.add(name)
    try:
        yield
    finally:
        _active.discard(name)
