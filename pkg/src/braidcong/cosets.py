"""Coset enumeration over finite presentations.

Puts orders on the quotients of the braid group by normal closures of
half-twist powers, and on the (2,3,m) triangle quotients. Enumeration is
always of the trivial subgroup (only total orders are needed), Felsch
strategy by default, and a completed table is re-verified in full before
an order is reported. A budget failure never claims infiniteness.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _kernels
from ._kernels.common import TC_OK, UNDEF, symbols
from .braid import BraidWord
from .errors import BudgetExceeded

DEFAULT_COSET_CAP = 2_000_000


def coset_cap(requested: int | None = None) -> int:
    if requested is not None:
        return requested
    env = os.environ.get("BRAIDCONG_COSET_CAP")
    return int(env) if env else DEFAULT_COSET_CAP


@dataclass(frozen=True)
class Presentation:
    """A finite presentation: generator count plus freely reduced relators."""

    ngens: int
    relators: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.ngens < 1:
            raise ValueError("need at least one generator")
        for rel in self.relators:
            if not rel:
                raise ValueError("empty relator")
            for s in rel:
                if s == 0 or abs(s) > self.ngens:
                    raise ValueError(f"relator letter {s} out of range")
            for a, b in zip(rel, rel[1:]):
                if a == -b:
                    raise ValueError(f"relator {rel} is not freely reduced")


@dataclass(frozen=True)
class CosetTable:
    """A completed, verified coset table for the trivial subgroup."""

    ngens: int
    order: int
    rows_defined: int
    strategy: str
    table: tuple[tuple[int, ...], ...]  # order x 2*ngens transitions


def todd_coxeter(
    presentation: Presentation,
    max_cosets: int | None = None,
    strategy: str = "felsch",
) -> CosetTable:
    """Enumerate and verify; raises BudgetExceeded when the cap is hit.

    The returned row count is the group order. Verification re-traces every
    relator at every live coset and checks each transition column is a
    permutation, so a completed-but-inconsistent table cannot slip through.
    """
    cap = coset_cap(max_cosets)
    status, order, defined, table = _kernels.todd_coxeter(
        presentation.ngens, list(presentation.relators), cap, strategy
    )
    if status != TC_OK:
        raise BudgetExceeded(
            f"coset cap {cap} exceeded ({order} live cosets so far); "
            "the group may be infinite or merely large"
        )
    _verify_table(presentation, table)
    return CosetTable(
        ngens=presentation.ngens,
        order=order,
        rows_defined=defined,
        strategy=strategy,
        table=tuple(tuple(r) for r in table),
    )


def _verify_table(presentation: Presentation, table: list[list[int]]) -> None:
    arr = np.asarray(table, dtype=np.int64)
    order = arr.shape[0]
    if (arr == UNDEF).any():
        raise AssertionError("completed table has undefined entries")
    ident = np.arange(order)
    for col in range(arr.shape[1]):
        if not np.array_equal(np.sort(arr[:, col]), ident):
            raise AssertionError("transition column is not a permutation")
    for rel in presentation.relators:
        state = ident
        for sym in symbols(rel):
            state = arr[state, sym]
        if not np.array_equal(state, ident):
            raise AssertionError(f"relator {rel} does not trace to the identity")


# -- presets ---------------------------------------------------------------


def braid_presentation(
    n: int,
    m: int,
    extra: tuple[BraidWord, ...] = (),
    augment: bool = True,
) -> Presentation:
    """Braid relations plus the m-th power of the first generator.

    All generators are conjugate, so with ``augment`` the redundant relators
    g_i^m are added for every i; this defines the same group and speeds up
    enumeration considerably.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    if m < 1:
        raise ValueError("need m >= 1")
    rels: list[tuple[int, ...]] = []
    for i in range(1, n - 1):
        rels.append((i, i + 1, i, -(i + 1), -i, -(i + 1)))
    for i in range(1, n):
        for j in range(i + 2, n):
            rels.append((i, j, -i, -j))
    power_gens = range(1, n) if augment else range(1, 2)
    for i in power_gens:
        rels.append((i,) * m)
    for w in extra:
        if w.strands != n:
            raise ValueError("extra relator strand count mismatch")
        reduced = w.free_reduce()
        if reduced.letters:
            rels.append(tuple(reduced.signed_ints()))
    return Presentation(n - 1, tuple(rels))


def von_dyck_presentation(m: int) -> Presentation:
    """The (2,3,m) triangle quotient <x, y | x^3, y^2, (xy)^m>."""
    if m < 1:
        raise ValueError("need m >= 1")
    return Presentation(2, ((1, 1, 1), (2, 2), (1, 2) * m))


def braid_quotient_order(
    n: int,
    m: int,
    extra: tuple[BraidWord, ...] = (),
    max_cosets: int | None = None,
    strategy: str = "felsch",
) -> int:
    """Order of the braid group modulo half-twist m-th powers (and extras)."""
    p = braid_presentation(n, m, extra)
    return todd_coxeter(p, max_cosets, strategy).order


def von_dyck_order(m: int, max_cosets: int | None = None) -> int:
    return todd_coxeter(von_dyck_presentation(m), max_cosets).order


def level_vs_power_ratio(
    n: int,
    m: int,
    max_cosets: int | None = None,
    element_cap: int | None = None,
) -> Fraction:
    """|B_n / (half-twist m-th powers)| divided by the order of the braid
    image mod m, as an exact fraction.

    This equals the index of the power subgroup inside the level-m
    congruence subgroup when both are finite, so 1 means the two coincide.
    """
    from .finquot import braid_image  # local import to avoid cycles

    if m < 2:
        raise ValueError("need m >= 2")
    numerator = braid_quotient_order(n, m, max_cosets=max_cosets)
    denominator = braid_image(n, m, element_cap).order
    return Fraction(numerator, denominator)


def parse_presentation(text: str, ngens: int) -> Presentation:
    """One relator per line, each a list of signed generator indices."""
    rels = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        rels.append(tuple(int(tok) for tok in line.split()))
    return Presentation(ngens, tuple(rels))
