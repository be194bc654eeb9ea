"""Preprocessing shared by both kernel backends.

Keeping relator-rotation generation in one place guarantees the compiled
and pure backends scan in exactly the same order, which makes their outputs
byte-identical and therefore directly comparable in tests.
"""

from __future__ import annotations

UNDEF = -1

TC_OK = 0
TC_BUDGET = 1


def symbols(relator: tuple[int, ...]) -> tuple[int, ...]:
    """Signed generator list -> symbol list (gen g is 2(g-1), inverse +1)."""
    out = []
    for s in relator:
        out.append(2 * (s - 1) if s > 0 else 2 * (-s - 1) + 1)
    return tuple(out)


def rotations_by_symbol(
    relators: list[tuple[int, ...]], ngens: int
) -> list[list[tuple[int, ...]]]:
    """All cyclic rotations of each relator and its inverse, keyed by first symbol."""
    rots: list[list[tuple[int, ...]]] = [[] for _ in range(2 * ngens)]
    seen = set()
    for rel in relators:
        syms = symbols(rel)
        inv = tuple(s ^ 1 for s in reversed(syms))
        for base in (syms, inv):
            for r in range(len(base)):
                rot = base[r:] + base[:r]
                if rot not in seen:
                    seen.add(rot)
                    rots[rot[0]].append(rot)
    return rots
