"""Pure-Python (NumPy-assisted) implementations of the hot kernels.

This is the fallback backend selected at import time when the compiled
extension is unavailable (or when ``BRAIDCONG_PURE=1``). Both backends
implement the same three entry points with identical outputs:

* ``matmul_mod``   -- one product of canonically encoded matrices mod l,
* ``bfs_closure``  -- breadth-first closure of a matrix monoid mod l,
* ``todd_coxeter`` -- coset enumeration over a finite presentation.

The BFS discovery order is fixed (level-major, multiplier-outer,
element-inner) so the two backends produce byte-identical element tables.
"""

from __future__ import annotations

from array import array

import numpy as np

from .common import TC_BUDGET, TC_OK, UNDEF, rotations_by_symbol, symbols


def _decode(data: bytes, count: int, n: int) -> np.ndarray:
    return np.frombuffer(data, dtype=np.uint8).reshape(count, n, n).astype(np.int64)


def matmul_mod(a: bytes, b: bytes, n: int, ell: int) -> bytes:
    """Product of two one-byte-per-entry encoded matrices mod ell."""
    am = _decode(a, 1, n)[0]
    bm = _decode(b, 1, n)[0]
    return ((am @ bm) % ell).astype(np.uint8).tobytes()


def bfs_closure(
    mults: list[bytes], n: int, ell: int, cap: int
) -> tuple[bytearray, list[int], list[int], bool]:
    """Close {identity} under right multiplication by ``mults``.

    Returns (blob, parent, letter, complete): ``blob`` holds the canonical
    encodings in discovery order, ``parent[i]``/``letter[i]`` identify which
    element and multiplier first produced element ``i`` (-1 for the
    identity). ``complete`` is False when the cap was hit.
    """
    size = n * n
    ident = np.eye(n, dtype=np.uint8)
    ident_b = (ident % ell).astype(np.uint8).tobytes()
    blob = bytearray(ident_b)
    index: dict[bytes, int] = {ident_b: 0}
    parent = [-1]
    letter = [-1]
    if not mults:
        return blob, parent, letter, True
    mmats = [_decode(m, 1, n)[0] for m in mults]
    level = [0]
    while level:
        frontier = np.frombuffer(bytes(blob), dtype=np.uint8).reshape(-1, size)
        fr = frontier[level].reshape(len(level), n, n).astype(np.int64)
        next_level: list[int] = []
        for j, mj in enumerate(mmats):
            prods = ((fr @ mj) % ell).astype(np.uint8).reshape(len(level), size)
            buf = prods.tobytes()
            for pos, src in enumerate(level):
                key = buf[pos * size : (pos + 1) * size]
                if key not in index:
                    if len(parent) >= cap:
                        return blob, parent, letter, False
                    index[key] = len(parent)
                    blob += key
                    parent.append(src)
                    letter.append(j)
                    next_level.append(len(parent) - 1)
        level = next_level
    return blob, parent, letter, True


# -- Todd-Coxeter ---------------------------------------------------------
#
# Felsch-style (deduction driven) enumeration of the cosets of the trivial
# subgroup, with a standard coincidence queue; "hlt" scans and fills one
# relator at a time instead. Symbols: generator g (1-based) is 2(g-1),
# its inverse 2(g-1)+1.


class _Table:
    __slots__ = ("nsym", "tab", "p", "nlive", "cap", "deductions")

    def __init__(self, nsym: int, cap: int):
        self.nsym = nsym
        self.tab = array("i", [UNDEF] * nsym)
        self.p = array("i", [0])
        self.nlive = 1
        self.cap = cap
        self.deductions: list[tuple[int, int]] = []

    def rep(self, a: int) -> int:
        p = self.p
        r = a
        while p[r] != r:
            r = p[r]
        while p[a] != r:
            p[a], a = r, p[a]
        return r

    def define(self, alpha: int, x: int) -> int | None:
        """New coset beta with alpha^x = beta; None when the cap is hit."""
        if len(self.p) >= self.cap:
            return None
        beta = len(self.p)
        self.p.append(beta)
        self.tab.extend([UNDEF] * self.nsym)
        self.nlive += 1
        self.set_entry(alpha, x, beta)
        return beta

    def set_entry(self, alpha: int, x: int, beta: int) -> None:
        self.tab[alpha * self.nsym + x] = beta
        self.tab[beta * self.nsym + (x ^ 1)] = alpha
        self.deductions.append((alpha, x))
        self.deductions.append((beta, x ^ 1))

    def entry(self, alpha: int, x: int) -> int:
        return self.tab[alpha * self.nsym + x]

    def _merge(self, a: int, b: int, queue: list[int]) -> None:
        a, b = self.rep(a), self.rep(b)
        if a == b:
            return
        if a > b:
            a, b = b, a
        self.p[b] = a
        self.nlive -= 1
        queue.append(b)

    def coincidence(self, a: int, b: int) -> None:
        queue: list[int] = []
        self._merge(a, b, queue)
        nsym = self.nsym
        tab = self.tab
        while queue:
            gamma = queue.pop()
            base = gamma * nsym
            for x in range(nsym):
                delta = tab[base + x]
                if delta == UNDEF:
                    continue
                tab[delta * nsym + (x ^ 1)] = UNDEF
                tab[base + x] = UNDEF
                mu = self.rep(gamma)
                nu = self.rep(delta)
                ex = tab[mu * nsym + x]
                if ex != UNDEF:
                    self._merge(nu, ex, queue)
                else:
                    ex2 = tab[nu * nsym + (x ^ 1)]
                    if ex2 != UNDEF:
                        self._merge(mu, ex2, queue)
                    else:
                        self.set_entry(mu, x, nu)

    def scan(self, alpha: int, word: tuple[int, ...]) -> None:
        """Trace a relator at a coset; record a deduction or coincidence."""
        nsym = self.nsym
        tab = self.tab
        f = alpha
        i = 0
        last = len(word) - 1
        while i <= last:
            nxt = tab[f * nsym + word[i]]
            if nxt == UNDEF:
                break
            f = nxt
            i += 1
        else:
            if f != alpha:
                self.coincidence(f, alpha)
            return
        b = alpha
        j = last
        while j >= i:
            nxt = tab[b * nsym + (word[j] ^ 1)]
            if nxt == UNDEF:
                break
            b = nxt
            j -= 1
        if j < i:
            self.coincidence(f, b)
        elif j == i:
            self.set_entry(f, word[i], b)

    def scan_and_fill(self, alpha: int, word: tuple[int, ...]) -> bool:
        """HLT scan that defines cosets as needed; False when out of budget."""
        while True:
            f = alpha
            i = 0
            last = len(word) - 1
            while i <= last:
                nxt = self.entry(f, word[i])
                if nxt == UNDEF:
                    break
                f = nxt
                i += 1
            else:
                if f != alpha:
                    self.coincidence(f, alpha)
                return True
            b = alpha
            j = last
            while j >= i:
                nxt = self.entry(b, word[j] ^ 1)
                if nxt == UNDEF:
                    break
                b = nxt
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return True
            if j == i:
                self.set_entry(f, word[i], b)
                return True
            if self.define(f, word[i]) is None:
                return False


def todd_coxeter(
    ngens: int,
    relators: list[tuple[int, ...]],
    cap: int,
    strategy: str = "felsch",
) -> tuple[int, int, int, list[list[int]]]:
    """Enumerate cosets of the trivial subgroup.

    Returns (status, order, rows_defined, table) where ``table`` maps each
    live coset (renumbered 0..order-1) to its images under the 2*ngens
    symbols. On TC_BUDGET the order is the live count so far (meaningless
    as a group order) and the table is empty.
    """
    nsym = 2 * ngens
    t = _Table(nsym, cap)
    rots = rotations_by_symbol(relators, ngens)
    rel_syms = [symbols(r) for r in relators]

    def process_deductions() -> None:
        while t.deductions:
            gamma, x = t.deductions.pop()
            gamma = t.rep(gamma)
            for w in rots[x]:
                t.scan(gamma, w)

    alpha = 0
    if strategy == "felsch":
        while alpha < len(t.p):
            if t.p[alpha] != alpha:
                alpha += 1
                continue
            x = 0
            while x < nsym:
                if t.p[alpha] != alpha:
                    break
                if t.entry(alpha, x) == UNDEF:
                    if t.define(alpha, x) is None:
                        return TC_BUDGET, t.nlive, len(t.p), []
                    process_deductions()
                x += 1
            alpha += 1
    elif strategy == "hlt":
        while alpha < len(t.p):
            if t.p[alpha] != alpha:
                alpha += 1
                continue
            for syms in rel_syms:
                if t.p[alpha] != alpha:
                    break
                if not t.scan_and_fill(alpha, syms):
                    return TC_BUDGET, t.nlive, len(t.p), []
            if t.p[alpha] == alpha:
                for x in range(nsym):
                    if t.p[alpha] != alpha:
                        break
                    if t.entry(alpha, x) == UNDEF:
                        if t.define(alpha, x) is None:
                            return TC_BUDGET, t.nlive, len(t.p), []
            t.deductions.clear()
            alpha += 1
    else:
        raise ValueError(f"unknown strategy {strategy!r}")

    live = [a for a in range(len(t.p)) if t.p[a] == a]
    renumber = {a: i for i, a in enumerate(live)}
    table = []
    for a in live:
        row = []
        for x in range(nsym):
            e = t.entry(a, x)
            row.append(renumber[t.rep(e)] if e != UNDEF else UNDEF)
        table.append(row)
    return TC_OK, len(live), len(t.p), table
