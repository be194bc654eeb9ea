"""Certified factorization of transvection powers into conjugated generator
powers.

Given x in the zero-sum lattice of Z^n and a level m, the engine writes
T_x^{2m} as an ordered product of factors

    rho(g) * T_{c_1}^e * rho(g)^{-1},      m | e, e != 0,

with explicit braid-word witnesses g. Every certificate is verified by
exact integer matrix multiplication before it leaves this module, so bugs
in the search or the bookkeeping can only cause loud failures, never a
wrong PASS.

The construction peels coordinates off x:

1. a Euclidean word in the last two generators clears the next-to-last
   c-coordinate (conjugating the target),
2. one "L move" trades T_x^{2m} against T_{x'}^{2m} for x' = x + y with y
   an odd multiple of c_{n-1}, at the cost of two factors: a power of
   T_{c_{n-1}} and a conjugated power along 2x + y, which an orbit search
   carries to c_{n-1},
3. L moves repeat until the last c-coordinate is zero,
4. what remains is supported on the first n-3 difference vectors and embeds
   into the same problem on n-2 strands.

The identity behind step 2, valid whenever <x, y> = 0:

    T_x^2 T_{x+y}^2 = T_{2x+y} T_y.
"""

from __future__ import annotations

import heapq
import os
import random
import time
from dataclasses import dataclass, field

from . import _mutation
from .braid import BraidWord, include
from .burau import (
    LatticeVector,
    apply_word,
    conjugator_to_c,
    form,
    integral_burau,
    sign_flip_word,
    transvection_power,
)
from .errors import CertificateError, SearchBudgetExceeded
from .exactmat import MatZ

DEFAULT_NODE_BUDGET = int(os.environ.get("BRAIDCONG_SEARCH_BUDGET", 10**6))


@dataclass(frozen=True)
class Factor:
    """One certificate factor: rho(witness) T_{c_1}^exponent rho(witness)^-1."""

    witness: BraidWord
    exponent: int

    def matrix(self) -> MatZ:
        n = self.witness.strands
        power = transvection_power(LatticeVector.c(n, 1), self.exponent)
        left = integral_burau(self.witness)
        right = integral_burau(self.witness.inverse())
        return left * power * right

    def matrix_mod(self, ell: int):
        return self.matrix().reduce_mod(ell)


@dataclass(frozen=True)
class FactorCertificate:
    """An ordered factor list whose exact product must be T_x^{2m}."""

    n: int
    m: int
    x: LatticeVector
    factors: tuple[Factor, ...]

    def target(self) -> MatZ:
        return transvection_power(self.x, 2 * self.m)

    def product(self) -> MatZ:
        acc = MatZ.identity(self.n)
        for f in self.factors:
            acc = acc * f.matrix()
        return acc

    def serialize(self) -> str:
        coords = ",".join(str(v) for v in self.x.c_coords())
        lines = [f"{self.n} {self.m} {coords}"]
        for f in self.factors:
            lines.append(f"{f.exponent} : {f.witness}")
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str) -> "FactorCertificate":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise ValueError("empty certificate")
        head = lines[0].split()
        if len(head) != 3:
            raise ValueError("certificate header must be 'n m x'")
        n, m = int(head[0]), int(head[1])
        coords = [int(tok) for tok in head[2].split(",")] if head[2] else []
        x = LatticeVector.from_c_coords(n, coords)
        factors = []
        for ln in lines[1:]:
            exp_part, _, word_part = ln.partition(":")
            factors.append(
                Factor(BraidWord.parse(word_part.strip(), n), int(exp_part))
            )
        return cls(n, m, x, tuple(factors))


@dataclass(frozen=True)
class VerifyResult:
    ok: bool
    reason: str | None = None


def verify_certificate(cert: FactorCertificate) -> VerifyResult:
    """Pure soundness gate: exponent multiplicities plus exact product equality."""
    if cert.m < 1:
        return VerifyResult(False, "level must be >= 1")
    if cert.x.n != cert.n:
        return VerifyResult(False, "vector dimension does not match n")
    if cert.x.coord_sum() != 0:
        return VerifyResult(False, "target vector is not in the zero-sum lattice")
    for k, f in enumerate(cert.factors):
        if f.witness.strands != cert.n:
            return VerifyResult(False, f"factor {k}: witness strand count mismatch")
        if f.exponent == 0:
            return VerifyResult(False, f"factor {k}: zero exponent")
        if f.exponent % cert.m != 0:
            return VerifyResult(
                False, f"factor {k}: exponent {f.exponent} not a multiple of {cert.m}"
            )
    if cert.product() != cert.target():
        return VerifyResult(False, "factor product does not equal the target power")
    return VerifyResult(True)


def invert_factors(factors: list[Factor]) -> list[Factor]:
    return [Factor(f.witness, -f.exponent) for f in reversed(factors)]


# -- step one: Euclidean reduction -----------------------------------------


def euclidean_reduce(n: int, x: LatticeVector) -> tuple[BraidWord, LatticeVector]:
    """A word b in the last two generators with x' = rho(b) x having zero
    next-to-last c-coordinate.

    Works on the pair (lambda_{n-3} - lambda_{n-1}, lambda_{n-2}), on which
    the last two generators act by the elementary SL_2 matrices; a recorded
    Euclidean algorithm drives the second entry to zero.
    """
    if n < 3:
        raise ValueError("need n >= 3")
    lam = x.c_coords()
    p = (lam[n - 4] if n >= 4 else 0) - lam[n - 2]
    q = lam[n - 3]
    applied: list[tuple[int, int]] = []  # letters in application order
    while q != 0:
        if p == 0:
            applied.append((n - 1, 1))
            p += q
            continue
        k = q // p  # sigma_{n-2}^s sends q to q - s p
        if k:
            applied.extend([(n - 2, 1 if k > 0 else -1)] * abs(k))
            q -= k * p
        if q == 0:
            break
        k = p // q  # sigma_{n-1}^s sends p to p + s q
        if k:
            applied.extend([(n - 1, -1 if k > 0 else 1)] * abs(k))
            p -= k * q
    word = BraidWord(n, tuple(reversed(applied)))
    x2 = apply_word(word, x)
    if x2.c_coords()[n - 3] != 0:
        raise CertificateError("euclidean reduction failed to clear the coordinate")
    return word, x2


# -- orbit search -----------------------------------------------------------


@dataclass
class SearchStats:
    searches: int = 0
    nodes: int = 0
    seconds: float = 0.0
    word_letters: int = 0

    def mean_ms(self) -> float:
        return 1000.0 * self.seconds / self.searches if self.searches else 0.0


def _pair_profile(coords: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(-(coords[i] + coords[i + 1]) for i in range(len(coords) - 1))


def orbit_to_target(
    n: int,
    y: LatticeVector,
    node_budget: int = DEFAULT_NODE_BUDGET,
    seed: int = 0,
    stats: SearchStats | None = None,
) -> BraidWord:
    """A braid word g with rho(g) y = c_{n-1}, found by best-first search.

    Requires the pairings of y with the difference vectors to be coprime
    (a necessary orbit condition, and invariant under the action). Vectors
    congruent to c_{n-1} modulo doubled zero-sum vectors are guaranteed
    feasible; others may succeed too, and the budget bounds the search
    either way. The returned word is always re-verified by exact
    evaluation; on budget exhaustion the failure is loud.
    """
    if y.n != n:
        raise ValueError("dimension mismatch")
    if y.coord_sum() != 0:
        raise ValueError("y must lie in the zero-sum lattice")
    profile = _pair_profile(y.coords)
    g = 0
    for p in profile:
        g = _gcd(g, p)
    if g != 1:
        raise ValueError("pairings with the difference vectors are not coprime")
    target_vec = LatticeVector.c(n, n - 1)

    t0 = time.perf_counter()
    word = _orbit_search(n, y.coords, target_vec.coords, node_budget, seed, stats)
    if stats is not None:
        stats.searches += 1
        stats.seconds += time.perf_counter() - t0
        stats.word_letters += len(word)
    if apply_word(word, y) != target_vec:
        raise CertificateError("orbit word failed verification")
    return word


def _gcd(a: int, b: int) -> int:
    a, b = abs(a), abs(b)
    while b:
        a, b = b, a % b
    return a


def _orbit_search(
    n: int,
    start: tuple[int, ...],
    target: tuple[int, ...],
    node_budget: int,
    seed: int,
    stats: SearchStats | None,
) -> BraidWord:
    ntarget = tuple(-v for v in target)
    if start == target:
        return BraidWord(n)
    if start == ntarget:
        return sign_flip_word(n)
    target_profile = _pair_profile(target)

    def score(coords: tuple[int, ...]) -> tuple[int, int, int]:
        maxc = max(abs(a) for a in coords)
        nnz = sum(1 for a in coords if a)
        prof = _pair_profile(coords)
        dist = sum(abs(a - b) for a, b in zip(prof, target_profile))
        return (maxc, nnz, dist)

    base_moves = [(i, s) for i in range(1, n) for s in (1, -1)]
    budgets = sorted({min(10**4, node_budget), min(10**5, node_budget), node_budget})
    for round_idx, budget in enumerate(budgets):
        moves = list(base_moves)
        if round_idx:
            random.Random(seed * 1000003 + round_idx).shuffle(moves)
        found = _best_first(start, target, ntarget, moves, budget, score, stats)
        if found is not None:
            path, flipped = found
            letters = tuple(reversed(path))
            word = BraidWord(n, letters)
            if flipped:
                word = sign_flip_word(n) * word
            return word
    raise SearchBudgetExceeded(
        f"orbit search budget ({node_budget} nodes/round) exhausted"
    )


def _best_first(start, target, ntarget, moves, budget, score, stats):
    parents: dict[tuple[int, ...], tuple[tuple[int, ...] | None, tuple[int, int]]]
    parents = {start: (None, (0, 0))}
    heap = [(score(start), 0, 0, start)]
    counter = 0
    expanded = 0
    while heap:
        if expanded >= budget:
            return None
        _, _, depth, coords = heapq.heappop(heap)
        expanded += 1
        if stats is not None:
            stats.nodes += 1
        for i, s in moves:
            t = coords[i - 1] + coords[i]
            if t == 0:
                continue
            child = list(coords)
            child[i - 1] = coords[i - 1] + s * t
            child[i] = coords[i] - s * t
            child_t = tuple(child)
            if child_t == target or child_t == ntarget:
                path = [(i, s)]
                cur = coords
                while parents[cur][0] is not None:
                    prev, move = parents[cur]
                    path.append(move)
                    cur = prev
                path.reverse()
                return path, child_t == ntarget
            if child_t not in parents:
                parents[child_t] = (coords, (i, s))
                counter += 1
                heapq.heappush(heap, (score(child_t), counter, depth + 1, child_t))
    return None


# -- steps two and three -----------------------------------------------------


@dataclass
class _Engine:
    m: int
    node_budget: int = DEFAULT_NODE_BUDGET
    seed: int = 0
    stats: SearchStats = field(default_factory=SearchStats)


def _shift_coefficient(lam: tuple[int, ...], n: int, sign: int) -> int:
    """Coefficient of c_{n-1} in the L-move shift: sign + 2(l_{n-3} - l_{n-1})."""
    prev = lam[n - 4] if n >= 4 else 0
    if _mutation.enabled("parity_shift"):
        return sign + (prev - lam[n - 2])
    return sign + 2 * (prev - lam[n - 2])


def step_two_factors(
    engine: _Engine, n: int, x: LatticeVector, sign: int
) -> tuple[LatticeVector, tuple[Factor, Factor]]:
    """One L move: factors (f1, f2) with

        T_x^{2m} * T_{x'}^{2m} = f1 * f2,   x' = x + y,

    where y is the odd multiple of c_{n-1} selected by ``sign``, f2 realizes
    T_y^m as a direct power (the square scaling T_{kc} = T_c^{k^2}), and f1
    realizes T_{2x+y}^m through an orbit word. The four-matrix identity is
    re-verified exactly before returning.
    """
    m = engine.m
    lam = x.c_coords()
    if lam[n - 3] != 0:
        raise ValueError("L moves require a zero next-to-last c-coordinate")
    j = _shift_coefficient(lam, n, sign)
    y = LatticeVector.from_c_coords(n, [0] * (n - 2) + [j])
    if form(x, y) != 0:
        raise CertificateError("shift vector is not orthogonal to x")
    x_next = x + y
    v = x + x_next  # = 2x + y
    parity = v - LatticeVector.c(n, n - 1)
    if any(c % 2 for c in parity.coords):
        raise CertificateError("orbit candidate is off the doubled lattice")
    to_last = conjugator_to_c(n, n - 1)
    g = orbit_to_target(n, v, engine.node_budget, engine.seed, engine.stats)
    f1 = Factor((g.inverse() * to_last).free_reduce(), m)
    f2 = Factor(to_last, j * j * m)
    lhs = transvection_power(x, 2 * m) * transvection_power(x_next, 2 * m)
    if lhs != f1.matrix() * f2.matrix():
        raise CertificateError("commuting transvection identity failed")
    return x_next, (f1, f2)


def step_three_normalize(
    engine: _Engine, n: int, x: LatticeVector
) -> tuple[LatticeVector, list[tuple[Factor, Factor]]]:
    """Drive the last c-coordinate to zero with L moves.

    An odd coordinate takes one parity-fixing move (sign chosen to minimize
    the new magnitude, ties to +); an even one takes an opposite-sign pair,
    which shifts the coordinate by exactly 2 toward zero. The move list
    nests around a tail certificate as

        T_x^{2m} = f1 f2 (T_{x_next}^{2m})^{-1}.
    """
    lam = x.c_coords()
    if lam[n - 3] != 0:
        raise ValueError("normalization requires a zero next-to-last c-coordinate")
    prev = lam[n - 4] if n >= 4 else 0
    guard = abs(lam[n - 2]) + 2 * abs(prev) + 8
    moves: list[tuple[Factor, Factor]] = []
    cur = x
    last = lam[n - 2]
    while last != 0:
        if len(moves) > guard:
            raise CertificateError("coordinate normalization did not terminate")
        if last % 2 != 0:
            plus = abs(_shift_coefficient(cur.c_coords(), n, 1) + last)
            minus = abs(_shift_coefficient(cur.c_coords(), n, -1) + last)
            sign = 1 if plus <= minus else -1
            cur, pair = step_two_factors(engine, n, cur, sign)
            moves.append(pair)
        else:
            sign = 1 if last > 0 else -1
            cur, pair = step_two_factors(engine, n, cur, sign)
            moves.append(pair)
            cur, pair = step_two_factors(engine, n, cur, -sign)
            moves.append(pair)
        last = cur.c_coords()[n - 2]
    return cur, moves


# -- the engine --------------------------------------------------------------


def _block_embed(m: MatZ, n: int) -> MatZ:
    """m placed in the upper-left block of an n x n identity."""
    k = m.n
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        rows[i][i] = 1
    for i in range(k):
        for j in range(k):
            rows[i][j] = m.rows[i][j]
    return MatZ(rows)


def _factor_rec(engine: _Engine, n: int, x: LatticeVector) -> list[Factor]:
    m = engine.m
    lam = x.c_coords()
    if n == 2:
        k = lam[0]
        if k == 0:
            return []
        return [Factor(BraidWord(2), 2 * k * k * m)]
    if lam[n - 3] != 0:
        b, x2 = euclidean_reduce(n, x)
        b_inv = b.inverse()
        sub = _factor_rec(engine, n, x2)
        return [
            Factor((b_inv * f.witness).free_reduce(), f.exponent) for f in sub
        ]
    if lam[n - 2] != 0:
        x2, moves = step_three_normalize(engine, n, x)
        cert = _factor_rec(engine, n, x2)
        for f1, f2 in reversed(moves):
            cert = [f1, f2] + invert_factors(cert)
        return cert
    if n == 3:
        if not x.is_zero():
            raise CertificateError("reduction left a nonzero vector on 3 strands")
        return []
    sub_x = LatticeVector.from_c_coords(n - 2, lam[: n - 3])
    sub = _factor_rec(engine, n - 2, sub_x)
    out = [Factor(include(f.witness, n), f.exponent) for f in sub]
    if sub:
        sub_prod = MatZ.identity(n - 2)
        for f in sub:
            sub_prod = sub_prod * f.matrix()
        inc_prod = MatZ.identity(n)
        for f in out:
            inc_prod = inc_prod * f.matrix()
        if inc_prod != _block_embed(sub_prod, n):
            raise CertificateError("strand inclusion broke the block shape")
    return out


def factor_power(
    n: int,
    m: int,
    x: LatticeVector,
    node_budget: int = DEFAULT_NODE_BUDGET,
    seed: int = 0,
    stats: SearchStats | None = None,
) -> FactorCertificate:
    """Certificate that T_x^{2m} is a product of conjugated powers T_{c_1}^e
    with every e a nonzero multiple of m.

    The certificate is verified before being returned; failure raises
    :class:`CertificateError` (or :class:`SearchBudgetExceeded` from the
    orbit search) rather than producing an unverified object.
    """
    if m < 1:
        raise ValueError("level must be >= 1")
    if x.n != n:
        raise ValueError("vector dimension does not match n")
    if x.coord_sum() != 0:
        raise ValueError("x must lie in the zero-sum lattice")
    engine = _Engine(m=m, node_budget=node_budget, seed=seed)
    if stats is not None:
        engine.stats = stats
    factors = _factor_rec(engine, n, x)
    if factors and _mutation.enabled("certificate_exponent"):
        factors[0] = Factor(factors[0].witness, factors[0].exponent + 1)
    cert = FactorCertificate(n, m, x, tuple(factors))
    result = verify_certificate(cert)
    if not result.ok:
        raise CertificateError(f"produced certificate failed: {result.reason}")
    return cert
