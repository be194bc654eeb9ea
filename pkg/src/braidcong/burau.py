"""The unreduced and integral Burau representations and their lattice geometry.

Conventions fixed here and used everywhere else:

* ``Z^n`` carries the alternating bilinear form ``<e_i, e_j> = sign(j - i)``.
* ``c_i = e_i - e_{i+1}`` for ``1 <= i < n``; the braid generator ``s_i``
  acts on column vectors as the transvection ``v -> v - <v, c_i> c_i``.
* The zero-sum sublattice (spanned by the ``c_i``) is written ``W`` in
  docstrings; the even-rank symplectic sublattice ``V`` is all of ``Z^n``
  for even ``n`` and the zero-sum lattice for odd ``n``.
* Matrices act on column vectors from the left, so a word acts by applying
  its rightmost letter first.

Two independent routes to the integral representation exist on purpose:
:func:`unreduced_burau` multiplies the generator blocks over Laurent
polynomials, while :func:`integral_burau` applies the transvection row
operations directly. Tests compare them.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from . import _mutation
from .braid import BraidWord
from .exactmat import LaurentPoly, MatL, MatZ


@dataclass(frozen=True)
class LatticeVector:
    """An element of Z^n in the standard basis, with exact coordinates."""

    coords: tuple[int, ...]

    def __post_init__(self):
        if len(self.coords) < 1:
            raise ValueError("empty vector")
        from operator import index

        object.__setattr__(self, "coords", tuple(index(v) for v in self.coords))

    @property
    def n(self) -> int:
        return len(self.coords)

    @classmethod
    def zero(cls, n: int) -> "LatticeVector":
        return cls((0,) * n)

    @classmethod
    def e(cls, n: int, i: int) -> "LatticeVector":
        """Standard basis vector e_i, 1-indexed."""
        if not 1 <= i <= n:
            raise ValueError("basis index out of range")
        return cls(tuple(1 if j == i - 1 else 0 for j in range(n)))

    @classmethod
    def c(cls, n: int, i: int) -> "LatticeVector":
        """The difference vector c_i = e_i - e_{i+1}, 1-indexed."""
        if not 1 <= i <= n - 1:
            raise ValueError("difference index out of range")
        return cls(
            tuple(1 if j == i - 1 else -1 if j == i else 0 for j in range(n))
        )

    @classmethod
    def from_c_coords(cls, n: int, coeffs: "list[int] | tuple[int, ...]") -> "LatticeVector":
        """Build sum(coeffs[i] * c_{i+1}); always lands in the zero-sum lattice."""
        if len(coeffs) != n - 1:
            raise ValueError(f"expected {n - 1} coefficients")
        v = [0] * n
        for i, a in enumerate(coeffs):
            v[i] += a
            v[i + 1] -= a
        return cls(tuple(v))

    def c_coords(self) -> tuple[int, ...]:
        """Coordinates in the c-basis; requires zero coordinate sum."""
        if sum(self.coords) != 0:
            raise ValueError("vector is not in the zero-sum lattice")
        out = []
        acc = 0
        for v in self.coords[:-1]:
            acc += v
            out.append(acc)
        return tuple(out)

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.coords)

    def coord_sum(self) -> int:
        return sum(self.coords)

    def __add__(self, other: "LatticeVector") -> "LatticeVector":
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        return LatticeVector(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "LatticeVector") -> "LatticeVector":
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        return LatticeVector(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "LatticeVector":
        return LatticeVector(tuple(-a for a in self.coords))

    def scale(self, k: int) -> "LatticeVector":
        return LatticeVector(tuple(k * a for a in self.coords))


def form(u: LatticeVector, v: LatticeVector) -> int:
    """The alternating form <u, v> = sum_{i<j} (u_i v_j - u_j v_i)."""
    if u.n != v.n:
        raise ValueError("dimension mismatch")
    if _mutation.enabled("form_sign"):
        # Corrupted variant: all off-diagonal pairings +1 (symmetric).
        su, sv = sum(u.coords), sum(v.coords)
        return su * sv - sum(a * b for a, b in zip(u.coords, v.coords))
    total = 0
    prefix = 0  # sum of u_i for i < j
    all_u = sum(u.coords)
    for j in range(u.n):
        suffix = all_u - prefix - u.coords[j]
        total += v.coords[j] * (prefix - suffix)
        prefix += u.coords[j]
    return total


def pairing_with_c(v: LatticeVector, i: int) -> int:
    """<v, c_i>, which simplifies to -(v_i + v_{i+1})."""
    return form(v, LatticeVector.c(v.n, i))


# -- representation ------------------------------------------------------


def _burau_block(sign: int) -> list[list[LaurentPoly]]:
    t = LaurentPoly.t(1)
    tinv = LaurentPoly.t(-1)
    one = LaurentPoly.const(1)
    zero = LaurentPoly.zero()
    if sign > 0:
        block = [[one - t, one], [t, zero]]
        if _mutation.enabled("burau_block"):
            block = [[one + t, one], [t, zero]]
        return block
    return [[zero, tinv], [one, one - tinv]]


def unreduced_burau(w: BraidWord) -> MatL:
    """Product of the generator blocks over Z[t, t^-1]."""
    n = w.strands
    result = MatL.identity(n)
    for idx, sign in w.letters:
        rows = [
            [LaurentPoly.const(1) if i == j else LaurentPoly.zero() for j in range(n)]
            for i in range(n)
        ]
        block = _burau_block(sign)
        for a in range(2):
            for b in range(2):
                rows[idx - 1 + a][idx - 1 + b] = block[a][b]
        result = result * MatL(rows)
    return result


def apply_letter_rows(rows: list[list[int]], idx: int, sign: int) -> None:
    """Left-multiply integer rows in place by the image of one braid letter.

    The generator acts per column as (a, b) -> (a + s*(a+b), b - s*(a+b)) on
    the pair of coordinates (idx-1, idx); this is the transvection action
    specialized to the standard form, written without calling :func:`form`
    so the two computation routes stay independent.
    """
    r1, r2 = rows[idx - 1], rows[idx]
    if sign > 0:
        rows[idx - 1] = [a + (a + b) for a, b in zip(r1, r2)]
        rows[idx] = [b - (a + b) for a, b in zip(r1, r2)]
    else:
        rows[idx - 1] = [a - (a + b) for a, b in zip(r1, r2)]
        rows[idx] = [b + (a + b) for a, b in zip(r1, r2)]


def integral_burau(w: BraidWord) -> MatZ:
    """The integral representation (the Laurent matrix evaluated at t = -1).

    Computed by applying letters right-to-left as integer row operations;
    equals ``unreduced_burau(w).eval_at(-1)``.
    """
    n = w.strands
    rows = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for idx, sign in reversed(w.letters):
        apply_letter_rows(rows, idx, sign)
    return MatZ(rows)


def apply_word(w: BraidWord, v: LatticeVector) -> LatticeVector:
    """Image of a vector under the integral representation of ``w``.

    O(len(w)) instead of building any matrix: each letter only touches two
    coordinates.
    """
    if w.strands != v.n:
        raise ValueError("strand count does not match vector dimension")
    coords = list(v.coords)
    for idx, sign in reversed(w.letters):
        a, b = coords[idx - 1], coords[idx]
        t = a + b
        if sign > 0:
            coords[idx - 1] = a + t
            coords[idx] = b - t
        else:
            coords[idx - 1] = a - t
            coords[idx] = b + t
    return LatticeVector(tuple(coords))


# -- transvections -------------------------------------------------------


def transvection(x: LatticeVector) -> MatZ:
    """Matrix of v -> v - <v, x> x in the standard basis."""
    return transvection_power(x, 1)


def transvection_power(x: LatticeVector, k: int) -> MatZ:
    """Matrix of the k-th power, using T_x^k(v) = v - k <v, x> x."""
    n = x.n
    pair = [form(LatticeVector.e(n, j + 1), x) for j in range(n)]
    return MatZ(
        [
            [(1 if i == j else 0) - k * pair[j] * x.coords[i] for j in range(n)]
            for i in range(n)
        ]
    )


# -- distinguished vectors and lattices ----------------------------------


def alternating_vector(n: int) -> LatticeVector:
    """e_1 - e_2 + e_3 - ...; fixed by the image of every braid word."""
    if n < 2:
        raise ValueError("need n >= 2")
    return LatticeVector(tuple(1 if i % 2 == 0 else -1 for i in range(n)))


def in_zero_sum_lattice(v: LatticeVector) -> bool:
    return v.coord_sum() == 0


def in_symplectic_sublattice(v: LatticeVector) -> bool:
    """Membership in V: all of Z^n for even n, the zero-sum lattice for odd n."""
    if v.n % 2 == 0:
        return True
    return in_zero_sum_lattice(v)


def lattice_flags(v: LatticeVector) -> tuple[bool, bool]:
    """(in the zero-sum lattice, in the symplectic sublattice)."""
    return in_zero_sum_lattice(v), in_symplectic_sublattice(v)


def split_off_fixed_vector(v: LatticeVector) -> tuple[LatticeVector, int]:
    """For odd n, write v = v' + k*w with v' zero-sum and w alternating.

    Exists because the alternating vector has coordinate sum 1 when n is odd.
    """
    if v.n % 2 == 0:
        raise ValueError("decomposition is for odd dimension")
    k = v.coord_sum()
    w = alternating_vector(v.n)
    return v - w.scale(k), k


# -- symplectic bases and restriction ------------------------------------


@dataclass(frozen=True)
class SymplecticBasis:
    """Vectors (a_1, b_1, ..., a_g, b_g) of V with the standard Gram matrix."""

    n: int
    vectors: tuple[LatticeVector, ...]

    @property
    def genus(self) -> int:
        return len(self.vectors) // 2


def _ambient_basis(n: int) -> list[LatticeVector]:
    if n % 2 == 0:
        return [LatticeVector.e(n, i) for i in range(1, n + 1)]
    return [LatticeVector.c(n, i) for i in range(1, n)]


def symplectic_basis(n: int) -> SymplecticBasis:
    """Greedy integer symplectic reduction of the natural basis of V.

    Pick the first pair with unit pairing, orient it to pairing +1, project
    the rest to its orthogonal complement, recurse. Deterministic.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    work = _ambient_basis(n)
    pairs: list[LatticeVector] = []
    while work:
        found = None
        for i in range(len(work)):
            for j in range(i + 1, len(work)):
                p = form(work[i], work[j])
                if p in (1, -1):
                    found = (i, j, p)
                    break
            if found:
                break
        if found is None:
            raise ValueError("symplectic reduction failed: no unit pairing")
        i, j, p = found
        a, b = (work[i], work[j]) if p == 1 else (work[j], work[i])
        pairs.extend([a, b])
        rest = []
        for k, u in enumerate(work):
            if k in (i, j):
                continue
            u1 = u - a.scale(form(u, b))
            u1 = u1 + b.scale(form(u1, a))
            rest.append(u1)
        work = rest
    basis = SymplecticBasis(n, tuple(pairs))
    _check_standard_gram(basis)
    return basis


def _check_standard_gram(basis: SymplecticBasis) -> None:
    vs = basis.vectors
    for i, u in enumerate(vs):
        for j, v in enumerate(vs):
            expected = 0
            if i % 2 == 0 and j == i + 1:
                expected = 1
            elif i % 2 == 1 and j == i - 1:
                expected = -1
            if form(u, v) != expected:
                raise ValueError("basis does not have the standard Gram matrix")


def standard_gram_matrix(g: int) -> MatZ:
    """Gram matrix of (a_1, b_1, ..., a_g, b_g): diagonal 2x2 blocks."""
    n = 2 * g
    rows = [[0] * n for _ in range(n)]
    for i in range(g):
        rows[2 * i][2 * i + 1] = 1
        rows[2 * i + 1][2 * i] = -1
    return MatZ(rows)


def to_sp(m: MatZ, basis: SymplecticBasis) -> MatZ:
    """Matrix of ``m`` restricted to V in the given symplectic basis.

    Coordinates are read off with the symplectic dual pairing, then the
    reconstruction is checked exactly, so an input that does not preserve V
    or the form is rejected rather than silently projected.
    """
    vs = basis.vectors
    g = basis.genus
    cols = []
    for bv in vs:
        img = LatticeVector(m.apply(bv.coords))
        coords = []
        for k in range(g):
            a, b = vs[2 * k], vs[2 * k + 1]
            coords.append(form(img, b))
            coords.append(-form(img, a))
        rebuilt = LatticeVector.zero(basis.n)
        for coef, vec in zip(coords, vs):
            rebuilt = rebuilt + vec.scale(coef)
        if rebuilt != img:
            raise ValueError("matrix does not preserve the symplectic sublattice")
        cols.append(coords)
    out = MatZ([[cols[j][i] for j in range(2 * g)] for i in range(2 * g)])
    jmat = standard_gram_matrix(g)
    left = MatZ(list(zip(*out.rows))) * jmat * out
    if left != jmat:
        raise ValueError("matrix does not preserve the form")
    return out


def project_w_complement(m: MatZ) -> MatZ:
    """For even n: the matrix induced on (w-perp)/w by a matrix fixing w.

    Basis: the images of c_1, ..., c_{n-2}; the section kills the c_{n-1}
    coordinate using w = c_1 + c_3 + ... + c_{n-1}. For n = 4 this is the
    (c_1, c_2) identification with 2x2 integer matrices.
    """
    n = m.n
    if n % 2 != 0:
        raise ValueError("defined for even dimension only")
    w = alternating_vector(n)
    if LatticeVector(m.apply(w.coords)) != w:
        raise ValueError("matrix does not fix the alternating vector")
    cols = []
    for j in range(1, n - 1):
        img = LatticeVector(m.apply(LatticeVector.c(n, j).coords))
        mu = list(img.c_coords())
        last = mu[n - 2]
        # subtract last * w (c-coordinates of w are 1 at odd positions)
        for i in range(0, n - 1, 2):
            mu[i] -= last
        if mu[n - 2] != 0:
            raise ValueError("projection failed")
        cols.append(mu[: n - 2])
    return MatZ([[cols[j][i] for j in range(n - 2)] for i in range(n - 2)])


# -- distinguished words --------------------------------------------------


@lru_cache(maxsize=None)
def conjugator_to_c(n: int, i: int) -> BraidWord:
    """A word g with rho(g) c_1 = c_i.

    Built from the two-letter steps s_j^-1 s_{j+1}^-1, each of which carries
    c_j to c_{j+1}; verified on construction.
    """
    if not 1 <= i <= n - 1:
        raise ValueError("index out of range")
    word = BraidWord(n)
    for j in range(1, i):
        step = BraidWord(n, ((j, -1), (j + 1, -1)))
        word = step * word
    if apply_word(word, LatticeVector.c(n, 1)) != LatticeVector.c(n, i):
        raise AssertionError("conjugator construction failed")
    return word


@lru_cache(maxsize=None)
def sign_flip_word(n: int) -> BraidWord:
    """A word h with rho(h) c_{n-1} = -c_{n-1} (needs n >= 3).

    (s_{n-1} s_{n-2} s_{n-1})^2 acts as -1 on the plane of the last two
    difference vectors; verified on construction.
    """
    if n < 3:
        raise ValueError("no sign flip exists on 2 strands")
    word = BraidWord(n, ((n - 1, 1), (n - 2, 1), (n - 1, 1))) ** 2
    c = LatticeVector.c(n, n - 1)
    if apply_word(word, c) != -c:
        raise AssertionError("sign flip construction failed")
    return word
