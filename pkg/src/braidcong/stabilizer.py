"""Stabilizer subgroups of symplectic lattices and their transvection kernels.

Everything here lives in a lattice Z^N with an alternating Gram matrix,
either the standard interleaved symplectic form on rank 2g or the braid
form on Z^n. Fix a primitive vector w and a level m. The kernel of

    {A symplectic : Aw = w, A = I mod m}  ->  Sp(w-perp / w)

consists of elements determined by their displacement Av - v of a fixed
dual vector v with <v, w> = 1, and every such element factors exactly into
m-th powers of transvections along vectors orthogonal to w. The
factorization here is constructive and re-verified by multiplication.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .errors import CertificateError
from .exactmat import MatMod, MatZ

Vector = tuple[int, ...]


def standard_gram(g: int) -> tuple[tuple[int, ...], ...]:
    """Gram matrix of the interleaved basis (a_1, b_1, ..., a_g, b_g)."""
    n = 2 * g
    rows = [[0] * n for _ in range(n)]
    for i in range(g):
        rows[2 * i][2 * i + 1] = 1
        rows[2 * i + 1][2 * i] = -1
    return tuple(tuple(r) for r in rows)


def braid_gram(n: int) -> tuple[tuple[int, ...], ...]:
    """Gram matrix of the alternating form <e_i, e_j> = sign(j - i)."""
    return tuple(
        tuple(0 if i == j else (1 if j > i else -1) for j in range(n))
        for i in range(n)
    )


def gram_form(gram, u: Vector, v: Vector) -> int:
    return sum(
        u[i] * gram[i][j] * v[j]
        for i in range(len(u))
        for j in range(len(v))
        if gram[i][j]
    )


def gram_transvection(gram, x: Vector, k: int = 1) -> MatZ:
    """Matrix of v -> v - k <v, x> x for the given Gram matrix."""
    n = len(x)
    pair = [sum(gram[j][i] * x[i] for i in range(n)) for j in range(n)]
    return MatZ(
        [
            [(1 if i == j else 0) - k * pair[j] * x[i] for j in range(n)]
            for i in range(n)
        ]
    )


def is_symplectic(gram, m: MatZ) -> bool:
    """Check m^T G m = G exactly."""
    g = MatZ(gram)
    mt = MatZ(list(zip(*m.rows)))
    return mt * g * m == g


def solve_dual_vector(gram, w: Vector) -> Vector:
    """A deterministic integer vector v with <v, w> = 1.

    Folds the extended Euclidean algorithm over the pairings <e_j, w>;
    requires their gcd to be 1 (true for a primitive w and a unimodular
    form).
    """
    n = len(w)
    pairings = [sum(gram[j][i] * w[i] for i in range(n)) for j in range(n)]
    coeffs = [0] * n
    g_acc = 0
    for j, p in enumerate(pairings):
        if p == 0:
            continue
        if g_acc == 0:
            g_acc = abs(p)
            coeffs = [0] * n
            coeffs[j] = 1 if p > 0 else -1
        else:
            old_g = g_acc
            g_acc, s, t = _ext_gcd(old_g, p)
            coeffs = [s * c for c in coeffs]
            coeffs[j] += t
        if g_acc == 1:
            break
    if g_acc != 1:
        raise ValueError("no dual vector: pairings of w are not coprime")
    return tuple(coeffs)


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, s, t) with s*a + t*b = g = gcd(a, b)."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


@dataclass(frozen=True)
class StabilizerContext:
    """A symplectic lattice with a primitive vector w, dual v, and level m."""

    gram: tuple[tuple[int, ...], ...]
    w: Vector
    v: Vector
    m: int

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("level must be >= 1")
        if gcd(*self.w) != 1:
            raise ValueError("w must be primitive")
        if gram_form(self.gram, self.v, self.w) != 1:
            raise ValueError("<v, w> must be 1")

    @property
    def n(self) -> int:
        return len(self.w)

    def form(self, u: Vector, v: Vector) -> int:
        return gram_form(self.gram, u, v)

    @classmethod
    def standard(cls, g: int, m: int, w: Vector | None = None) -> "StabilizerContext":
        gram = standard_gram(g)
        if w is None:
            w = tuple(1 if i == 0 else 0 for i in range(2 * g))
        v = solve_dual_vector(gram, w)
        return cls(gram, tuple(w), v, m)

    @classmethod
    def from_braid_form(cls, n: int, m: int) -> "StabilizerContext":
        """The braid lattice for even n, with w the alternating vector."""
        if n % 2 != 0:
            raise ValueError("the alternating vector is in w-perp only for even n")
        gram = braid_gram(n)
        w = tuple(1 if i % 2 == 0 else -1 for i in range(n))
        v = solve_dual_vector(gram, w)
        return cls(gram, w, v, m)


def stabilizer_kernel_element(ctx: StabilizerContext, x: Vector) -> MatZ:
    """The element S_x: v -> v + m x and u -> u + <u, x> m w on w-perp.

    Requires x orthogonal to w. The result fixes w, is the identity mod m,
    acts trivially on w-perp/w, and displaces v by exactly m x.
    """
    if ctx.form(x, ctx.w) != 0:
        raise ValueError("x must be orthogonal to w")
    n = ctx.n
    m = ctx.m
    cols = []
    for j in range(n):
        e = tuple(1 if i == j else 0 for i in range(n))
        alpha = ctx.form(e, ctx.w)  # coefficient of v in e = alpha*v + u
        u = tuple(e[i] - alpha * ctx.v[i] for i in range(n))
        pair_ux = ctx.form(u, x)
        col = tuple(
            alpha * (ctx.v[i] + m * x[i]) + u[i] + pair_ux * m * ctx.w[i]
            for i in range(n)
        )
        cols.append(col)
    return MatZ([[cols[j][i] for j in range(n)] for i in range(n)])


@dataclass(frozen=True)
class TransvectionFactor:
    """One factor T_x^k along a vector orthogonal to w."""

    vector: Vector
    exponent: int


@dataclass(frozen=True)
class TransvectionCertificate:
    """Ordered transvection powers whose product is a target matrix."""

    m: int
    factors: tuple[TransvectionFactor, ...]

    def product(self, gram) -> MatZ:
        n = len(gram)
        acc = MatZ.identity(n)
        for f in self.factors:
            acc = acc * gram_transvection(gram, f.vector, f.exponent)
        return acc


def _in_kernel(ctx: StabilizerContext, t: MatZ) -> str | None:
    """None if t satisfies all kernel preconditions, else a reason."""
    if t.n != ctx.n:
        return "dimension mismatch"
    if not is_symplectic(ctx.gram, t):
        return "matrix does not preserve the form"
    if t.apply(ctx.w) != ctx.w:
        return "matrix does not fix w"
    m = ctx.m
    if m > 1:
        for i, row in enumerate(t.rows):
            for j, val in enumerate(row):
                if (val - (1 if i == j else 0)) % m != 0:
                    return f"matrix is not the identity mod {m}"
    # trivial action on w-perp/w: u_j = e_j - <e_j, w> v spans w-perp
    for j in range(ctx.n):
        e = tuple(1 if i == j else 0 for i in range(ctx.n))
        alpha = ctx.form(e, ctx.w)
        u = tuple(e[i] - alpha * ctx.v[i] for i in range(ctx.n))
        img = t.apply(u)
        diff = tuple(a - b for a, b in zip(img, u))
        if not _is_multiple_of(diff, ctx.w):
            return "matrix does not act trivially on w-perp/w"
    return None


def _is_multiple_of(diff: Vector, w: Vector) -> bool:
    k = None
    for d, wi in zip(diff, w):
        if wi == 0:
            if d != 0:
                return False
        else:
            if d % wi != 0:
                return False
            q = d // wi
            if k is None:
                k = q
            elif q != k:
                return False
    return True


def _multiple_of(diff: Vector, w: Vector) -> int:
    for d, wi in zip(diff, w):
        if wi != 0:
            if d % wi != 0:
                raise ValueError("not a multiple")
            return d // wi
    return 0


def kernel_factorize(ctx: StabilizerContext, t: MatZ) -> TransvectionCertificate:
    """Factor a kernel element as T_x^m T_{x+w}^{-m} T_w^{km}, exactly.

    The displacement (t v - v) / m determines x up to multiples of w; the
    residual power of T_w is read off afterwards and verified. The returned
    certificate re-multiplies to t exactly (checked before return).
    """
    reason = _in_kernel(ctx, t)
    if reason is not None:
        raise ValueError(f"not a kernel element: {reason}")
    m = ctx.m
    disp = tuple(a - b for a, b in zip(t.apply(ctx.v), ctx.v))
    if ctx.form(disp, ctx.w) != 0:
        raise ValueError("displacement is not orthogonal to w")
    if any(d % m for d in disp):
        raise ValueError(f"displacement is not divisible by {m}")
    u0 = tuple(d // m for d in disp)
    # section of w-perp -> w-perp/w: remove the w-component that pairs with v
    x = tuple(a + ctx.form(u0, ctx.v) * b for a, b in zip(u0, ctx.w))
    factors: list[TransvectionFactor] = []
    if any(x):
        xw = tuple(a + b for a, b in zip(x, ctx.w))
        factors.append(TransvectionFactor(x, m))
        factors.append(TransvectionFactor(xw, -m))
    partial = TransvectionCertificate(m, tuple(factors)).product(ctx.gram)
    residual = partial.inverse() * t
    rdisp = tuple(a - b for a, b in zip(residual.apply(ctx.v), ctx.v))
    # residual must be T_w^k, whose displacement of v is -k w
    k = -_multiple_of(rdisp, ctx.w)
    if residual != gram_transvection(ctx.gram, ctx.w, k):
        raise CertificateError("residual is not a power of the w-transvection")
    if k % m != 0:
        raise CertificateError("residual exponent is not a multiple of the level")
    if k != 0:
        factors.append(TransvectionFactor(ctx.w, k))
    cert = TransvectionCertificate(m, tuple(factors))
    if cert.product(ctx.gram) != t:
        raise CertificateError("certificate product does not equal the target")
    for f in cert.factors:
        if ctx.form(f.vector, ctx.w) != 0:
            raise CertificateError("factor vector is not orthogonal to w")
    return cert


def newman_smart_log(a: MatZ, ell: int, m: int) -> MatMod:
    """For symplectic a = I + ell*B, return B mod m (requires m | ell).

    The result lies in the symplectic Lie algebra mod m (J B symmetric) and
    the map is additive on products modulo m.
    """
    if ell < 2 or m < 2:
        raise ValueError("need ell, m >= 2")
    if ell % m != 0:
        raise ValueError("need m | ell")
    n = a.n
    if n % 2 != 0:
        raise ValueError("even rank required")
    gram = standard_gram(n // 2)
    if not is_symplectic(gram, a):
        raise ValueError("matrix is not symplectic for the standard form")
    b_rows = []
    for i, row in enumerate(a.rows):
        out = []
        for j, val in enumerate(row):
            diff = val - (1 if i == j else 0)
            if diff % ell != 0:
                raise ValueError(f"matrix is not the identity mod {ell}")
            out.append(diff // ell)
        b_rows.append(out)
    result = MatZ(b_rows).reduce_mod(m)
    jb = MatZ(gram) * MatZ(b_rows)
    for i in range(n):
        for j in range(n):
            if (jb.rows[i][j] - jb.rows[j][i]) % m != 0:
                raise CertificateError("log image is not in the Lie algebra mod m")
    return result
