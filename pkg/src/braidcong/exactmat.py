"""Exact arithmetic kernels.

Three matrix families, all immutable and all exact:

* :class:`MatL`   -- square matrices over integer Laurent polynomials,
* :class:`MatZ`   -- square matrices over arbitrary-precision integers,
* :class:`MatMod` -- square matrices over Z/lZ with a canonical byte
  encoding usable as a deduplication key.

Matrices act on column vectors from the left throughout the package.
No floating point is used anywhere.

Text format (used by the CLI): first line ``n l`` with ``l = 0`` meaning
"over Z", then ``n`` rows of ``n`` space-separated integers.
"""

from __future__ import annotations

from operator import index as _int
from typing import Iterable, Mapping, Sequence

from .errors import NotUnimodular


class LaurentPoly:
    """Sparse integer Laurent polynomial in one variable ``t``.

    Stored as exponent -> coefficient with no zero coefficients kept, so
    equal polynomials have equal internal dictionaries.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping[int, int] | None = None):
        c = {}
        if coeffs:
            for e, v in coeffs.items():
                if v:
                    c[_int(e)] = _int(v)
        self._c = c

    @classmethod
    def zero(cls) -> "LaurentPoly":
        return cls()

    @classmethod
    def const(cls, v: int) -> "LaurentPoly":
        return cls({0: v})

    @classmethod
    def term(cls, coeff: int, exp: int) -> "LaurentPoly":
        return cls({exp: coeff})

    @classmethod
    def t(cls, exp: int = 1) -> "LaurentPoly":
        return cls({exp: 1})

    def coeffs(self) -> dict[int, int]:
        return dict(self._c)

    def is_zero(self) -> bool:
        return not self._c

    @staticmethod
    def _coerce(other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, int):
            return LaurentPoly.const(other)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other) -> "LaurentPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        c = dict(self._c)
        for e, v in other._c.items():
            c[e] = c.get(e, 0) + v
        return LaurentPoly(c)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({e: -v for e, v in self._c.items()})

    def __sub__(self, other) -> "LaurentPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "LaurentPoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "LaurentPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        c: dict[int, int] = {}
        for e1, v1 in self._c.items():
            for e2, v2 in other._c.items():
                e = e1 + e2
                c[e] = c.get(e, 0) + v1 * v2
        return LaurentPoly(c)

    __rmul__ = __mul__

    def eval_at(self, v: int) -> int:
        """Evaluate at an integer unit (+1 or -1).

        Only units are allowed because negative exponents would otherwise
        leave the integers.
        """
        if v not in (1, -1):
            raise ValueError("Laurent evaluation only supported at t = +-1")
        if v == 1:
            return sum(self._c.values())
        return sum(c if e % 2 == 0 else -c for e, c in self._c.items())

    def _key(self):
        return tuple(sorted(self._c.items()))

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._c == other._c

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        return f"LaurentPoly({self._c!r})"

    def __str__(self) -> str:
        if not self._c:
            return "0"
        parts = []
        for e in sorted(self._c):
            v = self._c[e]
            if e == 0:
                term = str(abs(v))
            else:
                mag = abs(v)
                head = "" if mag == 1 else f"{mag}*"
                term = f"{head}t" if e == 1 else f"{head}t^{e}"
            if not parts:
                parts.append(term if v > 0 else f"-{term}")
            else:
                parts.append(f"+ {term}" if v > 0 else f"- {term}")
        return " ".join(parts)


def _as_rows(entries: Iterable[Iterable]) -> tuple[tuple, ...]:
    rows = tuple(tuple(r) for r in entries)
    n = len(rows)
    if n == 0 or any(len(r) != n for r in rows):
        raise ValueError("matrix must be square and non-empty")
    return rows


class MatL:
    """Square matrix over integer Laurent polynomials."""

    __slots__ = ("n", "rows")

    def __init__(self, entries: Iterable[Iterable]):
        rows = _as_rows(entries)
        coerced = []
        for r in rows:
            coerced.append(
                tuple(
                    e if isinstance(e, LaurentPoly) else LaurentPoly.const(e)
                    for e in r
                )
            )
        self.rows = tuple(coerced)
        self.n = len(self.rows)

    @classmethod
    def identity(cls, n: int) -> "MatL":
        one = LaurentPoly.const(1)
        zero = LaurentPoly.zero()
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)])

    def __mul__(self, other: "MatL") -> "MatL":
        if not isinstance(other, MatL):
            return NotImplemented
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        n = self.n
        a, b = self.rows, other.rows
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = LaurentPoly.zero()
                for k in range(n):
                    acc = acc + a[i][k] * b[k][j]
                row.append(acc)
            out.append(row)
        return MatL(out)

    def eval_at(self, v: int) -> "MatZ":
        """Entrywise evaluation at t = +-1."""
        return MatZ([[e.eval_at(v) for e in row] for row in self.rows])

    def __eq__(self, other) -> bool:
        if not isinstance(other, MatL):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def __repr__(self) -> str:
        return f"MatL({[[str(e) for e in row] for row in self.rows]})"


def _det_bareiss(rows: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free Gaussian elimination."""
    n = len(rows)
    m = [list(r) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * pivot - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = pivot
    return sign * m[n - 1][n - 1]


class MatZ:
    """Square matrix over arbitrary-precision integers."""

    __slots__ = ("n", "rows")

    def __init__(self, entries: Iterable[Iterable[int]]):
        self.rows = _as_rows([[_int(v) for v in row] for row in entries])
        self.n = len(self.rows)

    @classmethod
    def identity(cls, n: int) -> "MatZ":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    def is_identity(self) -> bool:
        return all(
            v == (1 if i == j else 0)
            for i, row in enumerate(self.rows)
            for j, v in enumerate(row)
        )

    def __mul__(self, other: "MatZ") -> "MatZ":
        if not isinstance(other, MatZ):
            return NotImplemented
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        n = self.n
        a, b = self.rows, other.rows
        bt = tuple(zip(*b))
        return MatZ(
            [
                [sum(x * y for x, y in zip(arow, bcol)) for bcol in bt]
                for arow in a
            ]
        )

    def __pow__(self, k: int) -> "MatZ":
        if k < 0:
            return self.inverse() ** (-k)
        result = MatZ.identity(self.n)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def apply(self, vec: Sequence[int]) -> tuple[int, ...]:
        if len(vec) != self.n:
            raise ValueError("dimension mismatch")
        return tuple(sum(r[j] * vec[j] for j in range(self.n)) for r in self.rows)

    def det(self) -> int:
        return _det_bareiss(self.rows)

    def _minor_det(self, drop_row: int, drop_col: int) -> int:
        sub = [
            [v for j, v in enumerate(row) if j != drop_col]
            for i, row in enumerate(self.rows)
            if i != drop_row
        ]
        if not sub:
            return 1
        return _det_bareiss(sub)

    def inverse(self) -> "MatZ":
        """Exact inverse; only defined for determinant +-1.

        The adjugate entries are minor determinants computed fraction-free,
        so no rational arithmetic appears at any point.
        """
        d = self.det()
        if d not in (1, -1):
            raise NotUnimodular(f"determinant is {d}, not +-1")
        n = self.n
        inv = [
            [
                d * (-1) ** (i + j) * self._minor_det(j, i)
                for j in range(n)
            ]
            for i in range(n)
        ]
        result = MatZ(inv)
        if not (self * result).is_identity():
            raise NotUnimodular("inverse verification failed")
        return result

    def reduce_mod(self, ell: int) -> "MatMod":
        """Entrywise residues in [0, ell)."""
        if ell < 2:
            raise ValueError("modulus must be >= 2")
        return MatMod(ell, [[v % ell for v in row] for row in self.rows])

    def __eq__(self, other) -> bool:
        if not isinstance(other, MatZ):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def __repr__(self) -> str:
        return f"MatZ({[list(r) for r in self.rows]})"


class MatMod:
    """Square matrix over Z/lZ with a canonical injective byte encoding.

    The modulus travels with the matrix and is checked on every binary
    operation: the verification checks mix several moduli and silent mixing
    is the main bug risk.
    """

    __slots__ = ("n", "ell", "rows")

    def __init__(self, ell: int, entries: Iterable[Iterable[int]]):
        if ell < 2:
            raise ValueError("modulus must be >= 2")
        if ell > 65536:
            raise ValueError("moduli above 65536 are not supported")
        self.ell = _int(ell)
        self.rows = _as_rows([[_int(v) % self.ell for v in row] for row in entries])
        self.n = len(self.rows)

    @classmethod
    def identity(cls, n: int, ell: int) -> "MatMod":
        return cls(ell, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    def is_identity(self) -> bool:
        return all(
            v == (1 if i == j else 0) % self.ell
            for i, row in enumerate(self.rows)
            for j, v in enumerate(row)
        )

    def _check_compatible(self, other: "MatMod") -> None:
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        if self.ell != other.ell:
            raise ValueError(f"modulus mismatch: {self.ell} vs {other.ell}")

    def __mul__(self, other: "MatMod") -> "MatMod":
        if not isinstance(other, MatMod):
            return NotImplemented
        self._check_compatible(other)
        n, ell = self.n, self.ell
        a, b = self.rows, other.rows
        bt = tuple(zip(*b))
        return MatMod(
            ell,
            [
                [sum(x * y for x, y in zip(arow, bcol)) % ell for bcol in bt]
                for arow in a
            ],
        )

    def __pow__(self, k: int) -> "MatMod":
        if k < 0:
            return self.inverse() ** (-k)
        result = MatMod.identity(self.n, self.ell)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def apply(self, vec: Sequence[int]) -> tuple[int, ...]:
        if len(vec) != self.n:
            raise ValueError("dimension mismatch")
        return tuple(
            sum(r[j] * vec[j] for j in range(self.n)) % self.ell for r in self.rows
        )

    def inverse(self) -> "MatMod":
        """Inverse via integer adjugate; requires det to be a unit mod l."""
        lifted = MatZ(self.rows)
        d = lifted.det() % self.ell
        try:
            d_inv = pow(d, -1, self.ell)
        except ValueError:
            raise ValueError(f"matrix not invertible mod {self.ell}") from None
        n = self.n
        adj = [
            [(-1) ** (i + j) * lifted._minor_det(j, i) for j in range(n)]
            for i in range(n)
        ]
        result = MatMod(self.ell, [[d_inv * v for v in row] for row in adj])
        if not (self * result).is_identity():
            raise ValueError(f"matrix not invertible mod {self.ell}")
        return result

    @property
    def entry_size(self) -> int:
        return 1 if self.ell <= 256 else 2

    def encode(self) -> bytes:
        """Canonical encoding: injective on reduced matrices of fixed (n, l)."""
        flat = [v for row in self.rows for v in row]
        if self.entry_size == 1:
            return bytes(flat)
        out = bytearray()
        for v in flat:
            out += v.to_bytes(2, "little")
        return bytes(out)

    @classmethod
    def decode(cls, data: bytes, n: int, ell: int) -> "MatMod":
        size = 1 if ell <= 256 else 2
        if len(data) != n * n * size:
            raise ValueError("encoded length does not match (n, ell)")
        if size == 1:
            flat = list(data)
        else:
            flat = [
                int.from_bytes(data[i : i + 2], "little")
                for i in range(0, len(data), 2)
            ]
        return cls(ell, [flat[i * n : (i + 1) * n] for i in range(n)])

    def __eq__(self, other) -> bool:
        if not isinstance(other, MatMod):
            return NotImplemented
        return self.ell == other.ell and self.rows == other.rows

    def __hash__(self) -> int:
        return hash((self.ell, self.rows))

    def __repr__(self) -> str:
        return f"MatMod({self.ell}, {[list(r) for r in self.rows]})"


def format_matrix(m: MatZ | MatMod) -> str:
    """Render in the package text format (header ``n l``, ``l = 0`` over Z)."""
    ell = m.ell if isinstance(m, MatMod) else 0
    lines = [f"{m.n} {ell}"]
    lines.extend(" ".join(str(v) for v in row) for row in m.rows)
    return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> MatZ | MatMod:
    """Parse the package text format back into a matrix."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty matrix text")
    header = lines[0].split()
    if len(header) != 2:
        raise ValueError("header must be 'n l'")
    n, ell = int(header[0]), int(header[1])
    if len(lines) != n + 1:
        raise ValueError(f"expected {n} rows, found {len(lines) - 1}")
    rows = []
    for ln in lines[1 : n + 1]:
        row = [int(v) for v in ln.split()]
        if len(row) != n:
            raise ValueError("row length does not match dimension")
        rows.append(row)
    if ell == 0:
        return MatZ(rows)
    return MatMod(ell, rows)
