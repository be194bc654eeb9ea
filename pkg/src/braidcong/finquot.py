"""Finite matrix groups over Z/lZ, enumerated with generator-word witnesses.

An enumeration is a breadth-first closure of its generators (and their
inverses), deduplicated on canonical byte encodings; each element keeps a
link to the element and multiplier that first produced it, so a shortest
witness word in the generators can be recovered for every element.

On top of the enumerations sit the "shadow" checks: identities between
subgroups of the braid image that hold in the infinite group are verified
as exact statements about their images in GL_n(Z/lZ). A shadow check can
never prove the infinite statement; a failing one refutes the code (or the
statement), which is why each report carries both orders and a divergence
witness.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product as iter_product

import numpy as np

from . import _kernels
from .braid import BraidWord
from .burau import integral_burau
from .errors import BudgetExceeded
from .exactmat import MatMod
from .stabilizer import gram_transvection, standard_gram

DEFAULT_ELEMENT_CAP = 5_000_000


def element_cap(requested: int | None = None) -> int:
    if requested is not None:
        return requested
    env = os.environ.get("BRAIDCONG_ELEMENT_CAP")
    return int(env) if env else DEFAULT_ELEMENT_CAP


@dataclass
class GroupEnumeration:
    """A fully enumerated matrix group over Z/lZ with witness links."""

    n: int
    ell: int
    labels: tuple[str, ...]
    generators: tuple[MatMod, ...]
    _blob: bytes
    _index: dict[bytes, int]
    _parent: list[int]
    _letter: list[int]
    _mult_meta: tuple[tuple[int, int], ...]  # letter -> (generator index, sign)

    @property
    def order(self) -> int:
        return len(self._parent)

    def encoding(self, i: int) -> bytes:
        size = self.n * self.n
        return self._blob[i * size : (i + 1) * size]

    def encodings(self) -> set[bytes]:
        size = self.n * self.n
        return {
            self._blob[i * size : (i + 1) * size] for i in range(self.order)
        }

    def element(self, i: int) -> MatMod:
        return MatMod.decode(self.encoding(i), self.n, self.ell)

    def index_of(self, m: MatMod) -> int | None:
        if m.n != self.n or m.ell != self.ell:
            return None
        return self._index.get(m.encode())

    def __contains__(self, m: MatMod) -> bool:
        return self.index_of(m) is not None

    def contains_encoding(self, enc: bytes) -> bool:
        return enc in self._index

    def witness(self, i: int) -> list[tuple[str, int]]:
        """Shortest generator word (label, sign) producing element i."""
        out: list[tuple[str, int]] = []
        while i != 0:
            letter = self._letter[i]
            gen_idx, sign = self._mult_meta[letter]
            out.append((self.labels[gen_idx], sign))
            i = self._parent[i]
        out.reverse()
        return out

    def witness_eval(self, i: int) -> MatMod:
        acc = MatMod.identity(self.n, self.ell)
        for label, sign in self.witness(i):
            gen = self.generators[self.labels.index(label)]
            acc = acc * (gen if sign > 0 else gen.inverse())
        return acc

    def as_array(self) -> np.ndarray:
        """(order, n*n) uint8 view of all canonical encodings."""
        return np.frombuffer(self._blob, dtype=np.uint8).reshape(
            self.order, self.n * self.n
        )


def enumerate_group(
    generators: list[tuple[str, MatMod]], cap: int | None = None
) -> GroupEnumeration:
    """BFS closure of the generators and their inverses.

    Raises :class:`BudgetExceeded` (with the partial count) when the element
    cap is hit.
    """
    if not generators:
        raise ValueError("at least one generator required")
    n = generators[0][1].n
    ell = generators[0][1].ell
    for _, g in generators:
        if g.n != n or g.ell != ell:
            raise ValueError("generators must share (n, ell)")
    if ell > 256:
        raise ValueError("enumeration supports moduli up to 256")
    cap = element_cap(cap)

    mults: list[bytes] = []
    meta: list[tuple[int, int]] = []
    seen = set()
    for gi, (_, g) in enumerate(generators):
        for sign, mat in ((1, g), (-1, g.inverse())):
            enc = mat.encode()
            if enc in seen:
                continue
            seen.add(enc)
            mults.append(enc)
            meta.append((gi, sign))

    blob, parent, letter, complete = _kernels.bfs_closure(mults, n, ell, cap)
    if not complete:
        raise BudgetExceeded(
            f"element cap {cap} exceeded (partial count {len(parent)})"
        )
    size = n * n
    blob_b = bytes(blob)
    index = {
        blob_b[i * size : (i + 1) * size]: i for i in range(len(parent))
    }
    return GroupEnumeration(
        n=n,
        ell=ell,
        labels=tuple(lbl for lbl, _ in generators),
        generators=tuple(g for _, g in generators),
        _blob=blob_b,
        _index=index,
        _parent=list(parent),
        _letter=list(letter),
        _mult_meta=tuple(meta),
    )


def normal_closure(
    ambient: GroupEnumeration, seeds: list[MatMod], cap: int | None = None
) -> GroupEnumeration:
    """Smallest subgroup containing the seeds and stable under conjugation
    by the ambient group's generators.

    Conjugating only the closure's current generating set suffices because
    conjugation is an automorphism; the loop re-closes until stable.
    """
    for s in seeds:
        if s not in ambient:
            raise ValueError("seed outside ambient group")
    conjugators: list[tuple[MatMod, MatMod]] = []
    for g in ambient.generators:
        g_inv = g.inverse()
        conjugators.append((g, g_inv))
        conjugators.append((g_inv, g))

    gens: list[tuple[str, MatMod]] = []
    seen: set[bytes] = set()
    for i, s in enumerate(seeds):
        enc = s.encode()
        if enc not in seen and not s.is_identity():
            seen.add(enc)
            gens.append((f"s{i}", s))
    if not gens:
        # closure of the identity (or empty seed list) is trivial
        ident = MatMod.identity(ambient.n, ambient.ell)
        return enumerate_group([("s0", ident)], cap=cap)

    while True:
        enum = enumerate_group(gens, cap=cap)
        new: list[MatMod] = []
        for _, t in gens:
            for c, c_inv in conjugators:
                cand = c * t * c_inv
                enc = cand.encode()
                if not enum.contains_encoding(enc) and enc not in seen:
                    seen.add(enc)
                    new.append(cand)
        if not new:
            return enum
        gens.extend((f"c{len(gens) + k}", m) for k, m in enumerate(new))


@dataclass(frozen=True)
class FilterSubset:
    """The subset {A : A = I mod m} of an enumeration (m divides l)."""

    m: int
    indices: tuple[int, ...]
    encodings: frozenset[bytes]

    @property
    def order(self) -> int:
        return len(self.indices)


def congruence_filter(enum: GroupEnumeration, m: int) -> FilterSubset:
    """Elements congruent to the identity mod m.

    This subset equals the mod-l image of the level-m subgroup: congruent
    elements lift, and every lift lies in the level-m subgroup.
    """
    if m < 1:
        raise ValueError("level must be >= 1")
    if m == 1:
        idx = tuple(range(enum.order))
        return FilterSubset(1, idx, frozenset(enum.encodings()))
    if enum.ell % m != 0:
        raise ValueError(f"{m} does not divide the modulus {enum.ell}")
    arr = enum.as_array().astype(np.int64)
    n = enum.n
    ident = np.eye(n, dtype=np.int64).reshape(n * n)
    mask = ((arr - ident) % m == 0).all(axis=1)
    indices = tuple(int(i) for i in np.nonzero(mask)[0])
    size = n * n
    encs = frozenset(enum._blob[i * size : (i + 1) * size] for i in indices)
    return FilterSubset(m, indices, encs)


# -- distinguished enumerations -------------------------------------------


@lru_cache(maxsize=None)
def braid_image(n: int, ell: int, cap: int | None = None) -> GroupEnumeration:
    """The image of the n-strand braid group in GL_n(Z/lZ)."""
    gens = [
        (f"s{i}", integral_burau(BraidWord.generator(n, i)).reduce_mod(ell))
        for i in range(1, n)
    ]
    return enumerate_group(gens, cap=cap)


def _sp_chain_vectors(g: int) -> list[tuple[int, ...]]:
    """Transvection vectors generating Sp_2g(Z): the genus-g chain plus the
    extra a_i handles (for g = 1 just a_1, b_1)."""
    n = 2 * g

    def basis(i):  # a_k = 2k, b_k = 2k+1 in interleaved coordinates
        v = [0] * n
        v[i] = 1
        return v

    vecs = [tuple(basis(0)), tuple(basis(1))]
    for k in range(1, g):
        prev_a = basis(2 * (k - 1))
        cur_a = basis(2 * k)
        vecs.append(tuple(a - b for a, b in zip(cur_a, prev_a)))
        vecs.append(tuple(basis(2 * k + 1)))
        vecs.append(tuple(cur_a))
    return vecs


def sp_group_order(g: int, ell: int) -> int:
    """|Sp_2g(Z/lZ)| by the classical product formula (multiplicative over
    prime powers)."""
    if ell < 2:
        raise ValueError("modulus must be >= 2")
    total = 1
    rest = ell
    p = 2
    while rest > 1:
        if rest % p == 0:
            k = 0
            while rest % p == 0:
                rest //= p
                k += 1
            size = p ** (g * g)
            for i in range(1, g + 1):
                size *= p ** (2 * i) - 1
            size *= p ** ((2 * g * g + g) * (k - 1))
            total *= size
        p += 1 if p == 2 else 2
    return total


@lru_cache(maxsize=None)
def symplectic_group(g: int, ell: int, cap: int | None = None) -> GroupEnumeration:
    """All of Sp_2g(Z/lZ), enumerated from a generating set of transvections.

    The order is checked against the product formula, so a bad generating
    set raises instead of silently producing a proper subgroup.
    """
    gram = standard_gram(g)
    gens = []
    for i, vec in enumerate(_sp_chain_vectors(g)):
        gens.append((f"t{i}", gram_transvection(gram, vec).reduce_mod(ell)))
    enum = enumerate_group(gens, cap=cap)
    expected = sp_group_order(g, ell)
    if enum.order != expected:
        raise RuntimeError(
            f"Sp_{2*g}(Z/{ell}) enumeration has order {enum.order}, "
            f"expected {expected}"
        )
    return enum


# -- check reports ---------------------------------------------------------


@dataclass
class CheckReport:
    """A structured PASS/FAIL report with stable field order."""

    name: str
    passed: bool
    fields: dict[str, object] = field(default_factory=dict)
    divergence: str | None = None

    def render(self) -> str:
        lines = [f"check: {self.name}"]
        for k, v in self.fields.items():
            lines.append(f"{k}: {v}")
        if self.divergence is not None:
            lines.append(f"divergence: {self.divergence}")
        lines.append(f"status: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines) + "\n"


def _compare_closure_to_filter(
    name: str,
    fields: dict[str, object],
    closure: GroupEnumeration,
    filt: FilterSubset,
) -> CheckReport:
    closure_set = closure.encodings()
    fields["closure-order"] = closure.order
    fields["filter-order"] = filt.order
    passed = closure_set == set(filt.encodings)
    divergence = None
    if not passed:
        extra = closure_set - set(filt.encodings)
        missing = set(filt.encodings) - closure_set
        sample = next(iter(extra or missing))
        side = "closure-only" if extra else "filter-only"
        divergence = f"{side} element {sample.hex()}"
    return CheckReport(name, passed, fields, divergence)


def check_level_generation(
    n: int, m: int, cap: int | None = None, modulus_factor: int = 2
) -> CheckReport:
    """The subgroup generated by the level-2m elements and the m-th powers
    of half-twists must be the full level-m subgroup.

    Verified inside the braid image mod ``modulus_factor * m``. At the
    default factor 2 the level-2m part has trivial image, so the check is
    normal-closure(half-twist power) == congruence-filter(m); at factor 4
    (or any multiple of 2) the closure is joined with the level-2m filter
    first.
    """
    if modulus_factor < 2 or modulus_factor % 2 != 0:
        raise ValueError("modulus factor must be a positive multiple of 2")
    ell = modulus_factor * m
    ambient = braid_image(n, ell, cap)
    seed = integral_burau(BraidWord.generator(n, 1) ** m).reduce_mod(ell)
    closure = normal_closure(ambient, [seed], cap=cap)
    fields: dict[str, object] = {
        "n": n,
        "m": m,
        "modulus": ell,
        "ambient-order": ambient.order,
    }
    if modulus_factor > 2:
        level_2m = congruence_filter(ambient, 2 * m)
        gens: list[tuple[str, MatMod]] = [
            (f"p{i}", closure.element(i)) for i in range(closure.order)
        ]
        gens.extend(
            (f"f{i}", ambient.element(i)) for i in level_2m.indices
        )
        closure = enumerate_group(gens, cap=cap)
        fields["level-2m-order"] = level_2m.order
    filt = congruence_filter(ambient, m)
    return _compare_closure_to_filter("level-generation", fields, closure, filt)


def check_level_generation_2power(n: int, r: int, cap: int | None = None) -> CheckReport:
    """The same identity at m = 2^r (checked mod 2^{r+1})."""
    report = check_level_generation(n, 2**r, cap)
    report.name = "level-generation-2power"
    report.fields = {"n": n, "r": r, **report.fields}
    return report


def check_transvection_power_generation(
    g: int, m: int, cap: int | None = None, orthogonal_to_w: bool = False
) -> CheckReport:
    """Inside Sp_2g(Z/2m): the subgroup generated by m-th transvection powers
    must equal the subset congruent to I mod m.

    With ``orthogonal_to_w`` only vectors orthogonal to w = a_1 are used and
    the comparison is against the congruent elements that also fix w and act
    trivially on w-perp/w wherever that is forced.
    """
    ell = 2 * m
    ambient = symplectic_group(g, ell, cap)
    gram = standard_gram(g)
    n = 2 * g
    w = tuple(1 if i == 0 else 0 for i in range(n))

    gens: list[tuple[str, MatMod]] = []
    seen: set[bytes] = set()
    for residues in iter_product(range(ell), repeat=n):
        if not any(residues):
            continue
        if orthogonal_to_w:
            pair = sum(
                residues[i] * gram[i][j] * w[j] for i in range(n) for j in range(n)
            )
            if pair % ell != 0:
                continue
        mat = gram_transvection(gram, residues, m).reduce_mod(ell)
        enc = mat.encode()
        if mat.is_identity() or enc in seen:
            continue
        seen.add(enc)
        gens.append((f"u{len(gens)}", mat))

    generated = enumerate_group(gens, cap=cap) if gens else None
    filt = congruence_filter(ambient, m)
    fields: dict[str, object] = {
        "g": g,
        "m": m,
        "modulus": ell,
        "ambient-order": ambient.order,
        "power-generators": len(gens),
    }
    if orthogonal_to_w:
        keep = []
        for i in filt.indices:
            mat = ambient.element(i)
            if mat.apply(w) == tuple(v % ell for v in w):
                keep.append(i)
        size = n * n
        encs = frozenset(ambient._blob[i * size : (i + 1) * size] for i in keep)
        filt = FilterSubset(m, tuple(keep), encs)
        fields["variant"] = "orthogonal-to-w"
    if generated is None:
        return CheckReport(
            "transvection-power-generation", filt.order == 1, fields
        )
    return _compare_closure_to_filter(
        "transvection-power-generation", fields, generated, filt
    )


def default_extra_kernel_words(n: int) -> list[BraidWord]:
    """The standard kernel words used as extra normal generators."""
    out: list[BraidWord] = []
    if n >= 3:
        out.append(BraidWord.parse(f"{n}: 1 2") ** 6)
    if n >= 5:
        out.append(BraidWord.parse(f"{n}: 1 2 3 4") ** 10)
    return out


def check_normal_generators(
    n: int,
    m: int,
    extra_words: list[BraidWord] | None = None,
    cap: int | None = None,
) -> CheckReport:
    """Inside the braid image mod 2m: the normal closure of the m-th power
    of a half-twist together with the extra words must equal the subset
    congruent to I mod m; also reports whether each extra word's integral
    image is exactly the identity."""
    if extra_words is None:
        extra_words = default_extra_kernel_words(n)
    ell = 2 * m
    ambient = braid_image(n, ell, cap)
    seeds = [integral_burau(BraidWord.generator(n, 1) ** m).reduce_mod(ell)]
    fields: dict[str, object] = {
        "n": n,
        "m": m,
        "modulus": ell,
        "ambient-order": ambient.order,
    }
    for k, w in enumerate(extra_words):
        img = integral_burau(w)
        fields[f"extra{k}-integral-identity"] = img.is_identity()
        seeds.append(img.reduce_mod(ell))
    closure = normal_closure(ambient, seeds, cap=cap)
    filt = congruence_filter(ambient, m)
    return _compare_closure_to_filter("normal-generators", fields, closure, filt)
