"""Braid words and homomorphisms between braid groups.

Words are purely syntactic: letters are pairs (generator index, +-1) and the
only rewriting ever performed is free reduction. Semantic equality of braids
is always checked downstream on matrix images, never on words.

Text format: ``"n: s1 s2 ..."`` where each ``s`` is a signed generator index,
e.g. ``"4: 1 2 -3 1"``.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class BraidWord:
    """A word in the standard generators of the braid group on ``strands``.

    ``letters`` is a sequence of (index, sign) with index in [1, strands-1]
    and sign +-1. Exponents are stored one letter at a time; ``pretty``
    compresses runs for display only.
    """

    strands: int
    letters: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.strands < 2:
            raise ValueError("braid group needs at least 2 strands")
        for idx, sign in self.letters:
            if not 1 <= idx <= self.strands - 1:
                raise ValueError(
                    f"generator index {idx} out of range for {self.strands} strands"
                )
            if sign not in (1, -1):
                raise ValueError("letter sign must be +-1")

    # -- construction ----------------------------------------------------

    @classmethod
    def from_ints(cls, strands: int, signed: list[int] | tuple[int, ...]) -> "BraidWord":
        letters = []
        for s in signed:
            if s == 0:
                raise ValueError("0 is not a valid signed generator")
            letters.append((abs(s), 1 if s > 0 else -1))
        return cls(strands, tuple(letters))

    @classmethod
    def parse(cls, text: str, strands: int | None = None) -> "BraidWord":
        """Parse ``"n: s1 s2 ..."``; a bare letter list needs ``strands``."""
        text = text.strip()
        if ":" in text:
            head, _, tail = text.partition(":")
            n = int(head.strip())
            if strands is not None and strands != n:
                raise ValueError(f"word declares {n} strands, expected {strands}")
        else:
            if strands is None:
                raise ValueError("strand count required for bare letter lists")
            n, tail = strands, text
        signed = [int(tok) for tok in tail.split()]
        return cls.from_ints(n, signed)

    @classmethod
    def generator(cls, strands: int, idx: int, sign: int = 1) -> "BraidWord":
        return cls(strands, ((idx, sign),))

    # -- group operations -------------------------------------------------

    def __mul__(self, other: "BraidWord") -> "BraidWord":
        """Concatenation (no free reduction)."""
        if not isinstance(other, BraidWord):
            return NotImplemented
        if self.strands != other.strands:
            raise ValueError("strand count mismatch")
        return BraidWord(self.strands, self.letters + other.letters)

    def __pow__(self, k: int) -> "BraidWord":
        if k < 0:
            return self.inverse() ** (-k)
        return BraidWord(self.strands, self.letters * k)

    def inverse(self) -> "BraidWord":
        return BraidWord(
            self.strands, tuple((i, -s) for i, s in reversed(self.letters))
        )

    def free_reduce(self) -> "BraidWord":
        """Cancel adjacent inverse pairs until none remain."""
        out: list[tuple[int, int]] = []
        for letter in self.letters:
            if out and out[-1][0] == letter[0] and out[-1][1] == -letter[1]:
                out.pop()
            else:
                out.append(letter)
        return BraidWord(self.strands, tuple(out))

    def __len__(self) -> int:
        return len(self.letters)

    # -- serialization ----------------------------------------------------

    def signed_ints(self) -> list[int]:
        return [i * s for i, s in self.letters]

    def __str__(self) -> str:
        body = " ".join(str(v) for v in self.signed_ints())
        return f"{self.strands}:{' ' + body if body else ''}"

    def pretty(self) -> str:
        """Run-compressed display form, e.g. ``s1^3 s2^-1``."""
        if not self.letters:
            return "<empty>"
        parts = []
        run_idx, run_exp = self.letters[0][0], self.letters[0][1]
        for idx, sign in self.letters[1:]:
            if idx == run_idx and (run_exp > 0) == (sign > 0):
                run_exp += sign
            else:
                parts.append(_fmt_run(run_idx, run_exp))
                run_idx, run_exp = idx, sign
        parts.append(_fmt_run(run_idx, run_exp))
        return " ".join(parts)


def _fmt_run(idx: int, exp: int) -> str:
    return f"s{idx}" if exp == 1 else f"s{idx}^{exp}"


def conjugate_word(g: BraidWord, h: BraidWord) -> BraidWord:
    """Return ``g h g^-1``, freely reduced."""
    if g.strands != h.strands:
        raise ValueError("strand count mismatch")
    return (g * h * g.inverse()).free_reduce()


def fold_to_three_strands(w: BraidWord) -> BraidWord:
    """The letterwise homomorphism B_4 -> B_3: s1, s3 -> s1 and s2 -> s2.

    Exponents are preserved; the image is freely reduced.
    """
    if w.strands != 4:
        raise ValueError("fold_to_three_strands is defined on 4-strand words")
    mapped = tuple((1 if i in (1, 3) else 2, s) for i, s in w.letters)
    return BraidWord(3, mapped).free_reduce()


def include(w: BraidWord, strands: int) -> BraidWord:
    """Reinterpret a word on ``strands >= w.strands`` strands (same letters)."""
    if strands < w.strands:
        raise ValueError(f"cannot include a {w.strands}-strand word into {strands}")
    return BraidWord(strands, w.letters)
