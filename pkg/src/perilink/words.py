"""Free-group words over indexed generators.

A word is a flat sequence of letters (generator index, exponent) with
exponent +1 or -1.  Words are kept unreduced; reduction is never needed
for Wirtinger relations or longitude reading.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Word:
    letters: tuple[tuple[int, int], ...] = field(default=())

    def __post_init__(self):
        for gen, exp in self.letters:
            if gen < 0:
                raise ValueError(f"negative generator index {gen}")
            if exp not in (1, -1):
                raise ValueError(f"letter exponent must be +1 or -1, got {exp}")

    @staticmethod
    def identity() -> "Word":
        return Word()

    @staticmethod
    def generator(gen: int, exp: int = 1) -> "Word":
        """Single-generator word g^exp for any integer exp."""
        if exp == 0:
            return Word()
        sign = 1 if exp > 0 else -1
        return Word(tuple((gen, sign) for _ in range(abs(exp))))

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def inverse(self) -> "Word":
        return Word(tuple((g, -e) for g, e in reversed(self.letters)))

    def __len__(self) -> int:
        return len(self.letters)

    def max_generator(self) -> int:
        """Largest generator index used, or -1 for the empty word."""
        return max((g for g, _ in self.letters), default=-1)

    def abelianized(self, num_generators: int) -> list[int]:
        """Exponent-sum vector over the first num_generators generators."""
        vec = [0] * num_generators
        for g, e in self.letters:
            vec[g] += e
        return vec

    def to_signed_ints(self) -> list[int]:
        """1-based signed index sequence: (g, +1) -> g+1, (g, -1) -> -(g+1)."""
        return [(g + 1) * e for g, e in self.letters]

    @staticmethod
    def from_signed_ints(seq) -> "Word":
        letters = []
        for s in seq:
            if s == 0:
                raise ValueError("0 is not a valid signed generator index")
            letters.append((abs(s) - 1, 1 if s > 0 else -1))
        return Word(tuple(letters))

    def to_pairs(self) -> list[list[int]]:
        """1-based [index, exponent] pairs, the presentation JSON encoding."""
        return [[g + 1, e] for g, e in self.letters]

    @staticmethod
    def from_pairs(pairs) -> "Word":
        letters = []
        for g, e in pairs:
            if g < 1:
                raise ValueError(f"generator indices in pairs are 1-based, got {g}")
            if e == 0:
                raise ValueError("zero exponent letter")
            sign = 1 if e > 0 else -1
            letters.extend((g - 1, sign) for _ in range(abs(e)))
        return Word(tuple(letters))

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        parts = []
        for g, e in self.letters:
            parts.append(f"x{g}" if e == 1 else f"x{g}^-1")
        return "*".join(parts)
