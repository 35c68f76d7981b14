"""Words in generator symbols and their evaluation as isometries."""

from __future__ import annotations

import re
from dataclasses import dataclass

from .geometry import GeometryError, Isometry, Space


@dataclass(frozen=True)
class Word:
    """Sequence of ``(symbol, exponent)`` letters with exponent +1 or -1."""

    letters: tuple = ()

    def __post_init__(self):
        for sym, e in self.letters:
            if e not in (1, -1):
                raise ValueError("letter exponents must be +1 or -1")
        object.__setattr__(self, "letters", tuple((str(s), int(e)) for s, e in self.letters))

    @classmethod
    def letter(cls, symbol: str, exponent: int = 1) -> "Word":
        return cls(((symbol, exponent),))

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def __pow__(self, k: int) -> "Word":
        if k < 0:
            return self.inverse() ** (-k)
        return Word(self.letters * k)

    def inverse(self) -> "Word":
        return Word(tuple((s, -e) for s, e in reversed(self.letters)))

    def reduced(self) -> "Word":
        """Free reduction (cancel adjacent ``x x^-1``)."""
        out: list = []
        for s, e in self.letters:
            if out and out[-1] == (s, -e):
                out.pop()
            else:
                out.append((s, e))
        return Word(tuple(out))

    def evaluate(self, bindings: dict, space: Space | None = None) -> Isometry:
        if not self.letters:
            if space is None:
                raise GeometryError("empty word needs a space to evaluate")
            return Isometry.identity(space)
        g = None
        for s, e in self.letters:
            if s not in bindings:
                raise GeometryError(f"unknown generator symbol {s!r}")
            h = bindings[s] if e == 1 else bindings[s].inverse()
            g = h if g is None else g @ h
        return g

    def __str__(self):
        if not self.letters:
            return "1"
        return "*".join(s if e == 1 else f"{s}^-1" for s, e in self.letters)

    @classmethod
    def parse(cls, text: str) -> "Word":
        """Parse ``a*b^-1*c^2`` style words ("1" or "" is the empty word)."""
        text = text.strip()
        if text in ("", "1"):
            return cls()
        letters = []
        for part in text.split("*"):
            m = re.fullmatch(r"\s*([A-Za-z_][\w\-]*?)(?:\^(-?\d+))?\s*", part)
            if not m:
                raise ValueError(f"cannot parse word factor {part!r}")
            k = int(m.group(2) or 1)
            sign = 1 if k > 0 else -1
            letters += [(m.group(1), sign)] * abs(k)
        return cls(tuple(letters))


def _token_key(word: Word, order: dict) -> tuple:
    return tuple((order.get(s, len(order)), 0 if e == 1 else 1, s) for s, e in word.letters)


def canonical_cyclic(word: Word, order: dict) -> Word:
    """Least representative over cyclic shifts of the word and of its inverse."""
    if not word.letters:
        return word
    best = None
    for w in (word, word.inverse()):
        L = w.letters
        for i in range(len(L)):
            cand = Word(L[i:] + L[:i])
            key = _token_key(cand, order)
            if best is None or key < best[0]:
                best = (key, cand)
    return best[1]


@dataclass(frozen=True)
class Relation:
    """The relator ``word ** exponent``."""

    word: Word
    exponent: int = 1

    def full(self) -> Word:
        return self.word ** self.exponent

    def evaluate(self, bindings: dict, space: Space) -> Isometry:
        return self.word.evaluate(bindings, space) ** self.exponent

    def __len__(self):
        return len(self.word) * self.exponent

    def __str__(self):
        base = str(self.word)
        if self.exponent == 1:
            return base
        if len(self.word) == 1 and self.word.letters[0][1] == 1:
            return f"{base}^{self.exponent}"
        return f"({base})^{self.exponent}"

    @classmethod
    def parse(cls, text: str) -> "Relation":
        text = text.strip()
        m = re.fullmatch(r"\((.*)\)\^(\d+)", text)
        if m:
            return cls(Word.parse(m.group(1)), int(m.group(2)))
        m = re.fullmatch(r"([A-Za-z_]\w*)\^(\d+)", text)
        if m:
            return cls(Word.parse(m.group(1)), int(m.group(2)))
        return cls(Word.parse(text), 1)
