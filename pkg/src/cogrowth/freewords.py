"""Letters and freely reduced words over ``r`` generators.

Letters carry an integer *code* used throughout the counting code:
``code = 2 * (index - 1) + (0 if sign > 0 else 1)``, so the inverse of a code
is ``code ^ 1`` and sorting codes gives the order ``a < A < b < B < ...``
(positive sign first).
"""
from __future__ import annotations

import string
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence


def check_rank(r: int) -> None:
    if not isinstance(r, int) or r < 2:
        raise ValueError(f"rank must be an integer >= 2 (q = 2r-1 > 1), got {r!r}")


@dataclass(frozen=True)
class Letter:
    index: int
    sign: int = 1

    def __post_init__(self):
        if self.index < 1:
            raise ValueError(f"letter index must be >= 1, got {self.index}")
        if self.sign not in (1, -1):
            raise ValueError(f"letter sign must be +1 or -1, got {self.sign}")

    def inverse(self) -> "Letter":
        return Letter(self.index, -self.sign)

    @property
    def code(self) -> int:
        return 2 * (self.index - 1) + (0 if self.sign > 0 else 1)

    @classmethod
    def from_code(cls, code: int) -> "Letter":
        return cls(code // 2 + 1, 1 if code % 2 == 0 else -1)

    def __str__(self):
        ch = string.ascii_lowercase[self.index - 1] if self.index <= 26 else f"g{self.index}"
        return ch if self.sign > 0 else (ch.upper() if self.index <= 26 else ch + "^-1")

    # (index, sign) order with the positive sign first
    def __lt__(self, other):
        return self.code < other.code

    def __le__(self, other):
        return self.code <= other.code

    def __gt__(self, other):
        return self.code > other.code

    def __ge__(self, other):
        return self.code >= other.code


def _reduce_codes(codes: Iterable[int]) -> tuple[int, ...]:
    stack: list[int] = []
    for c in codes:
        if stack and stack[-1] == c ^ 1:
            stack.pop()
        else:
            stack.append(c)
    return tuple(stack)


@dataclass(frozen=True)
class ReducedWord:
    """A freely reduced word; construct through :func:`reduce` or :func:`parse_word`."""

    codes: tuple[int, ...]

    def __post_init__(self):
        for x, y in zip(self.codes, self.codes[1:]):
            if x == y ^ 1:
                raise ValueError("word is not freely reduced")

    @property
    def letters(self) -> tuple[Letter, ...]:
        return tuple(Letter.from_code(c) for c in self.codes)

    @property
    def length(self) -> int:
        return len(self.codes)

    def __len__(self):
        return len(self.codes)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    def inverse(self) -> "ReducedWord":
        return ReducedWord(tuple(c ^ 1 for c in reversed(self.codes)))

    def __mul__(self, other: "ReducedWord") -> "ReducedWord":
        return ReducedWord(_reduce_codes(self.codes + other.codes))

    def is_identity(self) -> bool:
        return not self.codes

    def __str__(self):
        return "".join(str(x) for x in self.letters) or "1"


def _as_codes(letters) -> tuple[int, ...]:
    if isinstance(letters, ReducedWord):
        return letters.codes
    if isinstance(letters, str):
        return parse_word(letters).codes if letters else ()
    out = []
    for x in letters:
        out.append(x.code if isinstance(x, Letter) else int(x))
    return tuple(out)


def reduce(letters: Sequence[Letter] | ReducedWord | str) -> ReducedWord:
    """Free reduction by cancelling adjacent ``x x^-1`` pairs."""
    return ReducedWord(_reduce_codes(_as_codes(letters)))


def raw_codes(text: str) -> tuple[int, ...]:
    """Parse ``"abAB"``-style words without reducing: lowercase letters are
    generators, uppercase their inverses, ``"1"`` the empty word.  Whitespace
    is ignored."""
    codes = []
    for ch in text:
        if ch.isspace() or ch == "1":
            continue
        if ch not in string.ascii_letters:
            raise ValueError(f"cannot parse letter {ch!r}")
        index = string.ascii_lowercase.index(ch.lower()) + 1
        codes.append(2 * (index - 1) + (1 if ch.isupper() else 0))
    return tuple(codes)


def parse_word(text: str) -> ReducedWord:
    return ReducedWord(_reduce_codes(raw_codes(text)))


def count_reduced(r: int, n: int) -> int:
    check_rank(r)
    if n < 0:
        raise ValueError("length must be nonnegative")
    return 1 if n == 0 else 2 * r * (2 * r - 1) ** (n - 1)


def enumerate_codes(r: int, n: int) -> Iterator[tuple[int, ...]]:
    """Reduced words of length ``n`` as code tuples, lexicographic in codes."""
    check_rank(r)
    if n < 0:
        raise ValueError("length must be nonnegative")
    alphabet = range(2 * r)
    if n == 0:
        yield ()
        return

    word = [0] * n

    def rec(pos: int, prev: int) -> Iterator[tuple[int, ...]]:
        for c in alphabet:
            if c == prev ^ 1:
                continue
            word[pos] = c
            if pos + 1 == n:
                yield tuple(word)
            else:
                yield from rec(pos + 1, c)

    yield from rec(0, -2)


def enumerate_reduced(r: int, n: int) -> Iterator[ReducedWord]:
    """Every reduced word of length exactly ``n``, once each, in lexicographic order."""
    for codes in enumerate_codes(r, n):
        yield ReducedWord(codes)


def random_codes(r: int, n: int, rng) -> tuple[int, ...]:
    """Uniform random (not necessarily reduced) letter sequence; ``rng`` is a ``random.Random``."""
    return tuple(rng.randrange(2 * r) for _ in range(n))


def mirror_inverse(codes: Sequence[int]) -> tuple[int, ...]:
    return tuple(c ^ 1 for c in reversed(codes))


__all__ = [
    "Letter",
    "ReducedWord",
    "reduce",
    "parse_word",
    "raw_codes",
    "count_reduced",
    "enumerate_reduced",
    "enumerate_codes",
    "random_codes",
    "mirror_inverse",
    "check_rank",
]
