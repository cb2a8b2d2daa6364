"""The eight-letter alphabet and stack-pass word reduction.

Letters are small integers: ``a`` is 0, the seven remaining letters are
1..7 read as 3-bit vectors over the basis (b, c, x), so that the product
of two non-``a`` letters is bitwise XOR.  Text I/O uses ``a b c d x B C D``
where B, C, D are the x-twisted partners of b, c, d.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

A = 0
X = 4

LETTER_NAMES = "abcdxBCD"
_NAME_TO_LETTER = {ch: i for i, ch in enumerate(LETTER_NAMES)}

SPINE_LETTERS = (1, 2, 3, 4, 5, 6, 7)

# Full multiplication table among the seven nontrivial non-`a` letters,
# kept as explicit data (independent of the XOR rule) for verification.
REFERENCE_PRODUCTS = (
    ("b", "c", "d"), ("c", "d", "b"), ("d", "b", "c"),
    ("B", "C", "d"), ("C", "D", "b"), ("D", "B", "c"),
    ("b", "C", "D"), ("c", "D", "B"), ("d", "B", "C"),
    ("B", "c", "D"), ("C", "d", "B"), ("D", "b", "C"),
    ("b", "B", "x"), ("c", "C", "x"), ("d", "D", "x"),
    ("b", "x", "B"), ("c", "x", "C"), ("d", "x", "D"),
    ("B", "x", "b"), ("C", "x", "c"), ("D", "x", "d"),
)


class WordParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"position {position}: {message}")
        self.position = position


def spine_mul(k1: int, k2: int) -> int:
    """Product of two non-``a`` letters (0 = the trivial letter)."""
    if not (0 <= k1 <= 7 and 0 <= k2 <= 7):
        raise ValueError("letters are encoded as 0..7")
    return k1 ^ k2


def letter_label(k: int, symbol: int) -> bool:
    """True when letter k swaps the two children at a level carrying ``symbol``.

    b swaps unless the symbol is 2, c unless it is 1, d unless it is 0,
    and x always; composite letters combine these parities.
    """
    bit = (k & 1) * (symbol != 2) + ((k >> 1) & 1) * (symbol != 1) + ((k >> 2) & 1)
    return bit % 2 == 1


# Letters acting trivially at a level carrying symbol q (frozen per symbol).
I_LETTERS = {
    q: frozenset(k for k in SPINE_LETTERS if not letter_label(k, q))
    for q in (0, 1, 2)
}


def parse_letters(text: str) -> tuple[int, ...]:
    """Letter list from text; whitespace is optional separator."""
    out = []
    for i, ch in enumerate(text):
        if ch.isspace():
            continue
        if ch not in _NAME_TO_LETTER:
            raise WordParseError(f"unknown letter {ch!r}", i)
        out.append(_NAME_TO_LETTER[ch])
    return tuple(out)


def render_letters(letters: Iterable[int]) -> str:
    return " ".join(LETTER_NAMES[k] for k in letters)


@dataclass(frozen=True)
class ReducedWord:
    """An alternating word: optional a, then spine letters separated by a.

    ``spine`` holds the non-``a`` letters in order; the rendered word is
    [a] s1 a s2 a ... a sm [a].  The empty word and the bare word "a" are
    the two degenerate empty-spine cases (the latter stored as leading_a).
    """

    leading_a: bool
    spine: tuple[int, ...]
    trailing_a: bool

    def __post_init__(self):
        if any(not 1 <= k <= 7 for k in self.spine):
            raise ValueError("spine letters must be nontrivial (1..7)")
        if not self.spine and self.trailing_a:
            object.__setattr__(self, "leading_a", True)
            object.__setattr__(self, "trailing_a", False)

    def letters(self) -> tuple[int, ...]:
        out = [A] if self.leading_a else []
        for i, k in enumerate(self.spine):
            if i:
                out.append(A)
            out.append(k)
        if self.trailing_a:
            out.append(A)
        return tuple(out)

    @property
    def a_count(self) -> int:
        if not self.spine:
            return 1 if self.leading_a else 0
        return len(self.spine) - 1 + self.leading_a + self.trailing_a

    @property
    def length(self) -> int:
        return len(self.spine) + self.a_count

    def reversed(self) -> "ReducedWord":
        return ReducedWord(self.trailing_a, self.spine[::-1], self.leading_a)

    def __str__(self) -> str:
        return render_letters(self.letters())


EMPTY_WORD = ReducedWord(False, (), False)


@dataclass(frozen=True)
class ReductionReceipt:
    word: ReducedWord
    contractions: int


def reduce(raw: Iterable[int]) -> ReductionReceipt:
    """Reduce a letter list to alternating form by a single stack pass.

    Contraction count convention: cancelling ``a a``, merging two adjacent
    spine letters, and a merge that yields the trivial letter (which is
    then dropped) each count as one contraction.
    """
    stack: list[int] = []
    alpha = 0
    for let in raw:
        if not 0 <= let <= 7:
            raise ValueError("letters are encoded as 0..7")
        while True:
            if not stack:
                stack.append(let)
                break
            top = stack[-1]
            if top == A and let == A:
                stack.pop()
                alpha += 1
                break
            if top != A and let != A:
                stack.pop()
                alpha += 1
                let ^= top
                if let == 0:
                    break
                continue
            stack.append(let)
            break
    if not stack:
        return ReductionReceipt(EMPTY_WORD, alpha)
    leading = stack[0] == A
    trailing = len(stack) > 1 and stack[-1] == A
    spine = tuple(v for v in stack if v != A)
    return ReductionReceipt(ReducedWord(leading, spine, trailing), alpha)


def letter_counts(word: ReducedWord) -> dict[str, int]:
    counts = {name: 0 for name in LETTER_NAMES}
    for k in word.letters():
        counts[LETTER_NAMES[k]] += 1
    return counts


def xyz_profile(word: ReducedWord) -> tuple[int, int, int]:
    """(x, y, z) letter-frequency aggregates of a word.

    x counts d, B, C; y counts c, B, D; z counts b, C, D -- i.e. for each
    symbol q in 0,1,2 the letters that act trivially at a level carrying q.
    """
    return tuple(
        sum(1 for k in word.spine if k in I_LETTERS[q]) for q in (0, 1, 2)
    )
