"""Group elements acting on the binary rooted tree.

An element is a reduced word bound to a shift of its defining sequence.
Products apply right-to-left: ``act(mul(g, h), v) == act(g, act(h, v))``.
Equality is decided by the contracting section recursion: the two child
sections of a word of length L have word length at most (L+1)/2, so the
descent terminates.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Optional

from .omega import OmegaSpec, shift as shift_omega, shift_normalize, symbol_at
from .words import (
    A,
    EMPTY_WORD,
    ReducedWord,
    letter_label,
    parse_letters,
    reduce,
    render_letters,
)


class ContextMismatch(ValueError):
    """Operands live over different sequences or shifts."""


class OddParityError(ValueError):
    """Sections requested for an element outside the level-one stabilizer."""


@dataclass(frozen=True)
class Element:
    word: ReducedWord
    omega: OmegaSpec
    shift: int

    @staticmethod
    def identity(omega: OmegaSpec, shift: int = 0) -> "Element":
        return Element(EMPTY_WORD, omega, shift_normalize(omega, shift))

    @staticmethod
    def from_letters(letters, omega: OmegaSpec, shift: int = 0) -> "Element":
        return Element(reduce(letters).word, omega, shift_normalize(omega, shift))

    @staticmethod
    def from_text(text: str, omega: OmegaSpec, shift: int = 0) -> "Element":
        return Element.from_letters(parse_letters(text), omega, shift)

    @property
    def length(self) -> int:
        return self.word.length

    @property
    def in_stabilizer(self) -> bool:
        """True when the element fixes both level-one vertices (even a-count)."""
        return self.word.a_count % 2 == 0

    def __str__(self) -> str:
        return f"{self.word} @ {self.shift} @ {self.omega}"


def generator(letter, omega: OmegaSpec, shift: int = 0) -> Element:
    """Single-letter element; ``letter`` is an int 0..7 or a letter name."""
    if isinstance(letter, str):
        (letter,) = parse_letters(letter)
    if letter == A:
        return Element(ReducedWord(True, (), False), omega, shift_normalize(omega, shift))
    return Element(ReducedWord(False, (letter,), False), omega, shift_normalize(omega, shift))


def all_generators(omega: OmegaSpec, shift: int = 0) -> tuple[Element, ...]:
    return tuple(generator(k, omega, shift) for k in range(8))


@dataclass(frozen=True)
class WreathDecomposition:
    top_swap: bool
    left: Element
    right: Element


@dataclass(frozen=True)
class Portrait:
    """Swap/fix labels at every internal vertex of depth below ``depth``."""

    depth: int
    labels: dict

    def all_trivial(self) -> bool:
        return all(v == "I" for v in self.labels.values())


def spine_root_label(letter: int, omega: OmegaSpec, shift: int, level: int) -> str:
    """P/I behaviour of a non-``a`` letter at the given level of its spine."""
    if level < 1:
        raise ValueError("levels are 1-based")
    if not 1 <= letter <= 7:
        raise ValueError("expected a nontrivial non-a letter")
    sym = symbol_at(omega, shift + level)
    return "P" if letter_label(letter, sym) else "I"


def split_letters(letters, omega: OmegaSpec, shift: int):
    """Raw one-level substitution: (top_swap, left letters, right letters).

    Scanning left to right, a spine letter whose remaining suffix contains
    r ``a``'s (mod 2) sends its swap contribution (an ``a`` when it acts as
    P at this level) to child r and a copy of itself to the other child;
    the children are returned unreduced.
    """
    total_a = sum(1 for v in letters if v == A)
    sym = symbol_at(omega, shift + 1)
    kids: tuple[list[int], list[int]] = ([], [])
    seen_a = 0
    for let in letters:
        if let == A:
            seen_a += 1
        else:
            r = (total_a + seen_a) & 1
            if letter_label(let, sym):
                kids[r].append(A)
            kids[1 - r].append(let)
    return bool(total_a & 1), kids[0], kids[1]


_DECOMPOSE: dict = {}
_IDENTITY: dict = {}
_SIGNATURE: dict = {}
_ORDER: dict = {}


def clear_caches() -> None:
    _DECOMPOSE.clear()
    _IDENTITY.clear()
    _SIGNATURE.clear()
    _ORDER.clear()


def decompose(g: Element) -> WreathDecomposition:
    key = (g.omega, g.shift, g.word)
    hit = _DECOMPOSE.get(key)
    if hit is not None:
        return hit
    swap, raw_l, raw_r = split_letters(g.word.letters(), g.omega, g.shift)
    down = shift_normalize(g.omega, g.shift + 1)
    dec = WreathDecomposition(
        swap,
        Element(reduce(raw_l).word, g.omega, down),
        Element(reduce(raw_r).word, g.omega, down),
    )
    _DECOMPOSE[key] = dec
    return dec


def sections(g: Element) -> tuple[Element, Element]:
    if not g.in_stabilizer:
        raise OddParityError("element moves the level-one vertices")
    d = decompose(g)
    return d.left, d.right


def act(g: Element, vertex: str) -> str:
    """Image of a vertex (a binary string) under the element."""
    if any(ch not in "01" for ch in vertex):
        raise ValueError("vertices are binary strings")
    out = []
    cur = g
    for ch in vertex:
        d = decompose(cur)
        bit = ch != "0"
        out.append("01"[bit ^ d.top_swap])
        cur = d.right if bit else d.left
    return "".join(out)


def portrait(g: Element, depth: int) -> Portrait:
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    labels: dict = {}

    def fill(e: Element, prefix: str) -> None:
        if len(prefix) >= depth:
            return
        d = decompose(e)
        labels[prefix] = "P" if d.top_swap else "I"
        fill(d.left, prefix + "0")
        fill(d.right, prefix + "1")

    fill(g, "")
    return Portrait(depth, labels)


def signature(g: Element, depth: int) -> int:
    """Portrait to ``depth`` packed into an int (2^depth - 1 label bits)."""
    if depth == 0:
        return 0
    key = (g.omega, g.shift, g.word, depth)
    hit = _SIGNATURE.get(key)
    if hit is not None:
        return hit
    d = decompose(g)
    half = (1 << (depth - 1)) - 1
    sig = (
        int(d.top_swap)
        | signature(d.left, depth - 1) << 1
        | signature(d.right, depth - 1) << (1 + half)
    )
    _SIGNATURE[key] = sig
    return sig


def is_identity(g: Element) -> bool:
    """Exact word-problem decision by contracting section descent."""
    word = g.word
    if word.length == 0:
        return True
    if word.a_count % 2 == 1:
        return False
    key = (g.omega, g.shift, word)
    hit = _IDENTITY.get(key)
    if hit is not None:
        return hit
    if word.length == 1:
        # A single letter is trivial iff it fixes every level of its spine;
        # one preperiod + one period of the shifted sequence covers all levels.
        local = shift_omega(g.omega, g.shift)
        result = all(
            spine_root_label(word.spine[0], g.omega, g.shift, lev) == "I"
            for lev in range(1, local.cycle_length + 1)
        )
    else:
        d = decompose(g)
        result = is_identity(d.left) and is_identity(d.right)
    _IDENTITY[key] = result
    return result


def mul(g: Element, h: Element) -> Element:
    if g.omega != h.omega or g.shift != h.shift:
        raise ContextMismatch("operands must share sequence and shift")
    return Element(
        reduce(g.word.letters() + h.word.letters()).word, g.omega, g.shift
    )


def inverse(g: Element) -> Element:
    # Every letter is an involution, so the inverse word is the reverse,
    # which is automatically reduced.
    return Element(g.word.reversed(), g.omega, g.shift)


def equal(g: Element, h: Element) -> bool:
    if g.omega != h.omega or g.shift != h.shift:
        raise ContextMismatch("operands must share sequence and shift")
    if g.word == h.word:
        return True
    return is_identity(mul(g, inverse(h)))


def power(g: Element, k: int) -> Element:
    if k < 0:
        return power(inverse(g), -k)
    acc = Element.identity(g.omega, g.shift)
    base = g
    while k:
        if k & 1:
            acc = mul(acc, base)
        base = mul(base, base)
        k >>= 1
    return acc


def _order_rec(g: Element, bound: int) -> Optional[int]:
    if is_identity(g):
        return 1
    key = (g.omega, g.shift, g.word)
    known = _ORDER.get(key)
    if known is not None:
        return known if known <= bound else None
    if g.word.length == 1:
        _ORDER[key] = 2
        return 2 if bound >= 2 else None
    if not g.in_stabilizer:
        if bound < 2:
            return None
        sub = _order_rec(mul(g, g), bound // 2)
        if sub is None:
            return None
        result = 2 * sub
    else:
        d = decompose(g)
        o_left = _order_rec(d.left, bound)
        if o_left is None:
            return None
        o_right = _order_rec(d.right, bound)
        if o_right is None:
            return None
        result = o_left * o_right // gcd(o_left, o_right)
        if result > bound:
            return None
    _ORDER[key] = result
    return result


def order_bounded(g: Element, max_order: int) -> Optional[int]:
    """Least k <= max_order with g^k trivial, or None when the bound is hit.

    The recursion (stabilizer elements: lcm of section orders; others:
    twice the order of the square) yields the exact order; the result is
    re-verified by explicit powering before being returned.
    """
    if max_order < 1:
        raise ValueError("max_order must be positive")
    k = _order_rec(g, max_order)
    if k is None:
        return None
    if not is_identity(power(g, k)):
        raise RuntimeError("order recursion disagreed with explicit powering")
    m, p = k, 2
    while p * p <= m:
        if m % p == 0:
            if is_identity(power(g, k // p)):
                raise RuntimeError("order recursion returned a non-minimal order")
            while m % p == 0:
                m //= p
        p += 1
    if m > 1 and is_identity(power(g, k // m)):
        raise RuntimeError("order recursion returned a non-minimal order")
    return k


def render_element(g: Element) -> str:
    return str(g)


def parse_element(text: str, omega: Optional[OmegaSpec] = None) -> Element:
    """Parse ``word @ shift @ omega`` text (omega part optional if given)."""
    from .omega import parse_omega

    parts = [p.strip() for p in text.split("@")]
    if len(parts) == 3:
        word_text, shift_text, omega_text = parts
        omega = parse_omega(omega_text)
    elif len(parts) == 2 and omega is not None:
        word_text, shift_text = parts
    elif len(parts) == 1 and omega is not None:
        word_text, shift_text = parts[0], "0"
    else:
        raise ValueError("expected 'word @ shift @ omega'")
    return Element.from_text(word_text, omega, int(shift_text))
