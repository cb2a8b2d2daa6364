"""Cayley-ball enumeration, growth data, and the verification checkers.

Balls are built breadth-first over right multiplication by the eight
generators in the fixed order a < b < c < d < x < B < C < D, deduplicating
elements by a truncated-portrait key confirmed by the exact equality test.
All geodesic derivations are kept as predecessor links, which is what the
frequency (F/D) classification and the contraction checkers consume.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

from .omega import (
    OmegaKind,
    OmegaSpec,
    classify,
    first_third_symbol_index,
    shift_normalize,
    symbol_at,
)
from .words import (
    A,
    I_LETTERS,
    ReducedWord,
    SPINE_LETTERS,
    X,
    reduce,
    render_letters,
)
from .elements import (
    Element,
    act,
    decompose,
    equal,
    generator,
    is_identity,
    mul,
    signature,
    split_letters,
)

DEFAULT_BUDGET = 5_000_000

GENERATOR_ORDER = tuple(range(8))


class BudgetExceeded(RuntimeError):
    pass


class GeodesicCapExceeded(RuntimeError):
    pass


class NotLevelStabilizer(ValueError):
    pass


def as_fraction(value) -> Fraction:
    """Exact rational from int/str/Fraction, or a float via its repr."""
    if isinstance(value, float):
        return Fraction(repr(value))
    return Fraction(value)


def dedup_depth_for(radius: int) -> int:
    return math.ceil(math.log2(radius + 2)) + 3


@dataclass
class BallEntry:
    eid: int
    length: int
    word: ReducedWord
    element: Element
    links: list = field(default_factory=list)  # (predecessor id, letter)


class BallTable:
    """Ball of a given radius with per-length strata and geodesic links."""

    def __init__(self, omega: OmegaSpec, shift: int, radius: int, dedup_depth: int):
        self.omega = omega
        self.shift = shift_normalize(omega, shift)
        self.radius = radius
        self.dedup_depth = dedup_depth
        self.complete = True
        self.entries: list[BallEntry] = []
        self.strata: list[list[int]] = []
        self._by_word: dict[ReducedWord, int] = {}
        self._by_sig: dict[int, list[int]] = {}
        self._geodesics: dict[int, tuple] = {}

    def sphere(self, n: int) -> list[int]:
        return self.strata[n]

    def gamma(self) -> list[int]:
        out, total = [], 0
        for stratum in self.strata:
            total += len(stratum)
            out.append(total)
        return out

    def lookup(self, element: Element) -> Optional[int]:
        eid = self._by_word.get(element.word)
        if eid is not None:
            return eid
        sig = signature(element, self.dedup_depth)
        for cand in self._by_sig.get(sig, ()):
            if equal(element, self.entries[cand].element):
                return cand
        return None

    def _register(self, entry: BallEntry) -> None:
        self.entries.append(entry)
        self._by_word[entry.word] = entry.eid
        sig = signature(entry.element, self.dedup_depth)
        self._by_sig.setdefault(sig, []).append(entry.eid)


def enumerate_ball(
    omega: OmegaSpec,
    shift: int = 0,
    radius: int = 0,
    budget: int = DEFAULT_BUDGET,
    dedup_depth: Optional[int] = None,
) -> BallTable:
    """Breadth-first ball; on budget overrun returns the completed strata
    with ``complete`` unset rather than a partial stratum."""
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    if budget < 1:
        raise ValueError("budget must be positive")
    depth = dedup_depth if dedup_depth is not None else dedup_depth_for(radius)
    table = BallTable(omega, shift, radius, depth)
    identity = Element.identity(omega, table.shift)
    table._register(BallEntry(0, 0, identity.word, identity))
    table.strata.append([0])
    for level in range(radius):
        frontier: list[int] = []
        overrun = False
        for eid in table.strata[level]:
            base = table.entries[eid]
            for letter in GENERATOR_ORDER:
                cand = mul(base.element, generator(letter, omega, table.shift))
                if cand.length < level + 1:
                    continue  # lands in an already-complete stratum
                found = table.lookup(cand)
                if found is not None:
                    target = table.entries[found]
                    if target.length == level + 1:
                        target.links.append((eid, letter))
                        if cand.word not in table._by_word:
                            table._by_word[cand.word] = found
                    continue
                new_id = len(table.entries)
                entry = BallEntry(new_id, level + 1, cand.word, cand)
                entry.links.append((eid, letter))
                table._register(entry)
                frontier.append(new_id)
                if len(table.entries) > budget:
                    overrun = True
                    break
            if overrun:
                break
        if overrun:
            for entry in reversed([table.entries[i] for i in frontier]):
                table.entries.pop()
                del table._by_word[entry.word]
                sig = signature(entry.element, depth)
                table._by_sig[sig].remove(entry.eid)
            extra = [w for w, i in table._by_word.items() if i >= len(table.entries)]
            for w in extra:
                del table._by_word[w]
            table.complete = False
            table.radius = level
            return table
        table.strata.append(frontier)
    return table


def geodesic_words(table: BallTable, eid: int, cap: int = 200_000) -> tuple:
    """All minimal words of a ball element, as letter tuples, sorted."""
    hit = table._geodesics.get(eid)
    if hit is not None:
        return hit
    entry = table.entries[eid]
    if entry.length == 0:
        result: tuple = ((),)
    else:
        acc = []
        for pred, letter in entry.links:
            for w in geodesic_words(table, pred, cap):
                acc.append(w + (letter,))
                if len(acc) > cap:
                    raise GeodesicCapExceeded(
                        f"element {eid} has more than {cap} minimal words"
                    )
        result = tuple(sorted(acc))
    table._geodesics[eid] = result
    return result


@dataclass(frozen=True)
class GeodesicClassification:
    epsilon: Fraction
    n: int
    F: frozenset
    D: frozenset


def classify_geodesics(
    table: BallTable, epsilon, n: Optional[int] = None
) -> GeodesicClassification:
    """Split sphere n by minimal-word letter frequencies.

    An element is D-type when at least one of its minimal words keeps every
    non-``a`` letter count at or below (1/2 - epsilon) * n, and F-type when
    every minimal word has some letter above that threshold.
    """
    eps = as_fraction(epsilon)
    if not 0 < eps < Fraction(1, 2):
        raise ValueError("epsilon must lie strictly between 0 and 1/2")
    if n is None:
        n = table.radius
    if not 0 <= n <= table.radius:
        raise ValueError("sphere radius outside the computed ball")
    threshold = (Fraction(1, 2) - eps) * n
    f_ids, d_ids = set(), set()
    for eid in table.sphere(n):
        spread = False
        for w in geodesic_words(table, eid):
            counts = [0] * 8
            for let in w:
                counts[let] += 1
            if all(counts[k] <= threshold for k in SPINE_LETTERS):
                spread = True
                break
        (d_ids if spread else f_ids).add(eid)
    return GeodesicClassification(eps, n, frozenset(f_ids), frozenset(d_ids))


def count_ftilde(delta, k: int) -> int:
    """Number of length-k words over the seven non-``a`` letters in which
    some letter occurs more than (1 - delta) * k times; exact, by an
    inclusion-exclusion over placement counts (no enumeration)."""
    d = as_fraction(delta)
    if k < 1:
        raise ValueError("word length must be positive")
    threshold = (1 - d) * k
    t_min = math.floor(threshold) + 1
    if t_min <= 0:
        return 7**k
    if t_min > k:
        return 0
    total = 0
    j_max = min(7, k // t_min)
    for j in range(1, j_max + 1):
        ways = {0: 1}  # occupied slots -> placements for j fixed letters
        for _ in range(j):
            nxt: dict[int, int] = {}
            for s, cnt in ways.items():
                for c in range(t_min, k - s + 1):
                    nxt[s + c] = nxt.get(s + c, 0) + cnt * math.comb(k - s, c)
            ways = nxt
        n_j = sum(cnt * (7 - j) ** (k - s) for s, cnt in ways.items())
        total += (-1) ** (j + 1) * math.comb(7, j) * n_j
    return total


def count_ftilde_exhaustive(delta, k: int) -> int:
    """Independent check of the same count by enumerating all 7^k words."""
    d = as_fraction(delta)
    threshold = (1 - d) * k
    total = 0
    counts = [0] * 7

    def rec(pos: int) -> None:
        nonlocal total
        if pos == k:
            if any(c > threshold for c in counts):
                total += 1
            return
        for letter in range(7):
            counts[letter] += 1
            rec(pos + 1)
            counts[letter] -= 1

    rec(0)
    return total


def lemma9_bound(delta) -> float:
    d = as_fraction(delta)
    return float((1 - d) ** -1) * float(d / 6) ** float(-d)


def lemma9_report(delta, k_max: int) -> dict:
    """Frequency-count roots against their limiting bound.

    The ``trend`` column is the running maximum of the remaining roots
    (a nonincreasing envelope of the sawtoothed raw sequence); ``flag``
    marks raw roots exceeding the bound, expected only at small k.
    """
    d = as_fraction(delta)
    if d <= 0 or float(d) >= 6 / math.e:
        raise ValueError("delta must lie strictly between 0 and 6/e")
    if d >= 1:
        raise ValueError("delta must be below 1 for the bound to be finite")
    if k_max < 1:
        raise ValueError("k_max must be positive")
    bound = lemma9_bound(d)
    counts = [count_ftilde(d, k) for k in range(1, k_max + 1)]
    roots = [c ** (1.0 / k) for k, c in enumerate(counts, start=1)]
    trend = list(roots)
    for i in range(len(trend) - 2, -1, -1):
        trend[i] = max(trend[i], trend[i + 1])
    rows = [
        {
            "k": k,
            "count": counts[k - 1],
            "root": roots[k - 1],
            "trend": trend[k - 1],
            "bound": bound,
            "flag": roots[k - 1] > bound,
        }
        for k in range(1, k_max + 1)
    ]
    return {
        "delta": str(d),
        "bound": bound,
        "rows": rows,
        "flagged_k": [r["k"] for r in rows if r["flag"]],
    }


@dataclass(frozen=True)
class Lemma8Result:
    mapped: tuple
    n_prime: int
    delta: Fraction


class LemmaViolation(AssertionError):
    """A checked inequality failed; the message carries the counterexample."""


def lemma8_map(letters: Iterable[int], epsilon) -> Lemma8Result:
    """Delete the ``a``'s of a reduced word of length n >= 2 and check the
    mapped word keeps a letter above the (1 - delta) frequency line with
    delta = 2 * epsilon + 3 / (n - 1)."""
    w = tuple(letters)
    n = len(w)
    if n < 2:
        raise ValueError("word must have length at least 2")
    if reduce(w).contractions != 0:
        raise ValueError("word must be reduced")
    eps = as_fraction(epsilon)
    mapped = tuple(let for let in w if let != A)
    n_prime = len(mapped)
    delta = 2 * eps + Fraction(3, n - 1)
    if not Fraction(n - 1, 2) <= n_prime:
        raise LemmaViolation(f"{render_letters(w)}: n'={n_prime} below (n-1)/2")
    if not n_prime <= Fraction(n + 1, 2):
        raise LemmaViolation(f"{render_letters(w)}: n'={n_prime} above (n+1)/2")
    counts = [0] * 8
    for let in mapped:
        counts[let] += 1
    if n_prime and not any(
        counts[k] > (1 - delta) * n_prime for k in SPINE_LETTERS
    ):
        raise LemmaViolation(
            f"{render_letters(w)}: no letter above (1-delta)n' after deletion"
        )
    return Lemma8Result(mapped, n_prime, delta)


def lemma8_check(table: BallTable, epsilon, n_values: Optional[Iterable[int]] = None) -> dict:
    """Apply the a-deletion map to every minimal word of every F-type
    element at each requested radius; collect violations verbatim."""
    eps = as_fraction(epsilon)
    if n_values is None:
        n_values = range(2, table.radius + 1)
    violations = []
    checked = 0
    for n in n_values:
        cls = classify_geodesics(table, eps, n)
        for eid in sorted(cls.F):
            for w in geodesic_words(table, eid):
                checked += 1
                try:
                    lemma8_map(w, eps)
                except LemmaViolation as exc:
                    violations.append({"n": n, "eid": eid, "detail": str(exc)})
    return {
        "epsilon": str(eps),
        "checked_words": checked,
        "violations": violations,
        "passed": not violations,
    }


@dataclass(frozen=True)
class LevelData:
    words: tuple  # Elements over shift + level, in vertex order
    alpha: int
    x: int
    y: int
    z: int


@dataclass(frozen=True)
class LevelSectionTrace:
    s: int
    input: Element
    levels: tuple  # LevelData for levels 1..s


def stabilizes_level(g: Element, s: int) -> bool:
    return all(
        act(g, format(i, f"0{s}b")) == format(i, f"0{s}b") for i in range(1 << s)
    ) if s else True


def level_section_trace(g: Element, s: int) -> LevelSectionTrace:
    """Iterated one-level substitution with per-level contraction counts
    and (x, y, z) letter-frequency aggregates."""
    if s < 0:
        raise ValueError("level must be nonnegative")
    if not stabilizes_level(g, s):
        raise NotLevelStabilizer(f"element does not stabilize level {s}")
    levels = []
    current = [g]
    for j in range(1, s + 1):
        nxt = []
        alpha = 0
        down = shift_normalize(g.omega, g.shift + j)
        for e in current:
            swap, raw_l, raw_r = split_letters(e.word.letters(), e.omega, e.shift)
            assert not swap
            for raw in (raw_l, raw_r):
                receipt = reduce(raw)
                alpha += receipt.contractions
                nxt.append(Element(receipt.word, g.omega, down))
        x = y = z = 0
        for e in nxt:
            for k in e.word.spine:
                x += k in I_LETTERS[0]
                y += k in I_LETTERS[1]
                z += k in I_LETTERS[2]
        levels.append(LevelData(tuple(nxt), alpha, x, y, z))
        current = nxt
    return LevelSectionTrace(s, g, tuple(levels))


def _second_symbol_index(omega: OmegaSpec) -> Optional[int]:
    first = symbol_at(omega, 1)
    for n in range(2, omega.cycle_length + 1):
        if symbol_at(omega, n) != first:
            return n
    return None


def lemma11_check(table: BallTable, epsilon, s: Optional[int] = None) -> dict:
    """Two-part contraction check over level-s stabilizer elements.

    Part A (unconditional): for every minimal word W of every element of
    the ball stabilizing level s, the total length after s substitution
    levels is at most |W| + 2^s - 1 - x0 - y_{t-1} - z_{s-1} - sum(alpha_i,
    i < s), where t marks the first position of the second distinct symbol
    and the x/y/z roles follow the actual first/second/third symbols.

    Part B (gated on radius * epsilon > 5/2): every D-type witness word at
    the sphere radius additionally obeys (1 - epsilon/5) * n + 2^s - 1.
    """
    eps = as_fraction(epsilon)
    omega_here = table.omega
    first_third = first_third_symbol_index(omega_here)
    if first_third is None:
        raise ValueError("sequence never shows all three symbols")
    if s is None:
        s = first_third
    elif s != first_third:
        raise ValueError(f"s must be the first three-symbol position, {first_third}")
    t = _second_symbol_index(omega_here)
    assert t is not None and 2 <= t < s + 1
    sym1 = symbol_at(omega_here, 1)
    sym2 = symbol_at(omega_here, t)
    sym3 = symbol_at(omega_here, s)

    def profile(words, sym: int) -> int:
        letters = I_LETTERS[sym]
        return sum(
            1 for e in words for k in e.word.spine if k in letters
        )

    stab_ids = [
        e.eid for e in table.entries if stabilizes_level(e.element, s)
    ]
    violations_a = []
    checked = 0
    traces: dict[tuple, LevelSectionTrace] = {}
    for eid in stab_ids:
        entry = table.entries[eid]
        for w in geodesic_words(table, eid):
            receipt = reduce(w)
            assert receipt.contractions == 0, "minimal words must be reduced"
            el = Element(receipt.word, omega_here, table.shift)
            trace = level_section_trace(el, s)
            traces[w] = trace
            checked += 1
            n_w = len(w)
            total_s = sum(e.word.length for e in trace.levels[s - 1].words)
            x0 = profile([el], sym1)
            y_t1 = profile(trace.levels[t - 2].words, sym2)
            z_s1 = profile(trace.levels[s - 2].words, sym3)
            alpha_sum = sum(trace.levels[j].alpha for j in range(s - 1))
            rhs = n_w + (1 << s) - 1 - x0 - y_t1 - z_s1 - alpha_sum
            if total_s > rhs:
                violations_a.append(
                    {
                        "eid": eid,
                        "word": render_letters(w),
                        "total": total_s,
                        "rhs": rhs,
                    }
                )
    report = {
        "s": s,
        "t": t,
        "epsilon": str(eps),
        "stabilizer_elements": len(stab_ids),
        "checked_words": checked,
        "part_a_violations": violations_a,
        "part_a_passed": not violations_a,
    }
    n = table.radius
    if n * eps <= Fraction(5, 2):
        report["part_b"] = "precondition unmet, skipped"
        report["passed"] = not violations_a
        return report
    threshold = (Fraction(1, 2) - eps) * n
    headline = (1 - eps / 5) * n + (1 << s) - 1
    cls = classify_geodesics(table, eps, n)
    stab_set = set(stab_ids)
    violations_b = []
    checked_b = 0
    for eid in sorted(cls.D):
        if eid not in stab_set:
            continue
        for w in geodesic_words(table, eid):
            counts = [0] * 8
            for let in w:
                counts[let] += 1
            if any(counts[k] > threshold for k in SPINE_LETTERS):
                continue  # not a spread witness
            trace = traces.get(w)
            if trace is None:
                el = Element(reduce(w).word, omega_here, table.shift)
                trace = level_section_trace(el, s)
            checked_b += 1
            total_s = sum(e.word.length for e in trace.levels[s - 1].words)
            if total_s > headline:
                violations_b.append(
                    {
                        "eid": eid,
                        "word": render_letters(w),
                        "total": total_s,
                        "bound": float(headline),
                    }
                )
    report["part_b"] = {
        "bound": float(headline),
        "checked_words": checked_b,
        "violations": violations_b,
        "passed": not violations_b,
    }
    report["passed"] = not violations_a and not violations_b
    return report


def lemma3_check(omega: OmegaSpec, n: int, shift: int = 0, budget: int = DEFAULT_BUDGET) -> dict:
    """Section-length bound and the one-step growth inequality.

    For every even-parity element g of the radius-n ball, both sections
    must have geodesic length at most (|g| + 1) / 2 in the shifted ball;
    numerically, gamma(n) <= 2 * gamma_shifted(ceil((n + 2) / 2)) ** 2.
    """
    table = enumerate_ball(omega, shift, n, budget)
    half = (n + 2 + 1) // 2  # ceil((n + 2) / 2)
    table_s = enumerate_ball(omega, shift + 1, half, budget)
    if not (table.complete and table_s.complete):
        raise BudgetExceeded("ball enumeration hit the element budget")
    violations = []
    for entry in table.entries:
        if not entry.element.in_stabilizer:
            continue
        dec = decompose(entry.element)
        bound = Fraction(entry.length + 1, 2)
        for side, sec in (("left", dec.left), ("right", dec.right)):
            eid = table_s.lookup(sec)
            assert eid is not None, "section must lie in the shifted ball"
            if table_s.entries[eid].length > bound:
                violations.append(
                    {
                        "eid": entry.eid,
                        "side": side,
                        "section_length": table_s.entries[eid].length,
                        "bound": float(bound),
                    }
                )
    g_here = table.gamma()
    g_shift = table_s.gamma()
    numeric_ok = g_here[n] <= 2 * g_shift[half] ** 2
    return {
        "radius": n,
        "gamma": g_here,
        "gamma_shifted": g_shift,
        "numeric_inequality": {
            "lhs": g_here[n],
            "rhs": 2 * g_shift[half] ** 2,
            "passed": numeric_ok,
        },
        "violations": violations,
        "passed": numeric_ok and not violations,
    }


def growth_exponent_estimate(gamma: list) -> list[float]:
    """Pointwise roots gamma(n) ** (1/n) for n >= 1; no convergence claim."""
    if any(v < 1 for v in gamma):
        raise ValueError("growth values must be at least 1")
    return [gamma[n] ** (1.0 / n) for n in range(1, len(gamma))]


def prop6_check(
    omega: OmegaSpec,
    n: int,
    budget: int = DEFAULT_BUDGET,
    degree_radius: Optional[int] = None,
) -> dict:
    """Eventually-constant collapse: past the preperiod the distinct
    generators reduce to {identity, a, x} and growth is exactly 2n + 1;
    the unshifted ball yields a polynomial-degree estimate."""
    if classify(omega).kind is not OmegaKind.OMEGA2:
        raise ValueError("sequence must be eventually constant")
    pre = len(omega.preperiod)
    a_el = generator(A, omega, pre)
    x_el = generator(X, omega, pre)
    collapse = {}
    collapsed_set = set()
    for k in range(8):
        g = generator(k, omega, pre)
        if is_identity(g):
            collapse[k] = "1"
        elif equal(g, a_el):
            collapse[k] = "a"
            collapsed_set.add("a")
        elif equal(g, x_el):
            collapse[k] = "x"
            collapsed_set.add("x")
        else:
            collapse[k] = "?"
            collapsed_set.add("?")
    table = enumerate_ball(omega, pre, n, budget)
    g_shifted = table.gamma()
    dihedral_ok = g_shifted == [2 * k + 1 for k in range(n + 1)]
    deg_radius = degree_radius if degree_radius is not None else n
    if pre == 0 and deg_radius == n:
        g_unshifted = g_shifted
    else:
        g_unshifted = enumerate_ball(omega, 0, deg_radius, budget).gamma()
    degree = (
        math.log(g_unshifted[-1]) / math.log(len(g_unshifted) - 1)
        if len(g_unshifted) > 2
        else float("nan")
    )
    passed = dihedral_ok and collapsed_set == {"a", "x"}
    return {
        "preperiod": pre,
        "collapse": collapse,
        "collapsed_set": sorted(collapsed_set),
        "gamma_shifted": g_shifted,
        "dihedral_exact": dihedral_ok,
        "degree_estimate": degree,
        "degree_radius": deg_radius,
        "passed": passed,
    }


@dataclass(frozen=True)
class BoundCurve:
    """Reference growth curve sampled at integers, kept in log scale."""

    kind: str
    samples: tuple
    log_values: tuple

    def value(self, i: int) -> float:
        lv = self.log_values[i]
        return math.exp(lv) if lv < 700 else math.inf


def _default_samples(n_max: int, start: int) -> tuple:
    dense_top = min(n_max, 512)
    pts = list(range(start, dense_top + 1))
    v = float(dense_top)
    while v < n_max:
        v *= 1.08
        pts.append(min(int(v), n_max))
    return tuple(sorted(set(pts)))


def bound_curves(n_max: int, epsilon, samples: Optional[Iterable[int]] = None):
    """Lower exp(n / log(n)^(2+eps)) and upper exp(n loglog(n) / log(n))
    reference curves (natural logs), sampled at integers."""
    eps = float(as_fraction(epsilon))
    if n_max < 3:
        raise ValueError("n_max must be at least 3")
    if eps <= 0:
        raise ValueError("epsilon must be positive")
    pts = tuple(sorted(set(samples))) if samples is not None else _default_samples(n_max, 3)
    lower_pts = tuple(p for p in pts if p >= 2)
    upper_pts = tuple(p for p in pts if p >= 3)
    lower = BoundCurve(
        f"lower(eps={epsilon})",
        lower_pts,
        tuple(p / math.log(p) ** (2 + eps) for p in lower_pts),
    )
    upper = BoundCurve(
        "upper",
        upper_pts,
        tuple(p * math.log(math.log(p)) / math.log(p) for p in upper_pts),
    )
    return lower, upper


def curve_crossover(lower: BoundCurve, upper: BoundCurve) -> Optional[int]:
    """Least sampled n from which on the lower curve stays below the upper."""
    common = sorted(set(lower.samples) & set(upper.samples))
    lo = {n: lv for n, lv in zip(lower.samples, lower.log_values)}
    up = {n: lv for n, lv in zip(upper.samples, upper.log_values)}
    crossover = None
    for n in common:
        if lo[n] < up[n]:
            if crossover is None:
                crossover = n
        else:
            crossover = None
    return crossover
