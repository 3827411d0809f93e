"""Depth-truncated word problem and the checks built on it.

Triviality is decided by exploring the section tree: an element fixes
every word of length <= d iff its root permutation is the identity and
each of its sections fixes every word of length <= d-1. Section words are
freely reduced and memoized per (level, word), so only reachable section
words are ever visited; exhaustive enumeration of X^d is never needed.

A ``Trivial(d)`` verdict is evidence about the finite quotient by the
level-d stabilizer only. A ``Nontrivial`` verdict carries a witness word
that the element moves, which certifies nontriviality outright.
"""
import json
import time
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

from .action import (
    GroupElement,
    apply_fused,
    apply_naive,
    invert_factors,
    simplify_factors,
    thread,
)
from .alphabet import TreeWord, count_words, enumerate_words
from .automaton import shift_automaton
from .errors import HorizonExceeded, LevelMismatch


@dataclass(frozen=True)
class TrivialityVerdict:
    depth: int
    witness: Optional[TreeWord] = None

    @property
    def trivial(self):
        return self.witness is None

    def describe(self, offset=0):
        if self.trivial:
            return f"Trivial({self.depth})"
        return f"Nontrivial(witness {self.witness.format(offset)})"

    def __str__(self):
        return self.describe()


class _SectionExplorer:
    """Shortest-failure search over the section tree of one automaton down to ``end_level``."""

    def __init__(self, automaton, end_level):
        self.aut = automaton
        self.end = end_level
        self.memo = {}

    def first_failure(self, level, word):
        """Length of the shortest word moved from this node, or None if none up to ``end_level``."""
        if not word or level >= self.end:
            return None
        key = (level, word)
        if key in self.memo:
            return self.memo[key]
        t = self.aut.tables(level)
        sections = []
        result = None
        for x in range(t.size):
            y, sec = thread(t, word, x)
            if y != x:
                result = 1
                break
            sections.append(simplify_factors(sec))
        if result is None:
            best = None
            for sec in sections:
                f = self.first_failure(level + 1, sec)
                if f is not None and (best is None or f + 1 < best):
                    best = f + 1
                    if best == 2:
                        break
            result = best
        self.memo[key] = result
        return result

    def witness(self, level, word):
        """Shortlex-smallest moved word below this node."""
        letters = []
        target = self.first_failure(level, word)
        while True:
            t = self.aut.tables(level)
            if target == 1:
                for x in range(t.size):
                    if thread(t, word, x)[0] != x:
                        letters.append(x)
                        return letters
            for x in range(t.size):
                sec = simplify_factors(thread(t, word, x)[1])
                if self.first_failure(level + 1, sec) == target - 1:
                    letters.append(x)
                    level, word, target = level + 1, sec, target - 1
                    break


def _check_horizon(element, depth):
    h = element.automaton.horizon
    if h is not None and element.base_level + depth > h:
        raise HorizonExceeded(element.base_level + depth - 1, h)


def is_trivial_to_depth(element, depth):
    _check_horizon(element, depth)
    word = simplify_factors(element.factors)
    explorer = _SectionExplorer(element.automaton, element.base_level + depth)
    if explorer.first_failure(element.base_level, word) is None:
        return TrivialityVerdict(depth)
    letters = explorer.witness(element.base_level, word)
    return TrivialityVerdict(depth, TreeWord(element.base_level, letters))


def find_witness(element, max_depth):
    """Certified witness word moved by ``element``, searching up to ``max_depth`` levels; None if none found."""
    verdict = is_trivial_to_depth(element, max_depth)
    return verdict.witness


def _same_place(e1, e2):
    if e1.automaton != e2.automaton or e1.base_level != e2.base_level:
        raise LevelMismatch("elements must share automaton and base level")


def equal_to_depth(e1, e2, depth):
    _same_place(e1, e2)
    return is_trivial_to_depth(e1.with_factors(e1.factors + invert_factors(e2.factors)), depth)


def commutator(e1, e2):
    """``e1^-1 e2^-1 e1 e2``."""
    _same_place(e1, e2)
    return e1.with_factors(invert_factors(e1.factors) + invert_factors(e2.factors) + e1.factors + e2.factors)


def commutes_to_depth(e1, e2, depth):
    return is_trivial_to_depth(commutator(e1, e2), depth)


@dataclass(frozen=True)
class Exact:
    order: int

    def __str__(self):
        return f"Exact({self.order})"


@dataclass(frozen=True)
class ExceedsBound:
    bound: int

    def __str__(self):
        return f"ExceedsBound({self.bound})"


def order_on_truncation(element, depth, bound):
    """Order of the automorphism induced on the depth-``depth`` finite tree, if at most ``bound``.

    The true order of the element is a multiple of the order at any depth
    (and at least as large), never smaller.
    """
    if bound < 1:
        raise ValueError("bound must be >= 1")
    for m in range(1, bound + 1):
        if is_trivial_to_depth(element ** m, depth).trivial:
            return Exact(m)
    return ExceedsBound(bound)


def _fingerprint_depth(aut, level, depth, budget=4096):
    d = 0
    while d < depth and count_words(aut.alphabet, level, d + 1) <= budget:
        d += 1
    return d


def _fingerprint(element, words):
    return tuple(apply_fused(element, w).letters for w in words)


def ball_profile(aut, base_level, generators, radius, depth):
    """Numbers of distinct depth-truncated actions among products of at most r generators, r = 0..radius."""
    if radius < 0 or depth < 0:
        raise ValueError("radius and depth must be >= 0")
    for g in generators:
        if g.automaton != aut or g.base_level != base_level:
            raise LevelMismatch("generators must live on the given automaton and base level")
    _check_horizon(GroupElement(aut, base_level), depth)
    steps = []
    for g in generators:
        steps.append(g.factors)
        steps.append(invert_factors(g.factors))
    fp_words = list(enumerate_words(aut.alphabet, base_level, _fingerprint_depth(aut, base_level, depth)))
    buckets = {}
    reps = []

    def admit(factors):
        el = GroupElement(aut, base_level, simplify_factors(factors))
        key = _fingerprint(el, fp_words)
        for other in buckets.get(key, ()):
            if equal_to_depth(el, other, depth).trivial:
                return False
        buckets.setdefault(key, []).append(el)
        reps.append(el)
        return True

    admit(())
    profile = [1]
    frontier = list(reps)
    for _ in range(radius):
        new = []
        for el in frontier:
            for s in steps:
                candidate = el.factors + s
                if admit(candidate):
                    new.append(reps[-1])
        frontier = new
        profile.append(len(reps))
    return profile


def stabilized_ball_profile(aut, base_level, generators, radius, start_depth=2, cap=16):
    """Double the depth until two consecutive profiles agree or ``cap`` is reached.

    Returns ``(profile, depth, stabilized)``.
    """
    depth = max(start_depth, 1)
    prev = ball_profile(aut, base_level, generators, radius, depth)
    while depth < cap:
        nxt_depth = min(depth * 2, cap)
        cur = ball_profile(aut, base_level, generators, radius, nxt_depth)
        if cur == prev:
            return cur, nxt_depth, True
        prev, depth = cur, nxt_depth
    return prev, depth, False


@dataclass(frozen=True)
class Counterexample:
    relator: tuple
    shift_trivial: int
    shift_nontrivial: int
    witness: TreeWord

    def describe(self, aut=None, offset=0):
        name = self.relator
        if aut is not None:
            name = GroupElement(aut, 0, self.relator).text()
        return (
            f"relator [{name}] is Trivial at shift {self.shift_trivial} but Nontrivial at shift "
            f"{self.shift_nontrivial} (witness {self.witness.format(offset)})"
        )


def selfsim_falsify(aut, shifts, relators, depth):
    """Look for a relator that holds (to ``depth``) in one shift and provably fails in another.

    ``None`` only means no counterexample was found at this depth; it is
    never evidence of an isomorphism.
    """
    shifted = {k: shift_automaton(aut, k) for k in shifts}
    for rel in relators:
        factors = rel.factors if isinstance(rel, GroupElement) else tuple(rel)
        verdicts = {k: is_trivial_to_depth(GroupElement(shifted[k], 0, factors), depth) for k in shifts}
        trivial = [k for k in shifts if verdicts[k].trivial]
        moved = [k for k in shifts if not verdicts[k].trivial]
        if trivial and moved:
            return Counterexample(factors, trivial[0], moved[0], verdicts[moved[0]].witness)
    return None


@dataclass(frozen=True)
class Relation:
    """A named element together with the verdict it is expected to receive."""

    name: str
    element: GroupElement
    expect: str = "trivial"


@dataclass
class RelationResult:
    name: str
    word: str
    verdict: TrivialityVerdict
    depth: int
    elapsed_ms: float
    expect: str
    offset: int = 0

    @property
    def matched(self):
        return self.verdict.trivial == (self.expect == "trivial")

    def as_dict(self):
        return {
            "name": self.name,
            "word": self.word,
            "verdict": "trivial" if self.verdict.trivial else "nontrivial",
            "witness": None if self.verdict.trivial else self.verdict.witness.format(self.offset),
            "depth": self.depth,
            "milliseconds": round(self.elapsed_ms, 3),
            "expected": self.expect,
            "matched": self.matched,
        }


@dataclass
class RelationReport:
    results: List[RelationResult] = field(default_factory=list)

    def __len__(self):
        return len(self.results)

    @property
    def ok(self):
        return all(r.matched for r in self.results)

    def first_mismatch(self):
        return next((r for r in self.results if not r.matched), None)

    def to_text(self):
        lines = []
        for r in self.results:
            mark = "ok" if r.matched else "MISMATCH"
            lines.append(
                f"{mark:8} {r.name}: {r.verdict.describe(r.offset)} [expected {r.expect}] "
                f"depth={r.depth} ({r.elapsed_ms:.1f} ms)"
            )
        return "\n".join(lines)

    def to_json(self):
        return json.dumps([r.as_dict() for r in self.results], indent=2, ensure_ascii=False)


def relation_suite(aut, suite: Sequence[Relation], depth):
    report = RelationReport()
    offset = aut.alphabet.display_offset
    for rel in suite:
        if rel.element.automaton != aut:
            raise LevelMismatch(f"relation {rel.name} belongs to a different automaton")
        start = time.perf_counter()
        verdict = is_trivial_to_depth(rel.element, depth)
        elapsed = (time.perf_counter() - start) * 1000
        report.results.append(
            RelationResult(rel.name, rel.element.text(), verdict, depth, elapsed, rel.expect, offset)
        )
    return report


def exhaustive_trivial(element, depth):
    """Reference check by brute force over every word of length ``depth``."""
    for w in enumerate_words(element.automaton.alphabet, element.base_level, depth):
        if apply_naive(element, w) != w:
            return False
    return True
