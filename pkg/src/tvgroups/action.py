"""Group elements as formal words in automaton states, acting on the tree.

A :class:`GroupElement` is a product ``q1^e1 q2^e2 ...`` of state
transformations anchored at a base level ``k``. Products use the right
action: the first factor acts first, so ``(f*g)(w) == g(f(w))``.
"""
from dataclasses import dataclass
from functools import lru_cache

from . import perms
from .alphabet import TreeWord
from .automaton import TVAutomaton, inverse_automaton, product_automaton
from .errors import LetterOutOfRange, LevelMismatch, SpecError


def simplify_factors(factors):
    """Free cancellation of adjacent ``q q^-1`` / ``q^-1 q`` pairs."""
    out = []
    for f in factors:
        if out and out[-1][0] == f[0] and out[-1][1] == -f[1]:
            out.pop()
        else:
            out.append(f)
    return tuple(out)


def invert_factors(factors):
    return tuple((q, -e) for q, e in reversed(factors))


@dataclass(frozen=True)
class GroupElement:
    automaton: TVAutomaton
    base_level: int = 0
    factors: tuple = ()

    def __post_init__(self):
        factors = tuple((int(q), int(e)) for q, e in self.factors)
        for q, e in factors:
            if not 0 <= q < self.automaton.num_states or e not in (1, -1):
                raise SpecError(f"bad factor ({q}, {e})")
        object.__setattr__(self, "factors", factors)

    @classmethod
    def of(cls, automaton, *names, level=0):
        """``GroupElement.of(aut, "b", "a^-1")``."""
        return cls.parse(automaton, " ".join(names), level)

    @classmethod
    def parse(cls, automaton, text, level=0):
        factors = []
        for tok in text.split():
            name, sign = tok, 1
            for suffix in ("^-1", "^{-1}"):
                if tok.endswith(suffix):
                    name, sign = tok[: -len(suffix)], -1
                    break
            factors.append((automaton.index(name), sign))
        return cls(automaton, level, tuple(factors))

    def with_factors(self, factors):
        return GroupElement(self.automaton, self.base_level, tuple(factors))

    def _check_compatible(self, other):
        if other.automaton != self.automaton or other.base_level != self.base_level:
            raise LevelMismatch("elements must share automaton and base level")

    def __mul__(self, other):
        self._check_compatible(other)
        return self.with_factors(self.factors + other.factors)

    def inverse(self):
        return self.with_factors(invert_factors(self.factors))

    def __pow__(self, m):
        base = self.factors if m >= 0 else invert_factors(self.factors)
        return self.with_factors(base * abs(m))

    def __len__(self):
        return len(self.factors)

    @property
    def is_empty(self):
        return not self.factors

    def text(self):
        names = self.automaton.states
        return " ".join(names[q] + ("^-1" if e < 0 else "") for q, e in self.factors)

    def __str__(self):
        return f"[{self.text()}]@{self.base_level}"


def identity_element(automaton, level=0):
    return GroupElement(automaton, level, ())


def simplify(element):
    return element.with_factors(simplify_factors(element.factors))


def thread(tables, factors, x):
    """Push letter ``x`` through the factors at one level.

    Returns the image letter and the factor word of the section at ``x``.
    """
    section = []
    for q, e in factors:
        if e > 0:
            nxt = tables.phi[q][x]
            x = tables.psi[q][x]
        else:
            y = tables.psi_inv[q][x]
            nxt = tables.phi[q][y]
            x = y
        section.append((nxt, e))
    return x, tuple(section)


def _check_word(element, word):
    if word.start_level != element.base_level:
        raise LevelMismatch(
            f"word starts at level {word.start_level} but element acts on level {element.base_level}"
        )
    aut = element.automaton
    for j, x in enumerate(word.letters):
        size = aut.size_at(word.start_level + j)
        if not 0 <= x < size:
            raise LetterOutOfRange(f"letter {x} not in X_{word.start_level + j} of size {size}")


def apply_fused(element, word):
    """One pass over the word, advancing every factor's state letter by letter."""
    _check_word(element, word)
    aut = element.automaton
    factors = element.factors
    out = []
    for j, x in enumerate(word.letters):
        t = aut.tables(word.start_level + j)
        x, factors = thread(t, factors, x)
        out.append(x)
    return TreeWord(word.start_level, out)


def _apply_state(aut, level, q, sign, letters):
    out = []
    for j, x in enumerate(letters):
        t = aut.tables(level + j)
        if sign > 0:
            out.append(t.psi[q][x])
            q = t.phi[q][x]
        else:
            y = t.psi_inv[q][x]
            out.append(y)
            q = t.phi[q][y]
    return out


def apply_naive(element, word):
    """Factor by factor over the whole word; the reference evaluator."""
    _check_word(element, word)
    letters = list(word.letters)
    for q, e in element.factors:
        letters = _apply_state(element.automaton, word.start_level, q, e, letters)
    return TreeWord(word.start_level, letters)


@lru_cache(maxsize=64)
def _inverse_of(aut):
    return inverse_automaton(aut)


@lru_cache(maxsize=256)
def _product_chain(aut, signs):
    chain = aut if signs[0] > 0 else _inverse_of(aut)
    for s in signs[1:]:
        chain = product_automaton(chain, aut if s > 0 else _inverse_of(aut))
    return chain


def apply_product(element, word):
    """Evaluate via one state of the iterated product automaton (inverse factors use the inverse automaton)."""
    _check_word(element, word)
    if not element.factors:
        return TreeWord(word.start_level, word.letters)
    aut = element.automaton
    signs = tuple(e for _, e in element.factors)
    chain = _product_chain(aut, signs)
    n = aut.num_states
    state = 0
    for q, _ in element.factors:
        state = state * n + q
    return TreeWord(word.start_level, _apply_state(chain, word.start_level, state, 1, list(word.letters)))


def apply(element, word, mode="fused"):
    if mode == "fused":
        return apply_fused(element, word)
    if mode == "naive":
        return apply_naive(element, word)
    if mode == "product":
        return apply_product(element, word)
    raise ValueError(f"unknown evaluation mode {mode!r}")


def root_permutation(element):
    level = element.base_level
    t = element.automaton.tables(level)
    images = tuple(thread(t, element.factors, x)[0] for x in range(t.size))
    return perms.LevelPermutation(level, images)


def section(element, letter):
    """The element at ``base_level+1`` governing the action below ``letter``."""
    t = element.automaton.tables(element.base_level)
    if not 0 <= letter < t.size:
        raise LetterOutOfRange(f"letter {letter} not in X_{element.base_level}")
    _, sec = thread(t, element.factors, letter)
    return GroupElement(element.automaton, element.base_level + 1, sec)
