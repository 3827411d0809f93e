"""Permutations of ``range(n)`` stored as image tuples.

Products follow the right-action convention used throughout the package:
``compose(p, q)`` applies ``p`` first, then ``q``.
"""
import re
from dataclasses import dataclass

from .errors import BadPermutation

Perm = tuple


def identity(n):
    return tuple(range(n))


def is_bijection(images, n=None):
    n = len(images) if n is None else n
    return len(images) == n and sorted(images) == list(range(n))


def compose(p, q):
    return tuple(q[x] for x in p)


def inverse(p):
    inv = [0] * len(p)
    for x, y in enumerate(p):
        inv[y] = x
    return tuple(inv)


def power(p, k):
    if k < 0:
        p, k = inverse(p), -k
    result = identity(len(p))
    base = p
    while k:
        if k & 1:
            result = compose(result, base)
        base = compose(base, base)
        k >>= 1
    return result


def from_cycles(n, cycles):
    """Build the permutation of ``range(n)`` given by disjoint cycles."""
    images = list(range(n))
    seen = set()
    for cyc in cycles:
        for x in cyc:
            if not 0 <= x < n:
                raise BadPermutation(f"letter {x} outside 0..{n - 1}")
            if x in seen:
                raise BadPermutation(f"letter {x} repeated in cycle notation")
            seen.add(x)
        for j, x in enumerate(cyc):
            images[x] = cyc[(j + 1) % len(cyc)]
    return tuple(images)


def cycles(p):
    """Nontrivial cycles of ``p``, each starting at its smallest letter."""
    out = []
    seen = set()
    for start in range(len(p)):
        if start in seen or p[start] == start:
            continue
        cyc = [start]
        seen.add(start)
        x = p[start]
        while x != start:
            cyc.append(x)
            seen.add(x)
            x = p[x]
        out.append(tuple(cyc))
    return out


def to_cycle_text(p, offset=0):
    cs = cycles(p)
    if not cs:
        return "id"
    return "".join("(" + " ".join(str(x + offset) for x in c) + ")" for c in cs)


_CYCLE = re.compile(r"\(([^()]*)\)")


def parse_cycle_text(text, n, offset=0):
    """Parse ``"(1 3)(2 4)"`` (letters shifted by ``offset``) or ``"id"``."""
    text = text.strip()
    if text in ("", "id", "()"):
        return identity(n)
    leftover = _CYCLE.sub("", text).strip()
    if leftover:
        raise BadPermutation(f"cannot parse cycle notation {text!r}")
    cycs = []
    for body in _CYCLE.findall(text):
        try:
            letters = [int(tok) - offset for tok in re.split(r"[\s,]+", body.strip()) if tok]
        except ValueError:
            raise BadPermutation(f"non-integer letter in {text!r}") from None
        cycs.append(letters)
    return from_cycles(n, cycs)


def order(p):
    from math import lcm

    result = 1
    for c in cycles(p):
        result = lcm(result, len(c))
    return result


@dataclass(frozen=True)
class LevelPermutation:
    """A bijection of the letters of one level."""

    level: int
    images: tuple

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(self.images))
        if not is_bijection(self.images):
            raise BadPermutation(f"images {self.images} are not a bijection at level {self.level}")

    def __call__(self, x):
        return self.images[x]

    @property
    def is_identity(self):
        return self.images == identity(len(self.images))

    def text(self, offset=0):
        return to_cycle_text(self.images, offset)

    def __str__(self):
        return self.text()
