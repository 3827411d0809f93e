"""Changing alphabets, their shifts, and words of the tree X*."""
import itertools
import re
from dataclasses import dataclass, field, replace
from functools import reduce
from operator import mul
from typing import Iterator, Optional, Union

from .errors import BadParameters, HorizonExceeded, LetterOutOfRange, LevelMismatch, SpecError


@dataclass(frozen=True)
class ParamSeq:
    """Integer sequence r_i = slope*i + intercept, optionally overridden by a prefix.

    ``horizon`` is set only for a finite prefix with no affine tail.
    """

    slope: int = 1
    intercept: int = 2
    prefix: tuple = ()
    horizon: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(int(v) for v in self.prefix))
        if self.slope < 0:
            raise BadParameters("sequence slope must be >= 0")
        if any(v < 2 for v in self.prefix):
            raise BadParameters("sequence values must be >= 2")
        if self.horizon is None and self.slope * len(self.prefix) + self.intercept < 2:
            raise BadParameters("sequence values must be >= 2")

    def __call__(self, i):
        if self.horizon is not None and i >= self.horizon:
            raise HorizonExceeded(i, self.horizon)
        if i < len(self.prefix):
            return self.prefix[i]
        return self.slope * i + self.intercept

    @property
    def unbounded(self):
        return self.horizon is None and self.slope > 0

    @classmethod
    def parse(cls, text):
        """Accept ``i+2``, ``2*i+3``, ``5`` or ``list:2,3,4`` (append ``,...`` to continue by +1)."""
        text = text.replace(" ", "")
        if text.startswith("list:") and ";" in text:
            head, _, tail = text.partition(";")
            base = cls.parse(tail)
            items = [t for t in head[5:].split(",") if t and t != "..."]
            try:
                return cls(base.slope, base.intercept, tuple(int(v) for v in items))
            except ValueError:
                raise SpecError(f"bad sequence list {text!r}") from None
        if text.startswith("list:"):
            items = [t for t in text[5:].split(",") if t]
            open_tail = bool(items) and items[-1] == "..."
            if open_tail:
                items = items[:-1]
            try:
                values = tuple(int(v) for v in items)
            except ValueError:
                raise SpecError(f"bad sequence list {text!r}") from None
            if not values:
                raise SpecError("empty sequence list")
            if open_tail:
                return cls(1, values[-1] - (len(values) - 1), values)
            return cls(0, 2, values, horizon=len(values))
        m = re.fullmatch(r"(?:(\d+)\*?)?i(?:\+(\d+))?|(\d+)", text)
        if not m:
            raise SpecError(f"cannot parse sequence {text!r}; expected a*i+b or list:...")
        if m.group(3) is not None:
            return cls(0, int(m.group(3)))
        slope = int(m.group(1)) if m.group(1) else 1
        return cls(slope, int(m.group(2) or 0))

    def __str__(self):
        if self.horizon is not None:
            return "list:" + ",".join(map(str, self.prefix))
        affine = f"{self.slope}*i+{self.intercept}" if self.slope != 1 else f"i+{self.intercept}"
        if self.slope == 0:
            affine = str(self.intercept)
        if self.prefix:
            head = "list:" + ",".join(map(str, self.prefix)) + ",..."
            if self.slope == 1 and self.intercept == self.prefix[-1] - len(self.prefix) + 1:
                return head
            return f"{head};{affine}"
        return affine


@dataclass(frozen=True)
class Constant:
    size: int


@dataclass(frozen=True)
class ExplicitHorizon:
    sizes: tuple

    @property
    def horizon(self):
        return len(self.sizes)


@dataclass(frozen=True)
class Parametric:
    """|X_i| = scale*r_i + offset for the sequence ``seq``."""

    seq: ParamSeq
    scale: int = 1
    offset: int = 0
    family: str = "affine"


Descriptor = Union[Constant, ExplicitHorizon, Parametric]


@dataclass(frozen=True)
class ChangingAlphabet:
    descriptor: Descriptor
    base_shift: int = 0
    display_offset: int = field(default=0, compare=False)

    def __post_init__(self):
        d = self.descriptor
        if isinstance(d, Constant):
            if d.size < 1:
                raise BadParameters("alphabet size must be >= 1")
            # constant alphabets are shift-invariant; normalize so shifts compare equal
            object.__setattr__(self, "base_shift", 0)
        elif isinstance(d, ExplicitHorizon):
            object.__setattr__(self, "descriptor", ExplicitHorizon(tuple(d.sizes)))
            if any(s < 1 for s in d.sizes):
                raise BadParameters("alphabet sizes must be >= 1")

    @classmethod
    def constant(cls, size, display_offset=0):
        return cls(Constant(size), display_offset=display_offset)

    @classmethod
    def explicit(cls, sizes, display_offset=0):
        return cls(ExplicitHorizon(tuple(sizes)), display_offset=display_offset)

    @classmethod
    def parametric(cls, seq, scale=1, offset=0, display_offset=0, family="affine"):
        return cls(Parametric(seq, scale, offset, family), display_offset=display_offset)

    @property
    def horizon(self):
        """First unqueryable level, or None when every level is answered."""
        d = self.descriptor
        if isinstance(d, ExplicitHorizon):
            return max(d.horizon - self.base_shift, 0)
        if isinstance(d, Parametric) and d.seq.horizon is not None:
            return max(d.seq.horizon - self.base_shift, 0)
        return None

    @property
    def is_constant(self):
        return isinstance(self.descriptor, Constant)

    def size_at(self, level):
        if level < 0:
            raise ValueError("level must be >= 0")
        d = self.descriptor
        if isinstance(d, Constant):
            return d.size
        h = self.horizon
        if h is not None and level >= h:
            raise HorizonExceeded(level, h)
        absolute = level + self.base_shift
        if isinstance(d, ExplicitHorizon):
            return d.sizes[absolute]
        return d.scale * d.seq(absolute) + d.offset

    def shift(self, k):
        if k == 0 or self.is_constant:
            return self
        return replace(self, base_shift=self.base_shift + k)

    def sizes(self, count):
        return [self.size_at(i) for i in range(count)]

    def describe(self, count=8):
        if self.is_constant:
            return f"constant {self.descriptor.size}"
        shown = []
        for i in range(count):
            try:
                shown.append(str(self.size_at(i)))
            except HorizonExceeded:
                break
        return "sizes " + " ".join(shown) + (" ..." if self.horizon is None else "")


def size_at(alphabet, level):
    return alphabet.size_at(level)


def shift_alphabet(alphabet, k):
    return alphabet.shift(k)


@dataclass(frozen=True)
class TreeWord:
    """A finite word whose j-th letter lies in X_{start_level + j}."""

    start_level: int
    letters: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(self.letters))

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    @property
    def end_level(self):
        return self.start_level + len(self.letters)

    def concat(self, other):
        if other.start_level != self.end_level:
            raise LevelMismatch(
                f"cannot append a word starting at level {other.start_level} to one ending at {self.end_level}"
            )
        return TreeWord(self.start_level, self.letters + other.letters)

    __add__ = concat

    def prefix(self, n):
        return TreeWord(self.start_level, self.letters[:n])

    def validate(self, alphabet):
        for j, x in enumerate(self.letters):
            size = alphabet.size_at(self.start_level + j)
            if not 0 <= x < size:
                raise LetterOutOfRange(f"letter {x} not in X_{self.start_level + j} of size {size}")
        return self

    def format(self, offset=0):
        body = " ".join(str(x + offset) for x in self.letters)
        return f"{self.start_level}: {body}".rstrip()

    def __str__(self):
        return self.format()

    @classmethod
    def parse(cls, text, offset=0):
        head, sep, body = text.partition(":")
        if not sep:
            raise SpecError(f"word {text!r} must look like 'level: x0 x1 ...'")
        try:
            level = int(head.strip())
            letters = tuple(int(tok) - offset for tok in body.split())
        except ValueError:
            raise SpecError(f"cannot parse word {text!r}") from None
        if level < 0:
            raise SpecError("word start level must be >= 0")
        return cls(level, letters)


def enumerate_words(alphabet, start_level, depth) -> Iterator[TreeWord]:
    """All words of length ``depth`` starting at ``start_level``, in lexicographic order."""
    sizes = [alphabet.size_at(start_level + j) for j in range(depth)]
    for letters in itertools.product(*(range(s) for s in sizes)):
        yield TreeWord(start_level, letters)


def count_words(alphabet, start_level, depth):
    return reduce(mul, (alphabet.size_at(start_level + j) for j in range(depth)), 1)
