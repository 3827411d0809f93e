"""Time-varying automata over changing alphabets.

An automaton is a finite state set plus a *level program*: a finite
description that yields, for every queryable level ``i``, the transition
table ``phi[q][x]`` and output table ``psi[q][x]``. Three program forms
exist: constant (the Mealy case), explicit tables up to a horizon, and
builtin functions of the level (used by the parametric presets and by the
derived inverse/product automata).
"""
from dataclasses import dataclass, field, replace
from functools import cached_property, lru_cache
from typing import Callable, Hashable, Optional

from . import perms
from .alphabet import ChangingAlphabet, Constant
from .errors import (
    AlphabetMismatch,
    BadPermutation,
    HorizonExceeded,
    LetterOutOfRange,
    NotInvertible,
    SpecError,
)


@dataclass(frozen=True)
class LevelTables:
    """Transition and output tables of one level, indexed ``[state][letter]``."""

    phi: tuple
    psi: tuple

    @cached_property
    def psi_inv(self):
        rows = []
        for q, row in enumerate(self.psi):
            if not perms.is_bijection(row):
                raise NotInvertible(f"output row of state #{q} is not a bijection: {row}")
            rows.append(perms.inverse(row))
        return tuple(rows)

    @property
    def size(self):
        return len(self.psi[0]) if self.psi else 0

    def is_invertible(self):
        return all(perms.is_bijection(row) for row in self.psi)


def check_tables(tables, num_states, size, level=None):
    where = "" if level is None else f" at level {level}"
    if len(tables.phi) != num_states or len(tables.psi) != num_states:
        raise SpecError(f"tables must have one row per state{where}")
    for row in tables.phi:
        if len(row) != size or any(not 0 <= q < num_states for q in row):
            raise SpecError(f"transition row {row} is malformed{where}")
    for row in tables.psi:
        if len(row) != size or any(not 0 <= y < size for y in row):
            raise SpecError(f"output row {row} is malformed{where}")
    return tables


@dataclass(frozen=True)
class ConstantProgram:
    tables: LevelTables
    horizon = None

    def at(self, level):
        return self.tables

    def shifted(self, k):
        return self


@dataclass(frozen=True)
class TableProgram:
    levels: tuple

    @property
    def horizon(self):
        return len(self.levels)

    def at(self, level):
        return self.levels[level]

    def shifted(self, k):
        return TableProgram(self.levels[k:])


@dataclass(frozen=True)
class FunctionProgram:
    """Tables computed on demand by ``fn(absolute_level)``; memoized, so repeated queries are free."""

    fn: Callable = field(compare=False, repr=False)
    key: Hashable
    offset: int = 0
    absolute_horizon: Optional[int] = None

    @classmethod
    def of(cls, fn, key, horizon=None):
        return cls(lru_cache(maxsize=None)(fn), key, 0, horizon)

    @property
    def horizon(self):
        if self.absolute_horizon is None:
            return None
        return max(self.absolute_horizon - self.offset, 0)

    def at(self, level):
        return self.fn(self.offset + level)

    def shifted(self, k):
        return replace(self, offset=self.offset + k)


def _min_horizon(*hs):
    finite = [h for h in hs if h is not None]
    return min(finite) if finite else None


@dataclass(frozen=True)
class TVAutomaton:
    alphabet: ChangingAlphabet
    states: tuple
    program: object
    name: str = field(default="", compare=False)
    # product automata keep the component state indices of every flattened state
    components: Optional[tuple] = field(default=None, compare=False, repr=False)
    _cert: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        if len(set(self.states)) != len(self.states):
            raise SpecError("state names must be distinct")
        if not self.states:
            raise SpecError("an automaton needs at least one state")

    @property
    def num_states(self):
        return len(self.states)

    @property
    def horizon(self):
        return _min_horizon(self.alphabet.horizon, self.program.horizon)

    @property
    def is_mealy(self):
        return isinstance(self.alphabet.descriptor, Constant) and isinstance(self.program, ConstantProgram)

    def index(self, state):
        if isinstance(state, int):
            if not 0 <= state < self.num_states:
                raise SpecError(f"state index {state} out of range")
            return state
        try:
            return self.states.index(state)
        except ValueError:
            raise SpecError(f"unknown state {state!r}; states are {', '.join(self.states)}") from None

    def tables(self, level):
        h = self.horizon
        if level < 0:
            raise ValueError("level must be >= 0")
        if h is not None and level >= h:
            raise HorizonExceeded(level, h)
        return self.program.at(level)

    def size_at(self, level):
        return self.alphabet.size_at(level)

    def step(self, level, state, letter):
        q = self.index(state)
        t = self.tables(level)
        if not 0 <= letter < len(t.psi[q]):
            raise LetterOutOfRange(f"letter {letter} not in X_{level}")
        return t.phi[q][letter], t.psi[q][letter]

    def is_invertible_up_to(self, horizon):
        """True iff every output row is a bijection on levels ``0..horizon-1``; the result is cached."""
        known = self._cert.get("yes", 0)
        if horizon <= known:
            return True
        bad = self._cert.get("no")
        if bad is not None and bad < horizon:
            return False
        for level in range(known, horizon):
            if not self.tables(level).is_invertible():
                self._cert["no"] = level
                return False
        self._cert["yes"] = horizon
        return True

    @property
    def invertible_flag(self):
        if "no" in self._cert:
            return ("no", self._cert["no"])
        if "yes" in self._cert:
            return ("yes", self._cert["yes"])
        return ("unknown", None)

    def _shift_extra(self, k):
        return {}

    def __str__(self):
        return self.name or f"TVAutomaton({', '.join(self.states)})"


def step(aut, level, state, letter):
    return aut.step(level, state, letter)


def is_invertible_up_to(aut, horizon):
    return aut.is_invertible_up_to(horizon)


def shift_automaton(aut, k):
    """The k-th shift: level ``i`` of the result is level ``k+i`` of ``aut``."""
    if k < 0:
        raise ValueError("shift must be >= 0")
    if k == 0:
        return aut
    return replace(
        aut,
        alphabet=aut.alphabet.shift(k),
        program=aut.program.shifted(k),
        _cert={},
        **aut._shift_extra(k),
    )


def build_tables(states, size, transitions, outputs):
    """Tables from ``{state: [next-state per letter]}`` and ``{state: image tuple}`` maps."""
    idx = {name: i for i, name in enumerate(states)}
    phi = tuple(tuple(idx[t] for t in transitions[q]) for q in states)
    psi = tuple(tuple(outputs[q]) for q in states)
    return check_tables(LevelTables(phi, psi), len(states), size)


def mealy(size, states, transitions, outputs, name="", display_offset=0):
    alphabet = ChangingAlphabet.constant(size, display_offset)
    tables = build_tables(states, size, transitions, outputs)
    return TVAutomaton(alphabet, tuple(states), ConstantProgram(tables), name=name)


def from_level_tables(alphabet, states, levels, name=""):
    levels = tuple(check_tables(t, len(states), alphabet.size_at(i), i) for i, t in enumerate(levels))
    if alphabet.horizon is not None and alphabet.horizon < len(levels):
        levels = levels[: alphabet.horizon]
    return TVAutomaton(alphabet, tuple(states), TableProgram(levels), name=name)


def _invert_tables(t):
    inv = t.psi_inv
    phi = tuple(
        tuple(t.phi[q][inv[q][x]] for x in range(len(inv[q]))) for q in range(len(t.psi))
    )
    return LevelTables(phi, inv)


def inverse_automaton(aut):
    """Automaton on the same states whose state q realizes the inverse of q's transformation."""
    prog = aut.program
    if isinstance(prog, ConstantProgram):
        new = ConstantProgram(_invert_tables(prog.tables))
    elif isinstance(prog, TableProgram):
        new = TableProgram(tuple(_invert_tables(t) for t in prog.levels))
    else:
        new = FunctionProgram.of(lambda i: _invert_tables(aut.tables(i)), ("inverse", aut), aut.horizon)
    name = f"{aut.name}^-1" if aut.name else ""
    return TVAutomaton(aut.alphabet, aut.states, new, name=name)


def _product_tables(tf, tg):
    ng = len(tg.psi)
    size = tf.size
    phi, psi = [], []
    for p in range(len(tf.psi)):
        for q in range(ng):
            prow, qrow = [], []
            for x in range(size):
                y = tf.psi[p][x]
                qrow.append(tg.psi[q][y])
                prow.append(tf.phi[p][x] * ng + tg.phi[q][y])
            phi.append(tuple(prow))
            psi.append(tuple(qrow))
    return LevelTables(tuple(phi), tuple(psi))


def product_automaton(f, g):
    """Composition automaton: state (p, q) acts as p followed by q (right action).

    States are flattened to index ``p*|Q_g| + q``; ``components`` keeps the pairs.
    """
    if f.alphabet != g.alphabet:
        raise AlphabetMismatch("product requires identical changing alphabets")
    states = tuple(f"({p},{q})" for p in f.states for q in g.states)
    components = tuple((p, q) for p in range(f.num_states) for q in range(g.num_states))
    fp, gp = f.program, g.program
    if isinstance(fp, ConstantProgram) and isinstance(gp, ConstantProgram):
        prog = ConstantProgram(_product_tables(fp.tables, gp.tables))
    elif isinstance(fp, TableProgram) and isinstance(gp, TableProgram):
        h = min(len(fp.levels), len(gp.levels))
        prog = TableProgram(tuple(_product_tables(fp.levels[i], gp.levels[i]) for i in range(h)))
    else:
        prog = FunctionProgram.of(
            lambda i: _product_tables(f.tables(i), g.tables(i)),
            ("product", f, g),
            _min_horizon(f.horizon, g.horizon),
        )
    return TVAutomaton(f.alphabet, states, prog, name=f"{f.name}*{g.name}", components=components)


def identity_automaton(alphabet):
    if alphabet.is_constant:
        n = alphabet.size_at(0)
        prog = ConstantProgram(LevelTables(((0,) * n,), (perms.identity(n),)))
    else:
        def tables(i):
            n = alphabet.size_at(i)
            return LevelTables(((0,) * n,), (perms.identity(n),))

        prog = FunctionProgram.of(tables, ("identity", alphabet), alphabet.horizon)
    return TVAutomaton(alphabet, ("e",), prog, name="id")


def diagonal_from_representations(alphabet, generators, level_perms, name="diagonal"):
    """Diagonal-type automaton: state s stays s and outputs ``level_perms(i, s)`` at level i.

    ``level_perms`` may return a :class:`~tvgroups.perms.LevelPermutation` or an image tuple.
    """
    generators = tuple(generators)

    def tables(i):
        n = alphabet.size_at(i)
        psi = []
        for s in generators:
            p = level_perms(i, s)
            images = tuple(p.images if isinstance(p, perms.LevelPermutation) else p)
            if not perms.is_bijection(images, n):
                raise BadPermutation(f"level-{i} permutation of {s!r} is not a bijection of 0..{n - 1}")
            psi.append(images)
        phi = tuple((q,) * n for q in range(len(generators)))
        return LevelTables(phi, tuple(psi))

    prog = FunctionProgram.of(tables, ("diagonal", name, alphabet, generators), alphabet.horizon)
    return TVAutomaton(alphabet, generators, prog, name=name)


def is_diagonal_up_to(aut, horizon):
    return all(
        all(all(q2 == q for q2 in row) for q, row in enumerate(aut.tables(i).phi)) for i in range(horizon)
    )


def tables_equal(a, b, levels):
    """Compare level tables of two automata on levels ``0..levels-1``."""
    if a.num_states != b.num_states:
        return False
    return all(a.tables(i) == b.tables(i) for i in range(levels))


def _quote(s):
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(aut, levels, namer=None, elide=False, offset=None):
    """DOT digraph of the level graph of ``aut``.

    Nodes are ``(i, q)`` for ``i <= levels`` (edge targets of the last
    requested level included); ``levels == 0`` yields an empty graph. Node
    labels are the output permutations in cycle notation, prefixed by
    ``namer(i, state_name, images)`` when that returns a name. Parallel
    edges are collapsed into one edge with a comma-separated letter list.
    With ``elide`` the largest bundle of a vertex with several out-edges is
    left unlabelled, since its letters follow from the others.
    """
    offset = aut.alphabet.display_offset if offset is None else offset
    lines = ["digraph automaton {", "  rankdir=LR;", "  node [shape=circle];"]
    if levels > 0:
        for i in range(levels + 1):
            t = aut.tables(i)
            for q, state in enumerate(aut.states):
                text = perms.to_cycle_text(t.psi[q], offset)
                name = namer(i, state, t.psi[q]) if namer else None
                label = f"{name}={text}" if name and text != "id" else (name or text)
                lines.append(f"  {_quote(f'{i},{state}')} [label={_quote(label)}];")
        for i in range(levels):
            t = aut.tables(i)
            for q, state in enumerate(aut.states):
                bundles = {}
                for x, target in enumerate(t.phi[q]):
                    bundles.setdefault(target, []).append(x)
                skip = None
                if elide and len(bundles) > 1:
                    skip = max(bundles, key=lambda tgt: (len(bundles[tgt]), tgt))
                for target in sorted(bundles):
                    src = _quote(f"{i},{state}")
                    dst = _quote(f"{i + 1},{aut.states[target]}")
                    if target == skip:
                        lines.append(f"  {src} -> {dst};")
                    else:
                        label = ",".join(str(x + offset) for x in bundles[target])
                        lines.append(f"  {src} -> {dst} [label={_quote(label)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
