"""Diagonal automaton D and reset automaton A realizing K x Z and K wr Z.

For K = Z^n1 x C_r1 x ... x C_rn2 (n = n1 + n2 generators) every level i
carries 2n pairwise disjoint cycles: pi_1..pi_n and sigma_1..sigma_n.
The state ``a`` outputs alpha_i = pi_1 ... pi_n, the state ``b_s`` outputs
beta_s = sigma_s * alpha_i. In D all transitions are diagonal; A differs
only in that ``b_s`` reading the marked letter x_s (first letter of pi_s)
moves to ``a``.
"""
import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

from . import perms
from .action import GroupElement
from .alphabet import ChangingAlphabet, ParamSeq, TreeWord
from .automaton import FunctionProgram, LevelTables, TVAutomaton
from .errors import BadExponent, BadParameters


@dataclass(frozen=True)
class KSpec:
    """Abelian group Z^free_rank x C_r1 x ... x C_rn2."""

    free_rank: int = 1
    torsion_orders: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion_orders", tuple(int(r) for r in self.torsion_orders))
        if self.free_rank < 0:
            raise BadParameters("free rank must be >= 0")
        if any(r < 2 for r in self.torsion_orders):
            raise BadParameters("torsion orders must be >= 2")
        if self.n < 1:
            raise BadParameters("K must be nontrivial (n >= 1)")

    @property
    def n(self):
        return self.free_rank + len(self.torsion_orders)

    def sigma_length(self, s, r_i):
        """Length of sigma_s (1-based s) at a level whose sequence value is ``r_i``."""
        if s <= self.free_rank:
            return r_i
        return self.torsion_orders[s - self.free_rank - 1]

    def alphabet_size(self, r_i):
        return self.n * r_i + self.free_rank * r_i + sum(self.torsion_orders)

    def __str__(self):
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        parts += [f"C{r}" for r in self.torsion_orders]
        return " x ".join(parts)


@dataclass(frozen=True)
class CycleLayout:
    """The 2n disjoint cycles of one level; ``pi[s-1][0]`` is the marked letter x_s."""

    level: int
    size: int
    pi: tuple
    sigma: tuple

    @property
    def n(self):
        return len(self.pi)

    def marked(self, s):
        return self.pi[s - 1][0]

    @property
    def marked_letters(self):
        return tuple(c[0] for c in self.pi)

    def pi_perm(self, s):
        return perms.from_cycles(self.size, [self.pi[s - 1]])

    def sigma_perm(self, s):
        return perms.from_cycles(self.size, [self.sigma[s - 1]])

    @property
    def alpha(self):
        return perms.from_cycles(self.size, self.pi)

    def beta(self, s):
        return perms.compose(self.sigma_perm(s), self.alpha)

    def Sigma(self, M):
        """sigma_1^m1 ... sigma_n^mn (the factors are disjoint, so order is immaterial)."""
        p = perms.identity(self.size)
        for s, m in enumerate(M, start=1):
            p = perms.compose(p, perms.power(self.sigma_perm(s), m))
        return p

    @property
    def spare_letters(self):
        used = {x for c in self.pi + self.sigma for x in c}
        return tuple(x for x in range(self.size) if x not in used)

    def text(self, offset=0):
        def cyc(c):
            return "(" + " ".join(str(x + offset) for x in c) + ")"

        parts = [f"pi_{s}={cyc(c)}" for s, c in enumerate(self.pi, 1)]
        parts += [f"sigma_{s}={cyc(c)}" for s, c in enumerate(self.sigma, 1)]
        parts += [f"x_{s}={c[0] + offset}" for s, c in enumerate(self.pi, 1)]
        return f"level {self.level}: " + " ".join(parts)


def canonical_layout(k, seq, level):
    r = seq(level)
    size = k.alphabet_size(r)
    pos = 0
    pi, sigma = [], []
    for _ in range(k.n):
        pi.append(tuple(range(pos, pos + r)))
        pos += r
    for s in range(1, k.n + 1):
        length = k.sigma_length(s, r)
        sigma.append(tuple(range(pos, pos + length)))
        pos += length
    return CycleLayout(level, size, tuple(pi), tuple(sigma))


def shuffled_layout(k, seq, level, seed):
    """Canonical layout relabelled by a level-wise random bijection of the letters."""
    base = canonical_layout(k, seq, level)
    rng = random.Random(f"layout:{seed}:{level}")
    relabel = list(range(base.size))
    rng.shuffle(relabel)
    pi = tuple(tuple(relabel[x] for x in c) for c in base.pi)
    sigma = tuple(tuple(relabel[x] for x in c) for c in base.sigma)
    return CycleLayout(level, base.size, pi, sigma)


def _layout_Z_wr_Z(seq, level):
    r = seq(level)
    return CycleLayout(level, 2 * r, (tuple(range(0, 2 * r, 2)),), (tuple(range(1, 2 * r, 2)),))


def _layout_Zn_wr_Z(n, seq, level):
    r = seq(level)
    pi = tuple(tuple(range(2 * s * r, 2 * s * r + 2 * r, 2)) for s in range(n))
    sigma = tuple(tuple(range(2 * s * r + 1, 2 * s * r + 2 * r, 2)) for s in range(n))
    return CycleLayout(level, 2 * n * r, pi, sigma)


def _layout_Cr_wr_Z(r, seq, level):
    ri = seq(level)
    return CycleLayout(level, ri + r, (tuple(range(ri)),), (tuple(range(ri, ri + r)),))


@dataclass(frozen=True)
class LayoutSource:
    """Finite description of the layouts of every level.

    ``style`` is ``canonical`` (contiguous blocks), ``shuffled`` (seeded
    relabelling of the canonical one) or the name of one of the explicit
    lamplighter presets, whose cycles follow their own closed formulas.
    """

    kspec: KSpec
    seq: ParamSeq
    style: str = "canonical"
    seed: Optional[int] = None
    offset: int = 0

    def at(self, level):
        return _layout_at(self.kspec, self.seq, self.style, self.seed, self.offset + level)

    def shifted(self, k):
        return LayoutSource(self.kspec, self.seq, self.style, self.seed, self.offset + k)


@lru_cache(maxsize=4096)
def _layout_at(kspec, seq, style, seed, level):
    if style == "canonical":
        return canonical_layout(kspec, seq, level)
    if style == "shuffled":
        return shuffled_layout(kspec, seq, level, seed)
    if style == "Z_wr_Z":
        return _layout_Z_wr_Z(seq, level)
    if style == "Zn_wr_Z":
        return _layout_Zn_wr_Z(kspec.n, seq, level)
    if style == "Cr_wr_Z":
        return _layout_Cr_wr_Z(kspec.torsion_orders[0], seq, level)
    raise BadParameters(f"unknown layout style {style!r}")


def build_layout(k, seq, level, shuffle_seed=None):
    if shuffle_seed is None:
        return canonical_layout(k, seq, level)
    return shuffled_layout(k, seq, level, shuffle_seed)


@dataclass(frozen=True)
class LamplighterAutomaton(TVAutomaton):
    """A D- or A-automaton that remembers the cycle layouts it was built from."""

    layouts: Optional[LayoutSource] = field(default=None, compare=False)
    kind: str = field(default="A", compare=False)

    def layout(self, level):
        return self.layouts.at(level)

    @property
    def kspec(self):
        return self.layouts.kspec

    def _shift_extra(self, k):
        return {"layouts": self.layouts.shifted(k)}

    def state_a(self):
        return 0

    def state_b(self, s):
        if not 1 <= s <= self.kspec.n:
            raise BadParameters(f"generator index s={s} outside 1..{self.kspec.n}")
        return s


def state_names(n):
    return ("a",) + tuple(f"b{s}" for s in range(1, n + 1))


def _tables_for(layouts, kind, level):
    lay = layouts.at(level)
    alpha = lay.alpha
    psi = [alpha] + [lay.beta(s) for s in range(1, lay.n + 1)]
    phi = [(0,) * lay.size]
    for s in range(1, lay.n + 1):
        row = [s] * lay.size
        if kind == "A":
            row[lay.marked(s)] = 0
        phi.append(tuple(row))
    return LevelTables(tuple(phi), tuple(psi))


def _alphabet_for(k, seq, display_offset):
    return ChangingAlphabet.parametric(
        seq, scale=k.n + k.free_rank, offset=sum(k.torsion_orders), display_offset=display_offset
    )


def automaton_from_layouts(layouts, kind="A", states=None, name=None, display_offset=0):
    k = layouts.kspec
    alphabet = _alphabet_for(k, layouts.seq, display_offset)
    prog = FunctionProgram.of(
        lambda i: _tables_for(layouts, kind, i), ("lamplighter", kind, layouts), layouts.seq.horizon
    )
    return LamplighterAutomaton(
        alphabet,
        states or state_names(k.n),
        prog,
        name=name or f"{kind}[{k}; r_i={layouts.seq}]",
        layouts=layouts,
        kind=kind,
    )


def build_D(k, seq, shuffle_seed=None):
    style = "canonical" if shuffle_seed is None else "shuffled"
    return automaton_from_layouts(LayoutSource(k, seq, style, shuffle_seed), kind="D")


def build_A(k, seq, shuffle_seed=None):
    style = "canonical" if shuffle_seed is None else "shuffled"
    return automaton_from_layouts(LayoutSource(k, seq, style, shuffle_seed), kind="A")


@dataclass(frozen=True)
class ExponentVector:
    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(m) for m in self.values))

    def validate(self, k):
        if len(self.values) != k.n:
            raise BadExponent(f"expected {k.n} exponents, got {len(self.values)}")
        for s in range(k.free_rank + 1, k.n + 1):
            m, r = self.values[s - 1], k.torsion_orders[s - k.free_rank - 1]
            if not 0 <= m < r:
                raise BadExponent(f"torsion exponent m_{s}={m} outside 0..{r - 1}")
        return self

    @property
    def weight(self):
        return sum(abs(m) for m in self.values)

    def zeroed(self, s):
        vals = list(self.values)
        vals[s - 1] = 0
        return ExponentVector(tuple(vals))

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return len(self.values)


def _a_power(k):
    """Factors of a^k."""
    return ((0, 1 if k > 0 else -1),) * abs(k)


def _c_power(s, m):
    """Factors of c_s^m where c_s = b_s a^-1 and c_s^-1 = a b_s^-1."""
    one = ((s, 1), (0, -1)) if m > 0 else ((0, 1), (s, -1))
    return one * abs(m)


def element_c(aut, s, level=0):
    """c_s = b_s a^-1 at the given level."""
    return GroupElement(aut, level, _c_power(aut.state_b(s), 1))


def element_d(aut, k, s, level=0):
    """d_{k,s} = a^-k c_s a^k."""
    return GroupElement(aut, level, _a_power(-k) + _c_power(aut.state_b(s), 1) + _a_power(k))


def element_C(aut, M, level=0):
    """C_M = c_1^m1 ... c_n^mn for M in the admissible exponent set."""
    M = M if isinstance(M, ExponentVector) else ExponentVector(tuple(M))
    M.validate(aut.kspec)
    factors = ()
    for s, m in enumerate(M, start=1):
        if m:
            factors += _c_power(aut.state_b(s), m)
    return GroupElement(aut, level, factors)


def element_dM(aut, k, M, level=0):
    """d_{k,M} = a^-k C_M a^k."""
    C = element_C(aut, M, level)
    return GroupElement(aut, level, _a_power(-k) + C.factors + _a_power(k))


def element_a_power(aut, k, level=0):
    return GroupElement(aut, level, _a_power(k))


def witness_word(aut, s, level, j):
    """x_{s,level} x_{s,level+1} ... x_{s,level+j}."""
    aut.state_b(s)
    return TreeWord(level, tuple(aut.layout(level + t).marked(s) for t in range(j + 1)))


def relabeling(source, target):
    """Letter bijection sending each cycle position of ``source`` to the same position in ``target``."""
    if source.size != target.size or len(source.pi) != len(target.pi):
        raise BadParameters("layouts have different shapes")
    mapping = {}
    for cs, ct in zip(source.pi + source.sigma, target.pi + target.sigma):
        if len(cs) != len(ct):
            raise BadParameters("layouts have different cycle lengths")
        mapping.update(zip(cs, ct))
    spare_s, spare_t = source.spare_letters, target.spare_letters
    mapping.update(zip(spare_s, spare_t))
    return tuple(mapping[x] for x in range(source.size))


def relabel_tables(tables, mapping):
    """Tables conjugated by the letter bijection ``mapping`` (old letter -> new letter)."""
    inv = perms.inverse(mapping)
    size = len(mapping)
    psi = tuple(tuple(mapping[row[inv[y]]] for y in range(size)) for row in tables.psi)
    phi = tuple(tuple(row[inv[y]] for y in range(size)) for row in tables.phi)
    return LevelTables(phi, psi)
