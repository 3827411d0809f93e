"""Named automata with their distinguished elements and relation suites.

Tables of the explicit lamplighter presets are written from their own
cycle formulas (1-based letters in the original notation, stored 0-based
with display offset 1) rather than through the generic layout builder.
"""
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

from . import perms
from .action import GroupElement
from .alphabet import ChangingAlphabet, ParamSeq
from .analysis import Relation, commutator
from .automaton import FunctionProgram, LevelTables, TVAutomaton, diagonal_from_representations, mealy
from .errors import BadParameters, UnknownPreset
from .lamplighter import (
    KSpec,
    LamplighterAutomaton,
    LayoutSource,
    build_A,
    build_D,
    element_a_power,
    element_c,
    element_d,
)

DEFAULT_SEQ = ParamSeq(1, 2)


@dataclass
class Preset:
    name: str
    automaton: TVAutomaton
    elements: Dict[str, GroupElement] = field(default_factory=dict)
    suite: List[Relation] = field(default_factory=list)
    namer: Optional[Callable] = None
    falsify: Optional[dict] = None
    description: str = ""


def _cycles1(size, cycles):
    """Permutation from 1-based cycles."""
    return perms.from_cycles(size, [[x - 1 for x in c] for c in cycles])


def _odd(start, r):
    return list(range(start, start + 2 * r, 2))


def grigorchuk():
    states = ("a", "b", "c", "d", "e")
    transitions = {
        "a": ["e", "e"],
        "b": ["a", "c"],
        "c": ["a", "d"],
        "d": ["e", "b"],
        "e": ["e", "e"],
    }
    sigma = (1, 0)
    outputs = {"a": sigma, "b": (0, 1), "c": (0, 1), "d": (0, 1), "e": (0, 1)}
    aut = mealy(2, states, transitions, outputs, name="grigorchuk")
    el = {q: GroupElement.of(aut, q) for q in "abcd"}
    suite = [Relation(f"{q}^2", el[q] ** 2) for q in "abcd"]
    suite.append(Relation("bcd", GroupElement.of(aut, "b", "c", "d")))
    for x, y in (("b", "c"), ("b", "d"), ("c", "d")):
        suite.append(Relation(f"[{x},{y}]", commutator(el[x], el[y])))

    def namer(level, state, images):
        return "σ" if tuple(images) == sigma else "id"

    return Preset("grigorchuk", aut, el, suite, namer, description="Grigorchuk group, 5-state Mealy automaton")


def _reset_program(key, horizon, size_fn, alpha_fn, betas_fn, marks_fn):
    """Tables of an A-type automaton: a = alpha, b_s = beta_s, b_s -> a on its marked letter."""

    def tables(i):
        size = size_fn(i)
        betas = betas_fn(i)
        marks = marks_fn(i)
        phi = [(0,) * size]
        for s, mark in enumerate(marks, start=1):
            row = [s] * size
            row[mark] = 0
            phi.append(tuple(row))
        return LevelTables(tuple(phi), (alpha_fn(i),) + tuple(betas))

    return FunctionProgram.of(tables, key, horizon)


def _lamplighter_suite(aut, n, span):
    ks = range(-span, span + 1)
    ds = [(k, s, element_d(aut, k, s)) for s in range(1, n + 1) for k in ks]
    suite = []
    for idx, (k, s, d) in enumerate(ds):
        for k2, s2, d2 in ds[idx + 1 :]:
            suite.append(Relation(f"[d({k},{s}),d({k2},{s2})]", commutator(d, d2)))
    for s in range(1, n + 1):
        suite.append(Relation(f"c{s}", element_c(aut, s), "nontrivial"))
        suite.append(Relation(f"[a,c{s}]", commutator(element_a_power(aut, 1), element_c(aut, s)), "nontrivial"))
    suite.append(Relation("a", element_a_power(aut, 1), "nontrivial"))
    return suite


def _lamplighter_namer(n):
    def namer(level, state, images):
        if state == "a":
            return f"α_{level}"
        s = state[1:] if n > 1 else ""
        return f"β_{s},{level}" if s else f"β_{level}"

    return namer


def _lamplighter_elements(aut, n):
    el = {"a": GroupElement.of(aut, "a")}
    for s in range(1, n + 1):
        name = aut.states[s]
        el[name] = GroupElement.of(aut, name)
        el["c" if n == 1 else f"c{s}"] = element_c(aut, s)
    return el


def z_wr_z(seq=DEFAULT_SEQ):
    layouts = LayoutSource(KSpec(1), seq, "Z_wr_Z")
    prog = _reset_program(
        ("Z_wr_Z", seq),
        seq.horizon,
        lambda i: 2 * seq(i),
        lambda i: _cycles1(2 * seq(i), [_odd(1, seq(i))]),
        lambda i: [_cycles1(2 * seq(i), [_odd(1, seq(i)), _odd(2, seq(i))])],
        lambda i: [0],
    )
    alphabet = ChangingAlphabet.parametric(seq, scale=2, display_offset=1)
    aut = LamplighterAutomaton(alphabet, ("a", "b"), prog, name=f"Z_wr_Z[r_i={seq}]", layouts=layouts)
    return Preset(
        "Z_wr_Z",
        aut,
        _lamplighter_elements(aut, 1),
        _lamplighter_suite(aut, 1, 3),
        _lamplighter_namer(1),
        description="lamplighter group Z wr Z, 2 states, X_i = {1..2r_i}",
    )


def zn_wr_z(n=2, seq=DEFAULT_SEQ):
    if n < 1:
        raise BadParameters("n must be >= 1")
    layouts = LayoutSource(KSpec(n), seq, "Zn_wr_Z")

    def alpha(i):
        r = seq(i)
        return _cycles1(2 * n * r, [_odd(2 * s * r + 1, r) for s in range(n)])

    def betas(i):
        r = seq(i)
        a = alpha(i)
        return [perms.compose(a, _cycles1(2 * n * r, [_odd(2 * s * r + 2, r)])) for s in range(n)]

    prog = _reset_program(
        ("Zn_wr_Z", n, seq),
        seq.horizon,
        lambda i: 2 * n * seq(i),
        alpha,
        betas,
        lambda i: [2 * s * seq(i) for s in range(n)],
    )
    alphabet = ChangingAlphabet.parametric(seq, scale=2 * n, display_offset=1)
    states = ("a",) + tuple(f"b{s}" for s in range(1, n + 1))
    aut = LamplighterAutomaton(alphabet, states, prog, name=f"Zn_wr_Z[n={n}, r_i={seq}]", layouts=layouts)
    return Preset(
        "Zn_wr_Z",
        aut,
        _lamplighter_elements(aut, n),
        _lamplighter_suite(aut, n, 2),
        _lamplighter_namer(n),
        description=f"lamplighter group Z^{n} wr Z, X_i = {{1..2nr_i}}",
    )


def cr_wr_z(r=2, seq=DEFAULT_SEQ):
    if r < 2:
        raise BadParameters("r must be >= 2")
    layouts = LayoutSource(KSpec(0, (r,)), seq, "Cr_wr_Z")

    def size(i):
        return seq(i) + r

    prog = _reset_program(
        ("Cr_wr_Z", r, seq),
        seq.horizon,
        size,
        lambda i: _cycles1(size(i), [range(1, seq(i) + 1)]),
        lambda i: [_cycles1(size(i), [range(1, seq(i) + 1), range(seq(i) + 1, seq(i) + r + 1)])],
        lambda i: [0],
    )
    alphabet = ChangingAlphabet.parametric(seq, scale=1, offset=r, display_offset=1)
    aut = LamplighterAutomaton(alphabet, ("a", "b"), prog, name=f"Cr_wr_Z[r={r}, r_i={seq}]", layouts=layouts)
    suite = _lamplighter_suite(aut, 1, 2)
    c = element_c(aut, 1)
    suite.append(Relation(f"c^{r}", c ** r))
    suite.append(Relation(f"c^{r - 1}", c ** (r - 1), "nontrivial"))
    return Preset(
        "Cr_wr_Z",
        aut,
        _lamplighter_elements(aut, 1),
        suite,
        _lamplighter_namer(1),
        description=f"lamplighter group C_{r} wr Z, X_i = {{1..r_i+{r}}}",
    )


def _free2_outputs(seq):
    def outputs(i):
        size = seq(i)
        return _cycles1(size, [[1, 2]]), _cycles1(size, [range(1, size + 1)])

    return outputs


def _check_nondecreasing(seq, upto=64):
    prev = None
    for i in range(upto if seq.horizon is None else min(upto, seq.horizon)):
        if prev is not None and seq(i) < prev:
            raise BadParameters("this family needs a nondecreasing sequence")
        prev = seq(i)


W_TEXT = "a b b a b^-1 b^-1 a b b a b^-1 b^-1"


def ex_relator_text(seq):
    """W = (a b^{r_t-1} a b^{-r_t+1})^2 with t the first level where r_t >= 3."""
    t = 0
    while seq(t) < 3:
        t += 1
    m = seq(t) - 1
    half = ["a"] + ["b"] * m + ["a"] + ["b^-1"] * m
    return " ".join(half * 2), t


def first_growth_level(seq):
    """t' > t: the first level after t with r_t' > r_t."""
    _, t = ex_relator_text(seq)
    tp = t + 1
    while seq(tp) <= seq(t):
        tp += 1
    return tp


def free2(seq=DEFAULT_SEQ):
    _check_nondecreasing(seq)
    outputs = _free2_outputs(seq)

    def tables(i):
        size = seq(i)
        alpha, beta = outputs(i)
        phi_a = (1,) + (0,) * (size - 1)
        phi_b = (0,) + (1,) * (size - 1)
        return LevelTables((phi_a, phi_b), (alpha, beta))

    alphabet = ChangingAlphabet.parametric(seq, display_offset=1)
    prog = FunctionProgram.of(tables, ("free2", seq), seq.horizon)
    aut = TVAutomaton(alphabet, ("a", "b"), prog, name=f"free2[r_i={seq}]")
    a, b = GroupElement.of(aut, "a"), GroupElement.of(aut, "b")
    suite = [
        Relation("a", a, "nontrivial"),
        Relation("b", b, "nontrivial"),
        Relation("a^2", a ** 2, "nontrivial"),
        Relation("[a,b]", commutator(a, b), "nontrivial"),
        Relation("W", GroupElement.parse(aut, ex_relator_text(seq)[0]), "nontrivial"),
    ]
    namer = lambda level, state, images: f"α_{level}" if state == "a" else f"β_{level}"
    return Preset("free2", aut, {"a": a, "b": b}, suite, namer, description="free group of rank 2, reset at letter 1")


def ex1_diagonal(seq=DEFAULT_SEQ):
    _check_nondecreasing(seq)
    outputs = _free2_outputs(seq)
    alphabet = ChangingAlphabet.parametric(seq, display_offset=1)
    aut = diagonal_from_representations(
        alphabet, ("a", "b"), lambda i, s: outputs(i)[0 if s == "a" else 1], name=f"ex1_diagonal[r_i={seq}]"
    )
    w_text, t = ex_relator_text(seq)
    tp = first_growth_level(seq)
    W0 = GroupElement.parse(aut, w_text, 0)
    Wt = GroupElement.parse(aut, w_text, tp)
    suite = [
        Relation("W@shift0", W0, "nontrivial"),
        Relation(f"W@shift{tp}", Wt, "trivial"),
    ]
    namer = lambda level, state, images: f"α_{level}" if state == "a" else f"β_{level}"
    falsify = {
        "relators": [W0.factors],
        "shifts": [0, tp],
        "expect": {"shift_trivial": tp, "shift_nontrivial": 0},
    }
    return Preset(
        "ex1_diagonal",
        aut,
        {"a": GroupElement.of(aut, "a"), "b": GroupElement.of(aut, "b"), "W": W0},
        suite,
        namer,
        falsify,
        description="diagonal automaton with the free-group outputs; not self-similar",
    )


def _generic(kind, free_rank=1, torsion=(), seq=DEFAULT_SEQ, seed=None):
    k = KSpec(free_rank, tuple(torsion))
    aut = (build_A if kind == "A" else build_D)(k, seq, seed)
    el = _lamplighter_elements(aut, k.n)
    if kind == "A":
        suite = _lamplighter_suite(aut, k.n, 2)
    else:
        gens = [GroupElement(aut, 0, ((q, 1),)) for q in range(aut.num_states)]
        suite = []
        for i, g in enumerate(gens):
            for h in gens[i + 1 :]:
                suite.append(Relation(f"[{g.text()},{h.text()}]", commutator(g, h)))
        suite.append(Relation("a", gens[0], "nontrivial"))
    for s in range(k.free_rank + 1, k.n + 1):
        r = k.torsion_orders[s - k.free_rank - 1]
        c = element_c(aut, s)
        suite.append(Relation(f"c{s}^{r}", c ** r))
    return Preset(kind, aut, el, suite, _lamplighter_namer(k.n), description=f"{kind} automaton for K = {k}")


PRESETS = ("grigorchuk", "Z_wr_Z", "Zn_wr_Z", "Cr_wr_Z", "free2", "ex1_diagonal", "A", "D")


def preset(name, seq=None, n=None, r=None, free_rank=None, torsion=None, seed=None):
    seq = DEFAULT_SEQ if seq is None else seq
    if isinstance(seq, str):
        seq = ParamSeq.parse(seq)
    if name == "grigorchuk":
        return grigorchuk()
    if name == "Z_wr_Z":
        return z_wr_z(seq)
    if name == "Zn_wr_Z":
        return zn_wr_z(2 if n is None else n, seq)
    if name == "Cr_wr_Z":
        return cr_wr_z(2 if r is None else r, seq)
    if name == "free2":
        return free2(seq)
    if name == "ex1_diagonal":
        return ex1_diagonal(seq)
    if name in ("A", "D"):
        return _generic(name, 1 if free_rank is None else free_rank, torsion or (), seq, seed)
    raise UnknownPreset(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
