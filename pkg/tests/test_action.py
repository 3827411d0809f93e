import pytest
from hypothesis import given, settings, strategies as st

from tvgroups.action import (
    GroupElement,
    apply,
    identity_element,
    root_permutation,
    section,
    simplify,
    simplify_factors,
)
from tvgroups.alphabet import TreeWord, enumerate_words
from tvgroups.errors import LetterOutOfRange, LevelMismatch, NotInvertible
from tvgroups.automaton import mealy
from tvgroups import perms
from tvgroups.presets import preset

import oracles

MODES = ("fused", "naive", "product")


@pytest.fixture(scope="module")
def grig():
    return preset("grigorchuk").automaton


@pytest.fixture(scope="module")
def zz():
    return preset("Z_wr_Z").automaton


def test_apply_examples(grig, zz):
    for mode in MODES:
        assert apply(GroupElement.of(grig, "b"), TreeWord(0, (0, 0, 1)), mode) == TreeWord(0, (0, 1, 1))
        assert apply(GroupElement.of(grig, "a", "b"), TreeWord(0, ()), mode) == TreeWord(0, ())
        c = GroupElement.parse(zz, "b a^-1")
        assert apply(c, TreeWord.parse("0: 2 2", 1), mode).format(1) == "0: 4 4"


def test_apply_level_and_letter_checks(zz):
    b = GroupElement.of(zz, "b")
    with pytest.raises(LevelMismatch):
        apply(b, TreeWord(1, (0,)))
    with pytest.raises(LetterOutOfRange):
        apply(b, TreeWord(0, (4,)))


def test_inverse_factor_needs_invertibility():
    bad = mealy(2, ("q",), {"q": ["q", "q"]}, {"q": (0, 0)})
    e = GroupElement(bad, 0, ((0, -1),))
    for mode in MODES:
        with pytest.raises(NotInvertible):
            apply(e, TreeWord(0, (0,)), mode)


def test_root_permutation_examples(grig, zz):
    assert root_permutation(identity_element(zz)).images == perms.identity(4)
    assert root_permutation(GroupElement.of(grig, "a")).images == (1, 0)
    assert perms.to_cycle_text(root_permutation(GroupElement.of(zz, "b")).images, 1) == "(1 3)(2 4)"


def test_section_examples(grig, zz):
    assert section(identity_element(zz), 2).factors == ()
    sec = section(GroupElement.of(grig, "b"), 1)
    assert sec.factors == ((grig.index("c"), 1),) and sec.base_level == 1
    c = GroupElement.parse(zz, "b a^-1")
    sec = section(c, 0)
    assert sec.factors == ((zz.index("a"), 1), (zz.index("a"), -1))
    assert simplify(sec).factors == ()


def test_simplify_examples(zz):
    a, b = zz.index("a"), zz.index("b")
    assert simplify_factors(((a, 1), (a, -1))) == ()
    assert simplify_factors(((b, 1), (a, -1), (a, 1), (b, 1))) == ((b, 1), (b, 1))
    assert simplify_factors(((a, 1), (b, 1), (b, -1), (a, -1))) == ()


def test_parse_and_text(zz):
    e = GroupElement.parse(zz, "b a^-1 a^-1")
    assert e.text() == "b a^-1 a^-1"
    assert (e * e.inverse()).factors == e.factors + tuple((q, -s) for q, s in reversed(e.factors))
    assert (e ** -1).factors == e.inverse().factors
    assert (e ** 0).factors == ()


def _factor_lists(nstates, max_len=4):
    return st.lists(st.tuples(st.integers(0, nstates - 1), st.sampled_from((1, -1))), max_size=max_len)


@settings(max_examples=40, deadline=None)
@given(_factor_lists(2), _factor_lists(2))
def test_right_action_law(f, g):
    zz = preset("Z_wr_Z").automaton
    ef, eg = GroupElement(zz, 0, tuple(f)), GroupElement(zz, 0, tuple(g))
    for w in enumerate_words(zz.alphabet, 0, 3):
        assert apply(ef * eg, w) == apply(eg, apply(ef, w))
        assert apply(ef * eg, w).letters == oracles.act(zz, 0, tuple(f) + tuple(g), w.letters)


@settings(max_examples=40, deadline=None)
@given(_factor_lists(5, 6), st.integers(0, 1))
def test_section_law(f, x):
    grig = preset("grigorchuk").automaton
    e = GroupElement(grig, 0, tuple(f))
    root = root_permutation(e).images
    sec = section(e, x)
    for w in enumerate_words(grig.alphabet, 1, 4):
        lhs = apply(e, TreeWord(0, (x,) + w.letters))
        assert lhs.letters == (root[x],) + apply(sec, w).letters


@settings(max_examples=30, deadline=None)
@given(_factor_lists(3, 5))
def test_endomorphism_and_injectivity(f):
    aut = preset("Zn_wr_Z", n=2).automaton
    e = GroupElement(aut, 0, tuple(f))
    images = {}
    for w in enumerate_words(aut.alphabet, 0, 2):
        img = apply(e, w)
        assert len(img) == len(w)
        assert apply(e, w.prefix(1)) == img.prefix(1)
        images[img] = w
    assert len(images) == 8 * 12


@settings(max_examples=40, deadline=None)
@given(_factor_lists(2, 6))
def test_evaluators_agree(f):
    zz = preset("Z_wr_Z").automaton
    e = GroupElement(zz, 1, tuple(f))
    for w in enumerate_words(zz.alphabet, 1, 3):
        assert apply(e, w, "fused") == apply(e, w, "naive") == apply(e, w, "product")


def test_element_at_shifted_level(zz):
    b = GroupElement.of(zz, "b", level=2)
    # level 2: r=4, beta = (1 3 5 7)(2 4 6 8)
    assert perms.to_cycle_text(root_permutation(b).images, 1) == "(1 3 5 7)(2 4 6 8)"
