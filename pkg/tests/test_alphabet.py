import pytest
from hypothesis import given, strategies as st

from tvgroups import perms
from tvgroups.alphabet import (
    ChangingAlphabet,
    ParamSeq,
    TreeWord,
    count_words,
    enumerate_words,
    shift_alphabet,
    size_at,
)
from tvgroups.errors import BadPermutation, HorizonExceeded, LetterOutOfRange, LevelMismatch
from tvgroups.presets import preset


def test_size_at_examples():
    assert size_at(preset("Z_wr_Z").automaton.alphabet, 0) == 4
    assert size_at(ChangingAlphabet.constant(2), 123) == 2
    assert size_at(preset("Cr_wr_Z", r=3).automaton.alphabet, 1) == 6


def test_explicit_horizon_rejects_beyond():
    alpha = ChangingAlphabet.explicit([2, 3, 4])
    assert alpha.size_at(2) == 4
    with pytest.raises(HorizonExceeded):
        alpha.size_at(3)


def test_shift_examples():
    zz = preset("Z_wr_Z").automaton.alphabet
    assert shift_alphabet(zz, 0).sizes(10) == zz.sizes(10)
    assert shift_alphabet(zz, 1).size_at(0) == 6
    assert shift_alphabet(ChangingAlphabet.constant(5), 7) == ChangingAlphabet.constant(5)


def test_shift_explicit_moves_horizon():
    alpha = ChangingAlphabet.explicit([2, 3, 4, 5])
    sh = alpha.shift(3)
    assert sh.size_at(0) == 5
    assert sh.horizon == 1
    with pytest.raises(HorizonExceeded):
        sh.size_at(1)


@given(st.integers(0, 3), st.integers(2, 6), st.integers(1, 3), st.integers(0, 4), st.integers(0, 20), st.integers(0, 20))
def test_shift_law(slope, intercept, scale, offset, k, i):
    alpha = ChangingAlphabet.parametric(ParamSeq(slope, intercept), scale, offset)
    assert alpha.shift(k).size_at(i) == alpha.size_at(k + i)
    assert alpha.shift(k).shift(i).size_at(0) == alpha.size_at(k + i)


def test_enumerate_examples():
    words = [w.letters for w in enumerate_words(ChangingAlphabet.constant(2), 0, 2)]
    assert words == [(0, 0), (0, 1), (1, 0), (1, 1)]
    zz = preset("Z_wr_Z").automaton.alphabet
    assert len(list(enumerate_words(zz, 0, 2))) == 24
    assert [w.letters for w in enumerate_words(zz, 3, 0)] == [()]


@given(st.integers(0, 3), st.integers(0, 3))
def test_enumerate_count_is_product(level, depth):
    alpha = ChangingAlphabet.parametric(ParamSeq(1, 2))
    words = list(enumerate_words(alpha, level, depth))
    expected = 1
    for j in range(depth):
        expected *= alpha.size_at(level + j)
    assert len(words) == expected == count_words(alpha, level, depth)
    assert words == sorted(words, key=lambda w: w.letters)
    assert all(w.start_level == level for w in words)


def test_enumerate_beyond_horizon():
    with pytest.raises(HorizonExceeded):
        list(enumerate_words(ChangingAlphabet.explicit([2, 2]), 0, 3))


def test_paramseq_parse():
    assert ParamSeq.parse("i+2") == ParamSeq(1, 2)
    assert ParamSeq.parse("2*i+3") == ParamSeq(2, 3)
    assert ParamSeq.parse("5")(10) == 5
    fixed = ParamSeq.parse("list:2,3,4")
    assert [fixed(i) for i in range(3)] == [2, 3, 4]
    assert fixed.horizon == 3
    open_ended = ParamSeq.parse("list:2,3,4,...")
    assert [open_ended(i) for i in range(6)] == [2, 3, 4, 5, 6, 7]
    assert open_ended.horizon is None


def test_paramseq_rejects_small_values():
    with pytest.raises(Exception):
        ParamSeq(1, 1)
    with pytest.raises(Exception):
        ParamSeq.parse("list:2,1")


@st.composite
def words(draw):
    level = draw(st.integers(0, 5))
    alpha = ChangingAlphabet.parametric(ParamSeq(1, 2))
    n = draw(st.integers(0, 5))
    letters = tuple(draw(st.integers(0, alpha.size_at(level + j) - 1)) for j in range(n))
    return TreeWord(level, letters)


@given(words(), st.integers(0, 1))
def test_word_roundtrip(w, offset):
    assert TreeWord.parse(w.format(offset), offset) == w


def test_word_format():
    assert TreeWord(0, (0, 2, 1)).format() == "0: 0 2 1"
    assert TreeWord.parse("0: 1 2", 1) == TreeWord(0, (0, 1))
    assert TreeWord.parse("4:", 0) == TreeWord(4, ())


def test_concat_levels():
    w = TreeWord(0, (1, 2))
    v = TreeWord(2, (0,))
    assert w.concat(v) == TreeWord(0, (1, 2, 0))
    with pytest.raises(LevelMismatch):
        w.concat(TreeWord(1, (0,)))


def test_validate_letters():
    alpha = ChangingAlphabet.constant(2)
    TreeWord(0, (0, 1)).validate(alpha)
    with pytest.raises(LetterOutOfRange):
        TreeWord(0, (0, 2)).validate(alpha)


def test_cycle_text_roundtrip():
    p = perms.from_cycles(6, [(0, 2, 4), (1, 3)])
    text = perms.to_cycle_text(p, 1)
    assert text == "(1 3 5)(2 4)"
    assert perms.parse_cycle_text(text, 6, 1) == p
    assert perms.to_cycle_text(perms.identity(3)) == "id"
    assert perms.order(p) == 6


def test_bad_cycle_text():
    with pytest.raises(BadPermutation):
        perms.parse_cycle_text("(1 1)", 2, 1)
    with pytest.raises(BadPermutation):
        perms.parse_cycle_text("(1 5)", 2, 1)


@given(st.permutations(list(range(6))), st.permutations(list(range(6))))
def test_compose_is_first_then_second(p, q):
    p, q = tuple(p), tuple(q)
    pq = perms.compose(p, q)
    assert all(pq[x] == q[p[x]] for x in range(6))
    assert perms.compose(p, perms.inverse(p)) == perms.identity(6)
    assert perms.power(p, perms.order(p)) == perms.identity(6)
