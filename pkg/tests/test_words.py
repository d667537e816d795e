import pytest
from hypothesis import given, strategies as st

from qshuffle.words import (EMPTY, Combo, Index, MixedWord, ParseError, all_words,
                            canonicalize, compositions, cut_head, cut_tail, format_combo,
                            format_index, format_word, letters, parse_combo, parse_index,
                            parse_word, xword, yword)

index_st = st.lists(st.integers(1, 9), max_size=5).map(tuple)
letter_st = st.lists(st.tuples(st.sampled_from("xy"), st.integers(1, 9)), max_size=6)
word_st = st.builds(MixedWord, index_st, index_st)


def combo_st(p):
    return st.dictionaries(word_st, st.integers(0, p - 1), max_size=5).map(lambda d: Combo(p, d))


def test_index_weight_depth():
    a = Index((3, 1, 2))
    assert a.wt == 6 and a.dep == 3
    assert Index().wt == 0 and Index().dep == 0
    with pytest.raises(ValueError):
        Index((1, 0))


def test_cuts():
    a = (3, 1, 2)
    assert cut_tail(a, 1) == (1, 2)
    assert cut_tail(a, 3) == ()
    assert cut_tail((), 5) == ()
    assert cut_head(a, 2) == (3, 1)
    assert cut_head(a, 0) == ()
    with pytest.raises(ValueError):
        cut_tail(a, 4)
    with pytest.raises(ValueError):
        cut_head(a, 4)


@given(index_st)
def test_cut_splitting(a):
    for i in range(len(a) + 1):
        assert cut_head(a, i) + cut_tail(a, i) == a
        assert sum(cut_head(a, i)) + sum(cut_tail(a, i)) == sum(a)


def test_canonicalize_examples():
    assert canonicalize([("x", 1), ("y", 2), ("x", 3)]) == MixedWord((2,), (1, 3))
    assert canonicalize([("y", 1), ("y", 2)]) == MixedWord((1, 2), ())
    assert canonicalize([]) == EMPTY


@given(letter_st)
def test_canonicalize_idempotent_and_preserving(ls):
    w = canonicalize(ls)
    assert canonicalize(letters(w)) == w
    assert sorted(letters(w)) == sorted(ls)
    assert w.weight == sum(k for _, k in ls)


def test_combo_examples():
    x1 = Combo.word(2, xword(1))
    assert (x1 + x1).is_zero()
    c = Combo(3, {xword(2): 1, xword(1, 1): 1})
    assert c.graded_component(2) == c
    assert c.graded_component(1).is_zero()
    assert c.scale(0).is_zero()
    with pytest.raises(ValueError):
        x1 + Combo.word(3, xword(1))


@pytest.mark.parametrize("p", [2, 3, 5])
@given(data=st.data())
def test_combo_vector_space(p, data):
    a, b, c = (data.draw(combo_st(p)) for _ in range(3))
    zero = Combo(p)
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert a + zero == a
    assert (a - a) == zero
    k = data.draw(st.integers(0, p - 1))
    assert (a + b).scale(k) == a.scale(k) + b.scale(k)
    assert all(v % p for v in a.terms.values())


def test_compositions_and_word_counts():
    for n in range(8):
        comps = list(compositions(n))
        assert len(comps) == (2 ** (n - 1) if n else 1)
        assert all(sum(c) == n for c in comps)
        # canonical words: a y-composition of k next to an x-composition of n - k
        ncomp = lambda m: 2 ** (m - 1) if m else 1
        assert len(all_words(n)) == sum(ncomp(k) * ncomp(n - k) for k in range(n + 1))
        assert len(set(all_words(n))) == len(all_words(n))
        assert len(all_words(n, pure_x=True)) == len(comps)


def test_word_text_syntax():
    assert parse_word("x3 x1 y2") == MixedWord((2,), (3, 1))
    assert parse_word("X1 Y2") == MixedWord((2,), (1,))
    assert parse_word("1") == EMPTY and parse_word("") == EMPTY
    assert format_word(MixedWord((2,), (3, 1))) == "y2 x3 x1"
    assert format_word(EMPTY) == "1"
    assert parse_index("(3,1,2)") == (3, 1, 2)
    assert parse_index("()") == ()
    assert format_index((3, 1, 2)) == "(3,1,2)"


def test_parse_errors_carry_positions():
    with pytest.raises(ParseError) as exc:
        parse_word("x1 z2")
    assert exc.value.pos == 3
    with pytest.raises(ParseError) as exc:
        parse_word("x0")
    assert exc.value.pos == 0
    with pytest.raises(ParseError) as exc:
        parse_index("(1,a)")
    assert exc.value.pos == 3
    with pytest.raises(ParseError):
        parse_index("1,2")
    with pytest.raises(ParseError) as exc:
        parse_combo("x1 + 2*x1 q", 3)
    assert exc.value.pos == 10


@given(word_st)
def test_word_round_trip(w):
    assert parse_word(format_word(w)) == w


@given(index_st)
def test_index_round_trip(a):
    assert parse_index(format_index(a)) == a


@pytest.mark.parametrize("p", [2, 3, 7])
@given(data=st.data())
def test_combo_round_trip(p, data):
    c = data.draw(combo_st(p))
    assert parse_combo(format_combo(c), p) == c


def test_combo_printing_is_canonical():
    c = Combo(3, {xword(1, 1): 2, xword(2): 1, yword(1): 1})
    assert format_combo(c) == "y1 + x2 + 2*x1 x1"
    assert format_combo(Combo(3)) == "0"
