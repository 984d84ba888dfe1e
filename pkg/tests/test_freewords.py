import itertools
import random

import pytest
from hypothesis import given, strategies as st

from cogrowth.freewords import (
    Letter,
    ReducedWord,
    count_reduced,
    enumerate_codes,
    enumerate_reduced,
    mirror_inverse,
    parse_word,
    random_codes,
    raw_codes,
    reduce,
)

words = st.lists(st.integers(0, 3), max_size=30)


def naive_reduce(codes):
    # repeated scanning for adjacent cancellations, no stack
    codes = list(codes)
    changed = True
    while changed:
        changed = False
        for i in range(len(codes) - 1):
            if codes[i] ^ 1 == codes[i + 1]:
                del codes[i:i + 2]
                changed = True
                break
    return tuple(codes)


def test_letter_codes_roundtrip():
    for code in range(8):
        L = Letter.from_code(code)
        assert L.code == code
        assert L.inverse().inverse() == L
        assert L.inverse().code == code ^ 1
    with pytest.raises(ValueError):
        Letter(0, 1)


def test_parse_and_print():
    w = parse_word("abAB")
    assert str(w) == "abAB"
    assert len(w) == 4
    assert parse_word("aA") == parse_word("1")
    assert str(parse_word("1")) == "1"
    assert parse_word("a b B").codes == (0,)
    assert raw_codes("aA") == (0, 1)


def test_reduced_word_rejects_unreduced():
    with pytest.raises(ValueError):
        ReducedWord((0, 1))


@given(words)
def test_reduce_matches_naive(codes):
    assert reduce([Letter.from_code(c) for c in codes]).codes == naive_reduce(codes)


@given(words, words)
def test_group_axioms(a, b):
    x, y = ReducedWord(naive_reduce(a)), ReducedWord(naive_reduce(b))
    assert (x * x.inverse()).is_identity()
    assert (x * y).inverse() == y.inverse() * x.inverse()


@pytest.mark.parametrize("r", [2, 3])
def test_enumeration_counts_and_order(r):
    for n in range(6):
        listed = list(enumerate_codes(r, n))
        assert len(listed) == count_reduced(r, n)
        assert listed == sorted(listed)
        brute = [c for c in itertools.product(range(2 * r), repeat=n) if naive_reduce(c) == c]
        assert listed == brute


def test_count_formula_and_rank_check():
    assert count_reduced(2, 0) == 1
    assert count_reduced(2, 3) == 4 * 9
    with pytest.raises(ValueError):
        count_reduced(1, 3)
    assert all(w.length == 2 for w in enumerate_reduced(2, 2))


def test_random_and_mirror():
    rng = random.Random(7)
    for _ in range(50):
        c = random_codes(3, 12, rng)
        assert len(c) == 12 and all(0 <= v < 6 for v in c)
        w = ReducedWord(naive_reduce(c))
        assert ReducedWord(mirror_inverse(w.codes)) == w.inverse()
        assert naive_reduce(c + mirror_inverse(c)) == ()
