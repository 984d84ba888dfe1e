import pytest

from cogrowth.counting import (
    CountTable,
    EnumerationBudgetExceeded,
    count_table,
    gamma_bruteforce,
    gamma_dp,
    walk_bruteforce,
    walk_counts,
)
from cogrowth.freewords import enumerate_codes
from cogrowth.marked_groups import BallBudgetExceeded, load_preset

from conftest import ORACLE_PRESETS


def enumerate_gamma(G, n):
    # fully independent of the DFS in gamma_bruteforce
    return sum(G.is_identity(G.evaluate(c)) for c in enumerate_codes(G.rank, n))


@pytest.mark.parametrize("name", ORACLE_PRESETS + ("free2",))
def test_dp_variants_agree_with_bruteforce(name):
    G = load_preset(name)
    split = gamma_dp(G, 10)
    assert split == gamma_dp(G, 10, split=False)
    assert split == [gamma_bruteforce(G, n) for n in range(11)]
    assert walk_counts(G, 7) == [walk_bruteforce(G, n) for n in range(8)]
    assert walk_counts(G, 9) == walk_counts(G, 9, split=False)


@pytest.mark.parametrize("name", ORACLE_PRESETS)
def test_bruteforce_against_plain_enumeration(name):
    G = load_preset(name)
    for n in range(7):
        assert gamma_bruteforce(G, n) == enumerate_gamma(G, n)


def test_known_values():
    # hand-checkable: Z^2 kernel words of length 4 are the 8 commutator rotations
    assert gamma_dp(load_preset("zsquared"), 6) == [1, 0, 0, 0, 8, 0, 40]
    assert gamma_dp(load_preset("trivial"), 3) == [1, 4, 12, 36]
    assert gamma_dp(load_preset("z2xz2"), 4) == [1, 0, 4, 0, 60]
    assert gamma_dp(load_preset("s3"), 4) == [1, 0, 4, 0, 28]
    assert gamma_dp(load_preset("sl2z"), 8)[6] == 12
    assert gamma_dp(load_preset("free2"), 12) == [1] + [0] * 12
    assert walk_counts(load_preset("zsquared"), 4) == [1, 0, 4, 0, 36]


def test_trivial_group_is_all_words():
    G = load_preset("trivial")
    t = count_table(G, 12)
    assert t.walk == [4 ** n for n in range(13)]
    assert t.gamma == [1] + [4 * 3 ** (n - 1) for n in range(1, 13)]


def test_budgets():
    G = load_preset("sl2z")
    with pytest.raises(EnumerationBudgetExceeded):
        gamma_bruteforce(G, 12, budget=1000)
    with pytest.raises(BallBudgetExceeded) as info:
        count_table(G, 40, budget=500)
    part = info.value.partial
    assert isinstance(part, CountTable) and part.truncated
    full = count_table(G, part.n_max)
    assert part.gamma == full.gamma and part.walk == full.walk


def test_table_invariants_and_serialization():
    t = count_table(load_preset("s3"), 14)
    assert t.check_invariants() == []
    back = CountTable.from_json(t.to_json())
    assert back.gamma == t.gamma and back.walk == t.walk and back.q == 3
    assert t.to_json() == back.to_json()
    bad = CountTable("x", 2, [1, 5], [1, 0])
    assert any("gamma_1" in p for p in bad.check_invariants())
    with pytest.raises(ValueError):
        CountTable.from_dict({**t.to_dict(), "gamma": [1, 0]})
    with pytest.raises(ValueError):
        CountTable.from_dict({"format": "other"})


def test_walk_parity_and_big_integers():
    t = count_table(load_preset("sl2z"), 20)
    assert all(v == 0 for v in t.gamma[1::2])
    assert all(v == 0 for v in t.walk[1::2])
    assert t.walk[20] > 2 ** 32  # past 32-bit range
