import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gapsets import (Gapset, GapsetError, InvalidGapsetError, InvalidKunzTupleError,
                     UndefinedInvariantError, check_kunz_system, enumerate_kunz,
                     gamma_prime_levels, gapset_from_kunz, gapset_witness, is_gapset,
                     kunz_violation, parse_gaps, parse_kunz)
from gapsets.core import format_kunz

EX1 = (1, 2, 4, 5, 8, 11)
EX2 = (1, 2, 3, 4, 6, 7, 8, 12, 13)


def closure_oracle(s):
    s = set(s)
    return all(x in s or z - x in s for z in s for x in range(1, z))


def first_nongap_not_multiple(s, m):
    x = 1
    while x in s or x % m == 0:
        x += 1
    return x


@pytest.mark.parametrize("candidate, expected", [
    (EX1, True), ((), True), ((2,), False), ((1, 3, 5), True), ((1, 2, 4, 5, 8), True),
    ((1, 3), True), ((1, 4), False),
])
def test_is_gapset(candidate, expected):
    assert is_gapset(candidate) is expected
    assert closure_oracle(candidate) is expected


@given(st.sets(st.integers(1, 14), max_size=9))
def test_is_gapset_matches_closure_oracle(s):
    assert is_gapset(s) == closure_oracle(s)
    w = gapset_witness(s)
    if w is not None:
        z, x, y = w
        assert z in s and x not in s and y not in s and x + y == z


def test_non_gapset_rejected_with_witness():
    with pytest.raises(InvalidGapsetError) as info:
        Gapset.of([2])
    assert (info.value.z, info.value.x, info.value.y) == (2, 1, 1)
    with pytest.raises(GapsetError):
        Gapset.of([0, 1])


@pytest.mark.parametrize("gaps, m, g, c, q", [
    (EX1, 3, 6, 12, 4),
    ((), 1, 0, 0, 0),
    (EX2, 5, 9, 14, 3),
    ((1, 3, 5), 2, 3, 6, 3),
])
def test_basic_invariants(gaps, m, g, c, q):
    G = Gapset.of(gaps)
    assert (G.multiplicity, G.genus, G.conductor, G.depth) == (m, g, c, q)


@pytest.mark.parametrize("gaps, r, lam", [(EX1, 7, 2), ((1,), 3, 1), (EX2, 9, 1)])
def test_ratio_and_level(gaps, r, lam):
    G = Gapset.of(gaps)
    assert G.ratio == r == first_nongap_not_multiple(set(gaps), G.multiplicity)
    assert G.level == lam == r // G.multiplicity


def test_ratio_undefined_for_multiplicity_one():
    with pytest.raises(UndefinedInvariantError):
        Gapset().ratio
    with pytest.raises(UndefinedInvariantError):
        Gapset().level


@pytest.mark.parametrize("gaps, apery", [(EX1, (0, 7, 14)), ((), (0,)), ((1,), (0, 3))])
def test_apery_set(gaps, apery):
    assert Gapset.of(gaps).apery_set() == apery


@pytest.mark.parametrize("gaps, kunz", [(EX1, (2, 4)), (EX2, (2, 3, 3, 1)), ((), ())])
def test_kunz_from_gapset(gaps, kunz):
    assert Gapset.of(gaps).kunz() == kunz
    assert gapset_from_kunz(kunz).gaps == gaps


def test_kunz_single_coordinate_is_odd_numbers():
    for g in range(1, 15):
        G = gapset_from_kunz((g,))
        assert G.gaps == tuple(range(1, 2 * g, 2))
        assert closure_oracle(G.gaps)


@pytest.mark.parametrize("coords, i, j, text", [
    ((1, 3, 3, 2), 1, 1, "k_1 + k_1 = 2 < 3 = k_2"),
    ((4, 2, 1, 1), 3, 3, "k_3 + k_3 + 1 = 3 < 4 = k_1"),
    ((4, 2, 1, 2), 3, 3, "k_3 + k_3 + 1 = 3 < 4 = k_1"),
    ((4, 1), 2, 2, "k_2 + k_2 + 1 = 3 < 4 = k_1"),
])
def test_first_kunz_violation(coords, i, j, text):
    v = kunz_violation(coords)
    assert (v.i, v.j) == (i, j)
    assert v.describe() == text
    assert not check_kunz_system(coords)
    with pytest.raises(InvalidKunzTupleError) as info:
        gapset_from_kunz(coords)
    assert info.value.violation == v


def test_valid_kunz_tuples():
    assert check_kunz_system((2, 3, 3, 1))
    assert check_kunz_system(())
    assert check_kunz_system((4, 2, 1))
    with pytest.raises(GapsetError):
        check_kunz_system((2, 0))


@pytest.mark.parametrize("gaps, parts", [
    (EX1, [{1, 2}, {4, 5}, {8}, {11}]),
    ((1, 2, 3), [{1, 2, 3}]),
    ((1, 3, 5), [{1}, {3}, {5}]),
    ((), []),
])
def test_canonical_partition(gaps, parts):
    G = Gapset.of(gaps)
    m = G.multiplicity
    expected = [{z for z in gaps if a * m + 1 <= z <= (a + 1) * m - 1} for a in range(G.depth)]
    assert [set(p) for p in G.canonical_partition()] == parts == expected


def test_gamma_prime_levels():
    assert list(gamma_prime_levels(Gapset.from_kunz((2, 4)))) == [2]
    assert list(gamma_prime_levels(Gapset.from_kunz((4, 2, 1)))) == []
    assert gamma_prime_levels(Gapset()) is None
    for g in range(1, 21):
        assert list(gamma_prime_levels(Gapset.from_kunz((g,)))) == list(range(max(1, g // 2), g + 1))


def test_parsing_round_trip():
    assert parse_kunz("(2,4)") == (2, 4)
    assert parse_kunz("()") == ()
    assert format_kunz((2, 3, 3, 1)) == "(2,3,3,1)"
    assert parse_gaps("1,2,4,5,8,11") == EX1
    assert str(Gapset.of(EX1)) == "1,2,4,5,8,11"
    with pytest.raises(GapsetError):
        parse_kunz("(2,x)")
    with pytest.raises(GapsetError):
        parse_gaps("1;2")


# --- properties over every gapset of small genus --------------------------------

@pytest.mark.parametrize("g", range(0, 13))
def test_invariant_consistency_exhaustive(g, naive_gapsets):
    for G in naive_gapsets(g):
        k = G.kunz()
        m = G.multiplicity
        assert gapset_from_kunz(k) == G
        assert check_kunz_system(k)
        assert sum(k) == G.genus
        assert G.depth == (max(k) if k else 0)
        if m >= 2:
            assert G.level == min(k)
        w = G.apery_set()
        assert w[0] == 0
        assert all(w[i] == m * k[i - 1] + i for i in range(1, m))
        parts = G.canonical_partition()
        assert len(parts) == G.depth
        assert frozenset().union(*parts) == frozenset(G.gaps)
        assert sum(len(p) for p in parts) == G.genus
        if parts:
            assert parts[0] == frozenset(range(1, m))
        for a in range(len(parts) - 1):
            assert all(z - m in parts[a] for z in parts[a + 1])


def test_every_valid_tuple_reconstructs_a_gapset():
    # all positive tuples with sum <= 12, filtered by the system
    def tuples(total, prefix=()):
        yield prefix
        for v in range(1, total + 1):
            yield from tuples(total - v, prefix + (v,))

    valid = 0
    for t in tuples(12):
        if check_kunz_system(t):
            valid += 1
            G = gapset_from_kunz(t)
            assert closure_oracle(G.gaps)
            assert G.kunz() == t
    assert valid == sum(sum(1 for _ in enumerate_kunz(g)) for g in range(13))


@settings(max_examples=60)
@given(st.lists(st.integers(1, 6), max_size=7))
def test_kunz_system_iff_gapset(coords):
    m = len(coords) + 1
    gaps = {i + a * m for i, k in enumerate(coords, 1) for a in range(k)}
    assert check_kunz_system(coords) == closure_oracle(gaps)
