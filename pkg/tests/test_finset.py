import itertools

import pytest
from hypothesis import given, strategies as st

from oracles import all_ultrafilters, bell, coherent_selections, set_partitions
from finlim.errors import BoundExceeded, DiagramError
from finlim.finset import (FinUltrafilter, Partition, all_partitions, coarsening_map,
                           coherent_choices, equalizer, galvin_horn_check, is_coarser,
                           partition_diagram, partition_limit_check, partition_of_map,
                           pushforward_ultrafilter, ultrafilter_from_family,
                           ultrafilter_monad_check)
from finlim.sets import SetMap, SetObj, all_maps

S = SetObj
ID3 = SetMap.identity(S(3))


def test_equalizer_examples():
    obj, incl = equalizer(ID3, ID3)
    assert obj.size == 3 and incl.table == (0, 1, 2)
    assert equalizer(ID3, SetMap(S(3), S(3), (1, 2, 0)))[0].size == 0
    obj, incl = equalizer(ID3, SetMap(S(3), S(3), (0, 1, 0)))
    assert incl.table == (0, 1)
    with pytest.raises(DiagramError):
        equalizer(ID3, SetMap.identity(S(2)))


@pytest.mark.parametrize("n", range(0, 7))
def test_partition_counts_are_bell_numbers(n):
    parts = all_partitions(n)
    assert len(parts) == (0 if n == 0 else bell(n))
    assert len(set(parts)) == len(parts)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_partitions_match_label_enumeration(n):
    ours = {tuple(p.blocks) for p in all_partitions(n)}
    theirs = {tuple(tuple(sorted(b)) for b in p) for p in set_partitions(n)}
    assert ours == theirs


def test_partition_bound():
    with pytest.raises(BoundExceeded):
        all_partitions(7)


def test_partition_is_canonical():
    p = Partition(4, ((3, 2), (1, 0)))
    assert p.blocks == ((0, 1), (2, 3))
    with pytest.raises(DiagramError):
        Partition(3, ((0, 1),))
    with pytest.raises(DiagramError):
        Partition(2, ((0, 1), ()))


def test_coarseness_examples():
    parts = all_partitions(3)
    top = Partition(3, ((0, 1, 2),))
    bottom = Partition(3, ((0,), (1,), (2,)))
    assert all(is_coarser(top, p) and is_coarser(p, bottom) for p in parts)
    assert not is_coarser(Partition(3, ((0, 2), (1,))), Partition(3, ((0, 1), (2,))))


def test_partition_of_map_examples():
    assert partition_of_map(SetMap.identity(S(3))).blocks == ((0,), (1,), (2,))
    assert partition_of_map(SetMap.constant(S(3), S(2), 1)).blocks == ((0, 1, 2),)
    assert str(partition_of_map(SetMap(S(4), S(2), (0, 0, 1, 1)))) == "01|23"


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_partition_of_quotient_map_roundtrips(n):
    for p in all_partitions(n):
        assert partition_of_map(p.quotient_map()) == p


def factors_through(f2: SetMap, f1: SetMap) -> bool:
    """Brute force: is there u with u ∘ f1 = f2?"""
    return any(u @ f1 == f2 for u in all_maps(f1.cod, f2.cod))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_coarser_iff_quotient_map_factors(n):
    parts = all_partitions(n)
    for q1, q2 in itertools.product(parts, repeat=2):
        assert is_coarser(q2, q1) == factors_through(q2.quotient_map(), q1.quotient_map())
        if is_coarser(q2, q1):
            assert coarsening_map(q1, q2) @ q1.quotient_map() == q2.quotient_map()


@given(st.lists(st.integers(0, 3), min_size=1, max_size=5),
       st.lists(st.integers(0, 3), min_size=1, max_size=5))
def test_map_factorization_matches_partition_order(t1, t2):
    n = min(len(t1), len(t2))
    f1 = SetMap(S(n), S(4), tuple(t1[:n]))
    f2 = SetMap(S(n), S(4), tuple(t2[:n]))
    assert factors_through(f2, f1) == is_coarser(partition_of_map(f2), partition_of_map(f1))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_coherent_choice_count_matches_brute_force(n):
    choices = coherent_choices(n)
    assert len(choices) == coherent_selections(n) == n
    assert all(c.is_coherent() for c in choices)


def test_coherent_choices_on_five_points():
    assert len(coherent_choices(5)) == 5


def test_empty_ground_set_convention():
    assert coherent_choices(0) == []
    rep = galvin_horn_check(0)
    assert rep.passed and rep.metrics["coherent_choices"] == 0


@pytest.mark.parametrize("n", [1, 2, 3])
def test_all_ultrafilters_are_principal(n):
    found = all_ultrafilters(n)
    assert len(found) == n
    points = sorted(ultrafilter_from_family(n, fam).principal_at for fam in found)
    assert points == list(range(n))


def test_pushforward_examples():
    u = FinUltrafilter(S(3), 1)
    assert pushforward_ultrafilter(ID3, u) == u
    assert pushforward_ultrafilter(SetMap(S(3), S(3), (2, 2, 0)), u).principal_at == 2


def test_pushforward_is_functorial_exhaustively():
    sizes = range(1, 4)
    for a, b, c in itertools.product(sizes, repeat=3):
        for f in all_maps(S(a), S(b)):
            for g in all_maps(S(b), S(c)):
                for p in range(a):
                    u = FinUltrafilter(S(a), p)
                    assert (pushforward_ultrafilter(g @ f, u)
                            == pushforward_ultrafilter(g, pushforward_ultrafilter(f, u)))


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_coherent_choices_match_ultrafilters(n):
    rep = galvin_horn_check(n)
    assert rep.passed, rep.reason
    assert rep.metrics["coherent_choices"] == n


def test_partition_diagram_shape():
    d, _ = partition_diagram(3)
    assert len(d.nodes) == 5
    # strict coarsenings among 5 partitions of 3 points: bottom < 3 middles < top, plus bottom < top
    assert len(d.edges) == 7


@pytest.mark.parametrize("n,size", [(1, 1), (2, 2), (3, 3), (4, 4)])
def test_partition_limit(n, size):
    rep = partition_limit_check(n)
    assert rep.passed and rep.metrics["carrier_size"] == size


def test_partition_limit_bound():
    with pytest.raises(BoundExceeded):
        partition_limit_check(0)
    with pytest.raises(BoundExceeded):
        partition_limit_check(6)


def test_ultrafilter_monad_small():
    assert ultrafilter_monad_check(max_size=3).passed
