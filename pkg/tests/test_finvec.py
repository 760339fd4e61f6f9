import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from finlim.errors import BoundExceeded
from finlim.finvec import (DD, ID, DualChoice, alpha_from_vector, coherent_dual_choices,
                           dd_monad, dd_monad_check, dd_on_map, dual_map,
                           enumerate_linear_partitions, evaluation_witness, factorizations,
                           is_coherent, is_evaluation_vector, lemma42_check, lemma45_scan,
                           monad_law_failures, mult, naturality_failures, prop43_check,
                           prop43_diagram, random_linmap, unit)
from finlim.diagram import compute_limit, is_limit_cone
from finlim.vectors import Field, LinMap, VecObj, all_linmaps

F2, F3 = Field(2), Field(3)


def V(field, n):
    return VecObj(field, n)


def test_dual_examples():
    x = V(F2, 3)
    assert dual_map(LinMap.identity(x)) == LinMap.identity(x)
    row = LinMap(V(F2, 2), V(F2, 1), ((1, 1),))
    assert dual_map(row).matrix == ((1,), (1,))


@pytest.mark.parametrize("field", [F2, F3])
def test_dual_and_double_dual_functor_laws(field):
    rng = random.Random(1)
    for _ in range(60):
        a, b, c = (rng.randint(0, 3) for _ in range(3))
        f = random_linmap(rng, V(field, a), V(field, b))
        g = random_linmap(rng, V(field, b), V(field, c))
        assert dual_map(g @ f) == dual_map(f) @ dual_map(g)
        assert dd_on_map(g @ f) == dd_on_map(g) @ dd_on_map(f)


def test_double_dual_of_zero_and_identity():
    x, y = V(F3, 2), V(F3, 1)
    assert dd_on_map(LinMap.zero(x, y)) == LinMap.zero(x, y)
    assert dd_on_map(LinMap.identity(x)) == LinMap.identity(x)


@pytest.mark.parametrize("field", [F2, F3])
@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_unit_is_evaluation(field, n):
    # brute force: the coordinates of ev_v on the dual basis are the coordinates of v
    x = V(field, n)
    eta = unit(x)
    for v in x.vectors():
        basis_functionals = [tuple(int(i == j) for j in range(n)) for i in range(n)]
        ev = tuple(sum(p * c for p, c in zip(phi, v)) % field.q for phi in basis_functionals)
        assert eta(v) == ev
    assert eta.is_iso()


def test_unit_at_dim_zero():
    assert unit(V(F2, 0)).matrix == ()


@pytest.mark.parametrize("field", [F2, F3])
def test_monad_laws_up_to_dim_four(field):
    t = dd_monad(field, 4)
    for n in range(5):
        assert monad_law_failures(t, n) == []
        assert mult(V(field, n)) @ unit(V(field, n)) == LinMap.identity(V(field, n))


def test_dd_monad_bound():
    with pytest.raises(BoundExceeded):
        dd_monad(F2, 5)


@pytest.mark.parametrize("field", [F2, F3])
def test_naturality_exhaustive_small(field):
    t = dd_monad(field, 2)
    for m, n in itertools.product(range(3), repeat=2):
        for f in all_linmaps(V(field, m), V(field, n)):
            assert naturality_failures(t, f) == []


def test_scaled_structures_satisfy_monad_laws_and_differ():
    t = dd_monad(F3, 2)
    units = set()
    for k in (1, 2):
        tk = t.scaled(k)
        assert all(monad_law_failures(tk, n) == [] for n in range(3))
        units.add(tk.unit[2].matrix)
    assert len(units) == 2


def test_dd_monad_check_reports():
    for field in (F2, F3):
        rep = dd_monad_check(field)
        assert rep.passed, rep.reason
        assert rep.metrics["sampled_maps"] >= 100


# -- linear partitions --------------------------------------------------------

@pytest.mark.parametrize("dim,max_cod,count", [(1, 1, 1), (2, 1, 3), (2, 2, 9)])
def test_linear_partition_counts(dim, max_cod, count):
    assert len(enumerate_linear_partitions(V(F2, dim), max_cod)) == count


def test_linear_partition_count_matches_rank_filter_f3():
    brute = sum(1 for k in (1, 2) for m in itertools.product(range(3), repeat=2 * k)
                if _rank_f3([m[i * 2:(i + 1) * 2] for i in range(k)]) == k)
    assert len(enumerate_linear_partitions(V(F3, 2), 2)) == brute == 8 + 48


def _rank_f3(rows):
    # rank by counting the span: span size is 3^rank
    span = {tuple(sum(c * r[j] for c, r in zip(cs, rows)) % 3 for j in range(2))
            for cs in itertools.product(range(3), repeat=len(rows))}
    return {1: 0, 3: 1, 9: 2}[len(span)]


def brute_factorizations(parts):
    out = {}
    for i, a in enumerate(parts):
        for j, b in enumerate(parts):
            for u in all_linmaps(b.map.cod, a.map.cod):
                if u @ b.map == a.map:
                    out[i, j] = u.matrix
    return out


@pytest.mark.parametrize("field,n", [(F2, 1), (F2, 2), (F3, 1), (F3, 2)])
def test_factorizations_match_brute_force(field, n):
    parts = enumerate_linear_partitions(V(field, n), n)
    assert factorizations(parts) == brute_factorizations(parts)


@pytest.mark.parametrize("field,n", [(F2, 1), (F2, 2), (F3, 1)])
def test_coherent_choices_match_filtered_product(field, n):
    parts = enumerate_linear_partitions(V(field, n), n)
    factors = brute_factorizations(parts)
    spaces = [list(V(field, p.dim).vectors()) for p in parts]
    brute = [vals for vals in itertools.product(*spaces)
             if is_coherent(DualChoice(tuple(parts), vals), factors)]
    found = coherent_dual_choices(parts)
    assert sorted(c.values for c in found) == sorted(brute)
    assert len(brute) == field.q ** n


def test_alpha_examples():
    x = V(F2, 2)
    parts = enumerate_linear_partitions(x, 2)
    t = (1, 0)  # ev_(1,0) in dual-dual coordinates
    alpha = alpha_from_vector(t, parts)
    a = next(p for p in parts if p.map.matrix == ((1, 1),))
    assert alpha(a) == (1,)
    for p in parts:
        assert alpha(p) == p.map((1, 0))
    zero = alpha_from_vector((0, 0), parts)
    assert all(set(v) == {0} for v in zero.values)


@pytest.mark.parametrize("field,n", [(F2, 1), (F2, 2), (F2, 3), (F3, 1), (F3, 2)])
def test_double_dual_vectors_match_coherent_choices(field, n):
    rep = lemma42_check(field, n)
    assert rep.passed, rep.reason
    assert rep.metrics["coherent_choices"] == rep.metrics["double_dual_size"] == field.q ** n


def test_coherent_choice_check_bounds():
    with pytest.raises(BoundExceeded):
        lemma42_check(F3, 3)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([F2, F3]), st.integers(0, 3), st.integers(0, 3), st.randoms())
def test_every_vector_is_an_evaluation(field, m, n, rng):
    a = random_linmap(rng, V(field, m), V(field, n))
    for x in list(V(field, m).vectors())[:20]:
        assert is_evaluation_vector(x, a)
        w = evaluation_witness(x, a)
        assert unit(a.cod)(w) == dd_on_map(a)(x)


@pytest.mark.parametrize("field", [F2, F3])
@pytest.mark.parametrize("functor", [ID, DD])
def test_natural_families_are_scalar_multiples(field, functor):
    rep = lemma45_scan(field, 2, functor)
    assert rep.passed, rep.reason
    assert rep.metrics["natural_families"] == field.q


def test_naturality_scan_rejects_unknown_functor():
    with pytest.raises(ValueError):
        lemma45_scan(F2, 1, "dual")


@pytest.mark.parametrize("field", [F2, F3])
@pytest.mark.parametrize("n", [2, 3, 4])
def test_coordinate_restrictions_form_limit_cone(field, n):
    rep = prop43_check(field, n)
    assert rep.passed and rep.metrics["limit_dim"] == n
    d, cone = prop43_diagram(field, n)
    assert is_limit_cone(d, cone)
    assert compute_limit(d).apex.dim == n
