import random

import pytest
from hypothesis import given, settings, strategies as st

from oracles import families_of, random_cone, set_families, vec_families
from finlim.diagram import (Cone, Diagram, ShapeGraph, check_cone, compute_limit,
                            count_factorizations, hom_size, is_limit_cone, mediating_morphism,
                            search_order)
from finlim.errors import BudgetExceeded, DiagramError, NoFactorization
from finlim.fileio import load_diagram
from finlim.sets import SetMap, SetObj
from finlim.vectors import Field, LinMap, VecObj

S = SetObj
F2 = Field(2)
SWAP = SetMap(S(2), S(2), (1, 0))


def swap_cycle():
    return Diagram.build({"d1": S(2), "d2": S(2)},
                         [("s", "d1", "d2", SWAP), ("i", "d2", "d1", SetMap.identity(S(2)))])


def test_empty_shape_limit_is_terminal():
    lim = compute_limit(Diagram.build({}, []))
    assert lim.apex == S(1) and lim.projections == {}


def test_product_of_isolated_nodes():
    lim = compute_limit(Diagram.build({"a": S(2), "b": S(3)}, []))
    assert lim.apex.size == 6
    assert lim.families == tuple((i, j) for i in range(2) for j in range(3))


def test_swap_cycle_has_empty_limit():
    assert compute_limit(swap_cycle()).apex.size == 0


def test_graph_of_a_linear_map():
    v, w = VecObj(F2, 2), VecObj(F2, 1)
    d = Diagram.build({"V": v, "W": w}, [("e", "V", "W", LinMap(v, w, ((1, 1),)))], F2)
    lim = compute_limit(d)
    assert lim.apex.dim == 2
    assert is_limit_cone(d, Cone(v, {"V": LinMap.identity(v), "W": LinMap(v, w, ((1, 1),))}))


def test_empty_node_forces_empty_limit():
    d = Diagram.build({"a": S(3), "b": S(0)}, [])
    assert compute_limit(d).families == ()


def test_limit_projections_form_a_cone_and_mediate_to_identity(fixtures_dir):
    for path in sorted(fixtures_dir.glob("*.json")):
        d = load_diagram(path)
        lim = compute_limit(d)
        assert check_cone(d, lim.cone()), path.name
        m = mediating_morphism(d, lim, lim.cone())
        assert m == m.__class__.identity(lim.apex), path.name


def test_check_cone_detects_broken_leg():
    d = Diagram.build({"a": S(2), "b": S(2)}, [("s", "a", "b", SWAP)])
    x = S(2)
    good = Cone(x, {"a": SetMap.identity(x), "b": SWAP})
    bad = Cone(x, {"a": SetMap.identity(x), "b": SetMap.constant(x, S(2), 0)})
    assert check_cone(d, good)
    assert not check_cone(d, bad)
    with pytest.raises(NoFactorization):
        mediating_morphism(d, compute_limit(d), bad)


def test_check_cone_rejects_mistyped_legs():
    d = Diagram.build({"a": S(2)}, [])
    with pytest.raises(DiagramError):
        check_cone(d, Cone(S(1), {"a": SetMap.identity(S(2))}))
    with pytest.raises(DiagramError):
        check_cone(d, Cone(S(1), {}))


def test_strict_subobject_is_not_a_limit_cone():
    d = Diagram.build({"a": S(3)}, [])
    sub = Cone(S(2), {"a": SetMap(S(2), S(3), (0, 1))})
    assert not is_limit_cone(d, sub)


def test_zero_space_cone_mediates_to_zero():
    v = VecObj(F2, 2)
    d = Diagram.build({"V": v}, [], F2)
    zero = VecObj(F2, 0)
    m = mediating_morphism(d, compute_limit(d), Cone(zero, {"V": LinMap.zero(zero, v)}))
    assert m == LinMap.zero(zero, compute_limit(d).apex)


def test_diagram_validation():
    with pytest.raises(DiagramError):
        ShapeGraph(("a", "a"))
    with pytest.raises(DiagramError):
        ShapeGraph(("a",), (("e", "a", "b"),))
    with pytest.raises(DiagramError):
        Diagram.build({"a": S(2), "b": S(3)}, [("e", "a", "b", SWAP)])
    with pytest.raises(DiagramError):
        Diagram.build({"a": VecObj(F2, 1)}, [])  # vector node without a field


def test_budget_is_enforced(monkeypatch):
    d = Diagram.build({f"n{i}": S(3) for i in range(6)}, [])
    with pytest.raises(BudgetExceeded):
        compute_limit(d, budget=100)
    monkeypatch.setenv("FINLIM_BUDGET", "50")
    with pytest.raises(BudgetExceeded):
        compute_limit(d)


def test_search_order_prefers_connected_nodes():
    d = Diagram.build({"a": S(2), "b": S(2), "c": S(2)},
                      [("e1", "a", "c", SWAP), ("e2", "b", "c", SWAP)])
    order = search_order(d)
    assert order[0] == 2  # c has the highest degree


def test_compute_limit_is_deterministic(fixtures_dir):
    for path in sorted(fixtures_dir.glob("*.json")):
        a, b = compute_limit(load_diagram(path)), compute_limit(load_diagram(path))
        assert a.families == b.families


# -- oracle equivalence ------------------------------------------------------

@st.composite
def set_diagrams(draw):
    k = draw(st.integers(1, 5))
    sizes = draw(st.lists(st.integers(0, 3), min_size=k, max_size=k))
    objects = {f"n{i}": S(s) for i, s in enumerate(sizes)}
    edges = []
    for j in range(draw(st.integers(0, 7))):
        s, t = draw(st.integers(0, k - 1)), draw(st.integers(0, k - 1))
        if sizes[t] == 0 and sizes[s] > 0:
            continue
        table = tuple(draw(st.integers(0, sizes[t] - 1)) for _ in range(sizes[s]))
        edges.append((f"e{j}", f"n{s}", f"n{t}", SetMap(S(sizes[s]), S(sizes[t]), table)))
    return Diagram.build(objects, edges)


@st.composite
def vec_diagrams(draw):
    q = draw(st.sampled_from([2, 3]))
    field = Field(q)
    k = draw(st.integers(1, 4))
    dims = draw(st.lists(st.integers(0, 2), min_size=k, max_size=k))
    objects = {f"n{i}": VecObj(field, n) for i, n in enumerate(dims)}
    edges = []
    for j in range(draw(st.integers(0, 6))):
        s, t = draw(st.integers(0, k - 1)), draw(st.integers(0, k - 1))
        matrix = tuple(tuple(draw(st.integers(0, q - 1)) for _ in range(dims[s]))
                       for _ in range(dims[t]))
        edges.append((f"e{j}", f"n{s}", f"n{t}", LinMap(objects[f"n{s}"], objects[f"n{t}"], matrix)))
    return Diagram.build(objects, edges, field)


@settings(max_examples=150, deadline=None)
@given(set_diagrams())
def test_set_limit_matches_brute_force(d):
    sizes = {n: d.objects[n].size for n in d.nodes}
    edges = [(s, t, d.morphisms[e].table) for e, s, t in d.edges]
    assert list(compute_limit(d).families) == set_families(sizes, edges)


@settings(max_examples=150, deadline=None)
@given(vec_diagrams())
def test_vec_limit_matches_element_enumeration(d):
    lim = compute_limit(d)
    assert lim.size == len(families_of(d))
    for fam in lim.families:
        assert fam in families_of(d)


@settings(max_examples=60, deadline=None)
@given(st.one_of(set_diagrams(), vec_diagrams()), st.integers(0, 2 ** 32))
def test_random_cones_factor_uniquely(d, seed):
    rng = random.Random(seed)
    lim = compute_limit(d)
    fams = families_of(d)
    for _ in range(5):
        c = random_cone(d, rng, fams, max_apex=2)
        assert check_cone(d, c)
        m = mediating_morphism(d, lim, c)
        assert all(lim.projections[n] @ m == c.legs[n] for n in d.nodes)
        if hom_size(c.apex, lim.apex) <= 3 ** 6:
            assert count_factorizations(d, lim, c) == 1
