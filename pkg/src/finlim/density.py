"""Three-element sets are limit-dense in FinSet; sets of size at most two are not.

``build_prop38_diagram`` expresses an n-element set as the limit of a
diagram of 3-element sets.  ``reduce_set3`` decides the cardinality of the
limit of any diagram of sets of size <= 2 without enumerating families: it
is always 0 or a power of two.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from finlim.diagram import Cone, Diagram, compute_limit, mediating_morphism
from finlim.errors import BoundExceeded, DiagramError, VerificationError
from finlim.finset import equalizer
from finlim.report import Report
from finlim.sets import SetMap, SetObj, all_maps

PROP38_BOUND = 6
T = 0  # the distinguished point t of X, and its position inside each node
THREE = SetObj(3)


@dataclass(frozen=True)
class Prop38Instance:
    """Bookkeeping for the 3-element diagram presenting X = {0..n-1}.

    Inside K_x the local order is (t, x, s); inside Y = {t, x, x'} it is
    (t, x, x') with x < x'.
    """

    n: int
    k_nodes: dict  # x -> node id
    y_nodes: dict  # (x, x') -> node id


def _k(x):
    return f"K{x}"


def _y(x, x2):
    return f"Y{x}_{x2}"


def build_prop38_diagram(n: int) -> tuple[Diagram, Cone, Prop38Instance]:
    if n < 3:
        raise BoundExceeded(f"the 3-element diagram needs n >= 3, got {n}; use equalizer_witness")
    points = range(1, n)
    pairs = list(itertools.combinations(points, 2))
    objects = {_k(x): THREE for x in points}
    objects.update({_y(x, x2): THREE for x, x2 in pairs})
    edges = []
    for x, x2 in pairs:
        # f_{Y,x}: Y -> K_x keeps x, sends the rest to t
        edges.append((f"f_{x}_{x2}>{x}", _y(x, x2), _k(x), SetMap(THREE, THREE, (T, 1, T))))
        edges.append((f"f_{x}_{x2}>{x2}", _y(x, x2), _k(x2), SetMap(THREE, THREE, (T, T, 1))))
    for x in points:
        # fixes t and x, moves s to t
        edges.append((f"p_{x}", _k(x), _k(x), SetMap(THREE, THREE, (T, 1, T))))
    d = Diagram.build(objects, edges)

    xs = SetObj(n)
    legs = {_k(x): SetMap(xs, THREE, tuple(1 if v == x else T for v in xs.elements()))
            for x in points}
    for x, x2 in pairs:
        legs[_y(x, x2)] = SetMap(
            xs, THREE, tuple(1 if v == x else 2 if v == x2 else T for v in xs.elements())
        )
    inst = Prop38Instance(n, {x: _k(x) for x in points}, {p: _y(*p) for p in pairs})
    return d, Cone(xs, legs), inst


def expected_family(inst: Prop38Instance, d: Diagram, v: int) -> tuple:
    """The compatible family attached to the point v by the case analysis:
    k_x = x iff x = v, l_Y = v iff v ∈ Y, and t everywhere else."""
    values = {}
    for x, node in inst.k_nodes.items():
        values[node] = 1 if x == v else T
    for (x, x2), node in inst.y_nodes.items():
        values[node] = 1 if v == x else 2 if v == x2 else T
    return tuple(values[node] for node in d.nodes)


def verify_prop38(n: int, bound: int = PROP38_BOUND, budget: int | None = None) -> Report:
    if not 3 <= n <= bound:
        raise BoundExceeded(f"verify_prop38 supports 3 <= n <= {bound}, got {n}")
    rep = Report("prop38", "every set of size >= 3 is a limit of 3-element sets")
    d, cone, inst = build_prop38_diagram(n)
    lim = compute_limit(d, budget)
    rep.metrics.update(n=n, nodes=len(d.nodes), edges=len(d.edges), carrier_size=lim.apex.size)
    rep.expect(all(obj.size == 3 for obj in d.objects.values()), "a node is not 3-element")
    m = mediating_morphism(d, lim, cone)
    rep.expect(m.is_iso(), "canonical cone is not a limit cone",
               {"carrier": [list(f) for f in lim.families]})
    for v in range(n):
        got = lim.families[m(v)]
        rep.expect(got == expected_family(inst, d, v), f"point {v} mediates to the wrong family",
                   {"point": v, "family": list(got)})
    return rep


def equalizer_witness(m: int) -> tuple[SetMap, SetMap, Report]:
    """First pair of endomaps of {0,1,2} (lexicographic) whose equalizer has m points."""
    if m not in (0, 1, 2):
        raise BoundExceeded(f"target size must be 0, 1 or 2, got {m}")
    rep = Report("equalizer", f"a {m}-element set is an equalizer of two endomaps of a 3-element set")
    endos = list(all_maps(THREE, THREE))
    searched = 0
    for f, g in itertools.product(endos, repeat=2):
        searched += 1
        obj, incl = equalizer(f, g)
        if obj.size == m:
            rep.metrics.update(target=m, pairs_searched=searched, pairs_total=len(endos) ** 2,
                               f=list(f.table), g=list(g.table), equalizer=list(incl.table))
            return f, g, rep
    rep.fail(f"no pair of endomaps has an equalizer of size {m}")
    rep.metrics.update(target=m, pairs_searched=searched)
    return SetMap.identity(THREE), SetMap.identity(THREE), rep


# -- reduction for diagrams of sets of size <= 2 ---------------------------

EMPTY, POWER_OF_TWO = "empty", "power_of_two"


@dataclass(frozen=True)
class ReductionResult:
    verdict: str
    k: int | None = None
    surviving_nodes: frozenset = frozenset()
    components: tuple = ()
    forced: dict = field(default_factory=dict)

    @property
    def cardinality(self) -> int:
        return 0 if self.verdict == EMPTY else 2 ** self.k

    def __str__(self):
        return "Empty" if self.verdict == EMPTY else f"PowerOfTwo({self.k})"


def _localized_edges(d: Diagram) -> list[tuple]:
    """Edges of the diagram plus a formal inverse for each bijective edge.

    Inverting single edges suffices: between sets of size <= 2 a composite
    path is a bijection only if it runs through bijective edges or joins two
    one-point sets, and one-point nodes are discarded anyway.
    """
    out = []
    for eid, src, dst in d.edges:
        f = d.morphisms[eid]
        out.append((src, dst, f))
        if f.is_iso():
            out.append((dst, src, f.inverse()))
    return out


def reduce_set3(d: Diagram) -> ReductionResult:
    if d.field is not None:
        raise DiagramError("reduce_set3 works on FinSet diagrams")
    for n in d.nodes:
        if d.objects[n].size > 2:
            raise BoundExceeded(f"node {n!r} has {d.objects[n].size} elements; at most 2 allowed")
    if any(d.objects[n].size == 0 for n in d.nodes):
        return ReductionResult(EMPTY)

    edges = _localized_edges(d)
    # maps arriving at each node, as (domain size, table); fixpoint over paths
    arriving = {n: {(d.objects[n].size, tuple(range(d.objects[n].size)))} for n in d.nodes}
    changed = True
    while changed:
        changed = False
        for src, dst, f in edges:
            for dom, table in list(arriving[src]):
                composed = (dom, tuple(f.table[v] for v in table))
                if composed not in arriving[dst]:
                    arriving[dst].add(composed)
                    changed = True

    # a constant arriving map pins the node's value in every compatible family
    forced = {}
    for n in d.nodes:
        constants = {table[0] for dom, table in arriving[n] if len(set(table)) == 1}
        if len(constants) > 1:
            return ReductionResult(EMPTY)
        if constants:
            forced[n] = constants.pop()
    survivors = frozenset(n for n in d.nodes if n not in forced)

    for src, dst, f in edges:
        if src in forced and dst in forced and f(forced[src]) != forced[dst]:
            return ReductionResult(EMPTY, surviving_nodes=survivors, forced=forced)
        if src in survivors and dst in forced:
            if not f.is_constant():
                raise VerificationError(f"edge {src!r}->{dst!r} leaves the surviving part non-constantly")
            if f.table[0] != forced[dst]:
                return ReductionResult(EMPTY, surviving_nodes=survivors, forced=forced)
        if src in forced and dst in survivors:
            raise VerificationError(f"surviving node {dst!r} receives a map from a pinned node")

    inner = [(s, t, f) for s, t, f in edges if s in survivors and t in survivors]
    for n in survivors:
        if d.objects[n].size != 2:
            raise VerificationError(f"surviving node {n!r} is not 2-element")
    for s, t, f in inner:
        if not f.is_iso():
            raise VerificationError(f"surviving edge {s!r}->{t!r} is not a bijection")

    # components of the surviving part; fix one value per component and propagate
    adjacency = {n: [] for n in survivors}
    for s, t, f in inner:
        adjacency[s].append((t, f))
        adjacency[t].append((s, f.inverse()))
    components = []
    seen: set = set()
    consistent = True
    for start in [n for n in d.nodes if n in survivors]:
        if start in seen:
            continue
        value = {start: 0}
        stack = [start]
        seen.add(start)
        while stack:
            a = stack.pop()
            for b, f in adjacency[a]:
                if b not in value:
                    value[b] = f(value[a])
                    seen.add(b)
                    stack.append(b)
        # the spanning tree fixed every value; every edge must now agree
        members = frozenset(value)
        components.append(members)
        if any(f(value[s]) != value[t] for s, t, f in inner if s in members):
            consistent = False
    if not consistent:
        return ReductionResult(EMPTY, surviving_nodes=survivors,
                               components=tuple(components), forced=forced)
    return ReductionResult(POWER_OF_TWO, len(components), survivors, tuple(components), forced)


def verify_power_of_two(d: Diagram, budget: int | None = None) -> Report:
    rep = Report("set3", "limits of diagrams of sets of size <= 2 have 0 or 2^k elements")
    size = compute_limit(d, budget).apex.size
    result = reduce_set3(d)
    rep.metrics.update(brute_force_size=size, verdict=str(result))
    rep.expect(size == 0 or size & (size - 1) == 0, f"limit has {size} elements")
    rep.expect(result.cardinality == size,
               f"reduction says {result} but the limit has {size} elements")
    return rep
