"""Graph-shaped diagrams in FinSet and FinVec, cones over them, and limits.

A diagram is indexed by the free category on a finite multigraph, so a
family of elements is compatible as soon as every edge equation holds.
Limits in FinSet are found by backtracking over node values; limits in
FinVec are the kernel of the stacked edge equations.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Union

from finlim import gf
from finlim.errors import BudgetExceeded, DiagramError, NoFactorization
from finlim.sets import SetMap, SetObj, all_maps
from finlim.vectors import Field, LinMap, VecObj, all_linmaps

DEFAULT_BUDGET = 10 ** 7
BUDGET_ENV = "FINLIM_BUDGET"

Obj = Union[SetObj, VecObj]
Morphism = Union[SetMap, LinMap]


def default_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    return int(raw) if raw else DEFAULT_BUDGET


@dataclass(frozen=True)
class ShapeGraph:
    nodes: tuple
    edges: tuple = ()  # (edge_id, src, dst)

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        if len(set(self.nodes)) != len(self.nodes):
            raise DiagramError("node ids are not pairwise distinct")
        ids = [e[0] for e in self.edges]
        if len(set(ids)) != len(ids):
            raise DiagramError("edge ids are not pairwise distinct")
        known = set(self.nodes)
        for eid, src, dst in self.edges:
            if src not in known or dst not in known:
                raise DiagramError(f"edge {eid!r} references an unknown node")


@dataclass(frozen=True, eq=False)
class Diagram:
    """A functor from the free category on ``shape`` into FinSet or FinVec.

    ``field`` is None for FinSet diagrams and the coefficient field for FinVec.
    """

    shape: ShapeGraph
    objects: dict
    morphisms: dict
    field: Field | None = None

    def __post_init__(self):
        wanted = VecObj if self.field is not None else SetObj
        for n in self.shape.nodes:
            if n not in self.objects:
                raise DiagramError(f"node {n!r} has no object")
            obj = self.objects[n]
            if not isinstance(obj, wanted):
                raise DiagramError(f"node {n!r} carries {obj!r}, expected a {wanted.__name__}")
            if self.field is not None and obj.field != self.field:
                raise DiagramError(f"node {n!r} lives over {obj.field!r}")
        for eid, src, dst in self.shape.edges:
            if eid not in self.morphisms:
                raise DiagramError(f"edge {eid!r} has no morphism")
            f = self.morphisms[eid]
            if f.dom != self.objects[src] or f.cod != self.objects[dst]:
                raise DiagramError(
                    f"edge {eid!r}: morphism {f!r} does not go {self.objects[src]!r} -> "
                    f"{self.objects[dst]!r}"
                )

    @property
    def category(self) -> str:
        return "finset" if self.field is None else "finvec"

    @property
    def nodes(self) -> tuple:
        return self.shape.nodes

    @property
    def edges(self) -> tuple:
        return self.shape.edges

    @classmethod
    def build(cls, objects: dict, edges, field: Field | None = None) -> Diagram:
        """Convenience constructor: ``edges`` is a list of (id, src, dst, morphism)."""
        edges = list(edges)
        shape = ShapeGraph(tuple(objects), tuple((e, s, t) for e, s, t, _ in edges))
        return cls(shape, dict(objects), {e: f for e, _, _, f in edges}, field)


@dataclass(frozen=True, eq=False)
class Cone:
    apex: Obj
    legs: dict


@dataclass(frozen=True, eq=False)
class LimitData:
    """A computed limit.

    ``families`` lists the carrier: for FinSet every compatible family, for
    FinVec a basis of the space of compatible families.  A family is a tuple
    with one entry per node in shape order.
    """

    diagram: Diagram
    apex: Obj
    families: tuple
    projections: dict
    index: dict = field(default_factory=dict, repr=False)

    @property
    def size(self) -> int:
        """Number of carrier elements (q^dim for FinVec)."""
        if isinstance(self.apex, SetObj):
            return self.apex.size
        return self.apex.q ** self.apex.dim

    def cone(self) -> Cone:
        return Cone(self.apex, dict(self.projections))


def identity(obj: Obj) -> Morphism:
    return SetMap.identity(obj) if isinstance(obj, SetObj) else LinMap.identity(obj)


def homs(dom: Obj, cod: Obj):
    return all_maps(dom, cod) if isinstance(dom, SetObj) else all_linmaps(dom, cod)


def hom_size(dom: Obj, cod: Obj) -> int:
    if isinstance(dom, SetObj):
        return cod.size ** dom.size
    return dom.q ** (dom.dim * cod.dim)


# -- limits -----------------------------------------------------------------


def compute_limit(d: Diagram, budget: int | None = None) -> LimitData:
    budget = default_budget() if budget is None else budget
    if d.field is None:
        families = _set_families(d, budget)
        apex = SetObj(len(families))
        projections = {
            n: SetMap(apex, d.objects[n], tuple(fam[i] for fam in families))
            for i, n in enumerate(d.nodes)
        }
        index = {fam: k for k, fam in enumerate(families)}
        return LimitData(d, apex, tuple(families), projections, index)
    basis = _vec_basis(d)
    apex = VecObj(d.field, len(basis))
    projections = {
        n: LinMap.from_columns(apex, d.objects[n], [fam[i] for fam in basis])
        for i, n in enumerate(d.nodes)
    }
    return LimitData(d, apex, tuple(basis), projections)


def search_order(d: Diagram) -> list[int]:
    """Node positions ordered so each node has many edges into earlier ones."""
    pos = {n: i for i, n in enumerate(d.nodes)}
    k = len(d.nodes)
    adj: list[list[int]] = [[] for _ in range(k)]
    for _, src, dst in d.edges:
        s, t = pos[src], pos[dst]
        if s != t:
            adj[s].append(t)
            adj[t].append(s)
    degree = [len(a) for a in adj]
    links = [0] * k
    placed = [False] * k
    order: list[int] = []
    for _ in range(k):
        best = max(
            (i for i in range(k) if not placed[i]),
            key=lambda i: (links[i], degree[i], -i),
        )
        placed[best] = True
        order.append(best)
        for j in adj[best]:
            links[j] += 1
    return order


def _set_families(d: Diagram, budget: int) -> list[tuple]:
    nodes = d.nodes
    k = len(nodes)
    if k == 0:
        return [()]
    sizes = [d.objects[n].size for n in nodes]
    if 0 in sizes:
        return []
    pos = {n: i for i, n in enumerate(nodes)}
    order = search_order(d)
    rank = {p: r for r, p in enumerate(order)}
    # constraints checked when the later endpoint (in search order) is placed
    checks: list[list[tuple]] = [[] for _ in range(k)]
    for eid, src, dst in d.edges:
        s, t = pos[src], pos[dst]
        table = d.morphisms[eid].table
        checks[max(rank[s], rank[t])].append((s, t, table))

    values = [0] * k
    found: list[tuple] = []
    steps = 0
    r = 0
    nxt = [0] * k  # next candidate value to try at each search depth
    while r >= 0:
        if r == k:
            found.append(tuple(values))
            r -= 1
            continue
        p = order[r]
        advanced = False
        while nxt[r] < sizes[p]:
            v = nxt[r]
            nxt[r] += 1
            steps += 1
            if steps > budget:
                raise BudgetExceeded(
                    f"limit enumeration exceeded {budget} candidate assignments"
                )
            values[p] = v
            if all(table[values[s]] == values[t] for s, t, table in checks[r]):
                advanced = True
                break
        if advanced:
            r += 1
            if r < k:
                nxt[r] = 0
        else:
            r -= 1
    found.sort()
    return found


def constraint_matrix(d: Diagram) -> tuple[list[tuple], int, list[int]]:
    """Rows of the linear system D(e)·x_src - x_dst = 0 over all edges."""
    q = d.field.q
    offsets = []
    total = 0
    for n in d.nodes:
        offsets.append(total)
        total += d.objects[n].dim
    pos = {n: i for i, n in enumerate(d.nodes)}
    rows = set()
    for eid, src, dst in d.edges:
        m = d.morphisms[eid].matrix
        so, to = offsets[pos[src]], offsets[pos[dst]]
        for r, mrow in enumerate(m):
            row = [0] * total
            for c, v in enumerate(mrow):
                row[so + c] = (row[so + c] + v) % q
            row[to + r] = (row[to + r] - 1) % q
            if any(row):
                rows.add(tuple(row))
    return sorted(rows), total, offsets


def _vec_basis(d: Diagram) -> list[tuple]:
    rows, total, offsets = constraint_matrix(d)
    flat = gf.kernel_basis(rows, d.field.q, total) if rows else list(gf.identity(total))
    return [split_family(d, v, offsets) for v in flat]


def split_family(d: Diagram, flat, offsets=None) -> tuple:
    if offsets is None:
        offsets, total = [], 0
        for n in d.nodes:
            offsets.append(total)
            total += d.objects[n].dim
    return tuple(
        tuple(flat[o:o + d.objects[n].dim]) for o, n in zip(offsets, d.nodes)
    )


def flatten_family(family) -> tuple:
    return tuple(x for part in family for x in part)


def is_compatible(d: Diagram, family) -> bool:
    pos = {n: i for i, n in enumerate(d.nodes)}
    return all(
        d.morphisms[eid](family[pos[src]]) == family[pos[dst]]
        for eid, src, dst in d.edges
    )


# -- cones ------------------------------------------------------------------


def _check_legs(d: Diagram, c: Cone):
    for n in d.nodes:
        if n not in c.legs:
            raise DiagramError(f"cone has no leg at node {n!r}")
        leg = c.legs[n]
        if leg.dom != c.apex or leg.cod != d.objects[n]:
            raise DiagramError(f"leg at {n!r} is {leg!r}, not apex -> {d.objects[n]!r}")


def check_cone(d: Diagram, c: Cone) -> bool:
    _check_legs(d, c)
    return all(
        d.morphisms[eid] @ c.legs[src] == c.legs[dst] for eid, src, dst in d.edges
    )


def mediating_morphism(d: Diagram, lim: LimitData, c: Cone) -> Morphism:
    """The unique m with projection_n ∘ m = leg_n for every node n."""
    _check_legs(d, c)
    if isinstance(c.apex, SetObj):
        table = []
        for a in c.apex.elements():
            fam = tuple(c.legs[n](a) for n in d.nodes)
            if fam not in lim.index:
                raise NoFactorization(f"apex element {a} maps to incompatible family {fam}")
            table.append(lim.index[fam])
        return SetMap(c.apex, lim.apex, tuple(table))
    q = d.field.q
    basis_cols = [flatten_family(f) for f in lim.families]
    total = sum(d.objects[n].dim for n in d.nodes)
    b = gf.transpose(tuple(basis_cols), total)
    columns = []
    for e in c.apex.basis():
        target = flatten_family(tuple(c.legs[n](e) for n in d.nodes))
        coeffs = gf.solve(b, target, q, len(basis_cols))
        if coeffs is None:
            raise NoFactorization(f"apex basis vector {e} maps outside the limit")
        columns.append(coeffs)
    return LinMap.from_columns(c.apex, lim.apex, columns)


def is_limit_cone(d: Diagram, c: Cone, lim: LimitData | None = None,
                  budget: int | None = None) -> bool:
    lim = compute_limit(d, budget) if lim is None else lim
    try:
        m = mediating_morphism(d, lim, c)
    except NoFactorization:
        return False
    return m.is_iso()


def count_factorizations(d: Diagram, lim: LimitData, c: Cone, max_candidates: int = 10 ** 5) -> int:
    """Exhaustively count morphisms apex -> limit commuting with every leg."""
    n_candidates = hom_size(c.apex, lim.apex)
    if n_candidates > max_candidates:
        raise BudgetExceeded(f"{n_candidates} candidate morphisms exceed {max_candidates}")
    return sum(
        1
        for m in homs(c.apex, lim.apex)
        if all(lim.projections[n] @ m == c.legs[n] for n in d.nodes)
    )
