"""Codensity monads of skeletal full subcategories of FinSet and FinVec.

T(K) is the limit of the comma diagram K/G -> C whose nodes are the
morphisms g: K -> G into probe objects G and whose edges are the
post-compositions h: G -> G' between probes.  The unit is the cone with
leg g at node g, the action on maps and the multiplication are mediating
morphisms of cones assembled from limit projections.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from finlim.diagram import (Cone, Diagram, LimitData, compute_limit, default_budget, hom_size,
                            homs, identity, mediating_morphism)
from finlim.errors import BoundExceeded, BudgetExceeded, DiagramError, NoFactorization, VerificationError
from finlim.finset import FinUltrafilter, pushforward_ultrafilter
from finlim.finvec import dd_on_map, mult as dd_mult, unit as dd_unit
from finlim.report import Report
from finlim.sets import SetMap, SetObj, all_maps
from finlim.vectors import Field, LinMap, VecObj

NODE_BUDGET = 2000
UNIT_NOTE = "unit fixed by π_g ∘ η_K = g for every comma node g"


@dataclass(frozen=True)
class ProbeSet:
    """One probe object per size (FinSet) or dimension (FinVec)."""

    probes: tuple

    def __post_init__(self):
        object.__setattr__(self, "probes", tuple(self.probes))
        if len(set(self.probes)) != len(self.probes):
            raise DiagramError("probe objects must be pairwise non-isomorphic")
        kinds = {type(p) for p in self.probes}
        if len(kinds) > 1:
            raise DiagramError("probes must all live in one category")

    @classmethod
    def sets(cls, max_size: int) -> ProbeSet:
        # the empty set only receives maps from the empty set
        return cls(tuple(SetObj(s) for s in range(1, max_size + 1)))

    @classmethod
    def spaces(cls, field: Field, max_dim: int) -> ProbeSet:
        return cls(tuple(VecObj(field, n) for n in range(max_dim + 1)))

    @property
    def field(self) -> Field | None:
        first = self.probes[0] if self.probes else None
        return first.field if isinstance(first, VecObj) else None


@dataclass(frozen=True, eq=False)
class CommaDiagram:
    diagram: Diagram
    source: object
    nodes: dict  # morphism g -> node id


@dataclass(frozen=True, eq=False)
class CodensityValue:
    object: object
    projections: dict  # g -> π_g
    unit: object
    comma: CommaDiagram
    limit: LimitData


def build_comma_diagram(k, probes: ProbeSet, budget: int = NODE_BUDGET) -> CommaDiagram:
    count = sum(hom_size(k, g) for g in probes.probes)
    if count > budget:
        raise BudgetExceeded(f"comma diagram would have {count} nodes, budget is {budget}")
    morphs = [g for target in probes.probes for g in homs(k, target)]
    ids = {g: i for i, g in enumerate(morphs)}
    between = {
        (a, b): list(homs(a, b)) for a in probes.probes for b in probes.probes
    }
    edges = {}
    for g in morphs:
        for target in probes.probes:
            for h in between[g.cod, target]:
                key = (ids[g], ids[h @ g], h)
                edges.setdefault(key, (f"e{len(edges)}",) + key)
    d = Diagram.build(
        {ids[g]: g.cod for g in morphs},
        [(eid, s, t, h) for eid, s, t, h in edges.values()],
        probes.field,
    )
    return CommaDiagram(d, k, ids)


@lru_cache(maxsize=64)
def codensity_value(k, probes: ProbeSet, budget: int | None = None) -> CodensityValue:
    comma = build_comma_diagram(k, probes)
    lim = compute_limit(comma.diagram, budget)
    projections = {g: lim.projections[node] for g, node in comma.nodes.items()}
    cone = Cone(k, {node: g for g, node in comma.nodes.items()})
    eta = mediating_morphism(comma.diagram, lim, cone)
    value = CodensityValue(lim.apex, projections, eta, comma, lim)
    problems = value_invariant_failures(value, probes)
    if problems:
        raise VerificationError("; ".join(problems))
    return value


def value_invariant_failures(value: CodensityValue, probes: ProbeSet) -> list[str]:
    bad = []
    for g, pi in value.projections.items():
        if pi @ value.unit != g:
            bad.append(f"π_g ∘ η != g at {g!r}")
        for target in probes.probes:
            for h in homs(g.cod, target):
                if h @ pi != value.projections[h @ g]:
                    bad.append(f"h ∘ π_g != π_(h∘g) at {g!r}")
    return bad


def codensity_on_map(f, probes: ProbeSet, budget: int | None = None):
    """T(f): T(K) -> T(L), the unique map with π_g ∘ T(f) = π_(g∘f)."""
    tk = codensity_value(f.dom, probes, budget)
    tl = codensity_value(f.cod, probes, budget)
    cone = Cone(tk.object, {node: tk.projections[g @ f] for g, node in tl.comma.nodes.items()})
    return mediating_morphism(tl.comma.diagram, tl.limit, cone)


def codensity_mult(k, probes: ProbeSet, budget: int | None = None):
    """μ_K: T(T(K)) -> T(K), Θ ↦ (g ↦ Θ(π_g)).

    Each projection π_g: T(K) -> G is a node of the comma diagram of T(K), so
    the projections of T(T(K)) at those nodes form a cone over K's diagram.
    """
    tk = codensity_value(k, probes, budget)
    ttk = codensity_value(tk.object, probes, budget)
    cone = Cone(ttk.object, {node: ttk.projections[tk.projections[g]]
                             for g, node in tk.comma.nodes.items()})
    return mediating_morphism(tk.comma.diagram, tk.limit, cone)


def monad_law_failures(k, probes: ProbeSet, associativity: bool = True) -> list[str]:
    tk = codensity_value(k, probes)
    ttk = codensity_value(tk.object, probes)
    mu = codensity_mult(k, probes)
    ident = identity(tk.object)
    bad = []
    if mu @ ttk.unit != ident:
        bad.append("μ ∘ η_T != id")
    if mu @ codensity_on_map(tk.unit, probes) != ident:
        bad.append("μ ∘ T(η) != id")
    if associativity:
        mu_t = codensity_mult(tk.object, probes)
        if mu @ codensity_on_map(mu, probes) != mu @ mu_t:
            bad.append("μ ∘ T(μ) != μ ∘ μ_T")
    return bad


def compare_ultrafilter(k: SetObj, m: int = 3, max_target: int = 4) -> Report:
    if k.size > 4:
        raise BoundExceeded(f"compare_ultrafilter supports |K| <= 4, got {k.size}")
    rep = Report("codensity-set", "the codensity monad of finite sets of size <= m is the ultrafilter monad")
    rep.notes.append(UNIT_NOTE)
    probes = ProbeSet.sets(m)
    tk = codensity_value(k, probes)
    rep.metrics.update(k=k.size, probe_max=m, comma_nodes=len(tk.comma.diagram.nodes),
                       comma_edges=len(tk.comma.diagram.edges), t_size=tk.object.size)
    if not rep.expect(tk.unit.is_iso(), f"unit K -> T(K) is not a bijection ({k.size} vs {tk.object.size})"):
        return rep
    maps = 0
    for n in range(1, max_target + 1):
        l = SetObj(n)
        tl = codensity_value(l, probes)
        if not tl.unit.is_iso():
            rep.fail(f"unit is not a bijection at |L| = {n}")
            continue
        for f in all_maps(k, l):
            maps += 1
            tf = codensity_on_map(f, probes)
            # identify U(K) ≅ K ≅ T(K): the principal ultrafilter at p goes to η(p)
            for p in k.elements():
                pushed = pushforward_ultrafilter(f, FinUltrafilter(k, p)).principal_at
                if tf(tk.unit(p)) != tl.unit(pushed):
                    rep.fail("T(f) disagrees with ultrafilter pushforward",
                             {"map": list(f.table), "point": p})
    rep.metrics["maps_compared"] = maps
    return rep


def double_dual_iso(x: VecObj, m: int) -> tuple[CodensityValue, LinMap | None]:
    """The map X** -> T(X) induced by the cone a ↦ a**, or None if it does not factor."""
    probes = ProbeSet.spaces(x.field, m)
    tx = codensity_value(x, probes)
    cone = Cone(x, {node: dd_on_map(a) for a, node in tx.comma.nodes.items()})
    try:
        phi = mediating_morphism(tx.comma.diagram, tx.limit, cone)
    except NoFactorization:
        return tx, None
    return tx, phi


def compare_double_dual(x: VecObj, m: int) -> Report:
    if x.dim > 3:
        raise BoundExceeded(f"compare_double_dual supports dim <= 3, got {x.dim}")
    rep = Report("codensity-vec", "the codensity monad of spaces of dimension <= m is double dualization")
    rep.notes.append(UNIT_NOTE)
    tx, phi = double_dual_iso(x, m)
    rep.metrics.update(q=x.q, dim=x.dim, probe_max=m, comma_nodes=len(tx.comma.diagram.nodes),
                       t_dim=tx.object.dim)
    if not rep.expect(phi is not None and phi.is_iso(), "X** is not isomorphic to T(X) via a ↦ a**",
                      {"t_dim": tx.object.dim}):
        return rep
    for a, pi in tx.projections.items():
        rep.expect(pi @ phi == dd_on_map(a), "π_a does not correspond to a**", {"a": [list(r) for r in a.matrix]})
    rep.expect(phi @ dd_unit(x) == tx.unit, "codensity unit does not correspond to x ↦ ev_x")
    return rep


def compare_mult(x: VecObj, m: int) -> Report:
    """Codensity μ against the dual-of-η multiplication, transported along X** ≅ T(X)."""
    rep = Report("codensity-vec-mult", "codensity multiplication equals the double-dual multiplication")
    probes = ProbeSet.spaces(x.field, m)
    tx, phi = double_dual_iso(x, m)
    ttx, phi_t = double_dual_iso(tx.object, m)
    if phi is None or phi_t is None or not (phi.is_iso() and phi_t.is_iso()):
        return rep.fail("T(X) or T(T(X)) is not a double dual")
    mu_t = codensity_mult(x, probes)
    # X**** --φ**--> T(X)** --φ_T--> T(T(X)) --μ^T--> T(X)   vs   X**** --μ--> X** --φ--> T(X)
    lhs = mu_t @ phi_t @ dd_on_map(phi)
    rhs = phi @ dd_mult(x)
    rep.expect(lhs == rhs, "multiplications differ", {"lhs": [list(r) for r in lhs.matrix],
                                                      "rhs": [list(r) for r in rhs.matrix]})
    rep.metrics.update(q=x.q, dim=x.dim, probe_max=m)
    return rep


def codensity_monad_check(k, probes: ProbeSet, associativity: bool = True) -> Report:
    rep = Report("codensity-monad", "codensity unit and multiplication satisfy the monad laws")
    for problem in monad_law_failures(k, probes, associativity):
        rep.fail(problem)
    tk = codensity_value(k, probes)
    rep.metrics.update(source=repr(k), probes=[repr(p) for p in probes.probes],
                       t_object=repr(tk.object), associativity=associativity)
    return rep
