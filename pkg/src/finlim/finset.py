"""Finite sets: equalizers, partitions and coarsening, coherent block choices,
and the ultrafilter monad restricted to finite ground sets.

On a finite set every ultrafilter is principal, so an ultrafilter is stored
by its generating point.  The set-family view is only materialised to
cross-check the formulas on small ground sets.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from finlim.diagram import Cone, Diagram, compute_limit, mediating_morphism
from finlim.errors import BoundExceeded, DiagramError, VerificationError
from finlim.report import Report
from finlim.sets import SetMap, SetObj, all_maps

PARTITION_BOUND = 6
FAMILY_CHECK_BOUND = 5


def equalizer(f: SetMap, g: SetMap) -> tuple[SetObj, SetMap]:
    if f.dom != g.dom or f.cod != g.cod:
        raise DiagramError("equalizer needs two maps with the same endpoints")
    agree = tuple(i for i in f.dom.elements() if f(i) == g(i))
    obj = SetObj(len(agree))
    return obj, SetMap(obj, f.dom, agree)


# -- partitions -------------------------------------------------------------


@dataclass(frozen=True)
class Partition:
    """A set partition of {0..n-1}; blocks sorted, ordered by least element."""

    n: int
    blocks: tuple

    def __post_init__(self):
        blocks = tuple(sorted((tuple(sorted(b)) for b in self.blocks), key=lambda b: b[0] if b else -1))
        object.__setattr__(self, "blocks", blocks)
        seen = [x for b in blocks for x in b]
        if any(not b for b in blocks):
            raise DiagramError("partition blocks must be nonempty")
        if sorted(seen) != list(range(self.n)):
            raise DiagramError(f"blocks {blocks} do not partition {self.n} elements")

    @classmethod
    def from_labels(cls, labels) -> Partition:
        groups: dict = {}
        for i, lab in enumerate(labels):
            groups.setdefault(lab, []).append(i)
        return cls(len(labels), tuple(tuple(g) for g in groups.values()))

    def block_of(self, x: int) -> int:
        for i, b in enumerate(self.blocks):
            if x in b:
                return i
        raise DiagramError(f"{x} is not in the ground set")

    def quotient(self) -> SetObj:
        return SetObj(len(self.blocks))

    def quotient_map(self) -> SetMap:
        return SetMap(SetObj(self.n), self.quotient(), tuple(self.block_of(x) for x in range(self.n)))

    def __str__(self):
        return "|".join("".join(str(x) for x in b) for b in self.blocks) or "∅"


def _growth_strings(n: int):
    """Restricted growth strings of length n in lexicographic order."""
    if n == 0:
        return
    s = [0] * n

    def rec(i, top):
        if i == n:
            yield tuple(s)
            return
        for v in range(top + 2):
            s[i] = v
            yield from rec(i + 1, max(top, v))

    s[0] = 0
    yield from rec(1, 0)


@lru_cache(maxsize=None)
def _partitions(n: int) -> tuple:
    return tuple(Partition.from_labels(rgs) for rgs in _growth_strings(n))


def all_partitions(n: int, bound: int = PARTITION_BOUND) -> list[Partition]:
    """Every partition of {0..n-1}, in restricted-growth-string order.

    The empty ground set is given no partitions at all.
    """
    if n < 0 or n > bound:
        raise BoundExceeded(f"partition enumeration supports 0 <= n <= {bound}, got {n}")
    return list(_partitions(n))


def is_coarser(q2: Partition, q1: Partition) -> bool:
    """True iff every block of q1 sits inside a block of q2."""
    if q1.n != q2.n:
        raise DiagramError("partitions live on different ground sets")
    return all(len({q2.block_of(x) for x in b}) == 1 for b in q1.blocks)


def partition_of_map(f: SetMap) -> Partition:
    return Partition.from_labels(f.table)


def coarsening_map(q1: Partition, q2: Partition) -> SetMap:
    """The induced map X/q1 -> X/q2 for q2 coarser than q1."""
    if not is_coarser(q2, q1):
        raise DiagramError(f"{q2} is not coarser than {q1}")
    return SetMap(q1.quotient(), q2.quotient(), tuple(q2.block_of(b[0]) for b in q1.blocks))


# -- coherent choices -------------------------------------------------------


@dataclass(frozen=True)
class CoherentChoice:
    partitions: tuple
    choice: tuple  # chosen block index, aligned with partitions

    def block(self, p: Partition) -> tuple:
        return p.blocks[self.choice[self.partitions.index(p)]]

    def is_coherent(self) -> bool:
        chosen = [set(p.blocks[c]) for p, c in zip(self.partitions, self.choice)]
        for i, j in itertools.permutations(range(len(self.partitions)), 2):
            if is_coarser(self.partitions[i], self.partitions[j]) and not chosen[j] <= chosen[i]:
                return False
        return True


def coherent_choices(n: int, bound: int = PARTITION_BOUND) -> list[CoherentChoice]:
    """All block selections over all partitions of n that respect coarsening.

    Backtracking from the finest partitions up, each new selection checked
    against every already-selected partition it is comparable with.
    """
    parts = all_partitions(n, bound)
    if not parts:
        # empty ground set: no partitions, and by convention no choices either
        return []
    k = len(parts)
    blocks = [[frozenset(b) for b in p.blocks] for p in parts]
    order = sorted(range(k), key=lambda i: (-len(parts[i].blocks), i))
    # related[r]: (earlier position, earlier-is-coarser) pairs to check at depth r
    related: list[list[tuple]] = []
    for r, i in enumerate(order):
        rel = []
        for j in order[:r]:
            if is_coarser(parts[j], parts[i]):
                rel.append((j, True))
            elif is_coarser(parts[i], parts[j]):
                rel.append((j, False))
        related.append(rel)

    chosen = [0] * k
    results = []

    def place(r):
        if r == k:
            results.append(tuple(chosen))
            return
        i = order[r]
        for c, b in enumerate(blocks[i]):
            ok = True
            for j, j_coarser in related[r]:
                other = blocks[j][chosen[j]]
                if (j_coarser and not b <= other) or (not j_coarser and not other <= b):
                    ok = False
                    break
            if ok:
                chosen[i] = c
                place(r + 1)

    place(0)
    results.sort()
    return [CoherentChoice(tuple(parts), c) for c in results]


# -- ultrafilters -----------------------------------------------------------


@dataclass(frozen=True)
class FinUltrafilter:
    ground: SetObj
    principal_at: int

    def __post_init__(self):
        if not 0 <= self.principal_at < self.ground.size:
            raise DiagramError(f"{self.principal_at} is not a point of {self.ground}")

    def family(self) -> frozenset:
        return principal_family(self.ground.size, self.principal_at)

    def __contains__(self, subset) -> bool:
        return self.principal_at in subset


def subsets(n: int):
    for r in range(n + 1):
        for c in itertools.combinations(range(n), r):
            yield frozenset(c)


def principal_family(n: int, point: int) -> frozenset:
    return frozenset(a for a in subsets(n) if point in a)


def is_ultrafilter(n: int, family) -> bool:
    family = set(family)
    everything = frozenset(range(n))
    if everything not in family or frozenset() in family:
        return False
    for a in subsets(n):
        if (a in family) == ((everything - a) in family):
            return False
    for a, b in itertools.product(family, repeat=2):
        if a & b not in family:
            return False
    return all(b in family for a in family for b in subsets(n) if a <= b)


def ultrafilter_from_family(n: int, family) -> FinUltrafilter:
    """Recover the generating point of an ultrafilter given as a set family."""
    family = frozenset(family)
    if not is_ultrafilter(n, family):
        raise VerificationError("family is not an ultrafilter")
    point = min(min(a) for a in family if len(a) == 1) if any(len(a) == 1 for a in family) else None
    if point is None or family != principal_family(n, point):
        raise VerificationError("ultrafilter on a finite set is not principal")
    return FinUltrafilter(SetObj(n), point)


def pushforward_ultrafilter(f: SetMap, u: FinUltrafilter) -> FinUltrafilter:
    """The image ultrafilter {A ⊆ cod : f⁻¹(A) ∈ u}, principal at f(point)."""
    if u.ground != f.dom:
        raise DiagramError("ultrafilter ground does not match the map's domain")
    result = FinUltrafilter(f.cod, f(u.principal_at))
    if f.dom.size <= FAMILY_CHECK_BOUND and f.cod.size <= FAMILY_CHECK_BOUND:
        literal = frozenset(
            a for a in subsets(f.cod.size)
            if frozenset(i for i in f.dom.elements() if f(i) in a) in u.family()
        )
        if literal != result.family():
            raise VerificationError(f"pushforward along {f} is not principal at {result.principal_at}")
    return result


# U(X) is identified with a set of |X| points: index i <-> principal at i.


def ultrafilter_object(x: SetObj) -> SetObj:
    return SetObj(x.size)


@lru_cache(maxsize=None)
def ultrafilter_unit(x: SetObj) -> SetMap:
    """X -> U(X), each point sent to its principal ultrafilter."""
    table = tuple(
        ultrafilter_from_family(x.size, principal_family(x.size, p)).principal_at
        for p in x.elements()
    )
    return SetMap(x, ultrafilter_object(x), table)


@lru_cache(maxsize=4096)
def ultrafilter_map(f: SetMap) -> SetMap:
    """U(f): U(X) -> U(Y)."""
    table = tuple(
        pushforward_ultrafilter(f, FinUltrafilter(f.dom, i)).principal_at
        for i in f.dom.elements()
    )
    return SetMap(ultrafilter_object(f.dom), ultrafilter_object(f.cod), table)


@lru_cache(maxsize=None)
def ultrafilter_mult(x: SetObj) -> SetMap:
    """U(U(X)) -> U(X) computed from the family formula

    μ(W) = {A ⊆ X : {u ∈ U(X) : A ∈ u} ∈ W}.
    """
    ux = ultrafilter_object(x)
    members = [FinUltrafilter(x, i).family() for i in ux.elements()]
    table = []
    for j in ultrafilter_object(ux).elements():
        outer = FinUltrafilter(ux, j).family()
        flat = frozenset(
            a for a in subsets(x.size)
            if frozenset(i for i, m in enumerate(members) if a in m) in outer
        )
        table.append(ultrafilter_from_family(x.size, flat).principal_at)
    return SetMap(ultrafilter_object(ux), ux, tuple(table))


def ultrafilter_monad_check(max_size: int = 4) -> Report:
    rep = Report("ultrafilter-monad", "finite ultrafilter monad: functor and monad laws")
    maps_checked = 0
    for n in range(max_size + 1):
        x = SetObj(n)
        ux, uux = ultrafilter_object(x), ultrafilter_object(ultrafilter_object(x))
        eta, mu = ultrafilter_unit(x), ultrafilter_mult(x)
        rep.expect(ultrafilter_map(SetMap.identity(x)) == SetMap.identity(ux),
                   f"U(id) != id at size {n}")
        rep.expect(mu @ ultrafilter_unit(ux) == SetMap.identity(ux),
                   f"left unit law fails at size {n}")
        rep.expect(mu @ ultrafilter_map(eta) == SetMap.identity(ux),
                   f"right unit law fails at size {n}")
        rep.expect(mu @ ultrafilter_map(mu) == mu @ ultrafilter_mult(ux),
                   f"associativity fails at size {n}")
        rep.expect(uux == ultrafilter_object(ux), "object mismatch")
        for m in range(max_size + 1):
            y = SetObj(m)
            for f in all_maps(x, y):
                maps_checked += 1
                uf = ultrafilter_map(f)
                ok = (ultrafilter_unit(y) @ f == uf @ eta
                      and ultrafilter_mult(y) @ ultrafilter_map(uf) == uf @ mu)
                rep.expect(ok, "unit or multiplication not natural", {"map": list(f.table), "cod": m})
                for z in range(max_size + 1):
                    for g in all_maps(y, SetObj(z)):
                        if ultrafilter_map(g @ f) != ultrafilter_map(g) @ uf:
                            rep.fail("U does not preserve composition",
                                     {"f": list(f.table), "g": list(g.table)})
    rep.metrics.update(max_size=max_size, maps_checked=maps_checked)
    return rep


# -- reports ----------------------------------------------------------------


def galvin_horn_check(n: int) -> Report:
    if not 0 <= n <= 5:
        raise BoundExceeded(f"galvin_horn_check supports 0 <= n <= 5, got {n}")
    rep = Report("galvin-horn", "coherent block choices over all partitions correspond to ultrafilters")
    choices = coherent_choices(n)
    parts = all_partitions(n)
    induced = []
    for p in range(n):
        u = FinUltrafilter(SetObj(n), p)
        fam = u.family()
        picks = []
        for part in parts:
            members = [i for i, b in enumerate(part.blocks) if frozenset(b) in fam]
            rep.expect(len(members) == 1, "ultrafilter does not meet a partition in one block",
                       {"point": p, "partition": str(part)})
            picks.append(members[0] if members else -1)
        induced.append(CoherentChoice(tuple(parts), tuple(picks)))
    rep.expect(all(c.is_coherent() for c in choices), "enumerated choice is not coherent")
    rep.expect(len(set(induced)) == len(induced), "two ultrafilters induce the same choice")
    rep.expect(set(induced) == set(choices), "induced choices differ from the coherent ones",
               {"n": n})
    rep.metrics.update(n=n, partitions=len(parts), ultrafilters=n, coherent_choices=len(choices))
    if n == 0:
        rep.notes.append("empty ground set: no partitions and no choices by convention")
    return rep


def partition_diagram(n: int) -> tuple[Diagram, Cone]:
    """Quotients X/Q for every partition Q, with one edge per strict coarsening."""
    if not 1 <= n <= 5:
        raise BoundExceeded(f"partition diagram supports 1 <= n <= 5, got {n}")
    parts = all_partitions(n)
    names = {p: f"Q{i}" for i, p in enumerate(parts)}
    edges = []
    for q1, q2 in itertools.product(parts, repeat=2):
        if q1 != q2 and is_coarser(q2, q1):
            edges.append((f"{names[q1]}>{names[q2]}", names[q1], names[q2], coarsening_map(q1, q2)))
    d = Diagram.build({names[p]: p.quotient() for p in parts}, edges)
    cone = Cone(SetObj(n), {names[p]: p.quotient_map() for p in parts})
    return d, cone


def partition_limit_check(n: int) -> Report:
    rep = Report("partition-limit", "a finite set is the limit of its partition quotients")
    d, cone = partition_diagram(n)
    lim = compute_limit(d)
    m = mediating_morphism(d, lim, cone)
    rep.expect(m.is_iso(), "canonical cone is not a limit cone", {"carrier": lim.apex.size})
    rep.metrics.update(n=n, nodes=len(d.nodes), edges=len(d.edges), carrier_size=lim.apex.size)
    return rep
