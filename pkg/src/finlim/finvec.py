"""Finite-dimensional spaces over F_q: dualization, the double-dual monad,
coherent choices over linear partitions, and the checks built on them.

Duals are carried by the same coordinate space F_q^n via the dual basis, so
X* and X** are again ``VecObj(field, n)``.  A vector of X** has coordinates
(t(e_1*), ..., t(e_n*)); a functional on X is a row vector.  These
identifications are explicit: ``dd_on_map`` and ``unit`` are computed by
evaluating functionals and only then compared against plain matrices.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Callable

from finlim import gf
from finlim.diagram import Cone, Diagram, compute_limit, mediating_morphism
from finlim.errors import BoundExceeded, BudgetExceeded, VerificationError
from finlim.report import Report
from finlim.vectors import Field, LinMap, VecObj, all_linmaps

ID, DD = "id", "dd"


def _apply_functional(x, phi) -> int:
    """t(φ) for t ∈ X** with coordinates x and φ ∈ X* with coordinates phi."""
    return sum(a * b for a, b in zip(x, phi))


def dual_map(f: LinMap) -> LinMap:
    """f*: Y* -> X*, u ↦ u·f; in dual-basis coordinates the transpose."""
    columns = []
    for u in f.cod.basis():
        # u·f as a functional on X, read off on the basis of X
        columns.append(tuple(_apply_functional(f(e), u) % f.q for e in f.dom.basis()))
    g = LinMap.from_columns(f.cod, f.dom, columns)
    if g.matrix != gf.transpose(f.matrix, f.dom.dim):
        raise VerificationError("dual map differs from the transpose")
    return g


def dd_on_map(f: LinMap) -> LinMap:
    """f**: X** -> Y**, x ↦ (u ↦ x(u·f))."""
    q = f.q
    columns = []
    for x in f.dom.basis():
        # coordinate j of f**(x) is its value on the j-th dual basis functional of Y*
        col = []
        for u in f.cod.basis():
            u_f = tuple(_apply_functional(f(e), u) % q for e in f.dom.basis())
            col.append(_apply_functional(x, u_f) % q)
        columns.append(tuple(col))
    g = LinMap.from_columns(f.dom, f.cod, columns)
    if g != dual_map(dual_map(f)) or g.matrix != f.matrix:
        raise VerificationError("f** disagrees with the double transpose of f")
    return g


def unit(x: VecObj) -> LinMap:
    """η_X: X -> X**, v ↦ ev_v, in dual-dual coordinates."""
    columns = [
        tuple(_apply_functional(v, phi) % x.q for phi in x.basis())  # ev_v(e_i*)
        for v in x.basis()
    ]
    return LinMap.from_columns(x, x, columns)


def mult(x: VecObj) -> LinMap:
    """μ_X: X**** -> X**, the dual of η at X*."""
    return dual_map(unit(x))


@dataclass(frozen=True)
class MonadComponents:
    field: Field
    max_dim: int
    on_maps: Callable
    unit: dict
    mult: dict

    def obj(self, n: int) -> VecObj:
        return VecObj(self.field, n)

    def scaled(self, k: int) -> MonadComponents:
        """The structure (k·η, k⁻¹·μ) on the same functor."""
        q = self.field.q
        k_inv = gf.inv(k, q)
        return MonadComponents(
            self.field, self.max_dim, self.on_maps,
            {n: e.scaled(k) for n, e in self.unit.items()},
            {n: m.scaled(k_inv) for n, m in self.mult.items()},
        )


def dd_monad(field: Field, max_dim: int) -> MonadComponents:
    if not 0 <= max_dim <= 4:
        raise BoundExceeded(f"dd_monad supports max_dim <= 4, got {max_dim}")
    dims = range(max_dim + 1)
    return MonadComponents(
        field, max_dim, dd_on_map,
        {n: unit(VecObj(field, n)) for n in dims},
        {n: mult(VecObj(field, n)) for n in dims},
    )


def monad_law_failures(t: MonadComponents, n: int) -> list[str]:
    x = t.obj(n)
    eta, mu = t.unit[n], t.mult[n]
    ident = LinMap.identity(x)
    bad = []
    if mu @ t.on_maps(eta) != ident:
        bad.append("μ∘Tη != id")
    if mu @ eta != ident:  # η at TX: TX has the same coordinates as X
        bad.append("μ∘ηT != id")
    if mu @ t.on_maps(mu) != mu @ mu:
        bad.append("μ∘Tμ != μ∘μT")
    return bad


def naturality_failures(t: MonadComponents, f: LinMap) -> list[str]:
    m, n = f.dom.dim, f.cod.dim
    tf = t.on_maps(f)
    bad = []
    if t.unit[n] @ f != tf @ t.unit[m]:
        bad.append("η not natural")
    if t.mult[n] @ t.on_maps(tf) != tf @ t.mult[m]:
        bad.append("μ not natural")
    return bad


def random_linmap(rng: random.Random, dom: VecObj, cod: VecObj) -> LinMap:
    return LinMap(dom, cod, tuple(tuple(rng.randrange(dom.q) for _ in range(dom.dim))
                                  for _ in range(cod.dim)))


def dd_monad_check(field: Field, max_dim: int = 2, sample_dim: int = 3,
                   samples: int = 100, seed: int = 0) -> Report:
    rep = Report("dd-monad", "double dualization is a monad; its structures are (kη, k⁻¹μ)")
    rep.seed = seed
    top = max(max_dim, sample_dim)
    t = dd_monad(field, top)
    q = field.q
    for n in range(top + 1):
        rep.expect(t.unit[n].is_iso(), f"η is not invertible at dim {n}")
        for law in monad_law_failures(t, n):
            rep.fail(f"{law} at dim {n}")
    exhaustive = 0
    for m, n in itertools.product(range(max_dim + 1), repeat=2):
        for f in all_linmaps(VecObj(field, m), VecObj(field, n)):
            exhaustive += 1
            for problem in naturality_failures(t, f):
                rep.fail(problem, {"matrix": [list(r) for r in f.matrix]})
    rng = random.Random(seed)
    sampled = 0
    for i in range(samples):
        other = rng.randint(0, sample_dim)
        dom, cod = (sample_dim, other) if i % 2 else (other, sample_dim)
        f = random_linmap(rng, VecObj(field, dom), VecObj(field, cod))
        sampled += 1
        for problem in naturality_failures(t, f):
            rep.fail(problem, {"matrix": [list(r) for r in f.matrix]})
    units = set()
    for k in range(1, q):
        tk = t.scaled(k)
        for n in range(max_dim + 1):
            for law in monad_law_failures(tk, n):
                rep.fail(f"scaled structure k={k}: {law} at dim {n}")
        units.add(tuple(tk.unit[n].matrix for n in range(1, max_dim + 1)))
    rep.expect(len(units) == q - 1, "distinct scalars give equal units")
    rep.metrics.update(q=q, max_dim=max_dim, exhaustive_maps=exhaustive,
                       sampled_maps=sampled, sample_dim=sample_dim, scalars=q - 1)
    return rep


# -- linear partitions and coherent choices ---------------------------------


@dataclass(frozen=True)
class LinearPartition:
    map: LinMap

    def __post_init__(self):
        if not self.map.is_surjective():
            raise VerificationError(f"{self.map} is not surjective")

    @property
    def dim(self) -> int:
        return self.map.cod.dim


def enumerate_linear_partitions(x: VecObj, max_cod: int, budget: int = 10 ** 6) -> list[LinearPartition]:
    """All surjections x ->> F_q^k for 1 <= k <= max_cod, by k then matrix order."""
    total = sum(x.q ** (x.dim * k) for k in range(1, max_cod + 1))
    if total > budget:
        raise BudgetExceeded(f"{total} candidate matrices exceed {budget}")
    out = []
    for k in range(1, max_cod + 1):
        cod = VecObj(x.field, k)
        for f in all_linmaps(x, cod):
            if f.is_surjective():
                out.append(LinearPartition(f))
    return out


@dataclass(frozen=True)
class DualChoice:
    parts: tuple
    values: tuple  # a vector of F_q^k per partition

    def __call__(self, part: LinearPartition) -> tuple:
        return self.values[self.parts.index(part)]


def factorizations(parts) -> dict:
    """(i, j) -> u for every pair with parts[i] = u ∘ parts[j]."""
    if not parts:
        return {}
    q = parts[0].map.q
    n = parts[0].map.dom.dim
    rinv = [gf.right_inverse(p.map.matrix, q, n) for p in parts]
    out = {}
    for i, a in enumerate(parts):
        for j, b in enumerate(parts):
            u = gf.matmul(a.map.matrix, rinv[j], q)
            if gf.matmul(u, b.map.matrix, q) == a.map.matrix:
                out[i, j] = u
    return out


def is_coherent(choice: DualChoice, factors: dict | None = None) -> bool:
    parts = choice.parts
    factors = factorizations(parts) if factors is None else factors
    if not parts:
        return True
    q = parts[0].map.q
    return all(
        choice.values[i] == gf.matvec(u, choice.values[j], q) for (i, j), u in factors.items()
    )


def alpha_from_vector(t, parts, factors: dict | None = None) -> DualChoice:
    """α(a) = (t(a_1), ..., t(a_k)) for the rows a_i of each partition a."""
    parts = tuple(parts)
    values = []
    for p in parts:
        values.append(tuple(_apply_functional(t, row) % p.map.q for row in p.map.matrix))
    choice = DualChoice(parts, tuple(values))
    if not is_coherent(choice, factors):
        raise VerificationError("choice induced by a double-dual vector is not coherent")
    return choice


def coherent_dual_choices(parts, factors: dict | None = None, budget: int = 10 ** 7) -> list[DualChoice]:
    """Backtracking enumeration of all coherent choices over ``parts``."""
    parts = tuple(parts)
    if not parts:
        return [DualChoice((), ())]
    factors = factorizations(parts) if factors is None else factors
    q = parts[0].map.q
    k = len(parts)
    order = sorted(range(k), key=lambda i: (-parts[i].dim, i))
    rank = {p: r for r, p in enumerate(order)}
    # constraints whose later endpoint is placed at depth r
    checks: list[list] = [[] for _ in range(k)]
    for (i, j), u in factors.items():
        if i != j:
            checks[max(rank[i], rank[j])].append((i, j, u))
        else:
            checks[rank[i]].append((i, j, u))
    values: list = [None] * k
    found = []
    steps = 0

    def place(r):
        nonlocal steps
        if r == k:
            found.append(tuple(values))
            return
        i = order[r]
        for v in gf.all_vectors(parts[i].dim, q):
            steps += 1
            if steps > budget:
                raise BudgetExceeded(f"coherent choice search exceeded {budget} steps")
            values[i] = v
            if all(values[a] == gf.matvec(u, values[b], q) for a, b, u in checks[r]):
                place(r + 1)
        values[i] = None

    place(0)
    found.sort()
    return [DualChoice(parts, v) for v in found]


def lemma42_check(field: Field, n: int) -> Report:
    limit = 3 if field.q == 2 else 2
    if not 0 <= n <= limit:
        raise BoundExceeded(f"lemma42_check over {field!r} supports n <= {limit}, got {n}")
    rep = Report("lemma42", "vectors of X** are exactly the coherent choices over linear partitions")
    x = VecObj(field, n)
    parts = enumerate_linear_partitions(x, n)
    factors = factorizations(parts)
    choices = coherent_dual_choices(parts, factors)
    induced = [alpha_from_vector(t, parts, factors) for t in x.vectors()]
    rep.expect(len(set(induced)) == len(induced), "t ↦ α is not injective")
    rep.expect(set(induced) == set(choices), "t ↦ α misses some coherent choice",
               {"choices": len(choices), "induced": len(set(induced))})
    rep.metrics.update(q=field.q, n=n, partitions=len(parts), double_dual_size=field.q ** n,
                       coherent_choices=len(choices))
    return rep


def evaluation_witness(x, a: LinMap):
    """Some v with η(v) = a**(x), or None."""
    y = dd_on_map(a)(x)
    return gf.solve(unit(a.cod).matrix, y, a.q, a.cod.dim)


def is_evaluation_vector(x, a: LinMap) -> bool:
    return evaluation_witness(x, a) is not None


# -- uniqueness of transformations into (-)** -------------------------------


def lemma45_scan(field: Field, max_dim: int, functor: str, budget: int = 10 ** 6) -> Report:
    if not 0 <= max_dim <= 2:
        raise BoundExceeded(f"lemma45_scan supports max_dim <= 2, got {max_dim}")
    if functor not in (ID, DD):
        raise ValueError(f"functor must be {ID!r} or {DD!r}")
    q = field.q
    rep = Report("lemma45", f"natural transformations {'Id' if functor == ID else '(-)**'} -> (-)** "
                            "are scalar multiples of the canonical one")
    dims = list(range(max_dim + 1))
    n_candidates = q ** sum(n * n for n in dims)
    if n_candidates > budget:
        raise BudgetExceeded(f"{n_candidates} candidate families exceed {budget}")
    spaces = {n: VecObj(field, n) for n in dims}
    apply_f = (lambda f: f) if functor == ID else dd_on_map
    tests = []
    for m, n in itertools.product(dims, repeat=2):
        for f in all_linmaps(spaces[m], spaces[n]):
            tests.append((m, n, apply_f(f), dd_on_map(f)))
    survivors = []
    per_dim = [list(all_linmaps(spaces[n], spaces[n])) for n in dims]
    for family in itertools.product(*per_dim):
        if all(family[n] @ ff == fdd @ family[m] for m, n, ff, fdd in tests):
            survivors.append(family)
    canonical = tuple(unit(spaces[n]) if functor == ID else LinMap.identity(spaces[n]) for n in dims)
    multiples = {tuple(c.scaled(k) for c in canonical) for k in range(q)}
    rep.expect(len(survivors) == q, f"found {len(survivors)} natural families, expected {q}")
    rep.expect(set(survivors) == multiples, "a natural family is not a multiple of the canonical one")
    rep.metrics.update(q=q, max_dim=max_dim, functor=functor, candidates=n_candidates,
                       test_maps=len(tests), natural_families=len(survivors))
    return rep


# -- coordinate-subspace diagram --------------------------------------------


def prop43_diagram(field: Field, n: int) -> tuple[Diagram, Cone]:
    """Lines K_x and planes L_Y (Y a 2-subset) of F_q^n with restriction maps."""
    line, plane, whole = VecObj(field, 1), VecObj(field, 2), VecObj(field, n)
    objects = {f"K{x}": line for x in range(n)}
    pairs = list(itertools.combinations(range(n), 2))
    objects.update({f"L{x}_{y}": plane for x, y in pairs})
    edges = []
    for x, y in pairs:
        edges.append((f"f{x}_{y}>{x}", f"L{x}_{y}", f"K{x}", LinMap(plane, line, ((1, 0),))))
        edges.append((f"f{x}_{y}>{y}", f"L{x}_{y}", f"K{y}", LinMap(plane, line, ((0, 1),))))
    d = Diagram.build(objects, edges, field)
    rows = gf.identity(n)
    legs = {f"K{x}": LinMap(whole, line, (rows[x],)) for x in range(n)}
    legs.update({f"L{x}_{y}": LinMap(whole, plane, (rows[x], rows[y])) for x, y in pairs})
    return d, Cone(whole, legs)


def prop43_check(field: Field, n: int) -> Report:
    if not 2 <= n <= 4:
        raise BoundExceeded(f"prop43_check supports 2 <= n <= 4, got {n}")
    rep = Report("prop43", "coordinate restrictions exhibit F_q^n as a limit of lines and planes")
    d, cone = prop43_diagram(field, n)
    lim = compute_limit(d)
    m = mediating_morphism(d, lim, cone)
    rep.expect(m.is_iso(), "canonical cone is not a limit cone", {"limit_dim": lim.apex.dim})
    rep.metrics.update(q=field.q, n=n, nodes=len(d.nodes), edges=len(d.edges), limit_dim=lim.apex.dim)
    rep.notes.append("at finite dimension every function has finite support, so only the "
                     "cone and limit machinery is exercised")
    return rep
