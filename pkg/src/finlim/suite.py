"""Check orchestration: named tasks, the corpus run, and the full suite plan.

Tasks are ``(function name, kwargs)`` pairs so they can be shipped to worker
processes; results always come back in plan order.
"""
from __future__ import annotations

import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor

from finlim import codensity, density, finset, finvec
from finlim.corpus import random_set3_diagram
from finlim.diagram import Diagram, compute_limit
from finlim.errors import BudgetExceeded
from finlim.fileio import diagram_to_dict, load_diagram
from finlim.report import Report, skipped
from finlim.sets import SetMap, SetObj
from finlim.vectors import Field, VecObj

TWO, ONE = SetObj(2), SetObj(1)


def handcrafted_set3() -> dict:
    """Named small diagrams with known limit sizes."""
    swap, ident = SetMap(TWO, TWO, (1, 0)), SetMap.identity(TWO)
    return {
        "isolated": Diagram.build({"d1": TWO}, []),
        "swap-cycle": Diagram.build(
            {"d1": TWO, "d2": TWO},
            [("swap", "d1", "d2", swap), ("id", "d2", "d1", ident)],
        ),
        "constant-edge": Diagram.build(
            {"d1": TWO, "d2": TWO}, [("c", "d1", "d2", SetMap.constant(TWO, TWO, 0))]
        ),
        "point-loop": Diagram.build(
            {"p": ONE, "d": TWO}, [("id", "p", "p", SetMap.identity(ONE))]
        ),
        "clashing-constants": Diagram.build(
            {"a": ONE, "b": ONE, "d": TWO},
            [("ca", "a", "d", SetMap.constant(ONE, TWO, 0)),
             ("cb", "b", "d", SetMap.constant(ONE, TWO, 1))],
        ),
    }


def set3_corpus_check(count: int = 500, seed: int = 0, max_nodes: int = 6,
                      max_edges: int = 12, handcrafted: bool = True) -> Report:
    rep = Report("set3", "limits of diagrams of sets of size <= 2 have 0 or 2^k elements")
    rep.seed = seed
    sizes: Counter = Counter()
    cases = []
    if handcrafted:
        cases.extend((name, None, d) for name, d in handcrafted_set3().items())
    cases.extend((f"seed-{s}", s, random_set3_diagram(s, max_nodes, max_edges))
                 for s in range(seed, seed + count))
    expected = {"isolated": 2, "swap-cycle": 0, "constant-edge": 2, "point-loop": 2,
                "clashing-constants": 0}
    for name, s, d in cases:
        sub = density.verify_power_of_two(d)
        size = sub.metrics["brute_force_size"]
        sizes[size] += 1
        if name in expected and size != expected[name]:
            sub.fail(f"expected {expected[name]} families, found {size}")
        if not sub.passed:
            rep.fail(f"{name}: {sub.reason}", {"seed": s, "diagram": diagram_to_dict(d)})
    rep.metrics.update(count=count, handcrafted=len(expected) if handcrafted else 0,
                       size_histogram={str(k): v for k, v in sorted(sizes.items())})
    return rep


def set3_file_check(path: str) -> Report:
    return density.verify_power_of_two(load_diagram(path))


def limit_report(path: str) -> Report:
    d = load_diagram(path)
    lim = compute_limit(d)
    rep = Report("limit", f"limit of {path}")
    rep.metrics.update(category=d.category, nodes=len(d.nodes), edges=len(d.edges))
    if d.field is None:
        rep.metrics["carrier_size"] = lim.apex.size
        if lim.apex.size <= 64:
            rep.metrics["families"] = [list(f) for f in lim.families]
    else:
        rep.metrics.update(q=d.field.q, dimension=lim.apex.dim, carrier_size=lim.size,
                           basis=[[list(v) for v in f] for f in lim.families])
    return rep


def codensity_set_report(size: int, probe_max: int) -> Report:
    k, probes = SetObj(size), codensity.ProbeSet.sets(probe_max)
    value = codensity.codensity_value(k, probes)
    rep = Report("codensity", f"codensity value T(K) for |K| = {size}, probe sizes 1..{probe_max}")
    rep.notes.append(codensity.UNIT_NOTE)
    rep.metrics.update(k=size, probe_max=probe_max, comma_nodes=len(value.comma.diagram.nodes),
                       comma_edges=len(value.comma.diagram.edges), t_size=value.object.size,
                       unit_bijective=value.unit.is_iso())
    return rep


def codensity_vec_report(q: int, dim: int, probe_max: int) -> Report:
    x = VecObj(Field(q), dim)
    value, phi = codensity.double_dual_iso(x, probe_max)
    rep = Report("codensity", f"codensity value T(X) for X = F_{q}^{dim}, probe dims 0..{probe_max}")
    rep.notes.append(codensity.UNIT_NOTE)
    rep.metrics.update(q=q, dim=dim, probe_max=probe_max,
                       comma_nodes=len(value.comma.diagram.nodes), t_dim=value.object.dim,
                       iso_to_double_dual=phi is not None and phi.is_iso())
    return rep


def codensity_monad_set(size: int, probe_max: int) -> Report:
    return codensity.codensity_monad_check(SetObj(size), codensity.ProbeSet.sets(probe_max))


def codensity_monad_vec(q: int, dim: int, probe_max: int) -> Report:
    f = Field(q)
    return codensity.codensity_monad_check(VecObj(f, dim), codensity.ProbeSet.spaces(f, probe_max))


def _equalizer(size: int) -> Report:
    return density.equalizer_witness(size)[2]



def _codensity_set(size: int, probe_max: int = 3) -> Report:
    return codensity.compare_ultrafilter(SetObj(size), probe_max)


def _dd_monad(q: int, max_dim: int) -> Report:
    return finvec.dd_monad_check(Field(q), max_dim)


def _lemma42(q: int, dim: int) -> Report:
    return finvec.lemma42_check(Field(q), dim)


def _lemma45(q: int, max_dim: int, functor: str) -> Report:
    return finvec.lemma45_scan(Field(q), max_dim, functor)


def _prop43(q: int, n: int) -> Report:
    return finvec.prop43_check(Field(q), n)


def _codensity_vec(q: int, dim: int, probe_max: int) -> Report:
    return codensity.compare_double_dual(VecObj(Field(q), dim), probe_max)


def _codensity_vec_mult(q: int, dim: int, probe_max: int) -> Report:
    return codensity.compare_mult(VecObj(Field(q), dim), probe_max)


TASKS = {
    "equalizer": _equalizer,
    "prop38": density.verify_prop38,
    "set3": set3_corpus_check,
    "set3-file": set3_file_check,
    "galvin-horn": finset.galvin_horn_check,
    "partition-limit": finset.partition_limit_check,
    "ultrafilter-monad": finset.ultrafilter_monad_check,
    "codensity-set": _codensity_set,
    "codensity-set-monad": codensity_monad_set,
    "dd-monad": _dd_monad,
    "lemma42": _lemma42,
    "lemma45": _lemma45,
    "prop43": _prop43,
    "codensity-vec": _codensity_vec,
    "codensity-vec-mult": _codensity_vec_mult,
    "codensity-vec-monad": codensity_monad_vec,
    "codensity-value-set": codensity_set_report,
    "codensity-value-vec": codensity_vec_report,
    "limit": limit_report,
}


def full_plan() -> list[tuple]:
    plan = [("equalizer", {"size": m}) for m in (0, 1, 2)]
    plan += [("prop38", {"n": n}) for n in (3, 4, 5, 6)]
    plan += [("set3", {"count": 500, "seed": 0})]
    plan += [("galvin-horn", {"n": n}) for n in range(1, 6)]
    plan += [("partition-limit", {"n": n}) for n in range(1, 5)]
    plan += [("ultrafilter-monad", {"max_size": 4})]
    plan += [("codensity-set", {"size": k}) for k in range(1, 5)]
    plan += [("codensity-set-monad", {"size": k, "probe_max": 2}) for k in (1, 2)]
    plan += [("dd-monad", {"q": q, "max_dim": 2}) for q in (2, 3)]
    plan += [("lemma42", {"q": q, "dim": n}) for q, n in ((2, 1), (2, 2), (2, 3), (3, 1), (3, 2))]
    plan += [("lemma45", {"q": q, "max_dim": 2, "functor": fn}) for q in (2, 3) for fn in ("id", "dd")]
    plan += [("codensity-vec", {"q": q, "dim": n, "probe_max": n}) for q in (2, 3) for n in (1, 2)]
    plan += [("codensity-vec-mult", {"q": q, "dim": 1, "probe_max": 1}) for q in (2, 3)]
    plan += [("codensity-vec-monad", {"q": q, "dim": 1, "probe_max": 1}) for q in (2, 3)]
    plan += [("prop43", {"q": q, "n": n}) for q in (2, 3) for n in (2, 3, 4)]
    return plan


def run_task(task: tuple, strict: bool = False) -> tuple[Report, float]:
    name, kwargs = task
    start = time.perf_counter()
    try:
        rep = TASKS[name](**kwargs)
    except BudgetExceeded as exc:
        if strict:
            raise
        rep = skipped(name, f"{name} {kwargs}", f"budget exceeded: {exc}")
    return rep, time.perf_counter() - start


def _run_lenient(task):
    return run_task(task, strict=False)


def _run_strict(task):
    return run_task(task, strict=True)


def run_plan(plan: list[tuple], jobs: int = 1, strict: bool = False) -> list[tuple[Report, float]]:
    runner = _run_strict if strict else _run_lenient
    if jobs <= 1:
        return [runner(t) for t in plan]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(runner, plan))
