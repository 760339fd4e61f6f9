"""Seeded generators for random test diagrams."""
from __future__ import annotations

import random

from finlim.diagram import Diagram
from finlim.sets import SetMap, SetObj

EMPTY_NODE_RATE = 0.05


def random_set3_diagram(seed: int, max_nodes: int = 6, max_edges: int = 12) -> Diagram:
    """A random FinSet diagram with node sizes in {0, 1, 2}.

    Node count is uniform in 1..max_nodes, sizes uniform in {1, 2} except for
    a 5% chance of an empty node, edge count uniform in 0..max_edges, and
    endpoints and tables uniform.  An edge drawn from a nonempty node into
    an empty one has no possible table and is dropped.
    """
    if max_nodes < 1 or max_edges < 0:
        raise ValueError("max_nodes must be positive and max_edges non-negative")
    rng = random.Random(seed)
    n_nodes = rng.randint(1, max_nodes)
    sizes = [0 if rng.random() < EMPTY_NODE_RATE else rng.choice((1, 2)) for _ in range(n_nodes)]
    objects = {f"n{i}": SetObj(s) for i, s in enumerate(sizes)}
    edges = []
    for j in range(rng.randint(0, max_edges)):
        src, dst = rng.randrange(n_nodes), rng.randrange(n_nodes)
        if sizes[dst] == 0 and sizes[src] > 0:
            continue
        table = tuple(rng.randrange(sizes[dst]) for _ in range(sizes[src]))
        edges.append((f"e{j}", f"n{src}", f"n{dst}", SetMap(SetObj(sizes[src]), SetObj(sizes[dst]), table)))
    return Diagram.build(objects, edges)
