"""JSON diagram files.

A file names its category and lists nodes and edges::

    {"category": "finset",
     "nodes": [{"id": "a", "size": 2}, ...],
     "edges": [{"id": "e", "src": "a", "dst": "b", "table": [1, 0]}, ...]}

FinVec files add ``"field_q"``, give nodes a ``"dim"`` and edges a
``"matrix"`` (rows = dst dim, columns = src dim, residues mod q).
"""
from __future__ import annotations

import json
from pathlib import Path

from finlim.diagram import Diagram, ShapeGraph
from finlim.errors import DiagramError, FinlimError
from finlim.sets import SetMap, SetObj
from finlim.vectors import Field, LinMap, VecObj


class DiagramFileError(FinlimError, ValueError):
    pass


def _require(obj, key, where, kind=None):
    if not isinstance(obj, dict) or key not in obj:
        raise DiagramFileError(f"{where}: missing field {key!r}")
    value = obj[key]
    if kind is not None and (not isinstance(value, kind) or (kind is int and isinstance(value, bool))):
        raise DiagramFileError(f"{where}.{key}: expected {kind.__name__}, got {type(value).__name__}")
    return value


def diagram_from_dict(data) -> Diagram:
    category = _require(data, "category", "file", str)
    if category not in ("finset", "finvec"):
        raise DiagramFileError(f"file.category: unknown category {category!r}")
    field = None
    if category == "finvec":
        q = _require(data, "field_q", "file", int)
        try:
            field = Field(q)
        except DiagramError as exc:
            raise DiagramFileError(f"file.field_q: {exc}") from None
    nodes = _require(data, "nodes", "file", list)
    edges = _require(data, "edges", "file", list)

    objects = {}
    for i, node in enumerate(nodes):
        where = f"nodes[{i}]"
        nid = _require(node, "id", where, str)
        if nid in objects:
            raise DiagramFileError(f"{where}.id: duplicate node id {nid!r}")
        if field is None:
            size = _require(node, "size", where, int)
            if size < 0:
                raise DiagramFileError(f"{where}.size: must be >= 0")
            objects[nid] = SetObj(size)
        else:
            dim = _require(node, "dim", where, int)
            if dim < 0:
                raise DiagramFileError(f"{where}.dim: must be >= 0")
            objects[nid] = VecObj(field, dim)

    triples, morphisms = [], {}
    for i, edge in enumerate(edges):
        where = f"edges[{i}]"
        eid = _require(edge, "id", where, str)
        if eid in morphisms:
            raise DiagramFileError(f"{where}.id: duplicate edge id {eid!r}")
        src = _require(edge, "src", where, str)
        dst = _require(edge, "dst", where, str)
        for end, name in (("src", src), ("dst", dst)):
            if name not in objects:
                raise DiagramFileError(f"edge {eid!r}: {end} {name!r} is not a node")
        try:
            if field is None:
                table = _require(edge, "table", where, list)
                morphisms[eid] = SetMap(objects[src], objects[dst], tuple(_ints(table, where)))
            else:
                matrix = _require(edge, "matrix", where, list)
                rows = tuple(tuple(_ints(r, where)) for r in matrix)
                if any(not 0 <= v < field.q for r in rows for v in r):
                    raise DiagramError(f"entries must lie in 0..{field.q - 1}")
                morphisms[eid] = LinMap(objects[src], objects[dst], rows)
        except DiagramError as exc:
            raise DiagramFileError(f"edge {eid!r}: {exc}") from None
        triples.append((eid, src, dst))
    return Diagram(ShapeGraph(tuple(objects), tuple(triples)), objects, morphisms, field)


def _ints(values, where):
    if not isinstance(values, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in values):
        raise DiagramFileError(f"{where}: expected a list of integers")
    return values


def diagram_to_dict(d: Diagram) -> dict:
    out: dict = {"category": d.category}
    if d.field is not None:
        out["field_q"] = d.field.q
    key = "size" if d.field is None else "dim"
    out["nodes"] = [
        {"id": str(n), key: getattr(d.objects[n], key)} for n in d.nodes
    ]
    out["edges"] = []
    for eid, src, dst in d.edges:
        f = d.morphisms[eid]
        entry = {"id": str(eid), "src": str(src), "dst": str(dst)}
        if d.field is None:
            entry["table"] = list(f.table)
        else:
            entry["matrix"] = [list(r) for r in f.matrix]
        out["edges"].append(entry)
    return out


def dumps_diagram(d: Diagram) -> str:
    return json.dumps(diagram_to_dict(d), indent=2) + "\n"


def loads_diagram(text: str) -> Diagram:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DiagramFileError(f"parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return diagram_from_dict(data)


def load_diagram(path) -> Diagram:
    return loads_diagram(Path(path).read_text(encoding="utf-8"))


def save_diagram(d: Diagram, path) -> None:
    Path(path).write_text(dumps_diagram(d), encoding="utf-8")
