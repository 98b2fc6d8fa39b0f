"""JSON encoding of marked graphs and completion points.

Rationals are strings ``"p/q"`` in lowest terms (``"1"`` and ``"0"`` for
integers).  Marking images are signed edge-id paths such as ``"e1,-e2"``.
"""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path as FsPath
from typing import Any

from osx import words as W
from osx.marked_graph import Edge, InverseMarking, MarkedGraph, MetricGraph


class SchemaError(ValueError):
    """Input that does not follow the JSON layout."""


def rational(text: Any) -> Fraction:
    if isinstance(text, bool) or not isinstance(text, (str, int)):
        raise SchemaError(f"rational must be a string 'p/q', got {text!r}")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"bad rational {text!r}") from exc


def format_rational(q: Fraction) -> str:
    return str(Fraction(q))


def _letter(i: int) -> str:
    return W.format_word((i,))


def parse_path(text: str, index: dict[str, int]) -> tuple[int, ...]:
    out = []
    for tok in (t.strip() for t in text.split(",")):
        if not tok:
            continue
        sign = -1 if tok.startswith("-") else 1
        name = tok.lstrip("-+")
        if name not in index:
            raise SchemaError(f"unknown edge {name!r} in path {text!r}")
        out.append(sign * (index[name] + 1))
    return tuple(out)


def format_path(p: tuple[int, ...], g: MetricGraph) -> str:
    return ",".join(("-" if d < 0 else "") + g.edges[abs(d) - 1].id for d in p)


def _require(obj: dict, key: str, kind: type) -> Any:
    if key not in obj:
        raise SchemaError(f"missing field {key!r}")
    val = obj[key]
    if not isinstance(val, kind):
        raise SchemaError(f"field {key!r} has the wrong type")
    return val


def _check_tree(g: MetricGraph, tree: frozenset[int]) -> None:
    if len(tree) != len(g.vertices) - 1:
        raise SchemaError("inverse_marking tree is not a spanning tree")
    parent = {v: v for v in g.vertices}

    def find(v: str) -> str:
        while parent[v] != v:
            v = parent[v]
        return v

    for i in tree:
        a, b = find(g.edges[i].tail), find(g.edges[i].head)
        if a == b:
            raise SchemaError("inverse_marking tree contains a cycle")
        parent[a] = b


def from_dict(obj: Any) -> MarkedGraph:
    if not isinstance(obj, dict):
        raise SchemaError("a point must be a JSON object")
    rank = _require(obj, "rank", int)
    if rank < 1 or rank > 26:
        raise SchemaError(f"rank {rank} out of range")
    vertices = _require(obj, "vertices", list)
    if not all(isinstance(v, str) for v in vertices) or len(set(vertices)) != len(vertices):
        raise SchemaError("vertices must be distinct strings")
    edges = []
    for e in _require(obj, "edges", list):
        if not isinstance(e, dict):
            raise SchemaError("edges must be objects")
        eid, a, b = (_require(e, k, str) for k in ("id", "from", "to"))
        if a not in vertices or b not in vertices:
            raise SchemaError(f"edge {eid!r} has an unknown endpoint")
        edges.append(Edge(eid, a, b, rational(_require(e, "length", (str, int)))))
    if len({e.id for e in edges}) != len(edges):
        raise SchemaError("edge ids must be distinct")
    try:
        g = MetricGraph(tuple(vertices), tuple(edges))
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc
    index = g.edge_index
    marking = _require(obj, "marking", dict)
    letters = [_letter(i) for i in range(1, rank + 1)]
    if set(marking) != set(letters):
        raise SchemaError(f"marking must give images of exactly {','.join(letters)}")
    images = tuple(parse_path(_require(marking, c, str), index) for c in letters)
    base = _require(obj, "base_vertex", str)
    if base not in vertices:
        raise SchemaError(f"base vertex {base!r} is not a vertex")
    inv = None
    if obj.get("inverse_marking") is not None:
        im = _require(obj, "inverse_marking", dict)
        tree_ids = _require(im, "tree", list)
        if not all(isinstance(t, str) and t in index for t in tree_ids):
            raise SchemaError("inverse_marking tree names unknown edges")
        tree = frozenset(index[t] for t in tree_ids)
        _check_tree(g, tree)
        words = {}
        for eid, text in _require(im, "words", dict).items():
            if eid not in index or not isinstance(text, str):
                raise SchemaError(f"bad inverse_marking entry {eid!r}")
            try:
                words[index[eid]] = W.parse_word(text, rank)
            except W.WordSyntaxError as exc:
                raise SchemaError(str(exc)) from exc
        inv = InverseMarking(tree, words)
    return MarkedGraph(g, images, base, inv)


def to_dict(x: MarkedGraph, with_inverse: bool = True) -> dict:
    g = x.graph
    out: dict[str, Any] = {
        "rank": x.rank,
        "vertices": list(g.vertices),
        "edges": [{"id": e.id, "from": e.tail, "to": e.head, "length": format_rational(e.length)} for e in g.edges],
        "marking": {_letter(i + 1): format_path(img, g) for i, img in enumerate(x.images)},
        "base_vertex": x.base,
    }
    if with_inverse:
        inv = x.inverse
        out["inverse_marking"] = {
            "tree": [g.edges[i].id for i in sorted(inv.tree)],
            "words": {g.edges[i].id: W.format_word(w) for i, w in sorted(inv.words.items())},
        }
    return out


def loads(text: str) -> MarkedGraph:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from exc
    return from_dict(obj)


def dumps(x: MarkedGraph, with_inverse: bool = True) -> str:
    return json.dumps(to_dict(x, with_inverse), sort_keys=True, indent=2)


def load(path: str | FsPath) -> MarkedGraph:
    try:
        text = FsPath(path).read_text()
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc
    return loads(text)


def dump(x: MarkedGraph, path: str | FsPath, with_inverse: bool = True) -> None:
    FsPath(path).write_text(dumps(x, with_inverse) + "\n")
