"""Marked metric graphs: points of Outer Space and (with zero-length edges
allowed) of its simplicial completion.

Directed edges are signed integers: ``+(i+1)`` traverses edge ``i`` from tail
to head and ``-(i+1)`` backwards, so reversal is negation, as for letters.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from osx import words as W
from osx.words import EndoMap, Word

Path = tuple[int, ...]


class GraphError(ValueError):
    pass


class NotAForest(GraphError):
    pass


@dataclass(frozen=True)
class Edge:
    id: str
    tail: str
    head: str
    length: Fraction


@dataclass(frozen=True)
class MetricGraph:
    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]

    def __post_init__(self) -> None:
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise GraphError("duplicate vertex id")
        ids = [e.id for e in self.edges]
        if len(set(ids)) != len(ids):
            raise GraphError("duplicate edge id")
        for e in self.edges:
            if e.tail not in vs or e.head not in vs:
                raise GraphError(f"edge {e.id} has an unknown endpoint")
            if e.length < 0:
                raise GraphError(f"edge {e.id} has negative length")

    @cached_property
    def edge_index(self) -> dict[str, int]:
        return {e.id: i for i, e in enumerate(self.edges)}

    def tail(self, d: int) -> str:
        e = self.edges[abs(d) - 1]
        return e.tail if d > 0 else e.head

    def head(self, d: int) -> str:
        e = self.edges[abs(d) - 1]
        return e.head if d > 0 else e.tail

    def length(self, d: int) -> Fraction:
        return self.edges[abs(d) - 1].length

    def path_length(self, p: Iterable[int]) -> Fraction:
        return sum((self.edges[abs(d) - 1].length for d in p), Fraction(0))

    def directed(self, edge_id: str, forward: bool = True) -> int:
        d = self.edge_index[edge_id] + 1
        return d if forward else -d

    @cached_property
    def out_darts(self) -> dict[str, tuple[int, ...]]:
        """Directed edges leaving each vertex (a loop contributes both signs)."""
        out: dict[str, list[int]] = {v: [] for v in self.vertices}
        for i, e in enumerate(self.edges):
            out[e.tail].append(i + 1)
            out[e.head].append(-(i + 1))
        return {v: tuple(ds) for v, ds in out.items()}

    def valence(self, v: str) -> int:
        return len(self.out_darts[v])

    @property
    def volume(self) -> Fraction:
        return sum((e.length for e in self.edges), Fraction(0))

    def is_connected(self) -> bool:
        if not self.vertices:
            return False
        seen = {self.vertices[0]}
        stack = [self.vertices[0]]
        while stack:
            v = stack.pop()
            for d in self.out_darts[v]:
                u = self.head(d)
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        return len(seen) == len(self.vertices)

    @property
    def betti(self) -> int:
        return len(self.edges) - len(self.vertices) + 1

    def is_path(self, p: Sequence[int]) -> bool:
        return all(self.head(p[i]) == self.tail(p[i + 1]) for i in range(len(p) - 1))

    def with_lengths(self, lengths: Mapping[str, Fraction]) -> MetricGraph:
        return MetricGraph(
            self.vertices,
            tuple(Edge(e.id, e.tail, e.head, Fraction(lengths.get(e.id, e.length))) for e in self.edges),
        )


def tighten_path(p: Sequence[int], cyclic: bool = False) -> Path:
    r = W.reduce(p)
    if not cyclic:
        return r
    k = 0
    while k < len(r) - 1 - k and r[k] == -r[len(r) - 1 - k]:
        k += 1
    return r[k:len(r) - k]


def spanning_tree(g: MetricGraph, root: str, prefer: Iterable[str] = ()) -> tuple[frozenset[int], dict[str, Path]]:
    """BFS spanning tree.  Edges listed in ``prefer`` (ids) are used first.

    Returns (tree edge indices, tree path from ``root`` to every vertex).
    """
    prefer_idx = {g.edge_index[e] for e in prefer}
    paths: dict[str, Path] = {root: ()}
    tree: set[int] = set()

    def grow(allowed) -> None:
        queue = deque(paths)
        while queue:
            v = queue.popleft()
            for d in g.out_darts[v]:
                i = abs(d) - 1
                if not allowed(i):
                    continue
                u = g.head(d)
                if u not in paths:
                    paths[u] = paths[v] + (d,)
                    tree.add(i)
                    queue.append(u)

    grow(lambda i: i in prefer_idx)
    grow(lambda i: True)
    if len(paths) != len(g.vertices):
        raise GraphError("graph is not connected")
    return frozenset(tree), paths


@dataclass(frozen=True)
class InverseMarking:
    """Homotopy inverse of a marking: each non-tree edge ``i`` maps to the
    word of the loop (tree path) e_i (tree path back) at the base vertex."""

    tree: frozenset[int]
    words: Mapping[int, Word]


@dataclass(frozen=True)
class MarkedGraph:
    graph: MetricGraph
    images: tuple[Path, ...]
    base: str
    supplied_inverse: InverseMarking | None = field(default=None, compare=False)

    @property
    def rank(self) -> int:
        return len(self.images)

    # -- inverse marking ------------------------------------------------

    @cached_property
    def _tree(self) -> tuple[frozenset[int], dict[str, Path]]:
        if self.supplied_inverse is not None:
            tree = self.supplied_inverse.tree
            _, paths = _tree_paths(self.graph, self.base, tree)
            return tree, paths
        return spanning_tree(self.graph, self.base)

    def read_nontree(self, p: Sequence[int], tree: frozenset[int] | None = None) -> Word:
        """Non-tree edge traversals of ``p`` as a word over edge indices + 1."""
        tree = self._tree[0] if tree is None else tree
        return tuple(d for d in p if abs(d) - 1 not in tree)

    @cached_property
    def inverse(self) -> InverseMarking:
        """The inverse marking, supplied or computed by Nielsen reduction."""
        if self.supplied_inverse is not None:
            return self.supplied_inverse
        tree, _ = self._tree
        nontree = sorted(i for i in range(len(self.graph.edges)) if i not in tree)
        if len(nontree) != self.rank:
            raise GraphError("rank of the graph differs from the marking rank")
        slot = {i: k + 1 for k, i in enumerate(nontree)}
        m = EndoMap(tuple(
            W.reduce(tuple(slot[abs(d) - 1] * (1 if d > 0 else -1) for d in self.read_nontree(img)))
            for img in self.images
        ))
        sigma = W.invert_automorphism(m)
        return InverseMarking(tree, {i: sigma.images[slot[i] - 1] for i in nontree})

    def element(self, p: Sequence[int]) -> Word:
        """Word of a closed path at the base vertex."""
        words = self.inverse.words
        tree = self.inverse.tree
        out: list[int] = []
        for d in p:
            i = abs(d) - 1
            if i in tree:
                continue
            out.extend(words[i] if d > 0 else W.inverse(words[i]))
        return W.reduce(out)

    def loop_class(self, p: Sequence[int]) -> Word:
        """Canonical cyclic word of a closed loop anywhere in the graph."""
        return W.cyclic_word(self.element(p))

    # -- paths ------------------------------------------------------------

    def image_path(self, w: Sequence[int]) -> Path:
        out: list[int] = []
        for x in w:
            img = self.images[abs(x) - 1]
            out.extend(img if x > 0 else W.inverse(img))
        return W.reduce(out)

    def loop(self, w: Sequence[int]) -> Path:
        """Cyclically tightened loop representing the conjugacy class of ``w``."""
        return tighten_path(self.image_path(w), cyclic=True)

    def with_graph(self, graph: MetricGraph) -> MarkedGraph:
        return MarkedGraph(graph, self.images, self.base, self.supplied_inverse)

    @property
    def lengths(self) -> dict[str, Fraction]:
        return {e.id: e.length for e in self.graph.edges}


def _tree_paths(g: MetricGraph, root: str, tree: frozenset[int]) -> tuple[frozenset[int], dict[str, Path]]:
    paths: dict[str, Path] = {root: ()}
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for d in g.out_darts[v]:
            if abs(d) - 1 in tree:
                u = g.head(d)
                if u not in paths:
                    paths[u] = paths[v] + (d,)
                    queue.append(u)
    if len(paths) != len(g.vertices) or len(tree) != len(g.vertices) - 1:
        raise GraphError("inverse marking tree is not a spanning tree")
    return tree, paths


# -- validation ---------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    kind: str
    detail: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}

    def __bool__(self) -> bool:
        return self.ok


def common_conjugator(ws: Sequence[Word]) -> Word | None:
    """u with ``ws[i] = u x_{i+1} u^-1`` for every i, or None."""
    n = len(ws)
    w1 = W.reduce(ws[0])
    k = (len(w1) - 1) // 2
    if len(w1) % 2 == 0 or w1[k] != 1 or W.reduce(w1[:k] + w1[k + 1:]) != ():
        return None
    u0 = w1[:k]
    if n == 1:
        return u0
    # the remaining freedom is u = u0 a^m
    v = W.reduce(W.inverse(u0) + tuple(ws[1]) + u0)
    m = 0
    while v and v[0] == 1 and v[-1] == -1:
        v, m = v[1:-1], m + 1
    while v and v[0] == -1 and v[-1] == 1:
        v, m = v[1:-1], m - 1
    u = W.reduce(u0 + W.power((1,), m))
    for i, w in enumerate(ws):
        if W.reduce(W.inverse(u) + tuple(w) + u) != (i + 1,):
            return None
    return u


def _marking_report(x: MarkedGraph) -> list[Violation]:
    out: list[Violation] = []
    g = x.graph
    for i, img in enumerate(x.images):
        if not g.is_path(img) or (img and (g.tail(img[0]) != x.base or g.head(img[-1]) != x.base)):
            out.append(Violation("Marking", f"image of {W.format_word((i + 1,))} is not a closed path at {x.base}"))
    if out:
        return out
    if g.betti != x.rank:
        return [Violation("Rank", f"graph rank {g.betti} but marking rank {x.rank}")]
    try:
        inv = x.inverse
    except (W.NotAnAutomorphism, GraphError) as exc:
        return [Violation("Marking", f"marking is not a homotopy equivalence: {exc}")]
    if x.supplied_inverse is not None:
        if set(inv.words) != {i for i in range(len(g.edges)) if i not in inv.tree}:
            return [Violation("Marking", "inverse marking does not cover the non-tree edges")]
        back = [x.element(img) for img in x.images]
        if common_conjugator(back) is None:
            out.append(Violation("Marking", "inverse marking composed with the marking is not an inner automorphism"))
    return out


def validate(x: MarkedGraph) -> ValidationReport:
    """Check the conditions for a point of Outer Space."""
    g = x.graph
    out: list[Violation] = []
    if g.volume != 1:
        out.append(Violation("UnitVolume", f"total volume is {g.volume}"))
    for e in g.edges:
        if e.length <= 0:
            out.append(Violation("Positivity", f"edge {e.id} has length {e.length}"))
    for v in g.vertices:
        if g.valence(v) < 3:
            out.append(Violation("Valence", f"vertex {v} has valence {g.valence(v)}"))
    if not g.is_connected():
        out.append(Violation("Connectivity", "graph is not connected"))
        return ValidationReport(tuple(out))
    if x.base not in g.vertices:
        out.append(Violation("Marking", f"base vertex {x.base} missing"))
        return ValidationReport(tuple(out))
    out.extend(_marking_report(x))
    return ValidationReport(tuple(out))


# -- lengths ----------------------------------------------------------------


def tighten(x: MarkedGraph, p: Sequence[int], cyclic: bool = False) -> Path:
    return tighten_path(p, cyclic)


def translation_length(x: MarkedGraph, w: Sequence[int]) -> Fraction:
    return x.graph.path_length(x.loop(w))


# -- candidates -----------------------------------------------------------------


@dataclass(frozen=True)
class Candidate:
    kind: str
    loop: Path
    word: Word

    def __str__(self) -> str:
        return f"{self.kind}:{W.format_word(self.word)}"


def class_up_to_inverse(w: Sequence[int]) -> Word:
    c = W.cyclic_word(w)
    ci = W.cyclic_word(W.inverse(c))
    return min(c, ci, key=W.word_key)


def simple_cycles(g: MetricGraph, allowed: frozenset[int] | None = None) -> list[Path]:
    """Embedded cycles, one per (rotation, reversal) class."""
    seen: set[Path] = set()
    out: list[Path] = []
    edges_ok = (lambda i: True) if allowed is None else (lambda i: i in allowed)

    def canon(c: Path) -> Path:
        forms = []
        for cc in (c, W.inverse(c)):
            for k in range(len(cc)):
                forms.append(cc[k:] + cc[:k])
        return min(forms)

    for start in g.vertices:
        stack: list[tuple[str, Path, frozenset[str]]] = [(start, (), frozenset([start]))]
        while stack:
            v, p, visited = stack.pop()
            for d in g.out_darts[v]:
                i = abs(d) - 1
                if not edges_ok(i) or (p and abs(p[-1]) - 1 == i):
                    continue
                u = g.head(d)
                if u == start:
                    c = canon(p + (d,))
                    if c not in seen:
                        seen.add(c)
                        out.append(c)
                elif u not in visited:
                    stack.append((u, p + (d,), visited | {u}))
    out.sort(key=lambda c: (len(c), c))
    return out


def rotate_to(g: MetricGraph, c: Path, v: str) -> Path:
    for k in range(len(c)):
        if g.tail(c[k]) == v:
            return c[k:] + c[:k]
    raise GraphError(f"cycle does not pass through {v}")


def cycle_vertices(g: MetricGraph, c: Path) -> set[str]:
    return {g.tail(d) for d in c}


def embedded_paths(g: MetricGraph, a: str, b: str, avoid: set[str], allowed: frozenset[int] | None = None) -> list[Path]:
    """Embedded edge paths from a to b (a != b) whose interior avoids ``avoid``."""
    out: list[Path] = []
    stack: list[tuple[str, Path, frozenset[str]]] = [(a, (), frozenset([a]))]
    while stack:
        v, p, visited = stack.pop()
        for d in g.out_darts[v]:
            i = abs(d) - 1
            if allowed is not None and i not in allowed:
                continue
            u = g.head(d)
            if u == b:
                out.append(p + (d,))
            elif u not in visited and u not in avoid:
                stack.append((u, p + (d,), visited | {u}))
    return out


def candidate_loops(g: MetricGraph, allowed: frozenset[int] | None = None) -> list[tuple[str, Path]]:
    """Embedded circles, figure eights and barbells of ``g`` (as loops)."""
    cycles = simple_cycles(g, allowed)
    verts = [cycle_vertices(g, c) for c in cycles]
    loops: list[tuple[str, Path]] = [("embedded_circle", c) for c in cycles]
    for i in range(len(cycles)):
        for j in range(i + 1, len(cycles)):
            shared = verts[i] & verts[j]
            if len(shared) == 1:
                (v,) = shared
                c1 = rotate_to(g, cycles[i], v)
                c2 = rotate_to(g, cycles[j], v)
                loops.append(("figure_eight", c1 + c2))
                loops.append(("figure_eight", c1 + W.inverse(c2)))
            elif not shared:
                for v1 in sorted(verts[i]):
                    for v2 in sorted(verts[j]):
                        for bar in embedded_paths(g, v1, v2, (verts[i] | verts[j]) - {v1, v2}, allowed):
                            c1 = rotate_to(g, cycles[i], v1)
                            c2 = rotate_to(g, cycles[j], v2)
                            loops.append(("barbell", c1 + bar + c2 + W.inverse(bar)))
                            loops.append(("barbell", c1 + bar + W.inverse(c2) + W.inverse(bar)))
    return loops


def candidates(x: MarkedGraph) -> list[Candidate]:
    """Candidate loops, one per conjugacy class up to inversion."""
    out: dict[Word, Candidate] = {}
    for kind, loop in candidate_loops(x.graph):
        word = class_up_to_inverse(x.element(loop))
        if word not in out:
            out[word] = Candidate(kind, loop, word)
    return sorted(out.values(), key=lambda c: W.word_key(c.word))


# -- collapses and the action -------------------------------------------------


def collapse_forest(x: MarkedGraph, forest: Iterable[str], rescale: bool = True) -> MarkedGraph:
    """Collapse each edge of ``forest`` and renormalise the volume to 1."""
    g = x.graph
    idx = {g.edge_index[e] for e in forest}
    if not idx:
        return x
    parent = {v: v for v in g.vertices}

    def find(v: str) -> str:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for i in sorted(idx):
        e = g.edges[i]
        a, b = find(e.tail), find(e.head)
        if a == b:
            raise NotAForest(f"edge {e.id} closes a cycle")
        parent[b] = a
    lost = sum((g.edges[i].length for i in idx), Fraction(0))
    total = g.volume
    if rescale and lost >= total:
        raise NotAForest("forest carries the whole volume")
    scale = total / (total - lost) if rescale else Fraction(1)
    keep = [i for i in range(len(g.edges)) if i not in idx]
    new_index = {i: k + 1 for k, i in enumerate(keep)}
    verts = tuple(v for v in g.vertices if find(v) == v)
    edges = tuple(Edge(g.edges[i].id, find(g.edges[i].tail), find(g.edges[i].head), g.edges[i].length * scale) for i in keep)

    def push(p: Path) -> Path:
        return W.reduce(tuple(new_index[abs(d) - 1] * (1 if d > 0 else -1) for d in p if abs(d) - 1 not in idx))

    return MarkedGraph(MetricGraph(verts, edges), tuple(push(p) for p in x.images), find(x.base))


def act(x: MarkedGraph, phi: EndoMap) -> MarkedGraph:
    """Right action ``x . phi``: precompose the marking with phi."""
    inv = W.invert_automorphism(phi)
    images = tuple(x.image_path(img) for img in phi.images)
    old = x.inverse
    words = {i: W.apply_endo(inv, w) for i, w in old.words.items()}
    return MarkedGraph(x.graph, images, x.base, InverseMarking(old.tree, words))


def spanning_tree_basis(x: MarkedGraph, tree: Iterable[str]) -> dict[str, Word]:
    """Words of the loops (tree path) e (tree path back) for non-tree edges e."""
    g = x.graph
    tidx = frozenset(g.edge_index[e] for e in tree)
    _, paths = _tree_paths(g, x.base, tidx)
    out = {}
    for i, e in enumerate(g.edges):
        if i in tidx:
            continue
        loop = paths[e.tail] + (i + 1,) + W.inverse(paths[e.head])
        out[e.id] = x.element(W.reduce(loop))
    return out


# -- constructors ---------------------------------------------------------------


def rose(lengths: Sequence[Fraction | int | str]) -> MarkedGraph:
    """Rose with the identity marking; petal i is edge ``e{i+1}``."""
    edges = tuple(Edge(f"e{i + 1}", "v", "v", Fraction(l)) for i, l in enumerate(lengths))
    return MarkedGraph(MetricGraph(("v",), edges), tuple((i + 1,) for i in range(len(lengths))), "v")


def theta(lengths: Sequence[Fraction | int | str]) -> MarkedGraph:
    """Theta graph u => w with edges e1, e2, e3; a = e1 e2^-1, b = e3 e2^-1.

    Collapsing e2 gives the identity-marked rank-2 rose (a on e1, b on e3).
    """
    edges = tuple(Edge(f"e{i + 1}", "u", "w", Fraction(l)) for i, l in enumerate(lengths))
    return MarkedGraph(MetricGraph(("u", "w"), edges), ((1, -2), (3, -2)), "u")


def barbell(loop_a: Fraction | int | str, bar: Fraction | int | str, loop_b: Fraction | int | str) -> MarkedGraph:
    """Rank-2 barbell: a-loop at u, bar u -> w, b-loop at w; base u."""
    edges = (
        Edge("ea", "u", "u", Fraction(loop_a)),
        Edge("bar", "u", "w", Fraction(bar)),
        Edge("eb", "w", "w", Fraction(loop_b)),
    )
    return MarkedGraph(MetricGraph(("u", "w"), edges), ((1,), (2, 3, -2)), "u")


def relabel(x: MarkedGraph, vertex_map: Mapping[str, str], edge_map: Mapping[str, str]) -> MarkedGraph:
    g = x.graph
    edges = tuple(Edge(edge_map.get(e.id, e.id), vertex_map.get(e.tail, e.tail), vertex_map.get(e.head, e.head), e.length) for e in g.edges)
    verts = tuple(vertex_map.get(v, v) for v in g.vertices)
    return MarkedGraph(MetricGraph(verts, edges), x.images, vertex_map.get(x.base, x.base))


def blow_up(x: MarkedGraph, v: str, side: Iterable[int], new_vertex: str, new_edge: str, length: Fraction = Fraction(0)) -> MarkedGraph:
    """Pull the darts ``side`` leaving ``v`` onto a new vertex joined to v by a new edge.

    The marking is pushed through: paths crossing v between the two sides
    now traverse the new edge.  The base vertex stays at v.
    """
    g = x.graph
    side = set(side)
    n = len(g.edges)
    f = n + 1
    edges = list(g.edges)
    for i, e in enumerate(edges):
        t, h = e.tail, e.head
        if e.tail == v and (i + 1) in side:
            t = new_vertex
        if e.head == v and -(i + 1) in side:
            h = new_vertex
        edges[i] = Edge(e.id, t, h, e.length)
    edges.append(Edge(new_edge, v, new_vertex, Fraction(length)))
    ng = MetricGraph(g.vertices + (new_vertex,), tuple(edges))

    def on_far(d_out: int) -> bool:
        return g.tail(d_out) == v and d_out in side

    def push(p: Path) -> Path:
        out: list[int] = []
        if p and on_far(p[0]):
            out.append(f)
        for k, d in enumerate(p):
            out.append(d)
            if g.head(d) == v:
                far_in = on_far(-d)
                if k + 1 < len(p):
                    far_out = on_far(p[k + 1])
                else:
                    far_out = False  # base is on the near side
                if far_in and not far_out:
                    out.append(-f)
                elif far_out and not far_in:
                    out.append(f)
        return W.reduce(out)

    return MarkedGraph(ng, tuple(push(p) for p in x.images), x.base)
