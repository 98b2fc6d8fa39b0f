"""Simplicial points of the metric completion of Outer Space.

A completion point is a marked graph whose edge lengths may vanish.  The
zero-length subgraph Z encodes the vertex groups: collapsing each component
of Z gives the quotient graph of groups.  Translation lengths are lengths of
cyclically tightened loops counted with the (possibly zero) edge lengths.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from osx import words as W
from osx.marked_graph import (
    Edge,
    MarkedGraph,
    MetricGraph,
    Path,
    ValidationReport,
    Violation,
    _marking_report,
    candidate_loops,
    class_up_to_inverse,
    cycle_vertices,
    embedded_paths,
    rotate_to,
    simple_cycles,
    spanning_tree_basis,
    translation_length,
)
from osx.metric import INFINITE, DistanceResult
from osx.words import Word

CompletionPoint = MarkedGraph


class ScheduleNotDecreasing(ValueError):
    pass


class InvalidPoint(ValueError):
    def __init__(self, report: ValidationReport):
        super().__init__("; ".join(f"{v.kind}: {v.detail}" for v in report.violations))
        self.report = report


# -- structure ------------------------------------------------------------------


def zero_edges(T: CompletionPoint) -> frozenset[int]:
    return frozenset(i for i, e in enumerate(T.graph.edges) if e.length == 0)


@dataclass(frozen=True)
class GoGVertex:
    id: str
    members: tuple[str, ...]
    group: tuple[Word, ...]  # generators; () for the trivial group


@dataclass(frozen=True)
class GoGView:
    """Quotient graph of groups of a completion point.

    ``quotient`` has the positive-length edges of the point (same ids and
    lengths); its vertices are the components of Z, named by their first
    member.  Every vertex group is a subgroup of F_n written with respect to
    one fixed spanning tree of the whole graph that extends a spanning forest
    of Z, so group elements can be spliced between edge words directly.
    """

    quotient: MetricGraph
    vertices: tuple[GoGVertex, ...]
    component: Mapping[str, str]
    edge_words: Mapping[str, Word]  # element contributed by each positive edge

    def vertex(self, vid: str) -> GoGVertex:
        return next(v for v in self.vertices if v.id == vid)

    def path_word(self, p: Sequence[int]) -> Word:
        out: list[int] = []
        for d in p:
            w = self.edge_words[self.quotient.edges[abs(d) - 1].id]
            out.extend(w if d > 0 else W.inverse(w))
        return W.reduce(out)

    @property
    def nontrivial(self) -> list[GoGVertex]:
        return [v for v in self.vertices if v.group]


def _components(g: MetricGraph, zero: frozenset[int]) -> tuple[dict[str, str], list[int]]:
    """Component representative of each vertex under Z, plus a spanning forest of Z."""
    parent = {v: v for v in g.vertices}

    def find(v: str) -> str:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    forest = []
    for i in sorted(zero):
        e = g.edges[i]
        a, b = find(e.tail), find(e.head)
        if a != b:
            parent[b] = a
            forest.append(i)
    order = {v: k for k, v in enumerate(g.vertices)}
    groups: dict[str, list[str]] = {}
    for v in g.vertices:
        groups.setdefault(find(v), []).append(v)
    rep = {}
    for members in groups.values():
        first = min(members, key=order.__getitem__)
        for v in members:
            rep[v] = first
    return rep, forest


def collapse_zero(T: CompletionPoint) -> GoGView:
    g = T.graph
    zero = zero_edges(T)
    rep, forest = _components(g, zero)
    # spanning tree: the Z-forest first, then positive edges
    tree = set(forest)
    roots = {r: r for r in set(rep.values())}

    def find(v: str) -> str:
        while roots[v] != v:
            roots[v] = roots[roots[v]]
            v = roots[v]
        return v

    for i, e in enumerate(g.edges):
        if i in zero:
            continue
        a, b = find(rep[e.tail]), find(rep[e.head])
        if a != b:
            roots[b] = a
            tree.add(i)
    basis = spanning_tree_basis(T, [g.edges[i].id for i in sorted(tree)])
    tree_ids = {g.edges[i].id for i in tree}
    members: dict[str, list[str]] = {}
    for v in g.vertices:
        members.setdefault(rep[v], []).append(v)
    gens: dict[str, list[Word]] = {r: [] for r in members}
    for i in sorted(zero):
        e = g.edges[i]
        if e.id not in tree_ids:
            gens[rep[e.tail]].append(basis[e.id])
    verts = tuple(GoGVertex(r, tuple(members[r]), tuple(gens[r])) for r in members)
    q_edges = tuple(Edge(e.id, rep[e.tail], rep[e.head], e.length) for i, e in enumerate(g.edges) if i not in zero)
    quotient = MetricGraph(tuple(members), q_edges)
    edge_words = {e.id: basis.get(e.id, ()) for i, e in enumerate(g.edges) if i not in zero}
    return GoGView(quotient, verts, rep, edge_words)


def validate_completion(T: CompletionPoint) -> ValidationReport:
    g = T.graph
    out: list[Violation] = []
    positive = [e for e in g.edges if e.length > 0]
    for e in g.edges:
        if e.length < 0:
            out.append(Violation("Positivity", f"edge {e.id} has negative length {e.length}"))
    vol = sum((e.length for e in positive), Fraction(0))
    if vol != 1:
        out.append(Violation("UnitVolume", f"positive volume is {vol}"))
    if not positive:
        out.append(Violation("ProperZero", "every edge has length zero"))
    for v in g.vertices:
        if g.valence(v) < 3:
            out.append(Violation("Valence", f"vertex {v} has valence {g.valence(v)}"))
    if not g.is_connected():
        out.append(Violation("Connectivity", "graph is not connected"))
        return ValidationReport(tuple(out))
    if T.base not in g.vertices:
        out.append(Violation("Marking", f"base vertex {T.base} missing"))
        return ValidationReport(tuple(out))
    marking = _marking_report(T)
    out.extend(marking)
    if not positive or marking:
        return ValidationReport(tuple(out))
    view = collapse_zero(T)
    for v in view.vertices:
        val = view.quotient.valence(v.id) + (2 if v.group else 0)
        if val < 3:
            out.append(Violation("QuotientValence", f"collapsed vertex {v.id} has valence {val}"))
    return ValidationReport(tuple(out))


def require_valid(T: CompletionPoint) -> CompletionPoint:
    rep = validate_completion(T)
    if not rep.ok:
        raise InvalidPoint(rep)
    return T


def qvol(T: CompletionPoint) -> Fraction:
    return sum((e.length for e in T.graph.edges if e.length > 0), Fraction(0))


def translation_length_ext(T: CompletionPoint, w: Sequence[int]) -> Fraction:
    return translation_length(T, w)


def is_elliptic(T: CompletionPoint, gens: Sequence[Sequence[int]]) -> bool:
    """Serre's criterion: generators and their pairwise products are elliptic."""
    return hyperbolic_witness(T, gens) is None


def hyperbolic_witness(T: CompletionPoint, gens: Sequence[Sequence[int]]) -> Word | None:
    gens = [W.reduce(g) for g in gens]
    for g in gens:
        if translation_length(T, g) > 0:
            return g
    for g, h in combinations(gens, 2):
        gh = W.multiply(g, h)
        if translation_length(T, gh) > 0:
            return gh
    return None


# -- extended candidates ----------------------------------------------------------


KINDS = ("embedded_circle", "figure_eight", "barbell", "collapsed_barbell", "half_collapsed_barbell")


@dataclass(frozen=True)
class ExtCandidate:
    """A candidate of a graph of groups.

    ``pieces`` alternates quotient paths (tuples of directed edges) and
    vertex ids marking where a vertex-group element is inserted.
    """

    kind: str
    pieces: tuple[Path | str, ...]
    word: Word  # default-element class, up to inversion

    @property
    def slots(self) -> tuple[str, ...]:
        return tuple(p for p in self.pieces if isinstance(p, str))

    @property
    def edges(self) -> frozenset[int]:
        return frozenset(abs(d) for p in self.pieces if not isinstance(p, str) for d in p)

    def instantiate(self, view: GoGView, elements: Sequence[Word]) -> Word:
        """Conjugacy class for the given vertex-group elements (one per slot)."""
        out: list[int] = []
        it = iter(elements)
        for p in self.pieces:
            if isinstance(p, str):
                out.extend(next(it))
            else:
                out.extend(view.path_word(p))
        return W.cyclic_word(out)

    def __str__(self) -> str:
        return f"{self.kind}:{W.format_word(self.word)}"


def _default_elements(view: GoGView, slots: Iterable[str]) -> list[Word]:
    return [view.vertex(s).group[0] for s in slots]


def candidates_ext(S: CompletionPoint, view: GoGView | None = None) -> list[ExtCandidate]:
    """All five candidate types on the quotient graph of groups of S."""
    view = collapse_zero(S) if view is None else view
    q = view.quotient
    out: list[ExtCandidate] = []
    seen: set[tuple] = set()

    def add(kind: str, pieces: tuple) -> None:
        c = ExtCandidate(kind, pieces, ())
        word = c.instantiate(view, _default_elements(view, c.slots))
        word = class_up_to_inverse(word)
        if (kind, word) in seen or not word:
            return
        seen.add((kind, word))
        out.append(ExtCandidate(kind, pieces, word))

    for kind, loop in candidate_loops(q):
        add(kind, (loop,))
    heavy = sorted(v.id for v in view.nontrivial)
    order = {v: k for k, v in enumerate(q.vertices)}
    cycles = simple_cycles(q)
    # type 4: g P h P^-1 with both ends carrying nontrivial groups
    for v in heavy:
        for w in heavy:
            if order[w] < order[v]:
                continue
            if v == w:
                for c in cycles:
                    if v in cycle_vertices(q, c):
                        add("collapsed_barbell", (v, rotate_to(q, c, v), v, W.inverse(rotate_to(q, c, v))))
            else:
                for bar in embedded_paths(q, v, w, set()):
                    add("collapsed_barbell", (v, bar, w, W.inverse(bar)))
    # type 5: g P u P^-1 with u an embedded circle missing v
    for v in heavy:
        for c in cycles:
            cv = cycle_vertices(q, c)
            if v in cv:
                continue
            for w in sorted(cv, key=order.__getitem__):
                for bar in embedded_paths(q, v, w, cv - {w}):
                    add("half_collapsed_barbell", (v, bar + rotate_to(q, c, w) + W.inverse(bar)))
    return out


def random_group_element(rng: random.Random, group: Sequence[Word], max_factors: int = 3) -> Word:
    """A random nontrivial element of the subgroup generated by ``group``."""
    while True:
        k = rng.randint(1, max_factors)
        w = W.multiply(*(g if rng.random() < 0.5 else W.inverse(g) for g in (rng.choice(group) for _ in range(k))))
        if w:
            return w


# -- distances ----------------------------------------------------------------------


def candidate_stretch(view: GoGView, c: ExtCandidate, S: CompletionPoint, T: CompletionPoint,
                      elements: Sequence[Word] | None = None) -> Fraction:
    word = c.word if elements is None else c.instantiate(view, elements)
    return translation_length(T, word) / translation_length(S, word)


def distance_ext(S: CompletionPoint, T: CompletionPoint) -> DistanceResult:
    """Stretch factor from S to T; INFINITE when a vertex group of S is not elliptic in T."""
    view = _cached_view(S)
    for v in view.nontrivial:
        bad = hyperbolic_witness(T, v.group)
        if bad is not None:
            return DistanceResult(INFINITE, ExtCandidate("vertex_group", (v.id,), W.cyclic_word(bad)))
    best: tuple[Fraction, ExtCandidate] | None = None
    for c in _cached_candidates(S):
        st = translation_length(T, c.word) / translation_length(S, c.word)
        if best is None or st > best[0] or (st == best[0] and W.word_key(c.word) < W.word_key(best[1].word)):
            best = (st, c)
    assert best is not None
    return DistanceResult(best[0], best[1])


def _cached_view(S: CompletionPoint) -> GoGView:
    got = S.__dict__.get("_gog")
    if got is None:
        got = collapse_zero(S)
        S.__dict__["_gog"] = got
    return got


def _cached_candidates(S: CompletionPoint) -> list[ExtCandidate]:
    got = S.__dict__.get("_ext_candidates")
    if got is None:
        got = candidates_ext(S, _cached_view(S))
        S.__dict__["_ext_candidates"] = got
    return got


def equals(S: CompletionPoint, T: CompletionPoint) -> bool:
    if S.rank != T.rank:
        return False
    return distance_ext(S, T).factor == 1 and distance_ext(T, S).factor == 1


# -- approximations -------------------------------------------------------------------


def approximate_from_interior(T: CompletionPoint, eps: Fraction) -> MarkedGraph:
    """Blow Z up to total length eps and shrink the rest by (1 - eps)."""
    eps = Fraction(eps)
    if not 0 < eps < 1:
        raise ValueError("eps must lie strictly between 0 and 1")
    zero = zero_edges(T)
    if not zero:
        return T
    share = eps / len(zero)
    lengths = {e.id: (share if i in zero else e.length * (1 - eps)) for i, e in enumerate(T.graph.edges)}
    return MarkedGraph(T.graph.with_lengths(lengths), T.images, T.base, T.supplied_inverse)


def pinch_sequence(x: MarkedGraph, Z: Iterable[str], schedule: Sequence[Fraction]) -> list[MarkedGraph]:
    """Give Z total length s_i (proportionally) and the rest 1 - s_i."""
    g = x.graph
    zset = {g.edge_index[e] for e in Z}
    if not zset or len(zset) == len(g.edges):
        raise ValueError("Z must be a proper nonempty set of edges")
    sched = [Fraction(s) for s in schedule]
    for k, s in enumerate(sched):
        if not 0 < s < 1:
            raise ScheduleNotDecreasing(f"schedule value {s} outside (0, 1)")
        if k and s >= sched[k - 1]:
            raise ScheduleNotDecreasing(f"schedule not strictly decreasing at position {k}")
    vz = sum((g.edges[i].length for i in zset), Fraction(0))
    vr = g.volume - vz
    out = []
    for s in sched:
        lengths = {
            e.id: (e.length * s / vz if i in zset else e.length * (1 - s) / vr) for i, e in enumerate(g.edges)
        }
        out.append(MarkedGraph(g.with_lengths(lengths), x.images, x.base, x.supplied_inverse))
    return out


def is_interior(T: CompletionPoint) -> bool:
    return all(e.length > 0 for e in T.graph.edges)
