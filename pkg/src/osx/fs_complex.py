"""Simplicial structure of the free splitting complex at small rank."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from osx import words as W
from osx.completion_points import (
    CompletionPoint,
    distance_ext,
    equals,
    validate_completion,
)
from osx.marked_graph import MarkedGraph, blow_up, candidate_loops, translation_length
from osx.words import Word


class InvalidFace(ValueError):
    pass


class NotACandidateImage(ValueError):
    pass


def positive_support(x: CompletionPoint) -> frozenset[str]:
    return frozenset(e.id for e in x.graph.edges if e.length > 0)


def face(x: CompletionPoint, keep: Iterable[str]) -> CompletionPoint:
    """Collapse every edge outside ``keep`` and rescale ``keep`` to volume 1."""
    keep = frozenset(keep)
    g = x.graph
    unknown = keep - set(g.edge_index)
    if unknown:
        raise InvalidFace(f"unknown edges {sorted(unknown)}")
    if not keep:
        raise InvalidFace("a face needs at least one edge")
    if not keep <= positive_support(x):
        raise InvalidFace("face edges must have positive length")
    vol = sum((e.length for e in g.edges if e.id in keep), Fraction(0))
    lengths = {e.id: (e.length / vol if e.id in keep else Fraction(0)) for e in g.edges}
    y = MarkedGraph(g.with_lengths(lengths), x.images, x.base, x.supplied_inverse)
    rep = validate_completion(y)
    if not rep.ok:
        raise InvalidFace("; ".join(f"{v.kind}: {v.detail}" for v in rep.violations))
    return y


def candidate_images(x: MarkedGraph) -> list[frozenset[str]]:
    """Distinct edge sets of the candidate loops of x."""
    out: list[frozenset[str]] = []
    for _, loop in candidate_loops(x.graph):
        h = frozenset(x.graph.edges[abs(d) - 1].id for d in loop)
        if h not in out:
            out.append(h)
    return out


def face_distance(x: MarkedGraph, H: Iterable[str]) -> Fraction:
    """1/vol(H), checked against the stretch factor from x to the face point."""
    H = frozenset(H)
    if H not in candidate_images(x):
        raise NotACandidateImage(f"{sorted(H)} is not the image of a candidate loop")
    lam = 1 / sum((e.length for e in x.graph.edges if e.id in H), Fraction(0))
    y = face(x, H)
    got = distance_ext(x, y).factor
    if got != lam:
        raise AssertionError(f"stretch to the face point is {got}, expected {lam}")
    return lam


# -- common simplices ---------------------------------------------------------------


@dataclass(frozen=True)
class SimplexCoords:
    """Two points realised on one marked graph ``reference``."""

    reference: MarkedGraph
    x: Mapping[str, Fraction]
    y: Mapping[str, Fraction]

    def sup_difference(self) -> Fraction:
        return max(abs(self.x[e] - self.y[e]) for e in self.x)


def _solve(rows: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    """One exact solution of rows . v = rhs (free variables set to 0), or None."""
    m = len(rows[0]) if rows else 0
    A = [list(r) + [b] for r, b in zip(rows, rhs)]
    piv_cols = []
    r = 0
    for c in range(m):
        p = next((i for i in range(r, len(A)) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        inv = 1 / A[r][c]
        A[r] = [v * inv for v in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        piv_cols.append(c)
        r += 1
    for i in range(r, len(A)):
        if A[i][m] != 0:
            return None
    sol = [Fraction(0)] * m
    for i, c in enumerate(piv_cols):
        sol[c] = A[i][m]
    return sol


def _crossings(x: MarkedGraph, w: Word) -> list[int]:
    counts = [0] * len(x.graph.edges)
    for d in x.loop(w):
        counts[abs(d) - 1] += 1
    return counts


def _probe_words(x: MarkedGraph, y: CompletionPoint) -> list[Word]:
    probes: list[Word] = []
    for pt in (x, y):
        for _, loop in candidate_loops(pt.graph):
            w = pt.loop_class(loop)
            if w and w not in probes:
                probes.append(w)
    return probes


def realize_in(frame: MarkedGraph, y: CompletionPoint) -> MarkedGraph | None:
    """Lengths on frame's marked graph that reproduce y, if any."""
    probes = _probe_words(frame, y)
    rows = [[Fraction(c) for c in _crossings(frame, w)] for w in probes]
    rhs = [translation_length(y, w) for w in probes]
    rows.append([Fraction(1)] * len(frame.graph.edges))
    rhs.append(Fraction(1))
    sol = _solve(rows, rhs)
    if sol is None or any(v < 0 for v in sol):
        return None
    lengths = {e.id: v for e, v in zip(frame.graph.edges, sol)}
    z = MarkedGraph(frame.graph.with_lengths(lengths), frame.images, frame.base, frame.supplied_inverse)
    if not validate_completion(z).ok or not equals(z, y):
        return None
    return z


def blow_ups(x: MarkedGraph) -> list[MarkedGraph]:
    """Marked graphs obtained by one blow-up at a vertex of valence >= 4."""
    g = x.graph
    out = []
    for v in g.vertices:
        darts = g.out_darts[v]
        if len(darts) < 4:
            continue
        first, rest = darts[0], darts[1:]
        for size in range(1, len(rest) - 1):
            for side in combinations(rest, size):
                far = set(rest) - set(side)
                if len(far) < 2 or len(side) + 1 < 2:
                    continue
                out.append(blow_up(x, v, far, f"_v{len(g.vertices)}", f"_e{len(g.edges)}"))
    return out


def common_simplex(x: CompletionPoint, y: CompletionPoint, depth: int = 1) -> SimplexCoords | None:
    """Find one marked graph whose closed simplex contains both points.

    Depth 0 tries the graphs of x and of y.  Each further level also tries
    one-edge blow-ups of the graphs from the previous level.
    """
    if x.rank != y.rank:
        return None
    frames: list[tuple[MarkedGraph, CompletionPoint, CompletionPoint]] = [(x, x, y), (y, x, y)]
    level = [x, y]
    for _ in range(depth):
        nxt = []
        for f in level:
            nxt.extend(blow_ups(f))
        frames.extend((f, x, y) for f in nxt)
        level = nxt
    for frame, a, b in frames:
        za = a if frame is a else realize_in(frame, a)
        if za is None:
            continue
        zb = b if frame is b else realize_in(frame, b)
        if zb is None:
            continue
        return SimplexCoords(frame, za.lengths, zb.lengths)
    return None


def euclidean_ball_contains(x: CompletionPoint, y: CompletionPoint, eps: Fraction, depth: int = 1) -> bool:
    cs = common_simplex(x, y, depth)
    return cs is not None and cs.sup_difference() < Fraction(eps)


# -- axes topology --------------------------------------------------------------------


@dataclass(frozen=True)
class LengthVector:
    words: tuple[Word, ...]
    values: tuple[Fraction, ...]

    def sup_gap(self, other: LengthVector) -> Fraction:
        if self.words != other.words:
            raise ValueError("different probe sets")
        return max(abs(a - b) for a, b in zip(self.values, other.values))


def axes_vector(T: CompletionPoint, P: Sequence[Sequence[int]]) -> LengthVector:
    ws = tuple(W.reduce(w) for w in P)
    return LengthVector(ws, tuple(translation_length(T, w) for w in ws))


@dataclass(frozen=True)
class StrictnessPair:
    x: CompletionPoint
    y: CompletionPoint
    i: int
    m: int
    p: Fraction  # length of the petal carrying a b^i
    q: Fraction  # length of the petal carrying b


def strictness_family(i: int, m: int, q: Fraction | None = None) -> StrictnessPair:
    """The F_2 splitting x (edge a, vertex group <b>) and a rose y_i with
    petals e = a b^i and e' = b.

    By default q = 1/(2 m (i - 1)), the midpoint of the admissible range
    0 < q < 1/(m (i - 1)) for l(a, y_i) < 1 + 1/m.
    """
    if i < 2 or m < 1:
        raise ValueError("need i >= 2 and m >= 1")
    from osx.marked_graph import rose

    x = rose([Fraction(1), Fraction(0)])
    q = Fraction(1, 2 * m * (i - 1)) if q is None else Fraction(q)
    p = 1 - q
    base = rose([p, q])
    y = MarkedGraph(base.graph, ((1,) + (-2,) * i, (2,)), base.base)
    return StrictnessPair(x, y, i, m, p, q)
