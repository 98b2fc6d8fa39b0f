"""Random points, random automorphisms and the named fixture family."""
from __future__ import annotations

import os
import random
from fractions import Fraction
from pathlib import Path as FsPath

from osx import words as W
from osx.completion_points import CompletionPoint, validate_completion
from osx.fs_complex import blow_ups
from osx.marked_graph import MarkedGraph, act, barbell, relabel, rose, theta, validate
from osx.words import EndoMap

FIXTURE_ENV = "OSX_FIXTURES"


def random_automorphism(rng: random.Random, rank: int, max_len: int) -> EndoMap:
    """Product of up to ``max_len`` Nielsen generators."""
    gens = W.nielsen_generators(rank)
    phi = EndoMap.identity(rank)
    for _ in range(rng.randint(0, max_len)):
        phi = W.compose_endo(phi, rng.choice(gens))
    return phi


def _tidy(x: MarkedGraph) -> MarkedGraph:
    vmap = {v: f"v{k}" for k, v in enumerate(x.graph.vertices)}
    emap = {e.id: f"e{k + 1}" for k, e in enumerate(x.graph.edges)}
    return relabel(x, vmap, emap)


def random_shape(rng: random.Random, rank: int) -> MarkedGraph:
    """A random graph reached from the rose by blow-ups, identity-marked."""
    x = rose([1] * rank)
    for _ in range(rng.randint(0, 2 * rank - 3)):
        options = blow_ups(x)
        if not options:
            break
        x = rng.choice(options)
    return _tidy(x)


def random_lengths(rng: random.Random, x: MarkedGraph, top: int = 9) -> MarkedGraph:
    raw = [rng.randint(1, top) for _ in x.graph.edges]
    total = sum(raw)
    lengths = {e.id: Fraction(r, total) for e, r in zip(x.graph.edges, raw)}
    return x.with_graph(x.graph.with_lengths(lengths))


def random_point(rng: random.Random, rank: int, aut_len: int = 3) -> MarkedGraph:
    x = random_lengths(rng, random_shape(rng, rank))
    x = act(x, random_automorphism(rng, rank, aut_len))
    assert validate(x).ok
    return x


def random_completion_point(rng: random.Random, rank: int, aut_len: int = 3, tries: int = 50) -> CompletionPoint:
    """A random point with a nonempty proper set of edges pinched to zero."""
    for _ in range(tries):
        x = random_point(rng, rank, aut_len)
        edges = list(x.graph.edges)
        k = rng.randint(1, len(edges) - 1)
        zero = set(e.id for e in rng.sample(edges, k))
        kept = sum((e.length for e in edges if e.id not in zero), Fraction(0))
        lengths = {e.id: (Fraction(0) if e.id in zero else e.length / kept) for e in edges}
        y = x.with_graph(x.graph.with_lengths(lengths))
        if validate_completion(y).ok:
            return y
    raise RuntimeError("no valid completion point found")


def family() -> dict[str, CompletionPoint]:
    """Twelve pairwise distinct rank-2 points, interior and simplicial."""
    h = Fraction(1, 2)
    q = Fraction(1, 4)
    t = Fraction(1, 3)
    pts = {
        "rose_half": rose([h, h]),
        "rose_3_1": rose([3 * q, q]),
        "rose_1_3": rose([q, 3 * q]),
        "theta_third": theta([t, t, t]),
        "theta_2_1_1": theta([h, q, q]),
        "barbell_1_2_1": barbell(q, h, q),
        # one-edge-loop splittings
        "hnn_b": rose([1, 0]),
        "hnn_a": rose([0, 1]),
        "hnn_bA": theta([0, 1, 0]),
        # separating splittings
        "free_product": barbell(0, 1, 0),
        "half_collapsed": barbell(0, h, h),
        "half_collapsed_b": barbell(h, h, 0),
    }
    for name, x in pts.items():
        assert validate_completion(x).ok, name
    return pts


ONE_EDGE_LOOP = ("hnn_b", "hnn_a", "hnn_bA")


def fixture_dir(default: str | None = None) -> FsPath:
    return FsPath(os.environ.get(FIXTURE_ENV) or default or "fixtures")


def write_family(directory: str | FsPath) -> list[FsPath]:
    from osx import schema

    d = FsPath(directory)
    d.mkdir(parents=True, exist_ok=True)
    out = []
    for name, x in family().items():
        p = d / f"{name}.json"
        schema.dump(x, p)
        out.append(p)
    return out
