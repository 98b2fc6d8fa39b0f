"""The asymmetric Lipschitz metric on Outer Space, computed through candidates.

Distances are kept multiplicatively: a *factor* ``f`` stands for the distance
``log f``.  ``INFINITE`` is ``math.inf``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence, Union

from osx import kernels
from osx import words as W
from osx.marked_graph import Candidate, MarkedGraph, candidates, translation_length
from osx.words import Word

INFINITE = math.inf
Factor = Union[Fraction, float]  # float only ever holds INFINITE


class IdentityWord(ValueError):
    pass


@dataclass(frozen=True)
class DistanceResult:
    factor: Factor
    witness: Candidate | None

    @property
    def log(self) -> float:
        return log_factor(self.factor)

    @property
    def infinite(self) -> bool:
        return self.factor == INFINITE


def log_factor(f: Factor) -> float:
    if f == INFINITE:
        return math.inf
    return math.log(f.numerator) - math.log(f.denominator)


def format_factor(f: Factor) -> str:
    if f == INFINITE:
        return "INFINITE"
    return str(f)


def stretch(x: MarkedGraph, y: MarkedGraph, w: Sequence[int]) -> Fraction:
    if not W.reduce(w):
        raise IdentityWord("stretch of the identity is undefined")
    return translation_length(y, w) / translation_length(x, w)


def cached_candidates(x: MarkedGraph) -> list[Candidate]:
    got = x.__dict__.get("_candidates")
    if got is None:
        got = candidates(x)
        x.__dict__["_candidates"] = got
    return got


def best_candidate(scored: Sequence[tuple[Fraction, Candidate]]) -> tuple[Fraction, Candidate]:
    """Largest value; ties go to the least word in shortlex order."""
    return max(scored, key=lambda fc: (fc[0], _neg_key(fc[1].word)))


def _neg_key(w: Word) -> tuple:
    n, keys = W.word_key(w)
    return (-n, tuple(-k for k in keys))


def distance(x: MarkedGraph, y: MarkedGraph) -> DistanceResult:
    scored = [(translation_length(y, c.word) / translation_length(x, c.word), c) for c in cached_candidates(x)]
    f, c = best_candidate(scored)
    return DistanceResult(f, c)


def sym_distance(x: MarkedGraph, y: MarkedGraph) -> Fraction:
    return distance(x, y).factor * distance(y, x).factor


# -- exhaustive oracle ----------------------------------------------------------


def _letter_images(x: MarkedGraph) -> tuple[list[list[int]], list[int], int]:
    den = lcm(*(e.length.denominator for e in x.graph.edges))
    weights = [int(e.length * den) for e in x.graph.edges]
    images: list[list[int]] = []
    for g in range(1, x.rank + 1):
        images.append(list(x.image_path((g,))))
        images.append(list(x.image_path((-g,))))
    return images, weights, den


def max_stretch_bruteforce(x: MarkedGraph, y: MarkedGraph, max_len: int) -> tuple[Fraction, Word, int]:
    """Max of l(w,y)/l(w,x) over every conjugacy class of length <= max_len.

    Runs the compiled enumeration kernel when it is available.  Returns
    (factor, witness word, nodes visited).
    """
    if x.rank != y.rank:
        raise ValueError("rank mismatch")
    xi, xw, xd = _letter_images(x)
    yi, yw, yd = _letter_images(y)
    bound_x = max_len * max(sum(xw[abs(e) - 1] for e in p) for p in xi)
    bound_y = max_len * max(sum(yw[abs(e) - 1] for e in p) for p in yi)
    run = kernels.max_stretch_words
    if bound_x * bound_y >= 2**62:
        from osx._kernels_py import max_stretch_words as run  # exact big ints
    ly, lx, codes, nodes = run(2 * x.rank, max_len, xi, xw, yi, yw)
    word = tuple((c // 2 + 1) * (-1 if c % 2 else 1) for c in codes)
    return Fraction(ly * xd, lx * yd), word, nodes
