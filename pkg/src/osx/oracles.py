"""Brute-force reference computations used to cross-check the fast paths."""
from __future__ import annotations

from collections import deque
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

from osx import kernels
from osx import words as W
from osx.marked_graph import MarkedGraph
from osx.words import Word


class BudgetExceeded(RuntimeError):
    pass


def naive_reduce(w: Sequence[int]) -> Word:
    """Delete one cancelling pair per pass until nothing changes."""
    w = list(w)
    changed = True
    while changed:
        changed = False
        for i in range(len(w) - 1):
            if w[i] == -w[i + 1]:
                del w[i:i + 2]
                changed = True
                break
    return tuple(w)


def subgroup_ball(gens: Sequence[Sequence[int]], radius: int, budget: int = 300_000) -> set[Word]:
    """Elements of <gens> of length <= radius, by breadth-first closure.

    Intermediate products may reach ``radius + 2 max|g|``; anything longer
    is pruned.  Raises BudgetExceeded when the closure grows past ``budget``.
    """
    steps = [W.reduce(g) for g in gens]
    steps = [s for s in steps if s]
    steps += [W.inverse(s) for s in steps]
    cap = radius + 2 * max((len(s) for s in steps), default=0)
    seen: set[Word] = {()}
    queue = deque([()])
    while queue:
        h = queue.popleft()
        for s in steps:
            k = W.reduce(h + s)
            if len(k) <= cap and k not in seen:
                seen.add(k)
                if len(seen) > budget:
                    raise BudgetExceeded(f"closure exceeded {budget} elements")
                queue.append(k)
    return {h for h in seen if len(h) <= radius}


def conjugate_into_bruteforce(contains, c: Sequence[int], bound: int, rank: int) -> bool:
    """Some u with |u| <= bound puts u c u^-1 in the subgroup tested by ``contains``."""
    for u in W.all_reduced_words(rank, bound):
        if contains(W.multiply(u, c, W.inverse(u))):
            return True
    return False


def _int_weights(x: MarkedGraph) -> list[int]:
    den = lcm(*(e.length.denominator for e in x.graph.edges))
    return [int(e.length * den) for e in x.graph.edges]


def elliptic_bruteforce(T: MarkedGraph, gens: Sequence[Sequence[int]], max_len: int = 8) -> bool:
    """Every product of at most ``max_len`` generators has length zero in T.

    Runs the stretch kernel with the free group on the generators as the
    source; the group is elliptic on this window iff the best numerator is 0.
    """
    gens = [W.reduce(g) for g in gens]
    k = len(gens)
    if k == 0:
        return True
    xi = [[g + 1] if sign == 0 else [-(g + 1)] for g in range(k) for sign in (0, 1)]
    yi = []
    for g in gens:
        p = list(T.image_path(g))
        yi.append(p)
        yi.append([-d for d in reversed(p)])
    ly, _, _, _ = kernels.max_stretch_words(2 * k, max_len, xi, [1] * k, yi, _int_weights(T))
    return ly == 0


def max_stretch_enumerated(x: MarkedGraph, y: MarkedGraph, words: Iterable[Word]) -> Fraction:
    """Plain Python maximum of l(w,y)/l(w,x) over the given words."""
    from osx.marked_graph import translation_length

    best = Fraction(0)
    for w in words:
        lx = translation_length(x, w)
        if lx:
            best = max(best, translation_length(y, w) / lx)
    return best
