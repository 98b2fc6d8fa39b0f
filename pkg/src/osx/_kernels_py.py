"""Pure-Python reference versions of the compiled kernels in ``_kernels.pyx``."""
from __future__ import annotations

from typing import Sequence


def free_reduce(w: Sequence[int]) -> list[int]:
    out: list[int] = []
    for x in w:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return out


def max_stretch_words(
    nletters: int,
    max_len: int,
    x_images: Sequence[Sequence[int]],
    x_weights: Sequence[int],
    y_images: Sequence[Sequence[int]],
    y_weights: Sequence[int],
) -> tuple[int, int, list[int], int]:
    """Max of ly/lx over all cyclic words of length <= max_len.

    Letters are codes ``0 .. 2n-1`` with ``c ^ 1`` the inverse of ``c`` and the
    code order equal to the canonical letter order.  ``*_images[c]`` is the
    edge path of letter ``c`` as signed edge ids ``±(e+1)``; weights are
    integers indexed by ``e``.  Only least rotations (necklaces) are visited.

    Returns ``(best_ly, best_lx, best_word_codes, nodes_visited)``.
    """
    a = [0] * (max_len + 1)
    sx: list[int] = []
    sy: list[int] = []
    px = [0]
    py = [0]
    best = [0, 1, [], 0]  # ly, lx, word, nodes

    def push(stack, pref, weights, path):
        k = 0
        n = len(path)
        while k < n and stack and stack[-1] == -path[k]:
            stack.pop()
            pref.pop()
            k += 1
        for e in path[k:]:
            stack.append(e)
            pref.append(pref[-1] + weights[abs(e) - 1])
        return k

    def undo(stack, pref, weights, path, k):
        for _ in range(len(path) - k):
            stack.pop()
            pref.pop()
        for i in range(k - 1, -1, -1):
            e = -path[i]
            stack.append(e)
            pref.append(pref[-1] + weights[abs(e) - 1])

    def cyc(stack, pref):
        h = len(stack)
        j = 0
        while j < h - 1 - j and stack[j] == -stack[h - 1 - j]:
            j += 1
        return pref[h] - 2 * pref[j]

    def gen(t: int, p: int) -> None:
        # a[1..t-1] fixed; choose a[t]
        start = a[t - p] if t > 1 else 0
        for j in range(start, nletters):
            if t > 1 and j == a[t - 1] ^ 1:
                continue
            a[t] = j
            kx = push(sx, px, x_weights, x_images[j])
            ky = push(sy, py, y_weights, y_images[j])
            best[3] += 1
            q = p if (t > 1 and j == a[t - p]) else t
            if t % q == 0 and (t == 1 or a[1] != j ^ 1):
                lx = cyc(sx, px)
                ly = cyc(sy, py)
                if lx > 0 and ly * best[1] > best[0] * lx:
                    best[0], best[1], best[2] = ly, lx, a[1:t + 1]
            if t < max_len:
                gen(t + 1, q)
            undo(sy, py, y_weights, y_images[j], ky)
            undo(sx, px, x_weights, x_images[j], kx)

    if max_len >= 1:
        gen(1, 1)
    return best[0], best[1], list(best[2]), best[3]
