"""Free group words, cyclic words, endomorphisms and Stallings subgroup graphs.

Letters are signed integers: ``+i`` is the i-th basis generator (1-based) and
``-i`` its inverse.  A word is a tuple of letters.  The ASCII syntax uses
lowercase for generators and uppercase for inverses, so ``"abA"`` is
``(1, 2, -1)``.
"""
from __future__ import annotations

import string
from dataclasses import dataclass
from typing import Iterable, Sequence

from osx import kernels

Word = tuple[int, ...]


class WordSyntaxError(ValueError):
    pass


class NotAnAutomorphism(ValueError):
    pass


def parse_word(text: str, rank: int | None = None) -> Word:
    """Parse ``"abA"`` style syntax.  ``"1"``, ``""`` and ``"e"``-free input all map to ()."""
    text = text.strip()
    if text in ("", "1"):
        return ()
    letters = []
    for ch in text:
        if ch in string.ascii_lowercase:
            g = ord(ch) - ord("a") + 1
            letters.append(g)
        elif ch in string.ascii_uppercase:
            g = ord(ch) - ord("A") + 1
            letters.append(-g)
        elif ch.isspace() or ch == "*" or ch == ".":
            continue
        else:
            raise WordSyntaxError(f"bad character {ch!r} in word {text!r}")
        if rank is not None and g > rank:
            raise WordSyntaxError(f"generator {ch!r} outside rank {rank}")
    return tuple(letters)


def format_word(w: Iterable[int]) -> str:
    out = []
    for x in w:
        if x > 0:
            out.append(chr(ord("a") + x - 1))
        else:
            out.append(chr(ord("A") - x - 1))
    return "".join(out)


def letter_key(x: int) -> int:
    # a < A < b < B < ...
    return 2 * (abs(x) - 1) + (x < 0)


def word_key(w: Sequence[int]) -> tuple:
    """Shortlex key; the canonical word order used for tie-breaking."""
    return (len(w), tuple(letter_key(x) for x in w))


def reduce(w: Sequence[int]) -> Word:
    return tuple(kernels.free_reduce(w))


def inverse(w: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(w))


def multiply(*words: Sequence[int]) -> Word:
    out: list[int] = []
    for w in words:
        out.extend(w)
    return reduce(out)


def power(w: Sequence[int], k: int) -> Word:
    if k < 0:
        return power(inverse(w), -k)
    return reduce(tuple(w) * k)


def is_reduced(w: Sequence[int]) -> bool:
    return all(w[i] != -w[i + 1] for i in range(len(w) - 1))


def least_rotation(c: Sequence[int]) -> Word:
    if not c:
        return ()
    keys = [letter_key(x) for x in c]
    n = len(c)
    best = min(range(n), key=lambda i: keys[i:] + keys[:i])
    return tuple(c[best:]) + tuple(c[:best])


def cyclic_reduce(w: Sequence[int]) -> tuple[Word, Word]:
    """Return ``(c, u)`` with ``w == u c u^-1`` in F_n.

    ``c`` is cyclically reduced and in canonical (least) rotation.
    """
    r = reduce(w)
    k = 0
    while k < len(r) - 1 - k and r[k] == -r[len(r) - 1 - k]:
        k += 1
    core = r[k:len(r) - k]
    u = r[:k]
    if not core:
        return (), ()
    c = least_rotation(core)
    # core = s t and c = t s, so core = s c s^-1
    n = len(core)
    shift = next(i for i in range(n) if core[i:] + core[:i] == c)
    s = core[:shift]
    return c, reduce(u + s)


def cyclic_word(w: Sequence[int]) -> Word:
    return cyclic_reduce(w)[0]


def is_cyclically_reduced(w: Sequence[int]) -> bool:
    return is_reduced(w) and (len(w) < 2 or w[0] != -w[-1])


def conjugate(w: Sequence[int], u: Sequence[int]) -> Word:
    """u w u^-1"""
    return multiply(u, w, inverse(u))


@dataclass(frozen=True)
class EndoMap:
    """Endomorphism of F_n given by the images of the basis generators."""

    images: tuple[Word, ...]

    @property
    def rank(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, rank: int) -> EndoMap:
        return cls(tuple((i,) for i in range(1, rank + 1)))

    @classmethod
    def parse(cls, spec: str | Sequence[str], rank: int | None = None) -> EndoMap:
        """``"ab,b"`` or ``["ab", "b"]`` lists the images of a, b, ..."""
        parts = spec.split(",") if isinstance(spec, str) else list(spec)
        return cls(tuple(reduce(parse_word(p, rank)) for p in parts))

    def __call__(self, w: Sequence[int]) -> Word:
        return apply_endo(self, w)

    def __str__(self) -> str:
        return ",".join(format_word(w) or "1" for w in self.images)


def apply_endo(phi: EndoMap, w: Sequence[int]) -> Word:
    out: list[int] = []
    for x in w:
        img = phi.images[abs(x) - 1]
        out.extend(img if x > 0 else inverse(img))
    return reduce(out)


def compose_endo(phi: EndoMap, psi: EndoMap) -> EndoMap:
    """phi after psi."""
    return EndoMap(tuple(apply_endo(phi, img) for img in psi.images))


def _nielsen_greedy(images: Sequence[Word]) -> tuple[list[Word], list[Word]] | None:
    """Length-reducing Nielsen moves on ``images``, applied in parallel to a
    tracking tuple that starts at the basis.  Returns (tuple, tracking) once no
    move shortens the total length, or None when a trivial element appears."""
    n = len(images)
    cur = [reduce(w) for w in images]
    track: list[Word] = [(i,) for i in range(1, n + 1)]
    if any(not w for w in cur):
        return None
    improved = True
    while improved:
        improved = False
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                for e in (1, -1):
                    vj = cur[j] if e == 1 else inverse(cur[j])
                    tj = track[j] if e == 1 else inverse(track[j])
                    right = reduce(cur[i] + vj)
                    if len(right) < len(cur[i]):
                        cur[i], track[i] = right, reduce(track[i] + tj)
                        improved = True
                        continue
                    left = reduce(vj + cur[i])
                    if len(left) < len(cur[i]):
                        cur[i], track[i] = left, reduce(tj + track[i])
                        improved = True
                if not cur[i]:
                    return None
    return cur, track


def _invert_by_folding(phi: EndoMap) -> EndoMap:
    """Invert a surjective endomorphism by folding its image petals while
    carrying, on every edge, a word in the source basis."""
    n = phi.rank
    g = _FoldGraph()
    base = g.new_vertex()
    for j, img in enumerate(phi.images, start=1):
        img = reduce(img)
        if not img:
            raise NotAnAutomorphism("trivial image")
        prev = base
        for pos, x in enumerate(img):
            nxt = base if pos == len(img) - 1 else g.new_vertex()
            g.add_edge(prev, x, nxt, (j,) if pos == 0 else ())
            prev = nxt
    g.fold(base, track=True)
    g.trim(base)
    if g.vertex_count() != 1:
        raise NotAnAutomorphism("image tuple does not generate F_n")
    inv: dict[int, Word] = {}
    for x, targets in g.out[base].items():
        if x > 0:
            inv[x] = reduce(targets[0][1])
    if sorted(inv) != list(range(1, n + 1)):
        raise NotAnAutomorphism("image tuple does not generate F_n")
    return EndoMap(tuple(inv[i] for i in range(1, n + 1)))


def invert_automorphism(phi: EndoMap) -> EndoMap:
    """Inverse automorphism via Nielsen reduction of the image tuple.

    Raises NotAnAutomorphism when the images do not form a basis.
    """
    n = phi.rank
    res = _nielsen_greedy(phi.images)
    if res is None:
        raise NotAnAutomorphism(f"{phi} kills a basis element")
    cur, track = res
    if all(len(w) == 1 for w in cur) and sorted(abs(w[0]) for w in cur) == list(range(1, n + 1)):
        # cur[i] = phi(track[i]) = x_{p(i)}^{e_i}
        inv: list[Word] = [()] * n
        for w, t in zip(cur, track):
            x = w[0]
            inv[abs(x) - 1] = t if x > 0 else inverse(t)
        return EndoMap(tuple(inv))
    # Greedy reduction stalled on a length plateau; folding decides for sure.
    inv_map = _invert_by_folding(phi)
    for i in range(1, n + 1):
        if apply_endo(inv_map, apply_endo(phi, (i,))) != (i,):
            raise NotAnAutomorphism(f"{phi} is not invertible")
    return inv_map


def is_automorphism(phi: EndoMap) -> bool:
    try:
        invert_automorphism(phi)
    except NotAnAutomorphism:
        return False
    return True


def nielsen_generators(rank: int) -> list[EndoMap]:
    """Swaps, inversions and left/right transvections of Aut(F_n)."""
    gens = []
    ident = [(i,) for i in range(1, rank + 1)]
    for i in range(rank):
        imgs = list(ident)
        imgs[i] = (-(i + 1),)
        gens.append(EndoMap(tuple(imgs)))
        for j in range(rank):
            if i == j:
                continue
            if i < j:
                imgs = list(ident)
                imgs[i], imgs[j] = imgs[j], imgs[i]
                gens.append(EndoMap(tuple(imgs)))
            for e in (1, -1):
                imgs = list(ident)
                imgs[i] = (i + 1, e * (j + 1))
                gens.append(EndoMap(tuple(imgs)))
                imgs = list(ident)
                imgs[i] = (e * (j + 1), i + 1)
                gens.append(EndoMap(tuple(imgs)))
    return gens


# -- Stallings graphs -------------------------------------------------------


class _FoldGraph:
    """Mutable labelled graph used while folding.

    ``out[v][x] = (u, label)`` means an edge v --x--> u.  The inverse edge
    u --(-x)--> v is stored too, with the inverse label.  Labels are words in
    a tracking alphabet and are only maintained when folding with
    ``track=True``.
    """

    def __init__(self) -> None:
        self.out: dict[int, dict[int, list[tuple[int, Word]]]] = {}
        self._next = 0

    def new_vertex(self) -> int:
        v = self._next
        self._next += 1
        self.out[v] = {}
        return v

    def vertex_count(self) -> int:
        return len(self.out)

    def add_edge(self, v: int, x: int, u: int, label: Word = ()) -> None:
        self.out[v].setdefault(x, []).append((u, label))
        self.out[u].setdefault(-x, []).append((v, inverse(label)))

    def _remove_edge(self, v: int, x: int, u: int, label: Word) -> None:
        self.out[v][x].remove((u, label))
        if not self.out[v][x]:
            del self.out[v][x]
        back = (v, inverse(label))
        self.out[u][-x].remove(back)
        if not self.out[u][-x]:
            del self.out[u][-x]

    def _regauge(self, u: int, g: Word) -> None:
        # right-multiply labels of edges entering u by g
        for x, targets in list(self.out[u].items()):
            for t, lab in list(targets):
                if t == u:
                    continue
                self._remove_edge(u, x, t, lab)
                self.add_edge(u, x, t, reduce(inverse(g) + lab))
        loops = [(x, lab) for x, ts in self.out[u].items() for t, lab in ts if t == u and x > 0]
        for x, lab in loops:
            self._remove_edge(u, x, u, lab)
            self.add_edge(u, x, u, reduce(inverse(g) + lab + g))

    def _merge(self, keep: int, drop: int) -> None:
        for x, targets in list(self.out[drop].items()):
            for t, lab in list(targets):
                if x < 0 and t == drop:
                    continue
                self._remove_edge(drop, x, t, lab)
                self.add_edge(keep, x, keep if t == drop else t, lab)
        del self.out[drop]

    def fold(self, base: int, track: bool = False) -> None:
        changed = True
        while changed:
            changed = False
            for v in list(self.out):
                if v not in self.out:
                    continue
                for x, targets in list(self.out[v].items()):
                    if len(targets) < 2:
                        continue
                    (u1, l1), (u2, l2) = targets[0], targets[1]
                    if u1 != u2 and u2 == base:
                        (u1, l1), (u2, l2) = (u2, l2), (u1, l1)
                    if track and u1 != u2 and l1 != l2:
                        self._regauge(u2, reduce(inverse(l2) + l1))
                        live = self.out[v][x]
                        l1 = next(lab for t, lab in live if t == u1)
                        l2 = next(lab for t, lab in live if t == u2 and lab == l1)
                    self._remove_edge(v, x, u2, l2)
                    if u1 != u2:
                        self._merge(u1, u2)
                    changed = True
                    break
                if changed:
                    break

    def trim(self, base: int) -> None:
        changed = True
        while changed:
            changed = False
            for v in list(self.out):
                if v == base:
                    continue
                deg = sum(len(t) for t in self.out[v].values())
                if deg <= 1:
                    for x, targets in list(self.out[v].items()):
                        for t, lab in list(targets):
                            self._remove_edge(v, x, t, lab)
                    del self.out[v]
                    changed = True


@dataclass(frozen=True)
class SubgroupGraph:
    """Folded core graph of a subgroup, with basepoint (possibly on a stem)."""

    rank: int
    base: int
    vertices: tuple[int, ...]
    # (tail, letter, head) with letter > 0
    edges: tuple[tuple[int, int, int], ...]

    def step(self, v: int, x: int) -> int | None:
        return self._adj.get((v, x))

    @property
    def _adj(self) -> dict[tuple[int, int], int]:
        adj = self.__dict__.get("_adj_cache")
        if adj is None:
            adj = {}
            for t, x, h in self.edges:
                adj[(t, x)] = h
                adj[(h, -x)] = t
            object.__setattr__(self, "_adj_cache", adj)
        return adj

    def read(self, v: int, w: Sequence[int]) -> int | None:
        for x in w:
            v = self.step(v, x)
            if v is None:
                return None
        return v

    def core_vertices(self) -> set[int]:
        deg = {v: 0 for v in self.vertices}
        for t, _, h in self.edges:
            deg[t] += 1
            deg[h] += 1
        alive = set(self.vertices)
        nbrs: dict[int, list[int]] = {v: [] for v in self.vertices}
        for t, _, h in self.edges:
            nbrs[t].append(h)
            nbrs[h].append(t)
        stack = [v for v in alive if deg[v] <= 1]
        while stack:
            v = stack.pop()
            if v not in alive:
                continue
            alive.discard(v)
            for u in nbrs[v]:
                if u in alive:
                    deg[u] -= 1
                    if deg[u] <= 1:
                        stack.append(u)
        return alive


def stallings_graph(gens: Iterable[Sequence[int]], rank: int) -> SubgroupGraph:
    g = _FoldGraph()
    base = g.new_vertex()
    for w in gens:
        w = reduce(w)
        if not w:
            continue
        prev = base
        for pos, x in enumerate(w):
            nxt = base if pos == len(w) - 1 else g.new_vertex()
            g.add_edge(prev, x, nxt)
            prev = nxt
    g.fold(base)
    g.trim(base)
    relabel = {v: i for i, v in enumerate(sorted(g.out))}
    edges = []
    for v, by_letter in g.out.items():
        for x, targets in by_letter.items():
            if x > 0:
                for u, _ in targets:
                    edges.append((relabel[v], x, relabel[u]))
    return SubgroupGraph(rank, relabel[base], tuple(sorted(relabel.values())), tuple(sorted(edges)))


def contains(H: SubgroupGraph, w: Sequence[int]) -> bool:
    return H.read(H.base, reduce(w)) == H.base


def conjugate_into(H: SubgroupGraph, c: Sequence[int]) -> bool:
    """True iff the cyclic word ``c`` is conjugate into H."""
    c = cyclic_word(c)
    if not c:
        return True
    for v in H.core_vertices() or {H.base}:
        for k in range(len(c)):
            r = c[k:] + c[:k]
            if H.read(v, r) == v:
                return True
    return False


def all_reduced_words(rank: int, max_len: int, min_len: int = 0) -> Iterable[Word]:
    letters = [x for i in range(1, rank + 1) for x in (i, -i)]
    frontier: list[Word] = [()]
    for length in range(max_len + 1):
        if length >= min_len:
            yield from frontier
        if length == max_len:
            break
        frontier = [w + (x,) for w in frontier for x in letters if not w or w[-1] != -x]
