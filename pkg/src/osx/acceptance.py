"""The twelve acceptance checks, shared by ``osx verify`` and the test suite.

Each check returns a :class:`CheckResult`.  Randomised checks draw from
``random.Random(seed * 1000 + number)`` so runs are reproducible.
"""
from __future__ import annotations

import itertools
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from osx import asym_completion as AC
from osx import fixtures as FX
from osx import oracles
from osx import words as W
from osx.completion_points import (
    approximate_from_interior,
    candidate_stretch,
    candidates_ext,
    collapse_zero,
    distance_ext,
    equals,
    is_elliptic,
    is_interior,
    pinch_sequence,
    random_group_element,
)
from osx.fs_complex import axes_vector, candidate_images, face, face_distance, strictness_family
from osx.marked_graph import act, rose
from osx.metric import INFINITE, cached_candidates, distance, format_factor, max_stretch_bruteforce


@dataclass
class CheckResult:
    number: int
    title: str
    passed: bool
    summary: str
    details: list[str] = field(default_factory=list)

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.number:2d} {self.title}: {self.summary}"


def _rng(seed: int, number: int) -> random.Random:
    return random.Random(seed * 1000 + number)


def _fmt(f) -> str:
    return format_factor(f)


# 1 -------------------------------------------------------------------------------------


def check_1(seed: int = 0, pairs: int = 200, max_len: int = 12, threads: int = 1) -> CheckResult:
    rng = _rng(seed, 1)
    work = []
    for k in range(pairs):
        rank = 2 if k < pairs // 2 else 3
        while True:
            x = FX.random_point(rng, rank)
            # the oracle can only see candidates it enumerates
            if max(len(c.word) for c in cached_candidates(x)) <= max_len:
                break
        work.append((x, FX.random_point(rng, rank)))

    def one(pair):
        x, y = pair
        brute, word, _ = max_stretch_bruteforce(x, y, max_len)
        return distance(x, y).factor, brute, word

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        results = list(pool.map(one, work))
    bad = [(k, f, b) for k, (f, b, _) in enumerate(results) if f != b]
    details = [f"pair {k}: candidates {_fmt(f)} vs enumeration {_fmt(b)}" for k, f, b in bad[:10]]
    return CheckResult(1, "candidate sup equals word enumeration", not bad,
                       f"{pairs - len(bad)}/{pairs} pairs agree (ranks 2-3, words of length <= {max_len})", details)


# 2 -------------------------------------------------------------------------------------


def check_2(seed: int = 0) -> CheckResult:
    x = rose(["1/2", "1/2"])
    y = rose(["3/4", "1/4"])
    dxy, dyx = distance(x, y), distance(y, x)
    ok = dxy.factor == Fraction(3, 2) and dyx.factor == 2
    return CheckResult(2, "asymmetry of the rose pair", ok,
                       f"d(x,y) factor {_fmt(dxy.factor)} via {W.format_word(dxy.witness.word)}, "
                       f"d(y,x) factor {_fmt(dyx.factor)} via {W.format_word(dyx.witness.word)}")


# 3 -------------------------------------------------------------------------------------


def check_3(seed: int = 0, triples: int = 500) -> CheckResult:
    rng = _rng(seed, 3)
    bad = []
    for k in range(triples):
        rank = 2 if k % 2 == 0 else 3
        x, y, z = (FX.random_point(rng, rank) for _ in range(3))
        lhs = distance(x, z).factor
        rhs = distance(x, y).factor * distance(y, z).factor
        if lhs > rhs:
            bad.append(f"triple {k}: {_fmt(lhs)} > {_fmt(rhs)}")
    return CheckResult(3, "multiplicative triangle inequality", not bad,
                       f"{triples - len(bad)}/{triples} triples satisfy it", bad[:10])


# 4 -------------------------------------------------------------------------------------


def check_4(seed: int = 0, cases: int = 100, aut_len: int = 8) -> CheckResult:
    rng = _rng(seed, 4)
    bad = []
    for k in range(cases):
        rank = 2 if k % 2 == 0 else 3
        x, y = FX.random_point(rng, rank), FX.random_point(rng, rank)
        phi = FX.random_automorphism(rng, rank, aut_len)
        before = distance(x, y).factor
        after = distance(act(x, phi), act(y, phi)).factor
        if before != after:
            bad.append(f"case {k}: {_fmt(before)} became {_fmt(after)} under {phi}")
    return CheckResult(4, "Out(F_n) acts by isometries", not bad,
                       f"{cases - len(bad)}/{cases} cases preserve the distance", bad[:10])


# 5 -------------------------------------------------------------------------------------


def check_5(seed: int = 0, points: int = 50) -> CheckResult:
    rng = _rng(seed, 5)
    bad = []
    total = 0
    for k in range(points):
        x = FX.random_point(rng, 2 if k % 2 == 0 else 3)
        for H in candidate_images(x):
            total += 1
            vol = sum((e.length for e in x.graph.edges if e.id in H), Fraction(0))
            try:
                got = face_distance(x, H)
            except (AssertionError, ValueError) as exc:
                bad.append(f"point {k}, H={sorted(H)}: {exc}")
                continue
            if got != 1 / vol:
                bad.append(f"point {k}, H={sorted(H)}: {_fmt(got)} != 1/{vol}")
    return CheckResult(5, "distance to a face is 1/vol(H)", not bad,
                       f"{total - len(bad)}/{total} candidate images over {points} points", bad[:10])


# 6 -------------------------------------------------------------------------------------


def check_6(seed: int = 0) -> CheckResult:
    fam = FX.family()
    names = list(fam)
    bad = []
    for a, b in itertools.product(names, repeat=2):
        same = equals(fam[a], fam[b])
        if a == b:
            if not same:
                bad.append(f"{a} not equal to itself")
            continue
        f1, f2 = distance_ext(fam[a], fam[b]).factor, distance_ext(fam[b], fam[a]).factor
        if same or not (f1 > 1 and f2 > 1):
            bad.append(f"{a} vs {b}: factors {_fmt(f1)}, {_fmt(f2)}")
    n = len(names)
    return CheckResult(6, "zero distance only on the diagonal", not bad and n >= 10,
                       f"{n} fixture points, {n * (n - 1) - len(bad)}/{n * (n - 1)} off-diagonal pairs separated", bad[:10])


# 7 -------------------------------------------------------------------------------------


def _faces(S):
    out = []
    for e in S.graph.edges:
        if e.length > 0:
            keep = [f.id for f in S.graph.edges if f.length > 0 and f.id != e.id]
            try:
                out.append((f"face-{e.id}", face(S, keep)))
            except ValueError:
                pass
    return out


def check_7(seed: int = 0, choices: int = 5, extra: int = 10) -> CheckResult:
    rng = _rng(seed, 7)
    fam = FX.family()
    bad = []
    tested = 0
    sources = 0
    pool = [(name, S, list(fam.items())) for name, S in fam.items()]
    for k in range(extra):
        S = FX.random_completion_point(rng, 3)
        pool.append((f"random{k}", S, [("self", S)] + _faces(S)))
    for sname, S, candidates_t in pool:
        view = collapse_zero(S)
        heavy = [c for c in candidates_ext(S, view) if c.kind in ("collapsed_barbell", "half_collapsed_barbell")]
        if not heavy:
            continue
        sources += 1
        targets = [(tname, T) for tname, T in candidates_t if distance_ext(S, T).factor != INFINITE]
        for c in heavy:
            for tname, T in targets:
                base = candidate_stretch(view, c, S, T)
                for _ in range(choices):
                    els = [random_group_element(rng, view.vertex(v).group) for v in c.slots]
                    st = candidate_stretch(view, c, S, T, els)
                    tested += 1
                    if st != base:
                        bad.append(f"{sname}->{tname} {c}: {_fmt(st)} vs {_fmt(base)} "
                                   f"with elements {[W.format_word(e) for e in els]}")
    return CheckResult(7, "type 4-5 stretch is independent of group elements", not bad and tested > 0,
                       f"{tested - len(bad)}/{tested} element choices agree ({sources} sources, finite-distance targets)",
                       bad[:10])


# 8 -------------------------------------------------------------------------------------


def check_8(seed: int = 0, window: int = 16, depth: int = 8) -> CheckResult:
    x = rose(["1/2", "1/2"])
    sched = [Fraction(1, 2**i) for i in range(1, window + 1)]
    pts = pinch_sequence(x, ["e2"], sched)
    s = AC.SequenceWindow(pts, AC.LipschitzSpace())
    eps = [Fraction(1, 2**j) for j in range(1, depth + 1)]
    cert = AC.check_forwards_cauchy(s, eps)
    back_bad = []
    for i in range(1, window + 1):
        for j in range(i + 1, window + 1):
            f = distance_ext(pts[j - 1], pts[i - 1]).factor
            if f < 2 ** (j - i):
                back_bad.append(f"d(x_{j}, x_{i}) factor {_fmt(f)} < 2^{j - i}")
    Ns = ", ".join(str(r.N) for r in cert.records)
    ok = cert.holds and not back_bad
    return CheckResult(8, "pinching is forwards Cauchy but not backwards", ok,
                       f"forwards {cert.verdict} with N(2^-j) = [{Ns}]; "
                       f"backwards bound 2^(j-i) held on {window * (window - 1) // 2 - len(back_bad)}"
                       f"/{window * (window - 1) // 2} pairs", back_bad[:10])


# 9 -------------------------------------------------------------------------------------


def check_9(seed: int = 0, steps: int = 10) -> CheckResult:
    fam = FX.family()
    bad = []
    lines = []
    for name, T in fam.items():
        if is_interior(T):
            continue
        prev = None
        fs = []
        for i in range(1, steps + 1):
            eps = Fraction(1, 2**i)
            f = distance_ext(approximate_from_interior(T, eps), T).factor
            fs.append(f)
            if f > 1 / (1 - eps) or f < 1:
                bad.append(f"{name}, i={i}: factor {_fmt(f)} outside [1, {_fmt(1 / (1 - eps))}]")
            if prev is not None and f > prev:
                bad.append(f"{name}, i={i}: factor increased from {_fmt(prev)} to {_fmt(f)}")
            prev = f
        lines.append(f"{name}: {', '.join(_fmt(f) for f in fs)}")
    return CheckResult(9, "interior approximations converge to the limit point", not bad,
                       f"{len(lines)} completion points, eps = 2^-i for i <= {steps}", bad[:10] + lines)


# 10 ------------------------------------------------------------------------------------


def check_10(seed: int = 0, m: int = 10, top: int = 10) -> CheckResult:
    P = [(1,), (2,)]
    axes_bad = []
    factors = []
    reverse = []
    for i in range(2, top + 1):
        sp = strictness_family(i, m)
        gap = axes_vector(sp.y, P).sup_gap(axes_vector(sp.x, P))
        if not gap < Fraction(1, m):
            axes_bad.append(f"i={i}: axes gap {gap}")
        f = distance_ext(sp.y, sp.x).factor
        if f != 1 / sp.p:
            axes_bad.append(f"i={i}: factor {_fmt(f)} differs from 1/p = {_fmt(1 / sp.p)}")
        factors.append(f)
        reverse.append(distance_ext(sp.x, sp.y).factor)
    # Every y_i stretches onto x by exactly 1/p_i = 1/(1 - q_i), and the axes
    # constraint forces q_i < 1/(m(i-1)).  The only bound valid for all i is
    # therefore the infimum of 1/(1 - q) as q -> 0.
    bound = Fraction(1)
    decreasing = all(b < a for a, b in zip(factors, factors[1:]))
    ok = not axes_bad and bound > 1 and all(f > bound for f in factors)
    details = [
        "d(y_i, x) factors: " + ", ".join(_fmt(f) for f in factors),
        f"strictly decreasing on the window: {decreasing}",
        f"uniform bound over all i >= 2: {bound} (limit of 1/(1-q_i), q_i -> 0)",
        "d(x, y_i) factors: " + ", ".join(_fmt(f) for f in reverse),
    ] + axes_bad
    return CheckResult(10, "axes topology strictly finer (y_i -> x stays Lipschitz-far)", ok,
                       f"axes within 1/{m} for i=2..{top}: {not axes_bad}; "
                       f"uniform Lipschitz bound > 1 from y_i to x: {bound > 1}", details)


# 11 ------------------------------------------------------------------------------------


def _random_word(rng: random.Random, rank: int, lo: int, hi: int) -> tuple[int, ...]:
    while True:
        w = W.reduce(tuple(rng.choice([1, -1]) * rng.randint(1, rank) for _ in range(rng.randint(lo, hi))))
        if w:
            return w


def check_11(seed: int = 0, instances: int = 100, max_len: int = 8) -> CheckResult:
    rng = _rng(seed, 11)
    bad = []
    # membership, rank 2, every reduced word of length <= max_len
    done = skipped = positives = 0
    words = list(W.all_reduced_words(2, max_len))
    while done < instances:
        gens = [_random_word(rng, 2, 2, 6) for _ in range(rng.randint(1, 3))]
        try:
            ball = oracles.subgroup_ball(gens, max_len, budget=40_000)
        except oracles.BudgetExceeded:
            skipped += 1
            continue
        H = W.stallings_graph(gens, 2)
        for w in words:
            got = W.contains(H, w)
            positives += got
            if got != (w in ball):
                bad.append(f"membership of {W.format_word(w)} in <{','.join(map(W.format_word, gens))}>: {got}")
        done += 1
    # ellipticity, ranks 2-3
    fam = [T for T in FX.family().values() if not is_interior(T)]
    ell = 0
    for k in range(instances):
        rank = 2 if k % 2 == 0 else 3
        T = rng.choice(fam) if rank == 2 and rng.random() < 0.5 else FX.random_completion_point(rng, rank)
        groups = [v.group for v in collapse_zero(T).nontrivial]
        u = _random_word(rng, rank, 0, 3) if rng.random() < 0.7 else ()
        if groups and rng.random() < 0.6:
            grp = rng.choice(groups)
            gens = [W.conjugate(random_group_element(rng, grp), u) for _ in range(rng.randint(1, 3))]
        else:
            gens = [_random_word(rng, rank, 1, 4) for _ in range(rng.randint(1, 2))]
        fast = is_elliptic(T, gens)
        slow = oracles.elliptic_bruteforce(T, gens, max_len)
        ell += fast
        if fast != slow:
            bad.append(f"ellipticity of <{','.join(map(W.format_word, gens))}>: Serre {fast}, enumeration {slow}")
    return CheckResult(11, "subgroup machinery matches brute force", not bad,
                       f"membership {instances} instances ({skipped} resampled over budget, {positives} member words); "
                       f"ellipticity {instances} instances ({ell} elliptic); {len(bad)} disagreements", bad[:10])


# 12 ------------------------------------------------------------------------------------


def check_12(seed: int = 0, max_len: int = 10) -> CheckResult:
    fam = FX.family()
    bad = []
    finite = []
    for o in FX.ONE_EDGE_LOOP:
        for name, P in fam.items():
            if name == o:
                continue
            r = distance_ext(fam[o], P)
            if r.factor != INFINITE:
                bad.append(f"{o} -> {name}: factor {_fmt(r.factor)} via {W.format_word(r.witness.word)}")
    # interior sources: finite, and equal to the candidate maximum and to word enumeration
    for name, x in fam.items():
        if not is_interior(x):
            continue
        for o in FX.ONE_EDGE_LOOP:
            f = distance_ext(x, fam[o]).factor
            brute, _, _ = max_stretch_bruteforce(x, fam[o], max_len)
            if f == INFINITE or f != brute:
                bad.append(f"{name} -> {o}: candidates {_fmt(f)}, enumeration {_fmt(brute)}")
            else:
                finite.append(f"{name}->{o}={_fmt(f)}")
    n_pairs = len(FX.ONE_EDGE_LOOP) * (len(fam) - 1)
    n_inf = n_pairs - sum(1 for b in bad if "->" in b and "candidates" not in b)
    return CheckResult(12, "one-edge-loop splittings are infinitely far from everything", not bad,
                       f"{n_inf}/{n_pairs} outgoing distances INFINITE; interior sources finite and "
                       f"candidate-realised on {len(finite)} pairs", bad + finite[:6])


CHECKS: dict[int, Callable[..., CheckResult]] = {
    1: check_1, 2: check_2, 3: check_3, 4: check_4, 5: check_5, 6: check_6,
    7: check_7, 8: check_8, 9: check_9, 10: check_10, 11: check_11, 12: check_12,
}


def run(numbers: list[int] | None = None, seed: int = 0, threads: int = 1) -> list[CheckResult]:
    out = []
    for n in numbers or sorted(CHECKS):
        kwargs = {"seed": seed}
        if n == 1:
            kwargs["threads"] = threads
        out.append(CHECKS[n](**kwargs))
    return out
