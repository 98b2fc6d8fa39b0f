"""Admissible and Cauchy sequences in asymmetric metric spaces, checked on
finite windows.

Every verdict here is a statement about a finite window and an explicit
list of thresholds, never about the limit itself.  Indices are 1-based.

Distance values are ``Fraction`` (exact), ``LogFactor`` (the logarithm of a
positive rational, compared exactly) or ``math.inf``.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Generic, Protocol, Sequence, TypeVar, Union

import mpmath

P = TypeVar("P")


class WindowExhausted(RuntimeError):
    pass


# -- exact logarithms ---------------------------------------------------------------


@dataclass(frozen=True, order=False)
class LogFactor:
    """The real number ``log(ratio)`` for a positive rational ``ratio``."""

    ratio: Fraction

    def __post_init__(self) -> None:
        if self.ratio <= 0:
            raise ValueError("LogFactor needs a positive ratio")

    def __float__(self) -> float:
        return math.log(self.ratio.numerator) - math.log(self.ratio.denominator)

    def __add__(self, other: LogFactor) -> LogFactor:
        return LogFactor(self.ratio * other.ratio)

    def __sub__(self, other: LogFactor) -> LogFactor:
        return LogFactor(self.ratio / other.ratio)

    def __abs__(self) -> LogFactor:
        return self if self.ratio >= 1 else LogFactor(1 / self.ratio)

    def __neg__(self) -> LogFactor:
        return LogFactor(1 / self.ratio)

    def _cmp_rational(self, q: Fraction) -> int:
        """Sign of log(ratio) - q, decided exactly."""
        q = Fraction(q)
        if q == 0:
            return (self.ratio > 1) - (self.ratio < 1)
        # log r = q has no solution with r, q rational and q != 0 (Lindemann),
        # so interval refinement terminates.
        prec = 64
        while True:
            with mpmath.workprec(prec):
                lo = mpmath.log(mpmath.mpf(self.ratio.numerator)) - mpmath.log(mpmath.mpf(self.ratio.denominator))
                diff = lo - mpmath.mpf(q.numerator) / q.denominator
                tol = mpmath.mpf(2) ** (-prec + 16) * (1 + abs(lo) + abs(mpmath.mpf(q.numerator) / q.denominator))
                if diff > tol:
                    return 1
                if diff < -tol:
                    return -1
            prec *= 2

    def _cmp(self, other: Any) -> int:
        if isinstance(other, LogFactor):
            return (self.ratio > other.ratio) - (self.ratio < other.ratio)
        if isinstance(other, float) and math.isinf(other):
            return -1 if other > 0 else 1
        if isinstance(other, (int, Fraction)):
            return self._cmp_rational(Fraction(other))
        return NotImplemented

    def __lt__(self, other: Any) -> bool:
        return self._cmp(other) < 0

    def __le__(self, other: Any) -> bool:
        return self._cmp(other) <= 0

    def __gt__(self, other: Any) -> bool:
        return self._cmp(other) > 0

    def __ge__(self, other: Any) -> bool:
        return self._cmp(other) >= 0

    def __str__(self) -> str:
        return f"log({self.ratio})"


Value = Union[Fraction, LogFactor, float]


def is_inf(v: Value) -> bool:
    return isinstance(v, float) and math.isinf(v)


def less_than(v: Value, eps: Fraction) -> bool:
    if is_inf(v):
        return False
    return v < Fraction(eps)


def gap(u: Value, v: Value) -> Value:
    """|u - v| in the same representation."""
    if is_inf(u) or is_inf(v):
        return math.inf
    if isinstance(u, LogFactor) and isinstance(v, LogFactor):
        return abs(u - v)
    if isinstance(u, LogFactor) or isinstance(v, LogFactor):
        raise TypeError("mixed distance representations")
    return abs(Fraction(u) - Fraction(v))


def display(v: Value) -> float:
    return float(v)


# -- spaces -----------------------------------------------------------------------------


class AsymSpace(Protocol[P]):
    def distance(self, p: P, q: P) -> Value: ...


class ToySpace:
    """Rationals with d(x, y) = max(y - x, 2 (x - y))."""

    def distance(self, x: Fraction, y: Fraction) -> Fraction:
        x, y = Fraction(x), Fraction(y)
        return max(y - x, 2 * (x - y))


class LipschitzSpace:
    """Completion points with the logarithm of the extended stretch factor."""

    def distance(self, S, T) -> Value:
        from osx.completion_points import distance_ext

        f = distance_ext(S, T).factor
        return math.inf if f == math.inf else LogFactor(f)


class SequenceWindow(Generic[P]):
    """Finite window x_1 .. x_W of a sequence, with memoised distances."""

    def __init__(self, points: Sequence[P], space: AsymSpace[P]):
        if not points:
            raise ValueError("a window must be nonempty")
        self.points = list(points)
        self.space = space
        self._cache: dict[tuple[int, int], Value] = {}
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return len(self.points)

    def d(self, i: int, j: int) -> Value:
        key = (i, j)
        with self._lock:
            if key in self._cache:
                return self._cache[key]
        v = self.space.distance(self.points[i - 1], self.points[j - 1])
        with self._lock:
            self._cache[key] = v
        return v


# -- certificates -----------------------------------------------------------------------

HOLDS = "HOLDS_ON_WINDOW"
FAILS = "FAILS_WITH_WITNESS"
DIVERGES = "DIVERGES"


@dataclass
class EpsRecord:
    eps: Fraction
    N: int
    K: dict[int, int] = field(default_factory=dict)


@dataclass
class Certificate:
    kind: str
    verdict: str
    window: int
    records: list[EpsRecord] = field(default_factory=list)
    witness: tuple | None = None
    value: Value | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return self.verdict == HOLDS

    def N(self, eps: Fraction) -> int:
        return next(r.N for r in self.records if r.eps == eps)


def _check_eps(eps_list: Sequence[Fraction]) -> list[Fraction]:
    eps = [Fraction(e) for e in eps_list]
    if any(e <= 0 for e in eps):
        raise ValueError("thresholds must be positive")
    return eps


def check_forwards_cauchy(s: SequenceWindow, eps_list: Sequence[Fraction]) -> Certificate:
    """For each eps: least N with d(x_i, x_j) < eps for all window pairs j > i > N."""
    W_ = len(s)
    cert = Certificate("cauchy", HOLDS, W_)
    for eps in _check_eps(eps_list):
        worst: tuple[int, int] | None = None
        for i in range(1, W_ + 1):
            for j in range(i + 1, W_ + 1):
                if not less_than(s.d(i, j), eps):
                    if worst is None or i > worst[0]:
                        worst = (i, j)
        n = worst[0] if worst else 0
        cert.records.append(EpsRecord(eps, n))
        if n >= W_ - 1 and cert.verdict == HOLDS:
            cert.verdict = FAILS
            cert.witness = (eps, worst[0], worst[1])
    return cert


def admissible_K(s: SequenceWindow, n: int, eps: Fraction) -> int:
    """max({n} ∪ {k > n : d(x_n, x_k) >= eps}) inside the window."""
    K = n
    for k in range(n + 1, len(s) + 1):
        if not less_than(s.d(n, k), eps):
            K = k
    return K


def check_admissible(s: SequenceWindow, eps_list: Sequence[Fraction]) -> Certificate:
    """For each eps: least N such that every n in (N, W-1] has K(n, eps) < W."""
    W_ = len(s)
    cert = Certificate("admissible", HOLDS, W_)
    for eps in _check_eps(eps_list):
        Ks = {n: admissible_K(s, n, eps) for n in range(1, W_)}
        bad = [n for n, K in Ks.items() if K >= W_]
        N = max(bad) if bad else 0
        rec = EpsRecord(eps, N, {n: K for n, K in Ks.items() if n > N})
        cert.records.append(rec)
        if N >= W_ - 1 and cert.verdict == HOLDS:
            cert.verdict = FAILS
            cert.witness = (eps, N, Ks[N]) if N in Ks else (eps, N, W_)
    if W_ < 2:
        cert.verdict = FAILS
        cert.notes.append("window too short to certify anything")
    return cert


def extract_cauchy_subsequence(s: SequenceWindow, max_terms: int | None = None) -> list[int]:
    """Indices following n_{j+1} = max(N(2^-(j+1)), K(n_j, 2^-j)) + 1, as far
    as the window allows.

    The first index is max(N(1), N(1/2)) + 1 rather than N(1) + 1: K(n_1, 1/2)
    is only guaranteed to exist once n_1 > N(1/2).  The output satisfies
    d(x_{n_k}, x_{n_m}) < 2^-k for k < m, which is re-checked before returning.
    """
    W_ = len(s)
    limit = W_ if max_terms is None else min(W_, max_terms)
    N_cache: dict[int, int] = {}

    def N(j: int) -> int:
        if j not in N_cache:
            N_cache[j] = check_admissible(s, [Fraction(1, 2**j)]).records[0].N
        return N_cache[j]

    idx = [max(N(0), N(1)) + 1]
    if idx[0] > W_ - 1:
        raise WindowExhausted("admissibility certificate for eps = 1/2 runs past the window")
    j = 1
    while len(idx) < limit:
        K = admissible_K(s, idx[-1], Fraction(1, 2**j))
        nxt = max(N(j + 1), K) + 1
        if nxt > W_:
            break
        idx.append(nxt)
        j += 1
    if len(idx) < 2:
        raise WindowExhausted("window supports fewer than two subsequence terms")
    for a in range(len(idx)):
        for b in range(a + 1, len(idx)):
            if not less_than(s.d(idx[a], idx[b]), Fraction(1, 2 ** (a + 1))):
                raise AssertionError("extracted subsequence failed re-verification")
    return idx


def interlace(a: SequenceWindow, b: SequenceWindow) -> SequenceWindow:
    if a.space is not b.space:
        raise ValueError("windows live in different spaces")
    pts = []
    for k in range(max(len(a), len(b))):
        if k < len(a):
            pts.append(a.points[k])
        if k < len(b):
            pts.append(b.points[k])
    return SequenceWindow(pts, a.space)


@dataclass
class CLimit:
    verdict: str  # HOLDS_ON_WINDOW (stable estimate) or DIVERGES
    value: Value
    c: list[Value]
    records: list[EpsRecord]


def c_limit(a: SequenceWindow, b: SequenceWindow, eps_list: Sequence[Fraction], bound: Value = math.inf) -> CLimit:
    """Estimate lim_n lim_k d(a_n, b_k) on the window.

    Inner limits are read at the last b index; records give, per eps, the
    outer index N after which c_n stays within eps of the final value and the
    inner indices K(n) after which d(a_n, b_k) stays within eps of c_n.
    """
    if a.space is not b.space:
        raise ValueError("windows live in different spaces")
    space = a.space
    Wa, Wb = len(a), len(b)

    def d(n: int, k: int) -> Value:
        return space.distance(a.points[n - 1], b.points[k - 1])

    c = [d(n, Wb) for n in range(1, Wa + 1)]
    final = c[-1]
    records = []
    for eps in _check_eps(eps_list):
        N = 0
        for n in range(1, Wa + 1):
            if not less_than(gap(c[n - 1], final), eps):
                N = n
        K = {}
        for n in range(N + 1, Wa + 1):
            Kn = 0
            for k in range(1, Wb + 1):
                if not less_than(gap(d(n, k), c[n - 1]), eps):
                    Kn = k
            K[n] = Kn
        records.append(EpsRecord(eps, N, K))
    tail_bad = is_inf(final) or (not is_inf(bound) and not final <= bound)
    return CLimit(DIVERGES if tail_bad else HOLDS, final, c, records)


def equivalent(a: SequenceWindow, b: SequenceWindow, eps_list: Sequence[Fraction]) -> Certificate:
    """Both directional c-limits below the smallest threshold."""
    eps = _check_eps(eps_list)
    thr = min(eps)
    ab = c_limit(a, b, eps)
    ba = c_limit(b, a, eps)
    ok = less_than(ab.value, thr) and less_than(ba.value, thr)
    cert = Certificate("equivalent", HOLDS if ok else FAILS, max(len(a), len(b)))
    cert.value = ab.value
    cert.notes.append(f"threshold {thr}")
    cert.notes.append(f"c(a,b) ~ {display(ab.value):.6g}, c(b,a) ~ {display(ba.value):.6g}")
    inter = check_admissible(interlace(a, b), eps)
    cert.notes.append(f"interlace admissible: {inter.holds}")
    if inter.holds != ok:
        cert.notes.append("interlace check disagrees with the c-limit verdict")
    if not ok:
        cert.witness = ("c(a,b)", ab.value) if not less_than(ab.value, thr) else ("c(b,a)", ba.value)
    return cert

