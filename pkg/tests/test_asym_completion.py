import math
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from osx.asym_completion import (
    DIVERGES,
    FAILS,
    HOLDS,
    LipschitzSpace,
    LogFactor,
    SequenceWindow,
    ToySpace,
    WindowExhausted,
    c_limit,
    check_admissible,
    check_forwards_cauchy,
    equivalent,
    extract_cauchy_subsequence,
    interlace,
    less_than,
)
from osx.completion_points import distance_ext, pinch_sequence
from osx.marked_graph import barbell, rose

TOY = ToySpace()
EPS = [F(1, 2**j) for j in range(1, 9)]


def toy(points):
    return SequenceWindow([F(p) for p in points], TOY)


def geometric(n=20):
    return toy([1 - F(1, 2**k) for k in range(1, n + 1)])


def pinch(x, edges, n=12):
    return pinch_sequence(x, edges, [F(1, 2**i) for i in range(1, n + 1)])


def test_toy_distance_is_asymmetric():
    assert TOY.distance(F(0), F(1)) == 1
    assert TOY.distance(F(1), F(0)) == 2
    assert TOY.distance(F(3), F(3)) == 0


def test_constant_sequence_holds_everywhere():
    s = toy([5] * 10)
    c = check_forwards_cauchy(s, EPS)
    assert c.verdict == HOLDS and all(r.N == 0 for r in c.records)
    assert check_admissible(s, EPS).holds
    assert extract_cauchy_subsequence(s) == list(range(1, 11))


def test_geometric_toy_sequence():
    c = check_forwards_cauchy(geometric(), EPS)
    assert c.holds
    for j, r in enumerate(c.records, 1):
        # d(x_i, x_j) = 2^-i - 2^-j < 2^-i, so N(2^-j) sits just below j
        assert j - 2 <= r.N <= j
    Ns = [r.N for r in c.records]
    assert Ns == sorted(Ns)


def test_alternating_sequence_fails_with_witness():
    s = toy([0, 1] * 6)
    c = check_forwards_cauchy(s, EPS)
    assert c.verdict == FAILS
    eps, i, j = c.witness
    assert not less_than(s.d(i, j), eps)
    assert check_admissible(s, EPS).verdict == FAILS


def test_cauchy_implies_admissible_and_records_are_sound():
    s = geometric()
    cert = check_admissible(s, EPS)
    assert cert.holds
    for r in cert.records:
        for n, K in r.K.items():
            for k in range(K + 1, len(s) + 1):
                assert less_than(s.d(n, k), r.eps)


def test_extract_subsequence_toy_guarantee():
    s = geometric(24)
    idx = extract_cauchy_subsequence(s)
    assert idx[0] == 1 and len(idx) >= 3
    for j in range(len(idx)):
        for k in range(j + 1, len(idx)):
            for m in range(k + 1, len(idx)):
                assert less_than(s.d(idx[k], idx[m]), F(1, 2 ** (j + 1)))


def test_extract_subsequence_runs_out():
    with pytest.raises(WindowExhausted):
        extract_cauchy_subsequence(toy([0, 1] * 3))


def test_pinch_window_is_admissible_and_extractable():
    s = SequenceWindow(pinch(rose(["1/2", "1/2"]), ["e2"], 14), LipschitzSpace())
    assert check_admissible(s, EPS[:6]).holds
    idx = extract_cauchy_subsequence(s)
    assert idx == sorted(idx) and len(idx) >= 3


def test_interlace():
    s = toy([1, 2, 3])
    z = interlace(s, s)
    assert z.points == [1, 1, 2, 2, 3, 3]
    assert len(interlace(s, toy([4, 5]))) == 5
    with pytest.raises(ValueError):
        interlace(s, SequenceWindow([1], ToySpace()))


def test_c_limit_same_sequence_is_zero():
    s = geometric(12)
    r = c_limit(s, s, EPS)
    assert r.verdict == HOLDS and r.value < F(1, 2**11)


def test_c_limit_matches_extended_distance():
    sp = LipschitzSpace()
    a = SequenceWindow(pinch(rose(["1/2", "1/2"]), ["e2"]), sp)
    b = SequenceWindow(pinch(barbell("1/4", "1/2", "1/4"), ["ea", "eb"]), sp)
    target = distance_ext(rose([1, 0]), barbell(0, 1, 0)).factor
    assert target == 2
    r = c_limit(a, b, EPS)
    assert r.verdict == HOLDS
    assert abs(float(r.value) - math.log(2)) < float(min(EPS))


def test_c_limit_diverges_towards_infinite_distance():
    sp = LipschitzSpace()
    a = SequenceWindow(pinch(rose(["1/2", "1/2"]), ["e2"]), sp)
    b = SequenceWindow(pinch(barbell("1/4", "1/2", "1/4"), ["ea", "eb"]), sp)
    r = c_limit(b, a, EPS, bound=F(2))
    assert r.verdict == DIVERGES
    cs = [float(c) for c in r.c]
    assert cs == sorted(cs)


def test_equivalent():
    s = geometric(16)
    assert equivalent(s, s, EPS).holds
    shifted = toy(s.points[1:] + [1 - F(1, 2**17)])
    cert = equivalent(s, shifted, EPS)
    assert cert.holds and "interlace admissible: True" in cert.notes
    sp = LipschitzSpace()
    a = SequenceWindow(pinch(rose(["1/2", "1/2"]), ["e2"]), sp)
    b = SequenceWindow(pinch(rose(["1/2", "1/2"]), ["e1"]), sp)
    assert equivalent(a, b, EPS).verdict == FAILS


@given(st.fractions(min_value=F(1, 100), max_value=100), st.fractions(min_value=-5, max_value=5))
def test_logfactor_comparison_exact(r, q):
    lf = LogFactor(r)
    got = (lf > q) - (lf < q)
    want = (math.log(r) > q) - (math.log(r) < q)
    if abs(math.log(r) - float(q)) > 1e-9:
        assert got == want
    assert got != 0 or (r == 1 and q == 0)
