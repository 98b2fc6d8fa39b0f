import random
from fractions import Fraction as F

import pytest

from osx import words as W
from osx.completion_points import (
    InvalidPoint,
    ScheduleNotDecreasing,
    approximate_from_interior,
    candidates_ext,
    collapse_zero,
    distance_ext,
    equals,
    is_elliptic,
    pinch_sequence,
    qvol,
    require_valid,
    translation_length_ext,
    validate_completion,
)
from osx.fixtures import family, random_automorphism, random_completion_point, random_point
from osx.marked_graph import act, barbell, candidates, relabel, rose, theta
from osx.metric import INFINITE, distance
from osx.oracles import elliptic_bruteforce

HNN = rose([1, 0])          # edge a of length 1, vertex group <b>
FP = barbell(0, 1, 0)       # <a> * <b>


def p(s):
    return W.parse_word(s)


def test_collapse_zero_trivial():
    v = collapse_zero(rose(["1/2", "1/2"]))
    assert all(not x.group for x in v.vertices)


def test_collapse_zero_hnn():
    v = collapse_zero(HNN)
    assert len(v.quotient.edges) == 1 and len(v.vertices) == 1
    assert v.vertices[0].group == (p("b"),)


def test_collapse_zero_theta_one_zero_edge():
    v = collapse_zero(theta([F(1, 2), 0, F(1, 2)]))
    assert len(v.quotient.vertices) == 1 and len(v.quotient.edges) == 2
    assert not v.nontrivial


def test_qvol_and_validation():
    for x in family().values():
        assert qvol(x) == 1
    with pytest.raises(InvalidPoint):
        require_valid(rose(["1/2", 0]))
    assert "ProperZero" in validate_completion(rose([0, 0])).kinds
    assert "UnitVolume" in validate_completion(rose(["1/2", 0])).kinds
    assert validate_completion(barbell(F(1, 2), 0, F(1, 2))).ok


def test_translation_length_ext_examples():
    assert translation_length_ext(HNN, p("b")) == 0
    assert translation_length_ext(HNN, p("a")) == 1
    assert translation_length_ext(HNN, p("ab")) == 1
    assert translation_length_ext(FP, p("a")) == 0
    assert translation_length_ext(FP, p("ab")) == 2


def test_is_elliptic_examples():
    assert is_elliptic(HNN, [p("b")])
    assert not is_elliptic(HNN, [p("a"), p("b")])
    assert is_elliptic(FP, [p("a")]) and is_elliptic(FP, [p("b")])
    assert not is_elliptic(FP, [p("a"), p("b")])


def test_is_elliptic_matches_enumeration():
    rng = random.Random(3)
    for _ in range(30):
        rank = rng.choice([2, 3])
        T = random_completion_point(rng, rank)
        groups = [v.group for v in collapse_zero(T).nontrivial]
        if groups and rng.random() < 0.5:
            gens = list(rng.choice(groups))
        else:
            gens = [W.reduce(tuple(rng.choice([1, -1]) * rng.randint(1, rank) for _ in range(3)))]
        assert is_elliptic(T, gens) == elliptic_bruteforce(T, gens, 6)


def test_candidates_ext_interior_is_classical():
    rng = random.Random(4)
    for _ in range(10):
        x = random_point(rng, 3)
        ext = {c.word for c in candidates_ext(x)}
        assert ext == {c.word for c in candidates(x)}


def test_candidates_ext_free_product():
    cs = candidates_ext(FP)
    assert [c.kind for c in cs] == ["collapsed_barbell"]
    assert cs[0].word == W.cyclic_word(p("ab"))


def test_candidates_ext_half_collapsed():
    cs = candidates_ext(barbell(0, F(1, 2), F(1, 2)))
    kinds = [c.kind for c in cs]
    assert kinds.count("half_collapsed_barbell") == 1
    assert kinds.count("embedded_circle") == 1


def test_distance_ext_examples():
    x = rose(["1/2", "1/2"])
    assert distance_ext(x, x).factor == 1
    face = rose([1, 0])
    d = distance_ext(x, face)
    assert d.factor == 2 and W.format_word(d.witness.word) == "a"
    r = distance_ext(HNN, x)
    assert r.factor == INFINITE and r.witness.kind == "vertex_group"


def test_distance_ext_matches_metric_on_interior():
    rng = random.Random(5)
    for _ in range(40):
        rank = rng.choice([2, 3])
        x, y = random_point(rng, rank), random_point(rng, rank)
        assert distance_ext(x, y).factor == distance(x, y).factor


def test_triangle_inequality_mixed():
    rng = random.Random(6)
    pts = list(family().values())
    for _ in range(300):
        a, b, c = (rng.choice(pts) for _ in range(3))
        ab, bc, ac = distance_ext(a, b).factor, distance_ext(b, c).factor, distance_ext(a, c).factor
        if INFINITE not in (ab, bc):
            assert ac != INFINITE and ac <= ab * bc


def test_equals():
    t = theta([F(1, 2), 0, F(1, 2)])
    assert equals(t, t)
    assert not equals(rose(["1/2", "1/2"]), theta(["1/3"] * 3))
    moved = relabel(t, {"u": "p", "w": "q"}, {"e1": "f1", "e2": "f2", "e3": "f3"})
    assert equals(t, moved)
    by_a = W.EndoMap((p("a"), W.conjugate(p("b"), p("a"))))
    by_b = W.EndoMap((W.conjugate(p("a"), p("b")), p("b")))
    assert equals(act(t, by_a), t)
    assert equals(act(HNN, by_b), HNN)
    assert equals(HNN, theta([1, 0, 0]))


def test_approximate_from_interior():
    x = rose(["1/2", "1/2"])
    assert approximate_from_interior(x, F(1, 4)) is x
    a = approximate_from_interior(HNN, F(1, 4))
    assert a.lengths == {"e1": F(3, 4), "e2": F(1, 4)}
    prev = None
    for i in range(1, 11):
        eps = F(1, 2**i)
        y = approximate_from_interior(HNN, eps)
        assert qvol(y) == 1
        f = distance_ext(y, HNN).factor
        assert 1 <= f <= 1 / (1 - eps)
        assert prev is None or f <= prev
        prev = f
    with pytest.raises(ValueError):
        approximate_from_interior(HNN, 1)


def test_pinch_sequence():
    x = rose(["1/2", "1/2"])
    seq = pinch_sequence(x, ["e2"], [F(1, 2), F(1, 4), F(1, 8)])
    assert seq[0] == x
    assert seq[2].lengths == {"e1": F(7, 8), "e2": F(1, 8)}
    for i in range(3):
        for j in range(i + 1, 3):
            assert distance_ext(seq[j], seq[i]).factor >= 2 ** (j - i)
    with pytest.raises(ScheduleNotDecreasing):
        pinch_sequence(x, ["e2"], [F(1, 4), F(1, 2)])
    with pytest.raises(ScheduleNotDecreasing):
        pinch_sequence(x, ["e2"], [F(3, 2)])


def test_type_4_5_element_independence_on_family():
    rng = random.Random(7)
    from osx.completion_points import candidate_stretch, random_group_element

    fam = family()
    for S in fam.values():
        view = collapse_zero(S)
        for c in candidates_ext(S, view):
            if not c.slots:
                continue
            for T in fam.values():
                if distance_ext(S, T).factor == INFINITE:
                    continue
                base = candidate_stretch(view, c, S, T)
                for _ in range(5):
                    els = [random_group_element(rng, view.vertex(v).group) for v in c.slots]
                    assert candidate_stretch(view, c, S, T, els) == base


def test_no_edge_stabilisers():
    # collapsing Z never identifies two positive edges
    rng = random.Random(8)
    for _ in range(20):
        T = random_completion_point(rng, 3)
        view = collapse_zero(T)
        pos = [e.id for e in T.graph.edges if e.length > 0]
        assert sorted(e.id for e in view.quotient.edges) == sorted(pos)


def test_act_on_completion_points_is_isometric():
    rng = random.Random(9)
    fam = list(family().values())
    for _ in range(20):
        S, T = rng.choice(fam), rng.choice(fam)
        phi = random_automorphism(rng, 2, 5)
        assert distance_ext(act(S, phi), act(T, phi)).factor == distance_ext(S, T).factor
