import random
from fractions import Fraction as F

import pytest

from osx import words as W
from osx.fixtures import random_automorphism, random_point
from osx.marked_graph import (
    Edge,
    MarkedGraph,
    MetricGraph,
    NotAForest,
    act,
    barbell,
    candidates,
    collapse_forest,
    rose,
    spanning_tree_basis,
    theta,
    tighten,
    tighten_path,
    translation_length,
    validate,
)


def p(s):
    return W.parse_word(s)


def test_validate_rose():
    assert validate(rose(["1/2", "1/2"])).ok
    rep = validate(rose(["1/2", "1/3"]))
    assert rep.kinds == {"UnitVolume"}


def test_validate_theta_and_deleted_edge():
    t = theta(["1/3", "1/3", "1/3"])
    assert validate(t).ok
    g = MetricGraph(("u", "w"), (Edge("e1", "u", "w", F(1, 2)), Edge("e2", "u", "w", F(1, 2))))
    broken = MarkedGraph(g, ((1, -2),), "u")
    assert "Valence" in validate(broken).kinds


def test_validate_rejects_bad_marking():
    x = rose(["1/2", "1/2"])
    bad = MarkedGraph(x.graph, ((1, 1), (2,)), "v")
    assert "Marking" in validate(bad).kinds
    not_closed = MarkedGraph(theta(["1/3"] * 3).graph, ((1,), (3, -2)), "u")
    assert "Marking" in validate(not_closed).kinds


def test_validate_nonpositive_edge():
    assert "Positivity" in validate(rose([1, 0])).kinds


def test_tighten_examples():
    x = rose(["1/2", "1/2"])
    assert tighten(x, (1, -1)) == ()
    assert tighten(x, (1, 2, -1)) == (1, 2, -1)
    assert tighten(x, (1, 2, -1), cyclic=True) == (2,)


def test_tighten_idempotent_and_shortening():
    rng = random.Random(3)
    for _ in range(60):
        x = random_point(rng, rng.choice([2, 3]))
        w = tuple(rng.choice([1, -1]) * rng.randint(1, x.rank) for _ in range(8))
        path = []
        for a in w:
            img = x.images[abs(a) - 1]
            path.extend(img if a > 0 else W.inverse(img))
        for cyc in (False, True):
            t = tighten_path(path, cyc)
            assert tighten_path(t, cyc) == t
            assert x.graph.path_length(t) <= x.graph.path_length(path)


def test_translation_length_examples():
    x = rose(["1/2", "1/2"])
    assert translation_length(x, p("abaB")) == 2
    assert translation_length(x, p("aA")) == 0
    t = theta(["1/5", "1/2", "3/10"])
    assert translation_length(t, p("a")) == F(1, 5) + F(1, 2)
    assert translation_length(t, p("b")) == F(3, 10) + F(1, 2)
    assert translation_length(t, p("aB")) == F(1, 5) + F(3, 10)


def test_translation_length_invariants():
    rng = random.Random(4)
    for _ in range(60):
        x = random_point(rng, rng.choice([2, 3]))
        w = W.reduce(tuple(rng.choice([1, -1]) * rng.randint(1, x.rank) for _ in range(6)))
        u = tuple(rng.choice([1, -1]) * rng.randint(1, x.rank) for _ in range(4))
        assert translation_length(x, W.conjugate(w, u)) == translation_length(x, w)
        for k in range(1, 6):
            assert translation_length(x, W.power(w, k)) == k * translation_length(x, w)
        assert (translation_length(x, w) == 0) == (W.reduce(w) == ())


def words_of(x):
    return {W.format_word(c.word) for c in candidates(x)}


def test_candidates_rose_and_theta():
    assert words_of(rose(["1/2", "1/2"])) == {"a", "b", "ab", "aB"}
    cs = candidates(theta(["1/3"] * 3))
    assert len(cs) == 3 and {c.kind for c in cs} == {"embedded_circle"}
    bb = candidates(barbell("1/4", "1/2", "1/4"))
    assert {c.kind for c in bb} == {"embedded_circle", "barbell"}
    assert words_of(barbell("1/4", "1/2", "1/4")) == {"a", "b", "ab", "aB"}


def test_candidates_are_immersed_loops():
    rng = random.Random(6)
    for _ in range(30):
        x = random_point(rng, 3)
        assert len(candidates(x)) >= 2
        for c in candidates(x):
            loop = c.loop
            assert tighten_path(loop, cyclic=True) == tuple(loop)
            assert W.cyclic_word(x.element(loop)) == c.word or W.cyclic_word(W.inverse(x.element(loop))) == c.word


def test_collapse_forest():
    x = theta(["1/5", "2/5", "2/5"])
    assert collapse_forest(x, []) == x
    r = collapse_forest(x, ["e2"])
    assert validate(r).ok and len(r.graph.vertices) == 1
    assert r.lengths == {"e1": F(1, 3), "e3": F(2, 3)}
    with pytest.raises(NotAForest):
        collapse_forest(x, ["e1", "e2"])


def test_collapse_lengths_direct_recomputation():
    rng = random.Random(7)
    x = theta(["1/5", "2/5", "2/5"])
    r = collapse_forest(x, ["e2"])
    scale = 1 / (1 - F(2, 5))
    for _ in range(50):
        w = tuple(rng.choice([1, -1, 2, -2]) for _ in range(rng.randint(1, 8)))
        loop = x.loop(w)
        direct = sum((x.graph.length(d) for d in loop if abs(d) != 2), F(0)) * scale
        assert translation_length(r, w) == direct


def test_act_identity_and_defining_property():
    rng = random.Random(8)
    for _ in range(100):
        rank = rng.choice([2, 3])
        x = random_point(rng, rank)
        phi = random_automorphism(rng, rank, 6)
        w = tuple(rng.choice([1, -1]) * rng.randint(1, rank) for _ in range(6))
        y = act(x, phi)
        assert translation_length(y, w) == translation_length(x, W.apply_endo(phi, w))
    x = random_point(rng, 2)
    assert act(x, W.EndoMap.identity(2)) == x


def test_inner_automorphism_keeps_lengths():
    x = theta(["1/5", "2/5", "2/5"])
    inner = W.EndoMap((p("baB"), p("b")))
    y = act(x, inner)
    for w in W.all_reduced_words(2, 5, 1):
        assert translation_length(y, w) == translation_length(x, w)


def test_right_action():
    rng = random.Random(10)
    probes = [W.reduce(tuple(rng.choice([1, -1, 2, -2, 3, -3]) for _ in range(5))) for _ in range(50)]
    for _ in range(10):
        x = random_point(rng, 3)
        phi, psi = random_automorphism(rng, 3, 4), random_automorphism(rng, 3, 4)
        a = act(act(x, phi), psi)
        b = act(x, W.compose_endo(phi, psi))
        assert [translation_length(a, w) for w in probes] == [translation_length(b, w) for w in probes]


def test_spanning_tree_basis():
    x = rose(["1/2", "1/2"])
    assert spanning_tree_basis(x, []) == {"e1": (1,), "e2": (2,)}
    t = theta(["1/3"] * 3)
    basis = spanning_tree_basis(t, ["e2"])
    assert len(basis) == 2
    assert W.is_automorphism(W.EndoMap((basis["e1"], basis["e3"])))


def test_spanning_tree_basis_realises_candidates():
    rng = random.Random(11)
    for _ in range(20):
        x = random_point(rng, 3)
        tree = [x.graph.edges[i].id for i in sorted(x._tree[0])]
        basis = spanning_tree_basis(x, tree)
        assert W.is_automorphism(W.EndoMap(tuple(basis[e.id] for e in x.graph.edges if e.id not in tree)))
        for c in candidates(x):
            out = []
            for d in c.loop:
                e = x.graph.edges[abs(d) - 1].id
                if e in basis:
                    out.extend(basis[e] if d > 0 else W.inverse(basis[e]))
            assert W.cyclic_word(out) in (c.word, W.cyclic_word(W.inverse(c.word)))
