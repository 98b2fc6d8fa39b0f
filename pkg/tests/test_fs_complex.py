from fractions import Fraction as F
from random import Random

import pytest

from osx import words as W
from osx.completion_points import distance_ext, equals, validate_completion
from osx.fixtures import random_point
from osx.fs_complex import (
    InvalidFace,
    NotACandidateImage,
    axes_vector,
    blow_ups,
    candidate_images,
    common_simplex,
    euclidean_ball_contains,
    face,
    face_distance,
    positive_support,
    realize_in,
    strictness_family,
)
from osx.marked_graph import barbell, rose, theta, validate
from osx.metric import INFINITE


def test_face_rescales_kept_edges():
    y = face(theta([F(1, 2), F(1, 4), F(1, 4)]), {"e1", "e2"})
    assert y.lengths == {"e1": F(2, 3), "e2": F(1, 3), "e3": 0}
    assert positive_support(y) == {"e1", "e2"}
    assert validate_completion(y).ok


@pytest.mark.parametrize("keep", [set(), {"nope"}, {"e1", "nope"}])
def test_face_rejects_bad_edge_sets(keep):
    with pytest.raises(InvalidFace):
        face(theta([1, 1, 1]), keep)


def test_face_needs_positive_edges():
    with pytest.raises(InvalidFace):
        face(rose([1, 0]), {"e2"})


def test_candidate_images_of_theta_and_barbell():
    assert sorted(map(sorted, candidate_images(theta([1, 1, 1])))) == [
        ["e1", "e2"], ["e1", "e3"], ["e2", "e3"]]
    assert set(candidate_images(barbell(1, 1, 1))) == {
        frozenset({"ea"}), frozenset({"eb"}), frozenset({"ea", "bar", "eb"})}


def test_face_distance_is_reciprocal_volume():
    x = theta([F(1, 2), F(1, 3), F(1, 6)])
    assert face_distance(x, {"e1", "e2"}) == F(6, 5)
    assert face_distance(x, {"e2", "e3"}) == 2


def test_face_distance_rejects_non_candidate():
    with pytest.raises(NotACandidateImage):
        face_distance(barbell(1, 1, 1), {"ea", "eb"})


@pytest.mark.parametrize("seed", range(8))
def test_face_distance_on_random_points(seed):
    x = random_point(Random(seed), 2 + seed % 2)
    for H in candidate_images(x):
        vol = sum(x.lengths[e] for e in H)
        assert face_distance(x, H) == 1 / vol


def test_single_theta_edge_is_an_hnn_face():
    y = face(theta([1, 1, 1]), {"e1"})
    assert distance_ext(y, face(theta([1, 1, 1]), {"e2"})).factor == INFINITE


def test_blow_ups_are_frames_of_the_same_marking():
    x = rose([1, 1])
    ups = blow_ups(x)
    assert ups
    for y in ups:
        # new edge has length 0; only the length checks may complain
        assert validate(y).kinds <= {"UnitVolume", "Positivity"}
        assert realize_in(y, rose([F(1, 2), F(1, 2)])) is not None
        assert len(y.graph.edges) == 3
        assert len(y.graph.vertices) == 2
    assert blow_ups(theta([1, 1, 1])) == []


def test_common_simplex_on_shared_rose():
    cs = common_simplex(rose([1, 0]), rose([0, 1]))
    assert cs is not None
    assert cs.sup_difference() == 1


def test_common_simplex_needs_a_blow_up():
    cs = common_simplex(rose([1, 0]), barbell(0, 1, 0))
    assert cs is not None
    assert len(cs.reference.graph.edges) == 3
    assert cs.sup_difference() == 1


def test_realize_in_reproduces_the_point():
    target = rose([F(1, 3), F(2, 3)])
    z = realize_in(rose([1, 1]), target)
    assert z is not None and equals(z, target)


def test_euclidean_ball_is_strict():
    x, y = rose([F(1, 2), F(1, 2)]), rose([F(3, 4), F(1, 4)])
    assert not euclidean_ball_contains(x, y, F(1, 4))
    assert euclidean_ball_contains(x, y, F(1, 4) + F(1, 100))


def test_axes_vector_gap():
    P = [W.parse_word(s, 2) for s in ("a", "b", "ab", "aB")]
    u = axes_vector(rose([F(1, 2), F(1, 2)]), P)
    v = axes_vector(rose([F(3, 4), F(1, 4)]), P)
    assert u.values == (F(1, 2), F(1, 2), 1, 1)
    assert u.sup_gap(v) == F(1, 4)
    with pytest.raises(ValueError):
        u.sup_gap(axes_vector(rose([1, 1]), P[:2]))


def test_strictness_family_shape():
    s = strictness_family(3, 2)
    assert (s.p, s.q) == (F(7, 8), F(1, 8))
    assert validate(s.y).ok
    assert distance_ext(s.y, s.x).factor == F(8, 7)
    assert distance_ext(s.x, s.y).factor == INFINITE


@pytest.mark.parametrize("i,m", [(1, 1), (2, 0)])
def test_strictness_family_rejects_small_indices(i, m):
    with pytest.raises(ValueError):
        strictness_family(i, m)
