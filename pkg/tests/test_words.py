import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from osx import words as W
from osx.oracles import BudgetExceeded, conjugate_into_bruteforce, naive_reduce, subgroup_ball

letters = st.sampled_from([1, -1, 2, -2, 3, -3])
raw_words = st.lists(letters, max_size=30).map(tuple)


def p(s):
    return W.parse_word(s)


def rand_word(rng, rank, n):
    return tuple(rng.choice([1, -1]) * rng.randint(1, rank) for _ in range(n))


def test_parse_and_format_round_trip():
    assert p("abA") == (1, 2, -1)
    assert W.format_word((1, 2, -1)) == "abA"
    assert p("") == () and p("1") == ()
    with pytest.raises(W.WordSyntaxError):
        p("a?b")
    with pytest.raises(W.WordSyntaxError):
        W.parse_word("c", 2)


def test_reduce_examples():
    assert W.reduce(p("abBa")) == p("aa")
    assert W.reduce(()) == ()


def test_reduce_matches_naive_scan_rank3():
    rng = random.Random(0)
    for _ in range(200):
        w = rand_word(rng, 3, 20)
        assert W.reduce(w) == naive_reduce(w)


@given(raw_words)
def test_reduce_properties(w):
    r = W.reduce(w)
    assert W.reduce(r) == r
    assert len(r) <= len(w)
    assert W.reduce(w + W.inverse(w)) == ()
    assert W.is_reduced(r)


def test_cyclic_reduce_examples():
    assert W.cyclic_reduce(p("abA")) == (p("b"), p("a"))
    c, u = W.cyclic_reduce(p("ab"))
    assert c == W.least_rotation(p("ab")) and u == ()


@given(raw_words)
def test_cyclic_reduce_round_trip(w):
    c, u = W.cyclic_reduce(w)
    assert W.reduce(u + c + W.inverse(u)) == W.reduce(w)
    assert W.is_cyclically_reduced(c)
    assert c == W.least_rotation(c)


def test_canonical_rotation_uses_letter_order():
    # a < A < b < B
    assert W.cyclic_word(p("Ba")) == p("aB")
    assert W.cyclic_word(p("bA")) == p("Ab")
    assert W.cyclic_word(p("baab")) == W.cyclic_word(p("aabb"))


def test_apply_endo_examples():
    phi = W.EndoMap.parse("ab,b")
    assert W.apply_endo(phi, p("aB")) == p("a")
    ident = W.EndoMap.identity(2)
    assert W.apply_endo(ident, p("abBA")) == ()


def test_compose_endo_oracle():
    rng = random.Random(1)
    for _ in range(100):
        phi = W.EndoMap(tuple(W.reduce(rand_word(rng, 2, rng.randint(1, 3))) for _ in range(2)))
        psi = W.EndoMap(tuple(W.reduce(rand_word(rng, 2, rng.randint(1, 3))) for _ in range(2)))
        w = rand_word(rng, 2, 8)
        assert W.apply_endo(W.compose_endo(phi, psi), w) == W.apply_endo(phi, W.apply_endo(psi, w))


def test_invert_examples():
    assert W.invert_automorphism(W.EndoMap.identity(3)) == W.EndoMap.identity(3)
    assert W.invert_automorphism(W.EndoMap.parse("ab,b")) == W.EndoMap.parse("aB,b")
    phi = W.EndoMap.parse("b,A")
    inv = W.invert_automorphism(phi)
    for x in (1, 2):
        assert W.apply_endo(inv, W.apply_endo(phi, (x,))) == (x,)


def _round_trip(phi):
    inv = W.invert_automorphism(phi)
    for x in range(1, phi.rank + 1):
        assert W.apply_endo(inv, W.apply_endo(phi, (x,))) == (x,)
        assert W.apply_endo(phi, W.apply_endo(inv, (x,))) == (x,)


@pytest.mark.parametrize("rank", [2, 3])
def test_invert_nielsen_generators(rank):
    for g in W.nielsen_generators(rank):
        _round_trip(g)


@pytest.mark.parametrize("rank", [2, 3])
def test_invert_random_products(rank):
    rng = random.Random(rank)
    gens = W.nielsen_generators(rank)
    for _ in range(50):
        phi = W.EndoMap.identity(rank)
        for _ in range(rng.randint(0, 10)):
            phi = W.compose_endo(phi, rng.choice(gens))
        _round_trip(phi)


def test_not_an_automorphism():
    for spec in ("aa,b", "ab,ba", "a,a", "aba,b"):
        with pytest.raises(W.NotAnAutomorphism):
            W.invert_automorphism(W.EndoMap.parse(spec))
        assert not W.is_automorphism(W.EndoMap.parse(spec))


def test_stallings_examples():
    H = W.stallings_graph([p("a")], 2)
    assert len(H.vertices) == 1 and len(H.edges) == 1
    E = W.stallings_graph([], 2)
    assert len(E.vertices) == 1 and E.edges == ()
    assert W.contains(H, ()) and W.contains(H, p("aaA"))
    assert not W.contains(H, p("b"))


def test_stallings_graph_is_folded():
    rng = random.Random(5)
    for _ in range(50):
        gens = [W.reduce(rand_word(rng, 2, rng.randint(1, 6))) for _ in range(3)]
        H = W.stallings_graph(gens, 2)
        out, inc = set(), set()
        for (v, x, u) in H.edges:
            assert (v, x) not in out and (u, x) not in inc
            out.add((v, x))
            inc.add((u, x))


def test_membership_matches_product_enumeration():
    rng = random.Random(2)
    words6 = list(W.all_reduced_words(2, 6))
    done = 0
    while done < 25:
        gens = [W.reduce(rand_word(rng, 2, rng.randint(2, 5))) for _ in range(rng.randint(1, 2))]
        gens = [g for g in gens if g] or [p("ab")]
        try:
            ball = subgroup_ball(gens, 6, budget=20_000)
        except BudgetExceeded:
            continue
        done += 1
        H = W.stallings_graph(gens, 2)
        for w in words6:
            assert W.contains(H, w) == (w in ball), (gens, w)


def test_conjugate_into_examples():
    H = W.stallings_graph([p("a")], 2)
    assert W.conjugate_into(H, W.cyclic_word(p("baB")))
    assert not W.conjugate_into(H, p("ab"))


def test_conjugate_into_bounded_oracle():
    rng = random.Random(9)
    for _ in range(30):
        gens = [W.reduce(rand_word(rng, 2, rng.randint(1, 4))) for _ in range(rng.randint(1, 2))]
        H = W.stallings_graph(gens, 2)
        c = W.cyclic_word(rand_word(rng, 2, rng.randint(1, 5)))
        if not c:
            continue
        bound = len(H.vertices) + len(c)
        brute = conjugate_into_bruteforce(lambda w: W.contains(H, w), c, bound, 2)
        assert W.conjugate_into(H, c) == brute
