import itertools

import pytest
from hypothesis import given, strategies as st

from octahedra import joincomplex as jc
from oracles import faces, octahedra


def test_octahedron_counts():
    assert len(jc.enumerate_octahedra(3, 1)) == 9
    assert len(jc.enumerate_octahedra(4, 0)) == 6
    assert len(jc.enumerate_octahedra(4, 2)) == 216
    with pytest.raises(ValueError):
        jc.enumerate_octahedra(1, 0)


@pytest.mark.parametrize("n, k", [(3, 1), (4, 1), (5, 0), (4, 2)])
def test_canonical_order_matches_lex_product(n, k):
    ours = jc.enumerate_octahedra(n, k)
    ref = [tuple(tuple(sorted(part)) for part in p) for p in octahedra(n, k)]
    assert list(ours) == ref
    assert len(set(ours)) == len(ours)


@pytest.mark.parametrize("n, k", [(3, 0), (4, 1), (5, 1), (4, 2), (6, 2), (4, 3), (5, 3)])
def test_index_bijection(n, k):
    for i, p in enumerate(jc.enumerate_octahedra(n, k)):
        assert jc.oct_index(p, n) == i
        assert jc.oct_from_index(i, n, k) == p


@given(st.integers(2, 30), st.data())
def test_pair_index_bijection(n, data):
    a = data.draw(st.integers(1, n - 1))
    b = data.draw(st.integers(a + 1, n))
    assert jc.pairs(n)[jc.pair_index((a, b), n)] == (a, b)


def test_faces_of():
    assert jc.faces_of(((1, 2),)) == {(1,), (2,)}
    assert jc.faces_of(((1, 2), (1, 3))) == {(1, 1), (1, 3), (2, 1), (2, 3)}
    for p in jc.enumerate_octahedra(4, 2):
        assert len(jc.faces_of(p)) == 8
        assert jc.faces_of(p) == faces(p)


def test_vertex_disjoint():
    assert jc.vertex_disjoint(((1, 2), (1, 2)), ((3, 4), (3, 4)))
    assert not jc.vertex_disjoint(((1, 2), (1, 2)), ((1, 2), (1, 2)))
    assert jc.vertex_disjoint(((1, 2), (3, 4)), ((3, 4), (1, 2)))
    assert jc.vertex_disjoint((1, None), (2, 1))
    assert not jc.vertex_disjoint((1, 2), (2, 2))


def test_g_pairs_examples():
    b = jc.bar
    assert jc.g_pairs(0) == ((((1, 2),), ((1, 3),)),)
    assert set(jc.g_pairs(1)) == {
        ((b(2), b(2)), (b(3), b(3))),
        ((b(2), b(3)), (b(3), b(2))),
    }
    assert len(jc.g_pairs(2)) == 4


@pytest.mark.parametrize("l", range(5))
def test_g_pairs_meet_in_ones(l):
    pairs = jc.g_pairs(l)
    assert len(pairs) == 2 ** l
    ones = (1,) * (l + 1)
    for p, q in pairs:
        assert jc.octahedron_intersection(p, q) == {ones}
    # every such pair of [3]^{*l+1} is listed
    octs = jc.enumerate_octahedra(3, l)
    brute = {
        (p, q) for p, q in itertools.combinations(octs, 2)
        if jc.octahedron_intersection(p, q) == {ones}
    }
    assert brute == set(pairs)


def test_h_pairs_sizes():
    assert len(jc.h_pairs(0)) == 3
    assert len(jc.h_pairs(1)) == 18


def test_t_pairs():
    for p, q in jc.g_pairs(1):
        t = jc.t_pairs(p, q)
        assert len(t) == 16
    with pytest.raises(ValueError):
        jc.t_pairs(((1, 2), (1, 2)), ((1, 2), (1, 3)))


@pytest.mark.parametrize("k, size", [(0, 6), (1, 36), (2, 216), (3, 1296)])
def test_pair_product_identity(k, size):
    res = jc.verify_pair_product_identity(k)
    assert res.holds and res.witness is None
    assert len(res.disjoint_pairs) == len(res.product_sum) == size


def test_diagonal_pair_in_every_product():
    for k in range(4):
        ones = (1,) * (k + 1)
        hits = sum(
            1 for p, q in jc.g_pairs(k) for a, b in ((p, q), (q, p))
            if ones in jc.faces_of(a) and ones in jc.faces_of(b)
        )
        assert hits == 2 ** (k + 1)


def test_xor_decomposition_examples():
    d = jc.xor_decompositions(((1, 2), (3, 4)), 4)
    assert len(d) == 4
    assert sorted(jc.xor_decompositions(((1, 2),), 4)) == [
        (((1, 3),), ((2, 3),)),
        (((1, 4),), ((2, 4),)),
    ]
    for x, y in d:
        assert x != y
        assert jc.faces_of(x) ^ jc.faces_of(y) == jc.faces_of(((1, 2), (3, 4)))


@pytest.mark.parametrize("n, k", [(4, 1), (5, 1), (4, 2), (5, 0)])
def test_only_one_coordinate_decompositions(n, k):
    holds, witness = jc.check_decompositions_one_coordinate(n, k)
    assert holds, witness


def test_decomposition_table_matches_oracle():
    from oracles import decompositions
    for n, k in [(4, 0), (4, 1)]:
        assert sorted(jc.decomposition_table(n, k)) == sorted(decompositions(n, k))


def test_elementary_coboundary_example():
    got = jc.elementary_coboundary((1, 1), (None, 2))
    assert got == {((1, 1), (2, 2)), ((1, 1), (3, 2))}
    with pytest.raises(ValueError):
        jc.elementary_coboundary((1, 2), (None, 2))


@pytest.mark.parametrize("k", [1, 2, 3])
def test_elementary_coboundaries_have_size_two(k):
    count = 0
    for alpha in jc.all_faces(3, k):
        for t in range(k + 1):
            for rest in jc.all_faces(3, k - 1):
                e = rest[:t] + (None,) + rest[t:]
                if jc.vertex_disjoint(alpha, e):
                    assert len(jc.elementary_coboundary(alpha, e)) == 2
                    count += 1
    assert count > 0


def test_skeleton_params():
    assert jc.skeleton_joinpower_params(7, 1)[0] == 4
    assert jc.skeleton_joinpower_params(5, 2)[0] == 2
    with pytest.raises(ValueError):
        jc.skeleton_joinpower_params(1, 2)


@given(st.integers(1, 5), st.data())
def test_skeleton_partition(k, data):
    n = data.draw(st.integers(k, 60))
    s, groups = jc.skeleton_joinpower_params(n, k)
    assert s * (k + 1) <= n + 1
    assert len(groups) == k + 1
    flat = [v for g in groups for v in g]
    assert sorted(flat) == list(range(1, n + 2))
    assert all(len(g) >= s for g in groups)
