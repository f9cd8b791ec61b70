import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from octahedra import joincomplex as jc
from octahedra.completion import sample
from octahedra.gf2 import Gf2Matrix, rank
from octahedra.nkmatrix import (
    OctMatrix,
    PropertyError,
    check_one_coordinate_swap,
    check_properties,
    check_strong_nontriviality,
    compute_sa,
    coordinate_block,
    heredity_reduce,
    rank_lower_bound,
    verify_rank_bound,
)
from oracles import naive_properties, np_rank

b = jc.bar


def _with_ones(n, k, pairs):
    size = jc.octahedron_count(n, k)
    arr = np.zeros((size, size), dtype=np.uint8)
    for p, q in pairs:
        i, j = jc.oct_index(p, n), jc.oct_index(q, n)
        arr[i, j] = arr[j, i] = 1
    return OctMatrix(n, k, Gf2Matrix.from_numpy(arr))


def test_size_validated():
    with pytest.raises(ValueError):
        OctMatrix(4, 1, Gf2Matrix.zeros(6))


def test_zero_matrix_report():
    rep = check_properties(OctMatrix.zeros(4, 1))
    assert rep.symmetric and rep.independent and rep.additive
    assert not rep.nontrivial and rep.sa_value == 0
    assert rep.failed() == ["nontrivial"]
    assert set(rep.witnesses) == {"nontrivial"}


def test_sampled_matrices_pass(spaces):
    for a in sample(spaces(4, 1), seed=11, count=10):
        rep = check_properties(a)
        assert rep.is_nk_matrix and not rep.witnesses
        assert naive_properties(4, 1, a.m.to_numpy()) == {
            "symmetric": True, "independent": True, "additive": True, "nontrivial": True
        }


def test_planted_independence_violation():
    p, q = (b(2), (1, 2)), ((3, 4), (3, 4))
    a = _with_ones(4, 1, [(p, q)])
    rep = check_properties(a)
    assert not rep.independent
    i, j = jc.oct_index(p, 4), jc.oct_index(q, 4)
    assert rep.witnesses["independent"] == (min(i, j), max(i, j))


def test_asymmetric_witness():
    m = np.zeros((36, 36), dtype=np.uint8)
    m[5, 3] = 1
    rep = check_properties(OctMatrix(4, 1, Gf2Matrix.from_numpy(m)))
    assert rep.witnesses["symmetric"] == (3, 5)


@settings(max_examples=25)
@given(st.data())
def test_checker_agrees_with_oracle_on_perturbations(spaces, data):
    a = sample(spaces(4, 1), seed=data.draw(st.integers(0, 10 ** 6)), count=1)[0]
    arr = a.m.to_numpy()
    flips = data.draw(st.lists(st.tuples(st.integers(0, 35), st.integers(0, 35)), max_size=3))
    sym = data.draw(st.booleans())
    for i, j in flips:
        arr[i, j] ^= 1
        if sym and i != j:
            arr[j, i] ^= 1
    rep = check_properties(OctMatrix(4, 1, Gf2Matrix.from_numpy(arr)))
    ours = {name: getattr(rep, name) for name in ("symmetric", "independent", "additive", "nontrivial")}
    assert ours == naive_properties(4, 1, arr)


def test_sa_formulas():
    a1 = _with_ones(4, 1, [((b(2), b(2)), (b(3), b(3)))])
    assert compute_sa(a1) == 1
    a1b = _with_ones(4, 1, [((b(2), b(2)), (b(3), b(3))), ((b(2), b(3)), (b(3), b(2)))])
    assert compute_sa(a1b) == 0
    four = [
        ((b(2), b(2), b(2)), (b(3), b(3), b(3))),
        ((b(2), b(2), b(3)), (b(3), b(3), b(2))),
        ((b(2), b(3), b(2)), (b(3), b(2), b(3))),
        ((b(3), b(2), b(2)), (b(2), b(3), b(3))),
    ]
    for r in range(1, 5):
        assert compute_sa(_with_ones(4, 2, four[:r])) == r % 2
    assert compute_sa(_with_ones(4, 0, [((b(2),), (b(3),))])) == 1
    assert compute_sa(OctMatrix.zeros(4, 2)) == 0


def test_strong_nontriviality(spaces):
    for a in sample(spaces(4, 1), seed=2, count=3):
        assert check_strong_nontriviality(a) == (True, None)
    a = sample(spaces(5, 1), seed=2, count=1)[0]
    assert check_strong_nontriviality(a)[0]
    holds, failure = check_strong_nontriviality(OctMatrix.zeros(4, 1))
    assert not holds
    labels, alpha = failure
    assert labels == ((1, 2, 3), (1, 2, 3)) and alpha == (1, 1)


def test_strong_nontriviality_precondition():
    arr = np.zeros((36, 36), dtype=np.uint8)
    arr[0, 1] = 1
    with pytest.raises(PropertyError):
        check_strong_nontriviality(OctMatrix(4, 1, Gf2Matrix.from_numpy(arr)))


def test_coordinate_blocks(spaces):
    for a in sample(spaces(4, 2), seed=3, count=3):
        a23 = coordinate_block(a, b(2), b(3))
        a32 = coordinate_block(a, b(3), b(2))
        assert a23.shape == (36, 36)
        assert a32 == a23.T
        assert rank(a23) <= a.rank()
        # entry check against the defining formula
        p, q = ((1, 2), (3, 4)), ((2, 3), (1, 4))
        i, j = jc.oct_index(p, 4), jc.oct_index(q, 4)
        assert a23[i, j] == a.entry((b(2),) + p, (b(3),) + q)
    with pytest.raises(ValueError):
        coordinate_block(OctMatrix.zeros(4, 0), b(2), b(3))


def test_heredity(spaces):
    for a in sample(spaces(4, 2), seed=4, count=5):
        z = heredity_reduce(a)
        assert (z.n, z.k, z.size) == (4, 1, 36)
        assert check_properties(z).is_nk_matrix
        assert z.m.is_symmetric()
    for a in sample(spaces(4, 1), seed=4, count=5):
        assert check_properties(heredity_reduce(a)).is_nk_matrix
    with pytest.raises(ValueError):
        heredity_reduce(OctMatrix.zeros(4, 0))


def test_one_coordinate_swap(spaces):
    for a in sample(spaces(4, 1), seed=5, count=3):
        assert check_one_coordinate_swap(a) == (True, None)
    rng = np.random.default_rng(0)
    found = 0
    for _ in range(10):
        up = np.triu(rng.integers(0, 2, size=(36, 36), dtype=np.uint8))
        arr = up | up.T
        holds, w = check_one_coordinate_swap(OctMatrix(4, 1, Gf2Matrix.from_numpy(arr)),
                                             require_preconditions=False)
        if not holds:
            found += 1
            pi, qi, p2i = w
            assert arr[pi, qi] != arr[p2i, qi]
    assert found == 10


def test_rank_lower_bound_values():
    assert rank_lower_bound(4, 1) == 1
    assert rank_lower_bound(5, 1) == 2
    assert rank_lower_bound(4, 2) == 1
    assert rank_lower_bound(11, 3) == 8


def test_verify_rank_bound(spaces):
    for a in sample(spaces(4, 2), seed=6, count=3):
        rep = verify_rank_bound(a)
        assert rep.passed and rep.bound == 1 and rep.rank == np_rank(a.m.to_numpy())
        assert len(rep.chain) == 1
        step = rep.chain[0]
        assert 2 * step["rank"] >= step["rank_block_23"] + step["rank_block_32"] >= step["rank_z"]
    with pytest.raises(PropertyError):
        verify_rank_bound(OctMatrix.zeros(4, 1))
