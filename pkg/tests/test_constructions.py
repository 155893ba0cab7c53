from itertools import combinations

import numpy as np
import pytest

from papc.constructions import (
    affine_plane,
    affine_space_line_design,
    baer_example,
    delete_blocks,
    miquelian_inversive_plane,
    projective_plane,
    random_deletion,
    shuffle_points,
    transversal_design,
)
from papc.errors import NotASquare, PreconditionViolated, TooLarge, UnsupportedOrder
from papc.fields import SUPPORTED_ORDERS, make_field
from papc.incidence import DesignParams, GddType, count_signature, derived_at, is_design, is_group_divisible, new_structure
from papc.parallelism import classify_parallelism, parallelism_is_equivalence


def test_gf2_is_xor_and():
    F = make_field(2)
    assert F.add.tolist() == [[0, 1], [1, 0]]
    assert F.mul.tolist() == [[0, 0], [0, 1]]


def test_gf4_axioms_exhaustive():
    F = make_field(4)
    r = range(4)
    for a in r:
        for b in r:
            for c in r:
                assert F.mul[a, F.add[b, c]] == F.add[F.mul[a, b], F.mul[a, c]]
                assert F.add[F.add[a, b], c] == F.add[a, F.add[b, c]]
    # x is element 2, x^2 = x + 1 = element 3
    assert F.mul[2, 2] == 3


@pytest.mark.parametrize("q", SUPPORTED_ORDERS)
def test_every_supported_field_has_inverses(q):
    F = make_field(q)
    assert all(F.mul[a, F.inv[a]] == 1 for a in range(1, q))
    assert all(F.add[a, F.neg[a]] == 0 for a in range(q))


@pytest.mark.parametrize("q", [6, 10, 12, 256])
def test_unsupported_orders(q):
    with pytest.raises(UnsupportedOrder):
        make_field(q)


@pytest.mark.parametrize("q,lines", [(2, 6), (3, 12), (4, 20), (5, 30), (7, 56)])
def test_affine_plane_counts(q, lines):
    A = affine_plane(q)
    assert (A.num_points, A.num_blocks) == (q * q, lines)
    assert set(A.valencies.tolist()) == {q + 1}
    assert is_design(A, DesignParams(2, q * q, q, 1))


def test_affine_space_examples():
    assert affine_space_line_design(3, 2).blocks == affine_plane(3).blocks
    P = affine_space_line_design(2, 3)
    assert (P.num_points, P.num_blocks) == (8, 28)
    assert set(P.blocks) == set(combinations(range(8), 2))
    S = affine_space_line_design(3, 3)
    assert (S.num_points, S.num_blocks) == (27, 117)
    assert set(S.valencies.tolist()) == {13}
    assert is_design(S, DesignParams(2, 27, 3, 1))
    with pytest.raises(TooLarge):
        affine_space_line_design(2, 16)
    with pytest.raises(PreconditionViolated):
        affine_space_line_design(3, 1)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7])
def test_projective_plane(q):
    P = projective_plane(q)
    v = q * q + q + 1
    assert (P.num_points, P.num_blocks, P.block_size()) == (v, v, q + 1)
    off = ~np.eye(v, dtype=bool)
    assert np.all(P.intersections[off] == 1)


@pytest.mark.parametrize("q", [2, 3, 4])
def test_projective_minus_line_matches_affine_counts(q):
    P = projective_plane(q)
    for line in range(P.num_blocks):
        gone = set(P.blocks[line])
        keep = [p for p in range(P.num_points) if p not in gone]
        idx = {p: i for i, p in enumerate(keep)}
        A = new_structure(len(keep), [[idx[p] for p in b if p in idx] for i, b in enumerate(P.blocks) if i != line])
        assert count_signature(A) == count_signature(affine_plane(q))


@pytest.mark.parametrize("q,circles", [(2, 10), (3, 30), (4, 68), (5, 130)])
def test_miquelian(q, circles):
    M = miquelian_inversive_plane(q)
    assert (M.num_points, M.num_blocks) == (q * q + 1, circles)
    assert is_design(M, DesignParams(3, q * q + 1, q + 1, 1))
    for P in range(M.num_points):
        assert is_design(derived_at(M, P)[0], DesignParams(2, q * q, q, 1))


def test_miquelian_two_is_all_triples():
    assert set(miquelian_inversive_plane(2).blocks) == set(combinations(range(5), 3))


def test_miquelian_order_cap():
    with pytest.raises(UnsupportedOrder):
        miquelian_inversive_plane(8)


def test_baer_four():
    B = baer_example(4)
    assert (B.num_points, B.num_blocks, B.block_size()) == (16, 14, 4)
    assert sorted(B.valencies.tolist()).count(0) == 2
    pc = classify_parallelism(B)
    assert pc.is_equivalence and pc.class_count == 7
    assert [len(c) for c in pc.classes] == [2] * 7


def test_baer_nine():
    B = baer_example(9)
    assert (B.num_points, B.num_blocks) == (81, 78)
    assert sorted(B.valencies.tolist()).count(0) == 3
    pc = classify_parallelism(B)
    assert pc.is_equivalence and pc.class_count == 13


def test_baer_requires_square():
    with pytest.raises(NotASquare):
        baer_example(5)


@pytest.mark.parametrize("m,blocks", [(2, 4), (3, 9), (4, 16)])
def test_transversal_design(m, blocks):
    T = transversal_design(3, m)
    assert (T.num_points, T.num_blocks) == (3 * m, blocks)
    assert is_group_divisible(T, GddType(3, m, 3)) is not None


def test_deletions():
    A = affine_plane(3)
    assert delete_blocks(A, [0]).num_blocks == 11
    R = random_deletion(affine_plane(4), 3, seed=1, require_parallel_equivalence=True)
    assert R.num_blocks == 17 and parallelism_is_equivalence(R)
    assert R == random_deletion(affine_plane(4), 3, seed=1, require_parallel_equivalence=True)
    with pytest.raises(PreconditionViolated):
        random_deletion(A, 13, seed=0)


def test_shuffle_is_deterministic_relabeling():
    A = affine_plane(4)
    S1, S2 = shuffle_points(A, 5), shuffle_points(A, 5)
    assert S1 == S2
    assert count_signature(S1) == count_signature(A)
