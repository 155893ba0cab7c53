"""Invariants checked over generated inputs."""

from itertools import combinations

import numpy as np
from hypothesis import assume, given
from hypothesis import strategies as st

from papc.completion import complete_low_valency, complete_pap
from papc.constructions import affine_plane, delete_blocks, miquelian_inversive_plane, projective_plane
from papc.incidence import (
    DesignParams,
    canonical,
    count_signature,
    derived_at,
    dual,
    is_design,
    new_structure,
    pap_order,
    relabel,
    unjoined_count,
)
from papc.inversive import derive_and_complete_all, glue_completion
from papc.io import parse, serialize
from papc.oracle import oracle_complete
from papc.parallelism import (
    brute_force_is_equivalence,
    classify_parallelism,
    lemma28_check,
    parallelism_is_equivalence,
)

PLANES = {q: affine_plane(q) for q in (2, 3, 4, 5, 7)}
MIQ = {q: miquelian_inversive_plane(q) for q in (2, 3, 4)}


@st.composite
def structures(draw, max_points=9, max_blocks=10):
    v = draw(st.integers(1, max_points))
    pool = [b for k in range(1, min(v, 4) + 1) for b in combinations(range(v), k)]
    blocks = draw(st.lists(st.sampled_from(pool), unique=True, max_size=max_blocks))
    return new_structure(v, blocks)


@st.composite
def ag_subsets(draw, orders=(3, 4, 5)):
    q = draw(st.sampled_from(orders))
    A = PLANES[q]
    keep = draw(st.sets(st.integers(0, A.num_blocks - 1), min_size=1))
    return q, delete_blocks(A, [i for i in range(A.num_blocks) if i not in keep])


@st.composite
def linear_spaces(draw):
    """Random partial linear spaces with lines of size 3 on 9 points."""
    order = draw(st.permutations(list(combinations(range(9), 3))))
    blocks = []
    for b in order[: draw(st.integers(1, 40))]:
        if all(len(set(b) & set(c)) <= 1 for c in blocks):
            blocks.append(b)
    return new_structure(9, blocks)


@given(structures())
def test_canonical_idempotent(S):
    assert canonical(canonical(S)) == canonical(S)
    reordered = new_structure(S.num_points, [list(reversed(b)) for b in reversed(S.blocks)])
    assert reordered == S


@given(structures())
def test_valency_sum(S):
    assert int(S.valencies.sum()) == sum(len(b) for b in S.blocks)


@given(structures())
def test_serialize_round_trip(S):
    assert parse(serialize(S), strict=True) == S


@given(structures(), st.randoms(use_true_random=False))
def test_relabel_preserves_signature(S, rnd):
    perm = list(range(S.num_points))
    rnd.shuffle(perm)
    assert count_signature(relabel(S, perm)) == count_signature(S)


@given(structures())
def test_dual_involution(S):
    assume(S.num_points and int(S.valencies.min()) > 0)
    assume(len({S.point_blocks[p] for p in range(S.num_points)}) == S.num_points)
    D, bmap = dual(S, with_map=True)
    DD = dual(D)
    # point x of DD is block x of D, which came from point j of S with bmap[j] = x
    perm = [0] * S.num_points
    for j, x in enumerate(bmap):
        perm[x] = j
    assert relabel(DD, perm) == S


@given(ag_subsets())
def test_unjoined_formula(arg):
    q, S = arg
    for P in range(S.num_points):
        joined = {x for b in S.blocks if P in b for x in b}
        brute = S.num_points - len(joined | {P})
        assert unjoined_count(S, P) == brute == (q + 1 - int(S.valencies[P])) * (q - 1)


@given(st.sampled_from([2, 3, 4]), st.data())
def test_derived_of_miquelian(q, data):
    P = data.draw(st.integers(0, q * q))
    assert is_design(derived_at(MIQ[q], P)[0], DesignParams(2, q * q, q, 1))


@given(ag_subsets())
def test_pap_order_of_ag_subsets(arg):
    q, S = arg
    assert pap_order(S) == q


@given(st.one_of(ag_subsets().map(lambda x: x[1]), linear_spaces()))
def test_equivalence_matches_brute_force(S):
    assume(S.num_blocks <= 40)
    assert parallelism_is_equivalence(S) == brute_force_is_equivalence(S)
    pc = classify_parallelism(S)
    if pc.is_equivalence:
        for cls in pc.classes:
            for i, j in combinations(cls, 2):
                assert not set(S.blocks[i]) & set(S.blocks[j])


@given(ag_subsets())
def test_full_point_forces_all_classes(arg):
    q, S = arg
    pc = classify_parallelism(S)
    if pc.is_equivalence and int(S.valencies.max()) == q + 1:
        assert pc.class_count == q + 1


@given(st.sampled_from([3, 4, 5, 7]), st.data())
def test_class_bounds_on_ag_deletions(q, data):
    # a full class plus a further lines: no point keeps valency q+1
    A = PLANES[q]
    pc = classify_parallelism(A)
    c = data.draw(st.integers(0, q))
    a = data.draw(st.integers(1, q - 1))
    rest = [i for i in range(A.num_blocks) if i not in pc.classes[c]]
    extra = data.draw(st.lists(st.sampled_from(rest), min_size=a, max_size=a, unique=True))
    S = delete_blocks(A, list(pc.classes[c]) + extra)
    rep = lemma28_check(S)
    assert rep.a == a and rep.holds


@given(st.sampled_from([3, 4, 5]), st.data())
def test_low_valency_restores_class_subsets(q, data):
    A = PLANES[q]
    pc = classify_parallelism(A)
    c = data.draw(st.integers(0, q))
    drop = data.draw(st.sets(st.sampled_from(pc.classes[c]), min_size=1))
    res = complete_low_valency(delete_blocks(A, sorted(drop)))
    assert res.completed == A
    assert set(res.added_blocks) == {A.blocks[i] for i in drop}


@given(ag_subsets(orders=(3, 4)))
def test_driver_soundness_and_oracle_agreement(arg):
    q, S = arg
    assume(S.num_blocks >= q * q - 2 and classify_parallelism(S).is_equivalence)
    params = DesignParams(2, q * q, q, 1)
    res = complete_pap(S)
    assert is_design(res.completed, params)
    assert set(S.blocks) <= set(res.completed.blocks)
    assert not set(res.added_blocks) & set(S.blocks)
    assert oracle_complete(S, params).completions_found >= 1


@given(st.sampled_from([2, 3]), st.data())
def test_oracle_soundness_projective(q, data):
    P = projective_plane(q)
    drop = data.draw(st.sets(st.integers(0, P.num_blocks - 1), max_size=4))
    S = delete_blocks(P, sorted(drop))
    params = DesignParams(2, P.num_points, q + 1, 1)
    out = oracle_complete(S, params)
    assert out.exhausted or out.completions_found == 1
    if out.first_completion:
        assert is_design(out.first_completion.completed, params)
        assert set(S.blocks) <= set(out.first_completion.completed.blocks)


@given(st.sampled_from([2, 3]), st.data())
def test_glue_symmetry(q, data):
    M = MIQ[q]
    drop = data.draw(st.sets(st.integers(0, M.num_blocks - 1), min_size=1, max_size=2))
    S = delete_blocks(M, sorted(drop))
    dcs = derive_and_complete_all(S)
    by = {dc.base_point: dc for dc in dcs}
    try:
        res = glue_completion(S, dcs)
    except Exception:
        return  # conditions may fail for some double deletions
    assert res.completed == M
    for C in res.added_blocks:
        for P in C:
            assert tuple(x for x in C if x != P) in by[P].added_lines
