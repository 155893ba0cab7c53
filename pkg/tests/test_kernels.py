import numpy as np
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from papc import _accel, kernels
from papc.incidence import DesignParams, new_structure
from papc.oracle import _problem

incidences = st.integers(1, 12).flatmap(
    lambda b: st.integers(2, 14).flatmap(lambda v: arrays(np.bool_, (b, v)))
)


def _run_both(fn, *args):
    before = _accel.backend()
    try:
        out = []
        for name in ("numba", "numpy") if _accel.HAVE_NUMBA else ("numpy",):
            _accel.set_backend(name)
            out.append(fn(*args))
        return out
    finally:
        _accel.set_backend(before)


@given(incidences)
def test_intersections_agree(inc):
    ref = inc.astype(np.int64) @ inc.astype(np.int64).T
    for got in _run_both(kernels.intersection_matrix, inc):
        assert np.array_equal(got, ref)


@given(incidences)
def test_parallel_counts_agree(inc):
    inter = inc.astype(np.int64) @ inc.astype(np.int64).T
    b, v = inc.shape
    ref = np.array([[sum(1 for m in range(b) if inc[m, p] and inter[l, m] == 0) for p in range(v)] for l in range(b)])
    for got in _run_both(kernels.parallel_counts, inter, inc):
        assert np.array_equal(got, ref)


@given(incidences)
def test_pair_coverage_agree(inc):
    b, v = inc.shape
    ref = np.array([[0 if x == y else int(sum(inc[:, x] & inc[:, y])) for y in range(v)] for x in range(v)])
    for got in _run_both(kernels.pair_coverage, inc):
        assert np.array_equal(got, ref)


def test_csr_roundtrip():
    ptr, idx = kernels.csr_from_lists([[0, 2], [], [1, 2, 3]])
    assert ptr.tolist() == [0, 2, 2, 5] and idx.tolist() == [0, 2, 1, 2, 3]
    tptr, tidx = kernels.transpose_csr(ptr, idx, 4)
    assert tptr.tolist() == [0, 1, 2, 4, 5] and tidx.tolist() == [0, 2, 0, 2, 2]


def _arrays(v, params):
    prob = _problem(new_structure(v, []), params, 10**7)
    return (prob.need, prob.optr, prob.oidx, prob.iptr, prob.iopt)


def test_exact_cover_counts(backend):
    # labeled Fano planes, labeled affine planes of order 3, labeled 2-(6,3,2)
    for v, params, mrv, want in (
        (7, DesignParams(2, 7, 3, 1), True, 30),
        (9, DesignParams(2, 9, 3, 1), True, 840),
        (6, DesignParams(2, 6, 3, 2), False, 12),
    ):
        count, nodes, status, _ = kernels.exact_cover_search(*_arrays(v, params), mrv=mrv)
        assert (count, status) == (want, kernels.EXHAUSTED)
        assert nodes > 0


def test_exact_cover_first_and_budget(backend):
    a = _arrays(7, DesignParams(2, 7, 3, 1))
    count, _, status, sol = kernels.exact_cover_search(*a, first_only=True)
    assert count == 1 and status == kernels.STOPPED_FIRST and len(sol) == 7
    _, nodes, status, _ = kernels.exact_cover_search(*a, budget=5)
    assert status == kernels.OVER_BUDGET and nodes > 5


def test_root_split_sums_to_total(backend):
    a = _arrays(9, DesignParams(2, 9, 3, 1))
    opts, item = kernels.root_options(*a)
    assert len(opts) > 1
    parts = [kernels.exact_cover_search(*a, forced=[o], forced_item=item)[0] for o in opts]
    assert sum(parts) == 840
