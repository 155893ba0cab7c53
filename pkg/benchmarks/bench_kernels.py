"""Time each kernel on its numba path and its numpy path.

    python benchmarks/bench_kernels.py [--repeat 5] [--json out.json]

Both paths are checked to return identical results before timing.  Numba
compile time is excluded by one warm-up call per kernel.
"""

from __future__ import annotations

import argparse
import json
import time

import numpy as np

from papc import _accel, kernels
from papc.constructions import affine_space_line_design, miquelian_inversive_plane, projective_plane
from papc.incidence import DesignParams, new_structure
from papc.oracle import _problem


def _matrix_cases():
    for name, S in [
        ("PG(2,7)", projective_plane(7)),
        ("AG(3,5) lines", affine_space_line_design(5, 3)),
        ("miquelian(7)", miquelian_inversive_plane(7)),
    ]:
        inc = S.incidence
        inter = kernels.intersection_matrix(inc)
        yield f"intersection_matrix {name}", lambda inc=inc: kernels.intersection_matrix(inc)
        yield f"parallel_counts {name}", lambda inter=inter, inc=inc: kernels.parallel_counts(inter, inc)
        yield f"pair_coverage {name}", lambda inc=inc: kernels.pair_coverage(inc)


def _search_cases():
    for name, S, params in [
        ("count 2-(9,3,1)", new_structure(9, []), DesignParams(2, 9, 3, 1)),
        ("count 2-(7,3,1)", new_structure(7, []), DesignParams(2, 7, 3, 1)),
        ("count 2-(6,3,2)", new_structure(6, []), DesignParams(2, 6, 3, 2)),
    ]:
        prob = _problem(S, params, 10**8)
        arrays = (prob.need, prob.optr, prob.oidx, prob.iptr, prob.iopt)
        mrv = params.lam == 1
        yield f"exact_cover {name}", lambda a=arrays, m=mrv: kernels.exact_cover_search(*a, mrv=m)


def _time(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def _same(x, y) -> bool:
    if isinstance(x, np.ndarray):
        return np.array_equal(x, y)
    return x == y


def run(repeat: int = 5) -> list[dict]:
    if not _accel.HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")
    rows = []
    for name, fn in list(_matrix_cases()) + list(_search_cases()):
        _accel.set_backend("numba")
        ref = fn()  # warm-up and reference
        t_nb = _time(fn, repeat)
        _accel.set_backend("numpy")
        got = fn()
        t_np = _time(fn, max(1, repeat // 2))
        _accel.set_backend("numba")
        if not _same(ref, got):
            raise AssertionError(f"{name}: backends disagree")
        rows.append({"kernel": name, "numba_s": t_nb, "numpy_s": t_np, "speedup": t_np / t_nb if t_nb else float("inf")})
    return rows


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json", help="write results here as well")
    a = ap.parse_args()
    rows = run(a.repeat)
    width = max(len(r["kernel"]) for r in rows)
    print(f"{'kernel':<{width}}  {'numba [ms]':>11}  {'numpy [ms]':>11}  {'speedup':>8}")
    for r in rows:
        print(f"{r['kernel']:<{width}}  {r['numba_s'] * 1e3:11.3f}  {r['numpy_s'] * 1e3:11.3f}  {r['speedup']:8.1f}x")
    if a.json:
        with open(a.json, "w") as fh:
            json.dump(rows, fh, indent=2)


if __name__ == "__main__":
    main()
