"""Hot numeric kernels.

Each public kernel has a numba path and a pure-numpy path; the dispatcher
picks one from :mod:`papc._accel` at call time.  Inputs are plain integer
arrays so both paths see identical data:

* incidence matrices are ``uint8`` of shape ``(b, v)``;
* sparse block lists use CSR pairs ``(ptr, idx)`` with ``int64`` entries.

The exact-cover search is written once and built twice by :func:`_build_search`
(jitted and interpreted), so the two backends cannot drift apart.
"""

from __future__ import annotations

import numpy as np

from . import _accel
from ._accel import njit

# search status codes
EXHAUSTED = 0
STOPPED_FIRST = 1
OVER_BUDGET = 2


def csr_from_lists(rows) -> tuple[np.ndarray, np.ndarray]:
    ptr = np.zeros(len(rows) + 1, dtype=np.int64)
    for i, r in enumerate(rows):
        ptr[i + 1] = ptr[i] + len(r)
    idx = np.fromiter((x for r in rows for x in r), dtype=np.int64, count=int(ptr[-1]))
    return ptr, idx


def transpose_csr(ptr: np.ndarray, idx: np.ndarray, ncols: int) -> tuple[np.ndarray, np.ndarray]:
    """Column-major view of a CSR matrix; entries of each column come out ascending."""
    counts = np.bincount(idx, minlength=ncols).astype(np.int64)
    tptr = np.zeros(ncols + 1, dtype=np.int64)
    np.cumsum(counts, out=tptr[1:])
    rows = np.repeat(np.arange(len(ptr) - 1, dtype=np.int64), np.diff(ptr))
    order = np.argsort(idx, kind="stable")
    return tptr, rows[order]


# ---------------------------------------------------------------------------
# block intersections


@njit
def _intersections_nb(ptr, idx, pptr, pidx, nblocks):
    out = np.zeros((nblocks, nblocks), dtype=np.int64)
    for i in range(nblocks):
        for a in range(ptr[i], ptr[i + 1]):
            p = idx[a]
            for c in range(pptr[p], pptr[p + 1]):
                out[i, pidx[c]] += 1
    return out


def _intersections_np(inc):
    m = inc.astype(np.int64)
    return m @ m.T


def intersection_matrix(inc: np.ndarray) -> np.ndarray:
    """``out[i, j] = |B_i ∩ B_j|`` for the blocks of an incidence matrix."""
    b, v = inc.shape
    if not _accel.USE_NUMBA:
        return _intersections_np(inc)
    ptr, idx = _csr_from_incidence(inc)
    pptr, pidx = transpose_csr(ptr, idx, v)
    return _intersections_nb(ptr, idx, pptr, pidx, b)


# ---------------------------------------------------------------------------
# parallels through a point


@njit
def _parallel_counts_nb(inter, pptr, pidx, npoints):
    b = inter.shape[0]
    out = np.zeros((b, npoints), dtype=np.int64)
    for line in range(b):
        for p in range(npoints):
            c = 0
            for a in range(pptr[p], pptr[p + 1]):
                if inter[line, pidx[a]] == 0:
                    c += 1
            out[line, p] = c
    return out


def _parallel_counts_np(inter, inc):
    return (inter == 0).astype(np.int64) @ inc.astype(np.int64)


def parallel_counts(inter: np.ndarray, inc: np.ndarray) -> np.ndarray:
    """``out[l, P]`` = number of blocks through ``P`` disjoint from block ``l``.

    Only meaningful for ``P`` off ``l``; for ``P`` on ``l`` the count is 0.
    """
    if not _accel.USE_NUMBA:
        return _parallel_counts_np(inter, inc)
    ptr, idx = _csr_from_incidence(inc)
    pptr, pidx = transpose_csr(ptr, idx, inc.shape[1])
    return _parallel_counts_nb(inter, pptr, pidx, inc.shape[1])


# ---------------------------------------------------------------------------
# pair coverage


@njit
def _pair_cover_nb(ptr, idx, npoints):
    out = np.zeros((npoints, npoints), dtype=np.int64)
    for i in range(len(ptr) - 1):
        for a in range(ptr[i], ptr[i + 1]):
            x = idx[a]
            for c in range(a + 1, ptr[i + 1]):
                y = idx[c]
                out[x, y] += 1
                out[y, x] += 1
    return out


def _pair_cover_np(inc):
    m = inc.astype(np.int64)
    out = m.T @ m
    np.fill_diagonal(out, 0)
    return out


def pair_coverage(inc: np.ndarray) -> np.ndarray:
    """Symmetric ``(v, v)`` count of blocks through each pair; zero diagonal."""
    if not _accel.USE_NUMBA:
        return _pair_cover_np(inc)
    ptr, idx = _csr_from_incidence(inc)
    return _pair_cover_nb(ptr, idx, inc.shape[1])


def _csr_from_incidence(inc):
    rows, cols = np.nonzero(inc)
    ptr = np.zeros(inc.shape[0] + 1, dtype=np.int64)
    np.cumsum(np.bincount(rows, minlength=inc.shape[0]), out=ptr[1:])
    return ptr, cols.astype(np.int64)


# ---------------------------------------------------------------------------
# exact cover with multiplicities


def _build_search(jit):
    @jit
    def select(o, need, dead, live, optr, oidx, iptr, iopt):
        dead[o] += 1
        if dead[o] == 1:
            for a in range(optr[o], optr[o + 1]):
                live[oidx[a]] -= 1
        for a in range(optr[o], optr[o + 1]):
            j = oidx[a]
            need[j] -= 1
            if need[j] == 0:
                for c in range(iptr[j], iptr[j + 1]):
                    p = iopt[c]
                    dead[p] += 1
                    if dead[p] == 1:
                        for e in range(optr[p], optr[p + 1]):
                            live[oidx[e]] -= 1

    @jit
    def unselect(o, need, dead, live, optr, oidx, iptr, iopt):
        for a in range(optr[o + 1] - 1, optr[o] - 1, -1):
            j = oidx[a]
            if need[j] == 0:
                for c in range(iptr[j + 1] - 1, iptr[j] - 1, -1):
                    p = iopt[c]
                    if dead[p] == 1:
                        for e in range(optr[p], optr[p + 1]):
                            live[oidx[e]] += 1
                    dead[p] -= 1
            need[j] += 1
        if dead[o] == 1:
            for a in range(optr[o], optr[o + 1]):
                live[oidx[a]] += 1
        dead[o] -= 1

    @jit
    def choose(need, live, mrv):
        # -1: nothing deficient (solution); -2: some item cannot be satisfied
        best = -1
        best_live = 1 << 62
        for j in range(need.shape[0]):
            if need[j] > 0:
                if live[j] < need[j]:
                    return -2
                if not mrv:
                    return j
                if live[j] < best_live:
                    best = j
                    best_live = live[j]
        return best

    @jit
    def search(need0, optr, oidx, iptr, iopt, forced, forced_item, mrv, first_only, budget):
        nopt = optr.shape[0] - 1
        nitem = need0.shape[0]
        need = need0.copy()
        dead = np.zeros(nopt, dtype=np.int64)
        live = np.zeros(nitem, dtype=np.int64)
        for j in range(nitem):
            live[j] = iptr[j + 1] - iptr[j]
        # items already satisfied kill their options
        for j in range(nitem):
            if need[j] <= 0:
                need[j] = 0
                for c in range(iptr[j], iptr[j + 1]):
                    p = iopt[c]
                    dead[p] += 1
                    if dead[p] == 1:
                        for e in range(optr[p], optr[p + 1]):
                            live[oidx[e]] -= 1

        nodes = 0
        count = 0
        first = np.full(nitem + forced.shape[0] + 1, -1, dtype=np.int64)
        nfirst = 0
        for f in range(forced.shape[0]):
            o = forced[f]
            if dead[o] != 0:
                return count, nodes, EXHAUSTED, first[:0]
            select(o, need, dead, live, optr, oidx, iptr, iopt)
            first[f] = o
            nodes += 1
        nforced = forced.shape[0]

        maxdepth = nitem + 1
        lvl_item = np.full(maxdepth, -1, dtype=np.int64)
        lvl_pos = np.zeros(maxdepth, dtype=np.int64)
        lvl_opt = np.full(maxdepth, -1, dtype=np.int64)
        depth = 0
        descending = True
        status = EXHAUSTED
        while depth >= 0:
            if descending:
                j = choose(need, live, mrv)
                if j == -1:
                    count += 1
                    if nfirst == 0:
                        for d in range(depth):
                            first[nforced + d] = lvl_opt[d]
                        nfirst = nforced + depth
                    if first_only:
                        status = STOPPED_FIRST
                        break
                    depth -= 1
                    descending = False
                    continue
                if j == -2:
                    depth -= 1
                    descending = False
                    continue
                lvl_item[depth] = j
                lvl_pos[depth] = iptr[j]
                lvl_opt[depth] = -1
            j = lvl_item[depth]
            if lvl_opt[depth] >= 0:
                unselect(lvl_opt[depth], need, dead, live, optr, oidx, iptr, iopt)
                lvl_opt[depth] = -1
            floor = -1
            if depth > 0 and lvl_item[depth - 1] == j:
                floor = lvl_opt[depth - 1]
            elif depth == 0 and nforced > 0 and j == forced_item:
                floor = forced[nforced - 1]
            picked = -1
            pos = lvl_pos[depth]
            end = iptr[j + 1]
            while pos < end:
                o = iopt[pos]
                pos += 1
                if dead[o] == 0 and o > floor:
                    picked = o
                    break
            lvl_pos[depth] = pos
            if picked < 0:
                depth -= 1
                descending = False
                continue
            nodes += 1
            if nodes > budget:
                status = OVER_BUDGET
                break
            select(picked, need, dead, live, optr, oidx, iptr, iopt)
            lvl_opt[depth] = picked
            depth += 1
            descending = True
        return count, nodes, status, first[:nfirst]

    @jit
    def root_options(need0, optr, oidx, iptr, iopt, mrv):
        """Options tried at depth 0, in search order (empty if no branching)."""
        nopt = optr.shape[0] - 1
        nitem = need0.shape[0]
        need = need0.copy()
        dead = np.zeros(nopt, dtype=np.int64)
        live = np.zeros(nitem, dtype=np.int64)
        for j in range(nitem):
            live[j] = iptr[j + 1] - iptr[j]
        for j in range(nitem):
            if need[j] <= 0:
                need[j] = 0
                for c in range(iptr[j], iptr[j + 1]):
                    p = iopt[c]
                    dead[p] += 1
                    if dead[p] == 1:
                        for e in range(optr[p], optr[p + 1]):
                            live[oidx[e]] -= 1
        j = choose(need, live, mrv)
        if j < 0:
            return np.zeros(0, dtype=np.int64), j
        out = np.zeros(iptr[j + 1] - iptr[j], dtype=np.int64)
        n = 0
        for c in range(iptr[j], iptr[j + 1]):
            o = iopt[c]
            if dead[o] == 0:
                out[n] = o
                n += 1
        return out[:n], j

    return search, root_options


def _identity(f):
    return f


_search_nb, _root_nb = _build_search(njit)
_search_py, _root_py = _build_search(_identity)


def exact_cover_search(need, optr, oidx, iptr, iopt, *, forced=None, forced_item=-1,
                       mrv=True, first_only=False, budget=10**8):
    """Count selections of distinct options covering each item exactly ``need`` times.

    Returns ``(count, nodes, status, first_solution)``.  ``forced`` options are
    selected before the search starts (used to split work at the root);
    ``forced_item`` is the item the last forced option was branched on.
    """
    if forced is None:
        forced = np.zeros(0, dtype=np.int64)
    args = (np.ascontiguousarray(need, dtype=np.int64), optr, oidx, iptr, iopt,
            np.asarray(forced, dtype=np.int64), int(forced_item), bool(mrv), bool(first_only), int(budget))
    fn = _search_nb if _accel.USE_NUMBA else _search_py
    count, nodes, status, first = fn(*args)
    return int(count), int(nodes), int(status), [int(x) for x in first]


def root_options(need, optr, oidx, iptr, iopt, *, mrv=True) -> tuple[list[int], int]:
    fn = _root_nb if _accel.USE_NUMBA else _root_py
    opts, item = fn(np.ascontiguousarray(need, dtype=np.int64), optr, oidx, iptr, iopt, bool(mrv))
    return [int(x) for x in opts], int(item)
