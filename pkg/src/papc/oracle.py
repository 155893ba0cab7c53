"""Exhaustive completion search for partial t-designs.

The search adds blocks until every t-subset lies in exactly ``lam`` blocks.
Candidate blocks are the k-sets all of whose t-subsets are still deficient,
grown in ascending point order with bitset pruning; the completions are then
the exact covers of the deficient t-subsets by candidates (each candidate
used at most once), enumerated by :func:`papc.kernels.exact_cover_search`.

Counts are raw (no symmetry reduction), so they can be compared directly with
brute force.  Parallel runs split the search at the root and are guaranteed to
report the same numbers as the sequential run.
"""

from __future__ import annotations

import enum
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from multiprocessing import get_context

import numpy as np

from . import kernels
from .errors import BudgetExhausted, PreconditionViolated
from .incidence import DesignParams, IncidenceStructure, is_partial_design, t_subset_counts, with_blocks

DEFAULT_BUDGET = 10**8


def default_budget() -> int:
    """Node cap for searches; ``PAPC_BUDGET`` overrides the default."""
    raw = os.environ.get("PAPC_BUDGET")
    return int(raw) if raw else DEFAULT_BUDGET


class Method(str, enum.Enum):
    LOW_VALENCY = "LowValency"
    PROJECTIVE_EMBED = "ProjectiveEmbed"
    ORACLE_SEARCH = "OracleSearch"
    INVERSIVE_GLUE = "InversiveGlue"


@dataclass(frozen=True)
class CompletionResult:
    completed: IncidenceStructure
    added_blocks: tuple[tuple[int, ...], ...]
    method: Method
    certificate: tuple[str, ...] = ()

    @property
    def certificate_text(self) -> str:
        return "\n".join(self.certificate)


@dataclass(frozen=True)
class OracleOutcome:
    completions_found: int
    first_completion: CompletionResult | None
    exhausted: bool
    nodes: int = 0
    candidates: int = 0
    budget_exhausted: bool = False
    mode: str = "first"

    @property
    def certifies_none(self) -> bool:
        return self.exhausted and self.completions_found == 0

    def summary(self) -> dict:
        return {
            "mode": self.mode,
            "completions_found": self.completions_found,
            "exhausted": self.exhausted,
            "budget_exhausted": self.budget_exhausted,
            "nodes": self.nodes,
            "candidates": self.candidates,
        }


@dataclass
class _Problem:
    S: IncidenceStructure
    params: DesignParams
    items: list[tuple[int, ...]]
    need: np.ndarray
    candidates: list[tuple[int, ...]]
    optr: np.ndarray = field(repr=False)
    oidx: np.ndarray = field(repr=False)
    iptr: np.ndarray = field(repr=False)
    iopt: np.ndarray = field(repr=False)


def _deficits(S: IncidenceStructure, params: DesignParams) -> dict[tuple[int, ...], int]:
    t, lam = params.t, params.lam
    if t == 2:
        cov = kernels.pair_coverage(S.incidence) if S.num_blocks else np.zeros((S.num_points,) * 2, dtype=np.int64)
        xs, ys = np.triu_indices(S.num_points, 1)
        vals = cov[xs, ys]
        return {(int(x), int(y)): lam - int(c) for x, y, c in zip(xs, ys, vals) if c < lam}
    counts = t_subset_counts(S, t)
    return {T: lam - counts.get(T, 0) for T in combinations(range(S.num_points), t) if counts.get(T, 0) < lam}


def _candidates(S: IncidenceStructure, params: DesignParams, deficient, budget: int) -> list[tuple[int, ...]]:
    """All k-sets whose t-subsets are all deficient, in lexicographic order."""
    t, k, v = params.t, params.k, params.v
    link: dict[tuple[int, ...], int] = {}
    for T in deficient:
        for y in T:
            key = tuple(x for x in T if x != y)
            link[key] = link.get(key, 0) | (1 << y)
    full = (1 << v) - 1
    existing = set(S.blocks)
    out: list[tuple[int, ...]] = []
    nodes = 0

    def grow(chosen: list[int], cand: int) -> None:
        nonlocal nodes
        if len(chosen) == k:
            blk = tuple(chosen)
            if blk not in existing:
                out.append(blk)
            return
        while cand:
            if cand.bit_count() < k - len(chosen):
                return
            low = cand & -cand
            x = low.bit_length() - 1
            cand ^= low
            nodes += 1
            if nodes > budget:
                raise BudgetExhausted(f"candidate generation exceeded {budget} nodes")
            nxt = cand  # points above x still compatible with `chosen`
            if len(chosen) >= t - 2:
                for sub in combinations(chosen, t - 2):
                    nxt &= link.get(tuple(sorted(sub + (x,))), 0)
                    if not nxt and len(chosen) + 1 < k:
                        break
            chosen.append(x)
            grow(chosen, nxt)
            chosen.pop()

    if t - 1 == 0:  # pragma: no cover - t >= 2 by construction
        raise PreconditionViolated("t must be at least 2")
    grow([], full)
    return out


def _problem(S: IncidenceStructure, params: DesignParams, budget: int) -> _Problem:
    deficient = _deficits(S, params)
    items = sorted(deficient)
    item_index = {T: i for i, T in enumerate(items)}
    need = np.array([deficient[T] for T in items], dtype=np.int64)
    cands = _candidates(S, params, deficient, budget)
    rows = [[item_index[T] for T in combinations(c, params.t)] for c in cands]
    optr, oidx = kernels.csr_from_lists(rows)
    iptr, iopt = kernels.transpose_csr(optr, oidx, len(items))
    return _Problem(S, params, items, need, cands, optr, oidx, iptr, iopt)


def _run_branch(args):
    need, optr, oidx, iptr, iopt, forced, item, mrv, first_only, budget = args
    return kernels.exact_cover_search(
        need, optr, oidx, iptr, iopt, forced=forced, forced_item=item, mrv=mrv, first_only=first_only, budget=budget
    )


def _search(prob: _Problem, first_only: bool, budget: int, workers: int):
    mrv = prob.params.lam == 1
    arrays = (prob.need, prob.optr, prob.oidx, prob.iptr, prob.iopt)
    if workers > 1:
        opts, item = kernels.root_options(*arrays, mrv=mrv)
        if len(opts) > 1:
            res = _search_parallel(arrays, opts, item, mrv, first_only, budget, workers)
            if res is not None:
                return res
    return kernels.exact_cover_search(*arrays, mrv=mrv, first_only=first_only, budget=budget)


def _search_parallel(arrays, opts, item, mrv, first_only, budget, workers):
    """Root-split search; ``None`` when the sequential run could differ (budget)."""
    jobs = [(*arrays, np.array([o], dtype=np.int64), item, mrv, first_only, budget) for o in opts]
    # compile before forking so workers inherit the machine code
    kernels.exact_cover_search(*arrays, mrv=mrv, first_only=True, budget=1)
    with ProcessPoolExecutor(max_workers=workers, mp_context=get_context("fork")) as pool:
        results = list(pool.map(_run_branch, jobs))
    if first_only:
        nodes = 0
        for count, n, status, sol in results:
            nodes += n
            if status == kernels.OVER_BUDGET or nodes > budget:
                return None
            if count:
                return count, nodes, kernels.STOPPED_FIRST, sol
        return 0, nodes, kernels.EXHAUSTED, []
    total = sum(r[0] for r in results)
    nodes = sum(r[1] for r in results)
    if nodes > budget or any(r[2] == kernels.OVER_BUDGET for r in results):
        return None
    first = next((r[3] for r in results if r[0]), [])
    return total, nodes, kernels.EXHAUSTED, first


def oracle_complete(
    S: IncidenceStructure,
    params: DesignParams,
    mode: str = "first",
    *,
    budget: int | None = None,
    workers: int = 1,
) -> OracleOutcome:
    """Search for completions of ``S`` to a design with ``params``.

    ``mode="first"`` stops at the first completion in canonical order;
    ``mode="count_all"`` enumerates all of them.  When the node budget runs
    out the outcome has ``budget_exhausted=True`` and ``exhausted=False``.
    """
    if mode not in ("first", "count_all"):
        raise ValueError("mode must be 'first' or 'count_all'")
    if not is_partial_design(S, params):
        raise PreconditionViolated(f"input is not a partial {params} design")
    budget = default_budget() if budget is None else budget
    try:
        prob = _problem(S, params, budget)
    except BudgetExhausted:
        return OracleOutcome(0, None, False, budget, 0, True, mode)
    count, nodes, status, sol = _search(prob, mode == "first", budget, workers)
    first = None
    if count:
        added = tuple(prob.candidates[o] for o in sol)
        completed = with_blocks(S, added)
        first = CompletionResult(
            completed,
            tuple(sorted(added)),
            Method.ORACLE_SEARCH,
            (
                f"oracle: {len(prob.items)} deficient {params.t}-subsets, {len(prob.candidates)} candidate blocks",
                f"oracle: completion with {len(added)} added blocks after {nodes} nodes",
            ),
        )
    return OracleOutcome(
        completions_found=count,
        first_completion=first,
        exhausted=status == kernels.EXHAUSTED,
        nodes=nodes,
        candidates=len(prob.candidates),
        budget_exhausted=status == kernels.OVER_BUDGET,
        mode=mode,
    )
