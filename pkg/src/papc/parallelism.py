"""Parallelism on the lines of a partial linear space.

Two lines are parallel when they are equal or disjoint.  On a structure whose
lines pairwise share at most one point, parallelism is transitive exactly when
no point off a line ``l`` lies on two lines disjoint from ``l``; that test is
what :func:`classify_parallelism` runs, and it yields a concrete witness when
transitivity fails.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import IndexOutOfRange, NotAPap, PreconditionViolated
from .incidence import IncidenceStructure, pap_order


@dataclass(frozen=True)
class ParallelWitness:
    line: int
    point: int
    parallels: tuple[int, int]


@dataclass(frozen=True)
class ParallelClassification:
    is_equivalence: bool
    classes: tuple[tuple[int, ...], ...] | None = None
    witness: ParallelWitness | None = None

    @property
    def class_count(self) -> int:
        if self.classes is None:
            raise ValueError("parallelism is not an equivalence relation")
        return len(self.classes)

    def class_of(self) -> dict[int, int]:
        return {blk: c for c, members in enumerate(self.classes or ()) for blk in members}


def are_parallel(S: IncidenceStructure, i: int, j: int) -> bool:
    for x in (i, j):
        if not 0 <= x < S.num_blocks:
            raise IndexOutOfRange(f"block index {x} outside [0, {S.num_blocks})")
    return i == j or S.masks[i] & S.masks[j] == 0


def _require_linear(S: IncidenceStructure) -> None:
    if S.num_blocks and S.block_size() is None:
        raise NotAPap("lines have different sizes")
    if S.max_meet() > 1:
        raise NotAPap("two lines share more than one point")


def _find_witness(S: IncidenceStructure) -> ParallelWitness | None:
    if S.num_blocks < 3:
        return None
    inter = S.intersections
    counts = kernels.parallel_counts(inter, S.incidence)
    counts = np.where(S.incidence.astype(bool), 0, counts)
    bad = np.argwhere(counts >= 2)
    if len(bad) == 0:
        return None
    line, point = (int(x) for x in bad[0])
    par = [m for m in S.point_blocks[point] if inter[line, m] == 0]
    return ParallelWitness(line, point, (par[0], par[1]))


def classify_parallelism(S: IncidenceStructure) -> ParallelClassification:
    _require_linear(S)
    witness = _find_witness(S)
    if witness is not None:
        return ParallelClassification(False, None, witness)
    classes = []
    assigned = np.full(S.num_blocks, False)
    if S.num_blocks:
        par = S.intersections == 0
        for i in range(S.num_blocks):
            if assigned[i]:
                continue
            members = np.flatnonzero(par[i])
            members = np.union1d(members, [i])
            assigned[members] = True
            classes.append(tuple(int(x) for x in members))
    return ParallelClassification(True, tuple(classes), None)


def parallelism_is_equivalence(S: IncidenceStructure) -> bool:
    if S.max_meet() <= 1:
        return _find_witness(S) is None
    return brute_force_is_equivalence(S)


def brute_force_is_equivalence(S: IncidenceStructure) -> bool:
    """Transitivity of the parallel relation checked over all triples of lines."""
    if S.num_blocks == 0:
        return True
    rel = (S.intersections == 0) | np.eye(S.num_blocks, dtype=bool)
    r = rel.astype(np.int64)
    composed = (r @ r) > 0
    return bool(np.all(rel[composed]))


@dataclass
class ClassBoundReport:
    n: int
    a: int
    parallel_set_sizes: list[int]
    low_valency_points: int
    min_class_size_bound: int
    low_valency_bound: int
    violations: list[str] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return not self.violations


def lemma28_check(S: IncidenceStructure) -> ClassBoundReport:
    """Class-size and low-valency bounds for a PAP with ``n^2 - a`` lines and no full point.

    Each line together with the lines disjoint from it forms a set of at
    least ``n - a`` lines (a parallel class when parallelism is transitive),
    and at most ``n*a`` points have valency below ``n``.  A violation is
    reported, not raised: it can only mean a bug upstream.
    """
    n = pap_order(S)
    a = n * n - S.num_blocks
    if not 1 <= a <= n - 1:
        raise PreconditionViolated(f"need n^2 - b in [1, n-1], got {a}")
    if S.num_points and int(S.valencies.max()) >= n + 1:
        raise PreconditionViolated("a point has valency n+1")
    sizes = [int(x) for x in np.count_nonzero(S.intersections == 0, axis=1) + 1]
    low = int(np.count_nonzero(S.valencies < n))
    rep = ClassBoundReport(n, a, sizes, low, n - a, n * a)
    for line, size in enumerate(sizes):
        if size < n - a:
            rep.violations.append(f"line {line} has {size} < {n - a} lines in its parallel set")
    if low > n * a:
        rep.violations.append(f"{low} > {n * a} points of valency < n")
    return rep
