"""Immutable incidence structures and the design predicates built on them."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from math import comb, isqrt
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .errors import (
    DuplicateBlock,
    DuplicatePointInBlock,
    IndexOutOfRange,
    IsolatedPoint,
    NotAPap,
    PreconditionViolated,
)

Block = tuple[int, ...]


@dataclass(frozen=True)
class IncidenceStructure:
    """Points ``0..num_points-1`` and a canonically ordered tuple of blocks.

    Build instances with :func:`new_structure`; the constructor assumes its
    arguments are already canonical.  Bit masks and the incidence matrix are
    derived lazily and cached.
    """

    num_points: int
    blocks: tuple[Block, ...]

    @property
    def num_blocks(self) -> int:
        return len(self.blocks)

    @cached_property
    def masks(self) -> tuple[int, ...]:
        return tuple(sum(1 << p for p in blk) for blk in self.blocks)

    @cached_property
    def bits(self) -> np.ndarray:
        """Fixed-width ``uint64`` bitsets, one row per block."""
        words = max(1, (self.num_points + 63) // 64)
        out = np.zeros((self.num_blocks, words), dtype=np.uint64)
        for i, blk in enumerate(self.blocks):
            for p in blk:
                out[i, p >> 6] |= np.uint64(1) << np.uint64(p & 63)
        return out

    @cached_property
    def incidence(self) -> np.ndarray:
        inc = np.zeros((self.num_blocks, self.num_points), dtype=np.uint8)
        for i, blk in enumerate(self.blocks):
            inc[i, list(blk)] = 1
        return inc

    @cached_property
    def intersections(self) -> np.ndarray:
        return kernels.intersection_matrix(self.incidence)

    @cached_property
    def point_blocks(self) -> tuple[tuple[int, ...], ...]:
        through: list[list[int]] = [[] for _ in range(self.num_points)]
        for i, blk in enumerate(self.blocks):
            for p in blk:
                through[p].append(i)
        return tuple(tuple(x) for x in through)

    @cached_property
    def valencies(self) -> np.ndarray:
        return np.array([len(x) for x in self.point_blocks], dtype=np.int64)

    @cached_property
    def block_sizes(self) -> frozenset[int]:
        return frozenset(len(b) for b in self.blocks)

    def block_size(self) -> int | None:
        """The common block size, or ``None`` if sizes differ or there are no blocks."""
        if len(self.block_sizes) != 1:
            return None
        return next(iter(self.block_sizes))

    def meet(self, i: int, j: int) -> int:
        return (self.masks[i] & self.masks[j]).bit_count()

    def max_meet(self) -> int:
        """Largest intersection between two distinct blocks (0 with < 2 blocks)."""
        if self.num_blocks < 2:
            return 0
        inter = self.intersections.copy()
        np.fill_diagonal(inter, 0)
        return int(inter.max())

    def __contains__(self, block) -> bool:
        return tuple(sorted(block)) in self._block_set

    @cached_property
    def _block_set(self) -> frozenset[Block]:
        return frozenset(self.blocks)

    def __repr__(self) -> str:
        return f"IncidenceStructure(num_points={self.num_points}, num_blocks={self.num_blocks})"


@dataclass(frozen=True)
class DesignParams:
    t: int
    v: int
    k: int
    lam: int = 1

    def __post_init__(self):
        if self.t < 2 or self.lam < 1 or not (self.t <= self.k <= self.v):
            raise ValueError(f"invalid design parameters {self}")

    def __str__(self) -> str:
        return f"{self.t}-({self.v},{self.k},{self.lam})"


@dataclass(frozen=True)
class GddType:
    k: int
    group_size: int
    group_count: int

    def __post_init__(self):
        if min(self.k, self.group_size, self.group_count) < 1:
            raise ValueError(f"invalid GDD type {self}")


def new_structure(num_points: int, blocks: Iterable[Iterable[int]]) -> IncidenceStructure:
    """Validate and canonicalize.  Duplicates are rejected, never merged."""
    if num_points < 0:
        raise ValueError("num_points must be non-negative")
    canon: list[Block] = []
    for raw in blocks:
        pts = [int(p) for p in raw]
        for p in pts:
            if not 0 <= p < num_points:
                raise IndexOutOfRange(f"point {p} outside [0, {num_points})")
        blk = tuple(sorted(pts))
        if len(set(blk)) != len(blk):
            raise DuplicatePointInBlock(f"block {list(raw)} repeats a point")
        canon.append(blk)
    canon.sort()
    for a, b in zip(canon, canon[1:]):
        if a == b:
            raise DuplicateBlock(f"block {list(a)} occurs twice")
    return IncidenceStructure(num_points, tuple(canon))


def canonical(S: IncidenceStructure) -> IncidenceStructure:
    return new_structure(S.num_points, S.blocks)


def _check_point(S: IncidenceStructure, P: int) -> None:
    if not 0 <= P < S.num_points:
        raise IndexOutOfRange(f"point {P} outside [0, {S.num_points})")


def valency(S: IncidenceStructure, P: int) -> int:
    _check_point(S, P)
    return len(S.point_blocks[P])


def pap_order(S: IncidenceStructure) -> int:
    """Order ``n`` of a partial affine plane, or raise :class:`NotAPap`."""
    n = _isqrt_exact(S.num_points)
    if n is None or n < 2:
        raise NotAPap(f"{S.num_points} points is not n^2 for n >= 2")
    if S.num_blocks and S.block_sizes != {n}:
        raise NotAPap(f"blocks must have {n} points")
    if S.max_meet() > 1:
        raise NotAPap("two lines share more than one point")
    return n


def _isqrt_exact(x: int) -> int | None:
    r = isqrt(x)
    return r if r * r == x else None


def joined_mask(S: IncidenceStructure, P: int) -> int:
    m = 0
    for i in S.point_blocks[P]:
        m |= S.masks[i]
    return m & ~(1 << P)


def unjoined_points(S: IncidenceStructure, P: int) -> list[int]:
    _check_point(S, P)
    joined = joined_mask(S, P)
    return [Q for Q in range(S.num_points) if Q != P and not (joined >> Q) & 1]


def unjoined_count(S: IncidenceStructure, P: int) -> int:
    """Points other than ``P`` sharing no block with it (counted directly)."""
    pap_order(S)
    return len(unjoined_points(S, P))


def t_subset_counts(S: IncidenceStructure, t: int) -> Counter:
    c: Counter = Counter()
    for blk in S.blocks:
        c.update(combinations(blk, t))
    return c


def _coverage_ok(S: IncidenceStructure, params: DesignParams, exact: bool) -> bool:
    if S.num_points != params.v:
        return False
    if S.num_blocks and S.block_sizes != {params.k}:
        return False
    if params.t == 2:
        cov = kernels.pair_coverage(S.incidence)
        iu = np.triu_indices(S.num_points, 1)
        vals = cov[iu]
        if exact:
            return bool(np.all(vals == params.lam))
        return bool(np.all(vals <= params.lam))
    counts = t_subset_counts(S, params.t)
    if any(c > params.lam for c in counts.values()):
        return False
    if exact:
        return len(counts) == comb(params.v, params.t) and all(c == params.lam for c in counts.values())
    return True


def is_partial_design(S: IncidenceStructure, params: DesignParams) -> bool:
    return _coverage_ok(S, params, exact=False)


def is_design(S: IncidenceStructure, params: DesignParams) -> bool:
    return _coverage_ok(S, params, exact=True)


def derived_at(S: IncidenceStructure, P: int) -> tuple[IncidenceStructure, tuple[int, ...]]:
    """Blocks through ``P`` with ``P`` removed, on the remaining points.

    Returns the structure and ``index_map`` with ``index_map[new] = old``.
    """
    _check_point(S, P)
    if S.num_blocks and S.block_size() is None:
        raise PreconditionViolated("derived structure needs a uniform block size")
    index_map = tuple(x for x in range(S.num_points) if x != P)
    new_of = {old: new for new, old in enumerate(index_map)}
    blocks = [[new_of[x] for x in S.blocks[i] if x != P] for i in S.point_blocks[P]]
    return new_structure(S.num_points - 1, blocks), index_map


def dual(S: IncidenceStructure, *, with_map: bool = False):
    """Exchange points and blocks.

    Point ``i`` of the dual is block ``i`` of ``S``.  With ``with_map`` the
    result is ``(dual, block_of_point)`` where ``block_of_point[j]`` is the
    index in the dual of the block coming from point ``j`` of ``S``.
    """
    if S.num_points and min(S.valencies) == 0:
        P = int(np.argmin(S.valencies))
        raise IsolatedPoint(f"point {P} lies on no block")
    raw = [list(S.point_blocks[j]) for j in range(S.num_points)]
    D = new_structure(S.num_blocks, raw)
    if not with_map:
        return D
    pos = {blk: i for i, blk in enumerate(D.blocks)}
    return D, tuple(pos[tuple(r)] for r in raw)


def relabel(S: IncidenceStructure, perm: Sequence[int]) -> IncidenceStructure:
    """Rename point ``p`` to ``perm[p]``."""
    if sorted(perm) != list(range(S.num_points)):
        raise ValueError("perm must be a permutation of the points")
    return new_structure(S.num_points, ([perm[p] for p in blk] for blk in S.blocks))


def with_blocks(S: IncidenceStructure, extra: Iterable[Iterable[int]], num_points: int | None = None) -> IncidenceStructure:
    return new_structure(S.num_points if num_points is None else num_points, list(S.blocks) + [list(b) for b in extra])


def count_signature(S: IncidenceStructure) -> tuple:
    """Isomorphism invariant: sizes plus sorted valency and block-size sequences."""
    return (
        S.num_points,
        S.num_blocks,
        tuple(sorted(int(x) for x in S.valencies)),
        tuple(sorted(len(b) for b in S.blocks)),
    )


def is_group_divisible(S: IncidenceStructure, gdd: GddType) -> list[list[int]] | None:
    """Recover the groups of a GDD, or ``None`` if ``S`` is not one of type ``gdd``.

    Groups are the connected components of the never-co-blocked relation;
    every defining property is then checked explicitly.
    """
    v = S.num_points
    if v != gdd.group_size * gdd.group_count:
        return None
    if S.num_blocks and S.block_sizes != {gdd.k}:
        return None
    cov = kernels.pair_coverage(S.incidence) if v else np.zeros((0, 0), dtype=np.int64)
    seen = [False] * v
    groups: list[list[int]] = []
    for s in range(v):
        if seen[s]:
            continue
        comp, stack = [], [s]
        seen[s] = True
        while stack:
            x = stack.pop()
            comp.append(x)
            for y in np.flatnonzero(cov[x] == 0):
                y = int(y)
                if y != x and not seen[y]:
                    seen[y] = True
                    stack.append(y)
        groups.append(sorted(comp))
    if len(groups) != gdd.group_count or any(len(g) != gdd.group_size for g in groups):
        return None
    gid = np.empty(v, dtype=np.int64)
    for i, g in enumerate(groups):
        gid[g] = i
    same = gid[:, None] == gid[None, :]
    off = ~np.eye(v, dtype=bool)
    if np.any(cov[same & off] != 0) or np.any(cov[~same] != 1):
        return None
    return groups
