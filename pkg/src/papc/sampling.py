"""Seeded instance families for sweeps and property tests.

Every generator is a pure function of its arguments; the same seed always
yields the same structure.
"""

from __future__ import annotations

import random
from math import isqrt

from .bounds import exceeds, sqrt_lt
from .constructions import (
    _projective_lines,
    _projective_points,
    affine_plane,
    baer_example,
    delete_blocks,
    miquelian_inversive_plane,
    projective_plane,
    shuffle_points,
)
from .errors import PreconditionViolated
from .fields import make_field
from .incidence import IncidenceStructure, new_structure, relabel
from .parallelism import classify_parallelism


def fano_pap() -> IncidenceStructure:
    """Fano plane on points 0..6 plus two empty points: order 3, 7 lines, 7 classes."""
    return new_structure(9, projective_plane(2).blocks)


def padded_plane_pap(m: int, drop: int = 0, seed: int = 0) -> IncidenceStructure:
    """PG(2, m) minus ``drop`` random lines, as a PAP of order ``m+1``.

    No two lines are disjoint, so every class is a single line.  With
    ``n = m + 1`` and ``drop = 0`` the class-point extension has
    ``k - e = n^2 - 2n + 2``, well past ``n + 2``, and the degree
    inequality is tight.
    """
    P = projective_plane(m)
    rng = random.Random(seed)
    gone = set(rng.sample(range(P.num_blocks), drop))
    return new_structure((m + 1) ** 2, [b for i, b in enumerate(P.blocks) if i not in gone])


def tangent_pap(n: int, removed: list[int]) -> IncidenceStructure:
    """Lines of PG(2, n) meeting ``removed`` in one point, with ``removed`` deleted.

    Enough empty points are appended to reach ``n^2`` points.  Two kept lines
    are disjoint exactly when they met in the same removed point, so
    parallelism is always an equivalence relation.
    """
    F = make_field(n)
    pts = _projective_points(F)
    gone = set(removed)
    if len(gone) < n + 1:
        raise PreconditionViolated(f"need at least {n + 1} removed points")
    keep = [i for i in range(len(pts)) if i not in gone]
    new_of = {old: new for new, old in enumerate(keep)}
    blocks = [[new_of[p] for p in ln if p not in gone] for ln in _projective_lines(F, pts) if len(gone.intersection(ln)) == 1]
    return new_structure(n * n, blocks)


def random_tangent_pap(n: int, extra: int, seed: int) -> IncidenceStructure:
    rng = random.Random(seed)
    v = n * n + n + 1
    return shuffle_points(tangent_pap(n, rng.sample(range(v), n + 1 + extra)), seed)


def _affine_minus(n: int, count: int, rng: random.Random) -> IncidenceStructure:
    A = affine_plane(n)
    return delete_blocks(A, rng.sample(range(A.num_blocks), count))


def full_count_instances(n: int, count: int, seed: int) -> list[IncidenceStructure]:
    """Equivalence-preserving deletions from AG(2, n) leaving at least ``n^2`` lines."""
    rng = random.Random(seed)
    classes = classify_parallelism(affine_plane(n)).classes
    out = []
    for i in range(count):
        if i % 4 == 3:
            # a whole class: b = n^2 with no full point
            S = delete_blocks(affine_plane(n), list(classes[rng.randrange(n + 1)]))
        else:
            S = _affine_minus(n, rng.randint(0, n), rng)
        out.append(shuffle_points(S, rng.randrange(1 << 30)))
    return out


def deficit_range(n: int) -> list[int]:
    """All ``a >= 1`` with ``a < sqrt(n)`` and ``a < n^2 - g(n) + 1``."""
    out = []
    a = 1
    while sqrt_lt(a, n):
        if exceeds(n * n - a, n, "g-1"):
            out.append(a)
        a += 1
    return out


def deficit_instances(n: int, a: int, count: int, seed: int) -> list[IncidenceStructure]:
    """PAPs with ``n^2 - a`` lines from AG(2, n); every other one has no full point."""
    rng = random.Random(seed)
    A = affine_plane(n)
    classes = classify_parallelism(A).classes
    out = []
    for i in range(count):
        if i % 2:
            c = rng.randrange(len(classes))
            rest = [j for j in range(A.num_blocks) if j not in classes[c]]
            S = delete_blocks(A, list(classes[c]) + rng.sample(rest, a))
        else:
            S = delete_blocks(A, rng.sample(range(A.num_blocks), n + a))
        out.append(shuffle_points(S, rng.randrange(1 << 30)))
    return out


def no_full_point_instances(count: int, seed: int, orders=(3, 4, 5, 7)) -> list[IncidenceStructure]:
    """PAPs with ``n^2 - a`` lines, ``1 <= a <= n-1``, and no point of valency ``n+1``."""
    rng = random.Random(seed)
    baer = {4: baer_example(4), 9: baer_example(9)}
    out = []
    while len(out) < count:
        kind = rng.randrange(4)
        if kind == 3:
            n = rng.choice(sorted(baer))
            B = baer[n]
            a0 = isqrt(n)
            drop = rng.randint(0, n - 1 - a0)
            S = delete_blocks(B, rng.sample(range(B.num_blocks), drop))
        else:
            n = rng.choice(orders)
            a = rng.randint(1, n - 1)
            A = affine_plane(n)
            if kind == 0:
                classes = classify_parallelism(A).classes
                c = classes[rng.randrange(len(classes))]
                rest = [j for j in range(A.num_blocks) if j not in c]
                S = delete_blocks(A, list(c) + rng.sample(rest, a))
            else:
                S = delete_blocks(A, rng.sample(range(A.num_blocks), n + a))
        if S.num_points and int(S.valencies.max()) > isqrt(S.num_points):
            continue
        out.append(shuffle_points(S, rng.randrange(1 << 30)))
    return out


def extension_instances(n: int, count: int, seed: int) -> list[IncidenceStructure]:
    """PAPs with at most ``n+1`` classes: AG(2, n) minus a random number of lines."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        S = _affine_minus(n, rng.randint(0, n * n + n - 1), rng)
        out.append(shuffle_points(S, rng.randrange(1 << 30)))
    return out


def cone_over(S: IncidenceStructure) -> IncidenceStructure:
    """Partial 3-design on ``1 + v`` points whose derived structure at point 0 is ``S``.

    Circles are ``{0} | B`` for the blocks ``B`` of ``S`` (shifted by one).
    Requires blocks of ``S`` to meet pairwise in at most one point.
    """
    if S.max_meet() > 1:
        raise PreconditionViolated("blocks must meet in at most one point")
    return new_structure(S.num_points + 1, [[0] + [p + 1 for p in b] for b in S.blocks])


def inversive_deletions(q: int, count: int, seed: int, max_delete: int = 1) -> list[IncidenceStructure]:
    M = miquelian_inversive_plane(q)
    rng = random.Random(seed)
    return [delete_blocks(M, rng.sample(range(M.num_blocks), rng.randint(1, max_delete))) for _ in range(count)]


def triple_system(v: int) -> IncidenceStructure:
    """All 3-subsets of ``v`` points: the complete 3-(v, 3, 1) design."""
    from itertools import combinations

    return new_structure(v, combinations(range(v), 3))


__all__ = [
    "fano_pap",
    "padded_plane_pap",
    "tangent_pap",
    "random_tangent_pap",
    "full_count_instances",
    "deficit_range",
    "deficit_instances",
    "no_full_point_instances",
    "extension_instances",
    "cone_over",
    "inversive_deletions",
    "triple_system",
    "relabel",
]
