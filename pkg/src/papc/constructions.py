"""Classical structures used as substrates and counterexamples."""

from __future__ import annotations

import random
from itertools import combinations, product
from math import isqrt

import numpy as np

from .errors import IndexOutOfRange, NotASquare, PreconditionViolated, RetriesExhausted, TooLarge, UnsupportedOrder
from .fields import FieldTable, make_field
from .incidence import IncidenceStructure, new_structure, relabel

MAX_AFFINE_SPACE_POINTS = 1 << 15
MAX_INVERSIVE_ORDER = 7
DELETION_RETRIES = 10_000


def affine_plane(q: int) -> IncidenceStructure:
    """AG(2, q): point ``(x, y)`` has index ``x*q + y``."""
    F = make_field(q)
    lines = [[x * q + y for y in range(q)] for x in range(q)]
    for m in range(q):
        for c in range(q):
            lines.append([x * q + int(F.add[F.mul[m, x], c]) for x in range(q)])
    return new_structure(q * q, lines)


def _vectors(q: int, d: int) -> np.ndarray:
    # row i holds the base-q digits of i, most significant first
    return np.array(list(product(range(q), repeat=d)), dtype=np.int64)


def _index_of(vecs: np.ndarray, q: int) -> np.ndarray:
    idx = np.zeros(vecs.shape[:-1], dtype=np.int64)
    for k in range(vecs.shape[-1]):
        idx = idx * q + vecs[..., k]
    return idx


def _normalized_directions(F: FieldTable, d: int) -> list[tuple[int, ...]]:
    out = []
    for v in product(range(F.q), repeat=d):
        nz = [x for x in v if x]
        if nz and nz[0] == F.one:
            out.append(v)
    return out


def affine_space_line_design(q: int, d: int) -> IncidenceStructure:
    """All affine lines of GF(q)^d: a 2-(q^d, q, 1) design."""
    if d < 2:
        raise PreconditionViolated("dimension must be at least 2")
    F = make_field(q)
    if q**d > MAX_AFFINE_SPACE_POINTS:
        raise TooLarge(f"{q}^{d} points exceeds {MAX_AFFINE_SPACE_POINTS}")
    pts = _vectors(q, d)
    lines = []
    for v in _normalized_directions(F, d):
        v = np.array(v)
        # orbit[t, p] = index of p + t*v
        orbit = np.stack([_index_of(F.add[pts, F.mul[t, v]], q) for t in range(q)])
        for p in range(len(pts)):
            if orbit[:, p].min() == p:
                lines.append(orbit[:, p].tolist())
    return new_structure(q**d, lines)


def _projective_points(F: FieldTable) -> list[tuple[int, int, int]]:
    """Points of PG(2, q) with leftmost nonzero coordinate 1."""
    return [v for v in product(range(F.q), repeat=3) if any(v) and [x for x in v if x][0] == F.one]


def _projective_lines(F: FieldTable, pts: list[tuple[int, int, int]]) -> list[list[int]]:
    P = np.array(pts, dtype=np.int64)
    out = []
    for a in pts:
        dot = F.add[F.add[F.mul[a[0], P[:, 0]], F.mul[a[1], P[:, 1]]], F.mul[a[2], P[:, 2]]]
        out.append(np.flatnonzero(dot == 0).tolist())
    return out


def projective_plane(q: int) -> IncidenceStructure:
    F = make_field(q)
    pts = _projective_points(F)
    return new_structure(len(pts), _projective_lines(F, pts))


def baer_example(n: int) -> IncidenceStructure:
    """Partial affine plane of order ``n`` with ``n^2 - sqrt(n)`` lines and no completion.

    From PG(2, n) keep the lines meeting the Baer subplane over GF(sqrt n) in
    exactly one point, drop the subplane's points, and append ``sqrt(n)``
    isolated points at the end of the index range.
    """
    s = isqrt(n)
    if s * s != n or n < 4:
        raise NotASquare(f"{n} is not the square of an integer >= 2")
    F = make_field(n)
    sub = set(F.subfield(s))
    pts = _projective_points(F)
    lines = _projective_lines(F, pts)
    baer = {i for i, v in enumerate(pts) if all(x in sub for x in v)}
    tangent = [ln for ln in lines if len(baer.intersection(ln)) == 1]
    keep = [i for i in range(len(pts)) if i not in baer]
    new_of = {old: new for new, old in enumerate(keep)}
    blocks = [[new_of[p] for p in ln if p not in baer] for ln in tangent]
    return new_structure(len(keep) + s, blocks)


def miquelian_inversive_plane(q: int) -> IncidenceStructure:
    """Circles of PG(1, q^2): images of PG(1, q) under fractional-linear maps.

    Point ``x`` of GF(q^2) has index ``x``; infinity has index ``q^2``.
    """
    if q > MAX_INVERSIVE_ORDER:
        raise UnsupportedOrder(f"inversive planes only for q <= {MAX_INVERSIVE_ORDER}")
    make_field(q)
    F = make_field(q * q)
    sub = F.subfield(q)
    inf = F.q
    vec = [(x, F.one) for x in range(F.q)] + [(F.one, F.zero)]
    base = [(s, F.one) for s in sub] + [(F.one, F.zero)]

    def index(u: tuple[int, int]) -> int:
        if u[1] == 0:
            return inf
        return F.div(u[0], u[1])

    def circle(a: int, b: int, c: int) -> list[int]:
        (x1, y1), (x2, y2), (x3, y3) = vec[a], vec[b], vec[c]
        det = F.sub(int(F.mul[x1, y2]), int(F.mul[x2, y1]))
        l1 = F.div(F.sub(int(F.mul[x3, y2]), int(F.mul[x2, y3])), det)
        l2 = F.div(F.sub(int(F.mul[x1, y3]), int(F.mul[x3, y1])), det)
        m = ((int(F.mul[l1, x1]), int(F.mul[l2, x2])), (int(F.mul[l1, y1]), int(F.mul[l2, y2])))
        out = []
        for s, t in base:
            u = (int(F.add[F.mul[m[0][0], s], F.mul[m[0][1], t]]), int(F.add[F.mul[m[1][0], s], F.mul[m[1][1], t]]))
            out.append(index(u))
        return sorted(out)

    covered: set[tuple[int, int, int]] = set()
    circles: set[tuple[int, ...]] = set()
    for tri in combinations(range(F.q + 1), 3):
        if tri in covered:
            continue
        c = tuple(circle(*tri))
        circles.add(c)
        covered.update(combinations(c, 3))
    S = new_structure(F.q + 1, circles)
    if S.num_blocks != q * (q * q + 1):
        raise AssertionError(f"expected {q * (q * q + 1)} circles, got {S.num_blocks}")
    return S


def transversal_design(k: int, m: int) -> IncidenceStructure:
    """TD(3, m) from the cyclic Latin square; point ``(g, i)`` has index ``g*m + i``."""
    if k != 3:
        raise PreconditionViolated("only TD(3, m) is provided")
    if m < 2:
        raise PreconditionViolated("group size must be at least 2")
    return new_structure(3 * m, [[i, m + j, 2 * m + (i + j) % m] for i in range(m) for j in range(m)])


def delete_blocks(S: IncidenceStructure, indices) -> IncidenceStructure:
    drop = set()
    for i in indices:
        if not 0 <= i < S.num_blocks:
            raise IndexOutOfRange(f"block index {i} outside [0, {S.num_blocks})")
        drop.add(i)
    return IncidenceStructure(S.num_points, tuple(b for i, b in enumerate(S.blocks) if i not in drop))


def random_deletion(S: IncidenceStructure, a: int, seed: int, require_parallel_equivalence: bool = False) -> IncidenceStructure:
    """Delete ``a`` blocks chosen uniformly; reproducible for a given ``seed``.

    With ``require_parallel_equivalence`` the choice is resampled until
    parallelism on the remaining blocks is an equivalence relation.
    """
    from .parallelism import parallelism_is_equivalence

    if not 0 <= a <= S.num_blocks:
        raise PreconditionViolated(f"cannot delete {a} of {S.num_blocks} blocks")
    rng = random.Random(seed)
    for _ in range(DELETION_RETRIES):
        T = delete_blocks(S, rng.sample(range(S.num_blocks), a))
        if not require_parallel_equivalence or parallelism_is_equivalence(T):
            return T
    raise RetriesExhausted(f"no equivalence-preserving deletion of {a} blocks in {DELETION_RETRIES} tries")


def shuffle_points(S: IncidenceStructure, seed: int) -> IncidenceStructure:
    perm = list(range(S.num_points))
    random.Random(seed).shuffle(perm)
    return relabel(S, perm)
