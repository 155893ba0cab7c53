"""Completing partial affine planes and partial 2-designs.

Routes, in the order :func:`complete_pap` tries them:

1. a point of valency ``n+1`` forces exactly ``n+1`` parallel classes, so the
   plane extends to a partial projective plane (one new point per class plus a
   line at infinity), which is completed by search and then stripped;
2. ``n^2`` lines and no full point: every point misses exactly one line, and
   the missing lines are rebuilt from unjoined points;
3. ``n^2 - a`` lines with ``a`` below both ``sqrt(n)`` and ``n^2 - g(n) + 1``:
   at most ``n+1`` classes, then as in route 1;
4. anything else goes to the exhaustive oracle.

Non-completability is only ever claimed from an exhausted oracle run.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .bounds import exceeds, g, sqrt_lt
from .errors import (
    BudgetExhausted,
    HypothesesNotMet,
    InvalidInput,
    NotAPlane,
    NotCompletable,
    NotEquivalence,
    ResultNotADesign,
    TooManyClasses,
)
from .incidence import (
    DesignParams,
    GddType,
    IncidenceStructure,
    dual,
    is_design,
    is_group_divisible,
    joined_mask,
    new_structure,
    pap_order,
    unjoined_points,
    with_blocks,
)
from .oracle import CompletionResult, Method, OracleOutcome, oracle_complete
from .parallelism import ParallelClassification, classify_parallelism, lemma28_check

__all__ = [
    "CompletionResult",
    "Method",
    "OracleOutcome",
    "ProjectiveExtension",
    "ClassPointExtension",
    "complete_low_valency",
    "extend_to_partial_projective",
    "extend_with_class_points",
    "complete_partial_projective_search",
    "strip_infinity",
    "complete_pap",
    "boundary_gdd",
    "oracle_complete",
]


def _line_params(S: IncidenceStructure) -> tuple[int, int, int]:
    """``(n, d, r)`` for a partial 2-(n^d, n, 1) design."""
    n = S.block_size()
    if n is None or n < 2:
        raise HypothesesNotMet("shape", "need at least one block and a uniform block size >= 2")
    v, d = n, 1
    while v < S.num_points:
        v *= n
        d += 1
    if v != S.num_points or d < 2:
        raise HypothesesNotMet("shape", f"{S.num_points} points is not a power n^d (d >= 2) of n = {n}")
    if S.max_meet() > 1:
        raise HypothesesNotMet("shape", "two blocks share more than one point")
    return n, d, (v - 1) // (n - 1)


def complete_low_valency(S: IncidenceStructure) -> CompletionResult:
    """Rebuild the missing lines of a partial 2-(n^d, n, 1) design from unjoined points.

    Every point of valency ``r - 1`` is on exactly one missing line, namely
    the point together with everything it is not yet joined to.
    """
    n, d, r = _line_params(S)
    vals = S.valencies
    cert = [f"low-valency: partial 2-({S.num_points},{n},1) design, n={n}, d={d}, r={r}"]

    off = np.where(S.incidence.astype(bool), 0, kernels.parallel_counts(S.intersections, S.incidence))
    worst = int(off.max()) if off.size else 0
    if worst > r - n:
        line, P = (int(x) for x in np.argwhere(off == worst)[0])
        raise HypothesesNotMet(
            "parallel-lines",
            f"{worst} > {r - n} lines through point {P} miss line {line}",
        )
    low = [int(P) for P in np.flatnonzero(vals < r - 1)]
    if len(low) > 1:
        raise HypothesesNotMet("low-valency", f"points {low[:5]} all have valency below {r - 1}")
    cert.append(f"verified: at most {r - n} lines through a point miss a given line (max seen {worst})")
    cert.append(f"verified: {len(low)} point(s) of valency below r-1")

    added: set[tuple[int, ...]] = set()
    for P in np.flatnonzero(vals == r - 1):
        P = int(P)
        blk = tuple(sorted([P] + unjoined_points(S, P)))
        for x in blk:
            clash = joined_mask(S, x) & sum(1 << y for y in blk)
            if clash:
                y = (clash & -clash).bit_length() - 1
                raise ResultNotADesign(f"points {x} and {y} of rebuilt line {blk} are already joined")
        added.add(blk)
    added_blocks = tuple(sorted(added))
    cert.append(f"added {len(added_blocks)} line(s), each pairwise unjoined before insertion")
    completed = with_blocks(S, added_blocks)
    params = DesignParams(2, S.num_points, n, 1)
    if not is_design(completed, params):
        raise ResultNotADesign(f"rebuilt structure is not a {params} design")
    cert.append(f"verified: result is a {params} design")
    return CompletionResult(completed, added_blocks, Method.LOW_VALENCY, tuple(cert))


def _classes(S: IncidenceStructure) -> ParallelClassification:
    pc = classify_parallelism(S)
    if not pc.is_equivalence:
        w = pc.witness
        raise NotEquivalence(
            f"point {w.point} lies on lines {w.parallels[0]} and {w.parallels[1]}, both disjoint from line {w.line}"
        )
    return pc


@dataclass(frozen=True)
class ProjectiveExtension:
    structure: IncidenceStructure
    n: int
    class_points: tuple[int, ...]  # class i -> its new point
    infinity: tuple[int, ...]


def extend_to_partial_projective(S: IncidenceStructure) -> ProjectiveExtension:
    """Add ``n+1`` points at infinity, one per parallel class, and the line through them.

    New points are ``n^2, ..., n^2 + n``; class ``i`` (in classification order)
    gets point ``n^2 + i``.
    """
    n = pap_order(S)
    pc = _classes(S)
    if pc.class_count > n + 1:
        raise TooManyClasses(f"{pc.class_count} parallel classes > {n + 1}")
    base = n * n
    blocks = [list(b) for b in S.blocks]
    for c, members in enumerate(pc.classes):
        for i in members:
            blocks[i].append(base + c)
    infinity = tuple(range(base, base + n + 1))
    blocks.append(list(infinity))
    ext = new_structure(base + n + 1, blocks)
    return ProjectiveExtension(ext, n, tuple(base + c for c in range(pc.class_count)), infinity)


@dataclass(frozen=True)
class ClassPointExtension:
    structure: IncidenceStructure
    n: int
    k: int  # parallel classes
    e: int  # empty points reused as class points
    class_points: tuple[int, ...]


def extend_with_class_points(S: IncidenceStructure) -> ClassPointExtension:
    """Put one extra point on the lines of each class, reusing empty points first.

    No line at infinity is added, so any two lines of the result meet in
    exactly one point.  The first ``e = min(#empty, k)`` classes take the
    lowest-indexed empty points; the rest get new points ``n^2, n^2+1, ...``.
    """
    n = pap_order(S)
    pc = _classes(S)
    k = pc.class_count if S.num_blocks else 0
    empties = [int(P) for P in np.flatnonzero(S.valencies == 0)]
    e = min(len(empties), k)
    pts = empties[:e] + [n * n + i for i in range(k - e)]
    blocks = [list(b) for b in S.blocks]
    for c, members in enumerate(pc.classes or ()):
        for i in members:
            blocks[i].append(pts[c])
    return ClassPointExtension(new_structure(n * n + k - e, blocks), n, k, e, tuple(pts))


def complete_partial_projective_search(
    S: IncidenceStructure,
    n: int | None = None,
    *,
    mode: str = "count_all",
    budget: int | None = None,
    workers: int = 1,
) -> OracleOutcome:
    """Search for projective planes of order ``n`` containing ``S``.

    Missing points are added as isolated points at the top of the index range.
    """
    if n is None:
        k = S.block_size()
        if k is None:
            raise InvalidInput("cannot infer the order: no blocks or mixed block sizes")
        n = k - 1
    v = n * n + n + 1
    if S.num_points > v:
        raise InvalidInput(f"{S.num_points} points exceeds {v}")
    if S.num_blocks and S.block_sizes != {n + 1}:
        raise InvalidInput(f"blocks must have {n + 1} points")
    if S.max_meet() > 1:
        raise InvalidInput("two blocks share more than one point")
    if S.num_points < v:
        S = IncidenceStructure(v, S.blocks)
    return oracle_complete(S, DesignParams(2, v, n + 1, 1), mode, budget=budget, workers=workers)


def strip_infinity(S_proj: IncidenceStructure, line) -> IncidenceStructure:
    """Delete a line and its points from a projective plane, renumbering the rest in order."""
    k = S_proj.block_size()
    if k is None or k < 3:
        raise NotAPlane("not a projective plane: block sizes")
    n = k - 1
    if not is_design(S_proj, DesignParams(2, n * n + n + 1, n + 1, 1)):
        raise NotAPlane(f"not a projective plane of order {n}")
    if isinstance(line, (int, np.integer)):
        if not 0 <= line < S_proj.num_blocks:
            raise NotAPlane(f"no block {line}")
        blk = S_proj.blocks[line]
    else:
        blk = tuple(sorted(line))
        if blk not in S_proj:
            raise NotAPlane(f"{blk} is not a block")
    gone = set(blk)
    keep = [p for p in range(S_proj.num_points) if p not in gone]
    new_of = {old: new for new, old in enumerate(keep)}
    blocks = [[new_of[p] for p in b if p not in gone] for b in S_proj.blocks if b != blk]
    return new_structure(len(keep), blocks)


def _via_projective(S: IncidenceStructure, n: int, cert: list[str], budget, workers) -> CompletionResult:
    ext = extend_to_partial_projective(S)
    cert.append(
        f"extended to a partial projective plane: {ext.structure.num_points} points, "
        f"{ext.structure.num_blocks} lines"
    )
    out = complete_partial_projective_search(ext.structure, n, mode="first", budget=budget, workers=workers)
    _oracle_verdict(out, cert, "projective search")
    plane = out.first_completion.completed
    completed = strip_infinity(plane, ext.infinity)
    return _finish(S, completed, n, Method.PROJECTIVE_EMBED, cert)


def _oracle_verdict(out: OracleOutcome, cert: list[str], what: str) -> None:
    if out.budget_exhausted:
        cert.append(f"{what}: budget exhausted after {out.nodes} nodes")
        raise BudgetExhausted("\n".join(cert), out)
    if out.completions_found == 0:
        cert.append(f"{what}: oracle exhausted, 0 completions ({out.nodes} nodes)")
        raise NotCompletable("\n".join(cert), out)
    cert.append(f"{what}: completion found after {out.nodes} nodes")


def _finish(S, completed, n, method, cert) -> CompletionResult:
    params = DesignParams(2, n * n, n, 1)
    if not is_design(completed, params):
        raise ResultNotADesign(f"output is not a {params} design")
    have = set(completed.blocks)
    if not set(S.blocks) <= have:
        raise ResultNotADesign("output lost an input line")
    added = tuple(sorted(have - set(S.blocks)))
    cert.append(f"verified: result is a {params} design containing all {S.num_blocks} input lines")
    return CompletionResult(completed, added, method, tuple(cert))


def _route3_applies(n: int, b: int) -> bool:
    a = n * n - b
    # a < sqrt(n) and b > g(n) - 1, both strict; boundary values fall through
    return a >= 1 and sqrt_lt(a, n) and exceeds(b, n, "g-1")


def _class_diagnostic(S: IncidenceStructure, pc: ParallelClassification, n: int) -> str:
    """Line count forced by two classes avoiding a valency-``n`` point."""
    P = int(np.flatnonzero(S.valencies == n)[0])
    through = {pc.class_of()[i] for i in S.point_blocks[P]}
    others = [c for c in range(pc.class_count) if c not in through]
    if len(others) < 2:
        return f"point {P} of valency {n} meets all but {len(others)} class(es)"
    d1, d2 = len(pc.classes[others[0]]), len(pc.classes[others[1]])
    return f"two classes missing point {P} have sizes {d1}, {d2}: at most n^2 - d1*d2 = {n * n - d1 * d2} lines"


def complete_pap(
    S: IncidenceStructure,
    *,
    method: str = "auto",
    budget: int | None = None,
    workers: int = 1,
) -> CompletionResult:
    """Embed a partial affine plane in an affine plane of the same order.

    ``method`` forces a route: ``"low-valency"``, ``"projective"`` or
    ``"oracle"``; ``"auto"`` picks the first that applies.
    """
    n = pap_order(S)
    pc = _classes(S)
    b = S.num_blocks
    vmax = int(S.valencies.max()) if S.num_points else 0
    cert = [f"partial affine plane of order {n} with {b} lines, {pc.class_count} parallel classes"]
    cert.append("verified: parallelism is an equivalence relation")

    if method == "low-valency":
        res = complete_low_valency(S)
        return CompletionResult(res.completed, res.added_blocks, res.method, tuple(cert) + res.certificate)
    if method == "projective":
        cert.append("route: projective extension (forced)")
        return _via_projective(S, n, cert, budget, workers)
    if method == "oracle":
        return _oracle_route(S, n, cert, budget, workers)
    if method != "auto":
        raise ValueError(f"unknown method {method!r}")

    if vmax == n + 1:
        cert.append(f"route 1: a point has valency {n + 1}")
        if pc.class_count != n + 1:
            raise AssertionError(f"full point present but {pc.class_count} classes")
        cert.append(f"verified: exactly {n + 1} parallel classes")
        return _via_projective(S, n, cert, budget, workers)
    if b == n * n:
        cert.append(f"route 2: {b} = n^2 lines, no full point, so every point has valency {n}")
        res = complete_low_valency(S)
        return _finish(S, res.completed, n, Method.LOW_VALENCY, cert + list(res.certificate[1:-1]))
    if _route3_applies(n, b):
        a = n * n - b
        cert.append(f"route 3: a = {a} is below sqrt({n}) and n^2 - g(n) + 1 = {n * n + 1 - float(g(n)):.4f}")
        rep = lemma28_check(S)
        cert.append(
            f"class sizes >= {rep.min_class_size_bound}: {min(rep.parallel_set_sizes)}; "
            f"points of valency < n: {rep.low_valency_points} <= {rep.low_valency_bound}"
        )
        if not rep.holds:
            raise AssertionError("; ".join(rep.violations))
        if pc.class_count > n + 1:
            raise AssertionError(f"{pc.class_count} classes; {_class_diagnostic(S, pc, n)}")
        cert.append(f"verified: {pc.class_count} <= {n + 1} parallel classes")
        return _via_projective(S, n, cert, budget, workers)
    return _oracle_route(S, n, cert, budget, workers)


def _oracle_route(S, n, cert, budget, workers) -> CompletionResult:
    cert.append("route 4: no constructive case applies; exhaustive oracle")
    out = oracle_complete(S, DesignParams(2, n * n, n, 1), "first", budget=budget, workers=workers)
    _oracle_verdict(out, cert, "oracle")
    return _finish(S, out.first_completion.completed, n, Method.ORACLE_SEARCH, cert)


def boundary_gdd(S: IncidenceStructure) -> list[list[int]] | None:
    """Groups of the GDD forced when ``f0(f0+1) = 2n`` and ``k - e = n + 2``.

    With ``f0 = n^2 - b`` and the class-point extension ``I'``, the points on
    ``n`` lines of ``I'`` carry a structure whose dual is an ``n``-GDD of type
    ``(n - f0)^(n + f0 + 2)``.  Returns the groups (as lines of ``S``), or
    ``None`` when the case does not apply or the dual is not such a GDD.
    """
    n = pap_order(S)
    f0 = n * n - S.num_blocks
    if f0 <= 0 or f0 * (f0 + 1) != 2 * n:
        return None
    ext = extend_with_class_points(S)
    if ext.k - ext.e != n + 2:
        return None
    I = ext.structure
    W = [int(P) for P in np.flatnonzero(I.valencies == n)]
    new_of = {old: new for new, old in enumerate(W)}
    G = new_structure(len(W), [[new_of[p] for p in blk if p in new_of] for blk in I.blocks])
    if G.num_points == 0 or min(G.valencies) == 0:
        return None
    D = dual(G)
    return is_group_divisible(D, GddType(n, n - f0, n + f0 + 2))
