"""Line-count thresholds for completing partial planes, decided exactly.

The thresholds involve square roots, and several of them sit within a
fraction of an integer for small orders, so every comparison against an
integer line count is done exactly: either by an integer rearrangement
(``b > n^2 - sqrt(n)`` iff ``n^2 - b <= 0`` or ``(n^2 - b)^2 < n``) or by the
:class:`Surd` arithmetic below.  Floats appear only in reports.

Convention: "more than x lines" means ``b > x`` for the real number ``x``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import floor, isqrt, sqrt
from typing import Iterable

import numpy as np

from .errors import PreconditionViolated
from .incidence import IncidenceStructure


@lru_cache(maxsize=4096)
def _squarefree_split(m: int) -> tuple[int, int]:
    """``m = s^2 * r`` with ``r`` squarefree; returns ``(s, r)``."""
    s, r, p = 1, 1, 2
    while p * p <= m:
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        s *= p ** (e // 2)
        if e % 2:
            r *= p
        p += 1
    return s, r * m


class Surd:
    """Exact number ``sum c_r * sqrt(r)`` over distinct squarefree ``r``.

    Square roots of distinct squarefree integers are linearly independent
    over the rationals, so a surd is zero iff all its coefficients are; a
    nonzero surd's sign is then settled by rational interval refinement.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: dict[int, Fraction] | None = None):
        self.terms = {r: Fraction(c) for r, c in (terms or {}).items() if c != 0}

    @classmethod
    def of(cls, x) -> "Surd":
        if isinstance(x, Surd):
            return x
        return cls({1: Fraction(x)})

    @classmethod
    def sqrt(cls, m, coeff=1) -> "Surd":
        """``coeff * sqrt(m)`` for a non-negative rational ``m``."""
        m = Fraction(m)
        if m < 0:
            raise ValueError("square root of a negative number")
        # sqrt(a/b) = sqrt(a*b) / b
        s, r = _squarefree_split(m.numerator * m.denominator)
        return cls({r: Fraction(coeff) * s / m.denominator})

    def __add__(self, other) -> "Surd":
        other = Surd.of(other)
        out = dict(self.terms)
        for r, c in other.terms.items():
            out[r] = out.get(r, 0) + c
        return Surd(out)

    __radd__ = __add__

    def __neg__(self) -> "Surd":
        return Surd({r: -c for r, c in self.terms.items()})

    def __sub__(self, other) -> "Surd":
        return self + (-Surd.of(other))

    def __rsub__(self, other) -> "Surd":
        return Surd.of(other) - self

    def __mul__(self, other) -> "Surd":
        other = Surd.of(other)
        out: dict[int, Fraction] = {}
        for r1, c1 in self.terms.items():
            for r2, c2 in other.terms.items():
                s, r = _squarefree_split(r1 * r2)
                out[r] = out.get(r, 0) + c1 * c2 * s
        return Surd(out)

    __rmul__ = __mul__

    def interval(self, digits: int) -> tuple[Fraction, Fraction]:
        scale = 10**digits
        lo = hi = Fraction(0)
        for r, c in self.terms.items():
            if r == 1:
                lo += c
                hi += c
                continue
            root = isqrt(r * scale * scale)
            a, b = Fraction(root, scale), Fraction(root + 1, scale)
            if c > 0:
                lo, hi = lo + c * a, hi + c * b
            else:
                lo, hi = lo + c * b, hi + c * a
        return lo, hi

    def sign(self) -> int:
        if not self.terms:
            return 0
        if set(self.terms) == {1}:
            return (self.terms[1] > 0) - (self.terms[1] < 0)
        # float evaluation with a generous rounding-error bound first
        approx = mag = 0.0
        for r, c in self.terms.items():
            x = float(c) * sqrt(r)
            approx += x
            mag += abs(x)
        if abs(approx) > 1e-9 * mag:
            return 1 if approx > 0 else -1
        digits = 20
        while True:
            lo, hi = self.interval(digits)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            digits *= 2

    def __float__(self) -> float:
        lo, hi = self.interval(30)
        return float((lo + hi) / 2)

    def _cmp(self, other) -> int:
        return (self - other).sign()

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __eq__(self, other):
        if not isinstance(other, (Surd, int, Fraction)):
            return NotImplemented
        return self._cmp(other) == 0

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __str__(self) -> str:
        parts = []
        for r in sorted(self.terms):
            c = self.terms[r]
            parts.append(str(c) if r == 1 else f"{c}*sqrt({r})")
        return " + ".join(parts) if parts else "0"

    __repr__ = __str__


def g1(n: int) -> Surd:
    return Surd.of(n * n - 1)


def g2(n: int) -> Surd:
    return Surd.of(n * n + 6) - Surd.sqrt(n + 3, 2)


def g3(n: int) -> Surd:
    return Surd.of(Fraction(n * n) - Fraction(n, 6))


def g4(n: int) -> Surd:
    # n^2 - (sqrt5 - 1)/2 * n + 17/sqrt5 * sqrt(n) + 1
    return (
        Surd.of(Fraction(n * n) + Fraction(n, 2) + 1)
        - Surd.sqrt(5, Fraction(n, 2))
        + Surd.sqrt(5 * n, Fraction(17, 5))
    )


G_FUNCTIONS = (g1, g2, g3, g4)


def g_values(n: int) -> tuple[Surd, Surd, Surd, Surd]:
    return tuple(g(n) for g in G_FUNCTIONS)


def _g_floats(n: int) -> tuple[float, float, float, float]:
    return (
        n * n - 1.0,
        n * n + 6.0 - 2.0 * sqrt(n + 3),
        n * n - n / 6.0,
        n * n - (sqrt(5.0) - 1.0) / 2.0 * n + 17.0 / sqrt(5.0) * sqrt(n) + 1.0,
    )


def _float_margin(n: int) -> float:
    # far above the rounding error of the float forms, far below any real gap we act on
    return 1e-12 * n * n + 1e-9


def which_min(n: int) -> int:
    """1-based index of the smallest g_i(n); ties go to the lowest index.

    Floats pick the winner when it is separated by more than rounding noise;
    near-ties are settled with exact surds.
    """
    approx = _g_floats(n)
    lo = min(approx)
    near = [i for i, x in enumerate(approx) if x - lo <= _float_margin(n)]
    if len(near) == 1:
        return near[0] + 1
    vals = [G_FUNCTIONS[i](n) for i in near]
    best = 0
    for i in range(1, len(vals)):
        if vals[i] < vals[best]:
            best = i
    return near[best] + 1


def g(n: int) -> Surd:
    return G_FUNCTIONS[which_min(n) - 1](n)


def f_root(n: int) -> Surd:
    """Positive root of ``f(f+1) = 2n``."""
    return Surd.sqrt(1 + 8 * n, Fraction(1, 2)) - Fraction(1, 2)


def sqrt_threshold(n: int) -> Surd:
    return Surd.of(n * n) - Surd.sqrt(n)


def f_threshold(n: int) -> Surd:
    return Surd.of(n * n) - f_root(n)


BOUNDS = ("g-1", "sqrt", "f")


def exceeds(b: int, n: int, bound: str) -> bool:
    """``b > bound(n)`` for ``bound`` in ``{"g-1", "sqrt", "f"}``, exactly."""
    if n < 2:
        raise PreconditionViolated("order must be at least 2")
    deficit = n * n - b
    if bound == "sqrt":
        return deficit <= 0 or deficit * deficit < n
    if bound == "f":
        return deficit <= 0 or deficit * (deficit + 1) < 2 * n
    if bound == "g-1":
        return Surd.of(b) > g(n) - 1
    raise ValueError(f"unknown bound {bound!r}; expected one of {BOUNDS}")


def exceeds_surd(b: int, n: int, bound: str) -> bool:
    """Same decision as :func:`exceeds`, always through :class:`Surd`."""
    target = {"g-1": lambda: g(n) - 1, "sqrt": lambda: sqrt_threshold(n), "f": lambda: f_threshold(n)}[bound]()
    return Surd.of(b) > target


def remark_check(n: int) -> tuple[bool, bool]:
    """Whether ``n^2 - sqrt(n)`` and ``n^2 - f`` dominate ``g(n) - 1``."""
    i = which_min(n)
    gm1 = _g_floats(n)[i - 1] - 1.0
    ts = n * n - sqrt(n)
    tf = n * n - (sqrt(1.0 + 8.0 * n) - 1.0) / 2.0
    out = []
    for t, exact_t in ((ts, sqrt_threshold), (tf, f_threshold)):
        if abs(t - gm1) > _float_margin(n):
            out.append(gm1 < t)
        else:
            out.append(G_FUNCTIONS[i - 1](n) - 1 <= exact_t(n))
    return out[0], out[1]


def remark_check_exact(n: int) -> tuple[bool, bool]:
    """:func:`remark_check` computed purely with surds (slow reference)."""
    gm1 = g(n) - 1
    return gm1 <= sqrt_threshold(n), gm1 <= f_threshold(n)


def which_min_exact(n: int) -> int:
    """:func:`which_min` computed purely with surds (slow reference)."""
    vals = g_values(n)
    best = 0
    for i in range(1, 4):
        if vals[i] < vals[best]:
            best = i
    return best + 1


@dataclass(frozen=True)
class BoundReport:
    n: int
    g1: float
    g2: float
    g3: float
    g4: float
    which_min: int
    g: float
    f: float
    threshold_sqrt: float
    threshold_f: float
    exact: dict
    remark: tuple[bool, bool]

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "g1": self.g1,
            "g2": self.g2,
            "g3": self.g3,
            "g4": self.g4,
            "which_min": self.which_min,
            "g": self.g,
            "f": self.f,
            "threshold_sqrt": self.threshold_sqrt,
            "threshold_f": self.threshold_f,
            "exact": dict(self.exact),
            "remark_check": {"sqrt_dominates": self.remark[0], "f_dominates": self.remark[1]},
        }


def bound_report(n: int) -> BoundReport:
    if n < 2:
        raise PreconditionViolated("order must be at least 2")
    vals = g_values(n)
    wm = which_min(n)
    gv = vals[wm - 1]
    ts, tf = sqrt_threshold(n), f_threshold(n)
    gm1 = gv - 1
    max_s = ts if gm1 <= ts else gm1
    max_f = tf if gm1 <= tf else gm1
    fr = f_root(n)
    exact = {
        "g": str(gv),
        "f": str(fr),
        "threshold_sqrt": str(max_s),
        "threshold_f": str(max_f),
        # largest line count not exceeding each threshold
        "max_b_not_exceeding_sqrt": _floor_surd(max_s),
        "max_b_not_exceeding_f": _floor_surd(max_f),
        "f_floor": _floor_surd(fr),
    }
    return BoundReport(
        n=n,
        g1=float(vals[0]),
        g2=float(vals[1]),
        g3=float(vals[2]),
        g4=float(vals[3]),
        which_min=wm,
        g=float(gv),
        f=float(fr),
        threshold_sqrt=float(max_s),
        threshold_f=float(max_f),
        exact=exact,
        remark=remark_check(n),
    )


def _floor_surd(x: Surd) -> int:
    lo, _ = x.interval(20)
    k = floor(lo) - 1
    while Surd.of(k + 1) <= x:
        k += 1
    return k


def sqrt_le(m: int, n: int) -> bool:
    """``m <= sqrt(n)`` for integers."""
    return m <= 0 or m * m <= n


def sqrt_ge(m: int, n: int) -> bool:
    """``m >= sqrt(n)`` for integers."""
    return m >= 0 and m * m >= n


def sqrt_lt(m: int, n: int) -> bool:
    return m < 0 or m * m < n


# ---------------------------------------------------------------------------
# double counting on an extended structure


@dataclass(frozen=True)
class DegreeCertificate:
    n: int
    degrees: tuple[int, ...]
    b: int
    sum_d: int
    sum_d_dm1: int
    eq1_holds: bool
    eq2_holds: bool
    f0: int
    k: int | None = None
    e: int | None = None
    eq3_lhs: int | None = None
    eq3_rhs: int | None = None
    eq3_applicable: bool = False

    @property
    def eq3_holds(self) -> bool | None:
        if self.eq3_lhs is None:
            return None
        return self.eq3_lhs <= self.eq3_rhs

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "b": self.b,
            "sum_d": self.sum_d,
            "sum_d_dm1": self.sum_d_dm1,
            "eq1_holds": self.eq1_holds,
            "eq2_holds": self.eq2_holds,
            "f0": self.f0,
            "k": self.k,
            "e": self.e,
            "eq3_lhs": self.eq3_lhs,
            "eq3_rhs": self.eq3_rhs,
            "eq3_applicable": self.eq3_applicable,
            "eq3_holds": self.eq3_holds,
            "degree_histogram": _histogram(self.degrees),
        }


def _histogram(values: Iterable[int]) -> dict[str, int]:
    out: dict[str, int] = {}
    for v in sorted(values):
        out[str(v)] = out.get(str(v), 0) + 1
    return out


def degree_certificate(S: IncidenceStructure, n: int, k: int | None = None, e: int | None = None) -> DegreeCertificate:
    """Point-degree sums of a structure whose blocks pairwise meet in one point.

    ``sum d_P = b(n+1)`` and ``sum d_P(d_P-1) = b(b-1)`` must hold.  With the
    class count ``k`` and reused empty points ``e`` supplied, the inequality
    ``2n + (n-f0)((k-e)-(n+2)) <= f0(f0+1)`` is also evaluated, where
    ``f0 = n^2 - b``; it is flagged applicable when every degree lies in
    ``[n - f0, n]`` and the point count is ``n^2 + k - e``, the conditions
    under which it follows from the two sums.
    """
    if S.num_blocks and S.block_sizes != {n + 1}:
        raise PreconditionViolated(f"blocks must have {n + 1} points")
    if S.num_blocks > 1:
        inter = S.intersections
        off = ~np.eye(S.num_blocks, dtype=bool)
        if np.any(inter[off] != 1):
            raise PreconditionViolated("two blocks do not meet in exactly one point")
    d = [int(x) for x in S.valencies]
    b = S.num_blocks
    s1 = sum(d)
    s2 = sum(x * (x - 1) for x in d)
    f0 = n * n - b
    lhs = rhs = None
    applicable = False
    if k is not None and e is not None:
        lhs = 2 * n + (n - f0) * ((k - e) - (n + 2))
        rhs = f0 * (f0 + 1)
        applicable = S.num_points == n * n + k - e and all(n - f0 <= x <= n for x in d)
    return DegreeCertificate(
        n=n,
        degrees=tuple(d),
        b=b,
        sum_d=s1,
        sum_d_dm1=s2,
        eq1_holds=s1 == b * (n + 1),
        eq2_holds=s2 == b * (b - 1),
        f0=f0,
        k=k,
        e=e,
        eq3_lhs=lhs,
        eq3_rhs=rhs,
        eq3_applicable=applicable,
    )
