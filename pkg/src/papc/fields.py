"""Finite fields GF(q) as full lookup tables.

Elements are encoded as integers ``0..q-1`` whose base-``p`` digits are the
coefficients of a polynomial over GF(p), constant term first.  Extension
fields use the fixed defining polynomials in :data:`DEFINING_POLYNOMIALS`
(Conway polynomials, highest coefficient first), so the tables are identical
on every run.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import UnsupportedOrder

# q -> (p, coefficients of the monic defining polynomial, leading term first)
DEFINING_POLYNOMIALS: dict[int, tuple[int, tuple[int, ...]]] = {
    4: (2, (1, 1, 1)),
    8: (2, (1, 0, 1, 1)),
    9: (3, (1, 2, 2)),
    16: (2, (1, 0, 0, 1, 1)),
    25: (5, (1, 4, 2)),
    27: (3, (1, 0, 2, 1)),
    32: (2, (1, 0, 0, 1, 0, 1)),
    49: (7, (1, 6, 3)),
    64: (2, (1, 0, 1, 1, 0, 1, 1)),
    81: (3, (1, 0, 0, 2, 2)),
    121: (11, (1, 7, 2)),
    128: (2, (1, 0, 0, 0, 0, 0, 1, 1)),
}
PRIMES = (2, 3, 5, 7, 11, 13)
SUPPORTED_ORDERS = tuple(sorted(set(PRIMES) | set(DEFINING_POLYNOMIALS)))

EXHAUSTIVE_CHECK_LIMIT = 32
SPOT_CHECK_SAMPLES = 20000


@dataclass(frozen=True, eq=False)
class FieldTable:
    q: int
    p: int
    degree: int
    add: np.ndarray
    mul: np.ndarray
    neg: np.ndarray
    inv: np.ndarray  # inv[0] == -1
    zero: int = 0
    one: int = 1

    def sub(self, a: int, b: int) -> int:
        return int(self.add[a, self.neg[b]])

    def div(self, a: int, b: int) -> int:
        if b == 0:
            raise ZeroDivisionError("division by zero in GF(%d)" % self.q)
        return int(self.mul[a, self.inv[b]])

    def power(self, a: int, e: int) -> int:
        r = self.one
        for _ in range(e):
            r = int(self.mul[r, a])
        return r

    def subfield(self, order: int) -> list[int]:
        """Elements fixed by ``x -> x**order``: the subfield of that order."""
        out = [x for x in range(self.q) if self.power(x, order) == x]
        if len(out) != order:
            raise UnsupportedOrder(f"GF({self.q}) has no subfield of order {order}")
        return out


def _poly_mul_mod(a: list[int], b: list[int], p: int, modulus: list[int]) -> list[int]:
    # coefficient lists constant-term first; modulus monic, same convention
    m = len(modulus) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    for d in range(len(prod) - 1, m - 1, -1):
        c = prod[d]
        if c:
            for k in range(m + 1):
                prod[d - m + k] = (prod[d - m + k] - c * modulus[k]) % p
    return (prod + [0] * m)[:m]


def _digits(x: int, p: int, m: int) -> list[int]:
    out = []
    for _ in range(m):
        out.append(x % p)
        x //= p
    return out


def _undigits(ds: list[int], p: int) -> int:
    x = 0
    for d in reversed(ds):
        x = x * p + d
    return x


def _build_tables(q: int) -> tuple[int, int, np.ndarray, np.ndarray]:
    if q in PRIMES:
        r = np.arange(q)
        return q, 1, (r[:, None] + r[None, :]) % q, (r[:, None] * r[None, :]) % q
    p, coeffs = DEFINING_POLYNOMIALS[q]
    m = len(coeffs) - 1
    modulus = list(reversed(coeffs))
    digits = [_digits(x, p, m) for x in range(q)]
    add = np.empty((q, q), dtype=np.int64)
    mul = np.empty((q, q), dtype=np.int64)
    for a in range(q):
        for b in range(a, q):
            s = _undigits([(x + y) % p for x, y in zip(digits[a], digits[b])], p)
            t = _undigits(_poly_mul_mod(digits[a], digits[b], p, modulus), p)
            add[a, b] = add[b, a] = s
            mul[a, b] = mul[b, a] = t
    return p, m, add, mul


def _verify(q: int, add: np.ndarray, mul: np.ndarray) -> None:
    r = np.arange(q)
    if not (np.array_equal(add[0], r) and np.array_equal(mul[1], r)):
        raise AssertionError("identity elements wrong")
    for tab in (add, mul):
        if not np.array_equal(tab, tab.T):
            raise AssertionError("table not commutative")
    # latin-square rows give unique inverses
    if not all(len(set(add[a])) == q for a in range(q)):
        raise AssertionError("additive inverses missing")
    if not all(len(set(mul[a, 1:])) == q - 1 for a in range(1, q)) or np.any(mul[1:, 1:] == 0):
        raise AssertionError("multiplicative inverses missing (reducible polynomial?)")
    if q <= EXHAUSTIVE_CHECK_LIMIT:
        a, b, c = r[:, None, None], r[None, :, None], r[None, None, :]
        ok = (
            np.array_equal(add[add[a, b], c], add[a, add[b, c]])
            and np.array_equal(mul[mul[a, b], c], mul[a, mul[b, c]])
            and np.array_equal(mul[a, add[b, c]], add[mul[a, b], mul[a, c]])
        )
    else:
        rng = np.random.default_rng(q)
        a, b, c = rng.integers(0, q, size=(3, SPOT_CHECK_SAMPLES))
        ok = (
            np.array_equal(add[add[a, b], c], add[a, add[b, c]])
            and np.array_equal(mul[mul[a, b], c], mul[a, mul[b, c]])
            and np.array_equal(mul[a, add[b, c]], add[mul[a, b], mul[a, c]])
        )
    if not ok:
        raise AssertionError(f"GF({q}) tables violate the field axioms")


@lru_cache(maxsize=None)
def make_field(q: int) -> FieldTable:
    if q not in SUPPORTED_ORDERS:
        raise UnsupportedOrder(f"no field table for order {q}; supported: {SUPPORTED_ORDERS}")
    p, m, add, mul = _build_tables(q)
    _verify(q, add, mul)
    neg = np.argmin(add, axis=1)  # add[a, neg[a]] == 0 and 0 is the minimum
    inv = np.full(q, -1, dtype=np.int64)
    for a in range(1, q):
        inv[a] = int(np.flatnonzero(mul[a] == 1)[0])
    for arr in (add, mul, neg, inv):
        arr.setflags(write=False)
    return FieldTable(q=q, p=p, degree=m, add=add, mul=mul, neg=neg, inv=inv)
