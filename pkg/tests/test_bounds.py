from decimal import Decimal, getcontext
from fractions import Fraction
from math import isqrt, sqrt

import pytest
from hypothesis import given
from hypothesis import strategies as st

from papc.bounds import (
    Surd,
    bound_report,
    degree_certificate,
    exceeds,
    exceeds_surd,
    f_root,
    g1,
    g3,
    remark_check,
    remark_check_exact,
    sqrt_ge,
    sqrt_le,
    sqrt_lt,
    which_min,
    which_min_exact,
)
from papc.completion import extend_to_partial_projective
from papc.constructions import affine_plane, delete_blocks, projective_plane
from papc.errors import PreconditionViolated
from papc.incidence import new_structure

getcontext().prec = 60


def _dec_g(n):
    """High-precision decimal evaluation of the four g functions."""
    n_ = Decimal(n)
    s5 = Decimal(5).sqrt()
    return (
        n_ * n_ - 1,
        n_ * n_ + 6 - 2 * (n_ + 3).sqrt(),
        n_ * n_ - n_ / 6,
        n_ * n_ - (s5 - 1) / 2 * n_ + 17 / s5 * n_.sqrt() + 1,
    )


def _range_rule(n):
    if n <= 6:
        return 1
    if 7 <= n <= 15 or 57 <= n <= 288:
        return 3
    if 16 <= n <= 56:
        return 2
    return 4


def test_report_examples():
    r = bound_report(4)
    assert r.g1 == 15 and r.which_min == 1
    r = bound_report(12)
    assert r.which_min == 3 and r.g == pytest.approx(142)
    assert g3(12) == Surd.of(142)
    assert bound_report(6).f == pytest.approx(3)
    assert f_root(6) == Surd.of(3)


def test_report_fields_consistent():
    for n in (2, 7, 19, 49, 300):
        r = bound_report(n)
        assert r.g == min(r.g1, r.g2, r.g3, r.g4)
        assert abs(r.f * (r.f + 1) - 2 * n) <= 1e-9 * 2 * n
        assert r.threshold_sqrt == pytest.approx(max(r.g - 1, n * n - sqrt(n)))
        assert r.threshold_f == pytest.approx(max(r.g - 1, n * n - r.f))


def test_report_precondition():
    with pytest.raises(PreconditionViolated):
        bound_report(1)


def test_which_min_ranges_first_thousand():
    for n in range(2, 1001):
        assert which_min(n) == _range_rule(n), n


def test_which_min_fast_agrees_with_exact():
    for n in list(range(2, 70)) + [287, 288, 289, 290]:
        assert which_min(n) == which_min_exact(n)


def test_six_is_a_tie_resolved_low():
    # g1(6) = g3(6) = 35
    assert g1(6) == g3(6)
    assert which_min(6) == 1


def test_exceeds_examples():
    assert exceeds(621, 25, "sqrt") and not exceeds(620, 25, "sqrt")
    assert exceeds(2491, 50, "f") and not exceeds(2490, 50, "f")
    # g(3) = 8
    assert exceeds(8, 3, "g-1") and not exceeds(7, 3, "g-1")
    with pytest.raises(ValueError):
        exceeds(1, 3, "h")


def test_remark_examples():
    assert remark_check(19)[0]
    assert remark_check(49) == (True, True)
    assert not remark_check(10)[0]
    assert remark_check(18) == (False, False)
    assert remark_check(48) == (True, False)


def test_remark_fast_agrees_with_exact():
    for n in range(2, 80):
        assert remark_check(n) == remark_check_exact(n)


def test_sqrt_helpers():
    assert sqrt_le(3, 9) and not sqrt_le(4, 15)
    assert sqrt_ge(3, 9) and not sqrt_ge(3, 10)
    assert sqrt_lt(3, 10) and not sqrt_lt(3, 9)


def test_surd_arithmetic():
    a = Surd.sqrt(8)  # 2 sqrt 2
    assert a == Surd.sqrt(2, 2)
    assert a * a == Surd.of(8)
    assert Surd.sqrt(2) + Surd.sqrt(3) > Surd.of(Fraction(314, 100))
    assert (Surd.sqrt(5) - Surd.sqrt(5)).sign() == 0


@given(st.integers(2, 3000), st.integers(-5, 40))
def test_exceeds_matches_decimal(n, off):
    b = n * n - off
    for bound, thr in (
        ("sqrt", Decimal(n * n) - Decimal(n).sqrt()),
        ("f", Decimal(n * n) - ((1 + 8 * Decimal(n)).sqrt() - 1) / 2),
    ):
        assert exceeds(b, n, bound) == (Decimal(b) > thr)
        assert exceeds(b, n, bound) == exceeds_surd(b, n, bound)


@given(st.integers(2, 400), st.integers(-3, 40))
def test_exceeds_g_matches_decimal(n, off):
    b = n * n - off
    assert exceeds(b, n, "g-1") == (Decimal(b) > min(_dec_g(n)) - 1)


@given(st.integers(2, 10**6))
def test_f_above_sqrt2n_minus_one(n):
    assert f_root(n) > Surd.sqrt(2 * n) - 1
    # integer check: floor(f) is the largest m with m(m+1) <= 2n
    m = (isqrt(8 * n + 1) - 1) // 2
    assert m * (m + 1) <= 2 * n < (m + 1) * (m + 2)


def test_degree_certificate_examples():
    A = affine_plane(3)
    E = extend_to_partial_projective(delete_blocks(A, [0]))
    c = degree_certificate(E.structure, 3)
    assert c.eq1_holds and c.eq2_holds
    c = degree_certificate(projective_plane(3), 3)
    assert c.b == 13 and c.eq1_holds and c.eq2_holds
    with pytest.raises(PreconditionViolated):
        degree_certificate(new_structure(8, [[0, 1, 2, 3], [4, 5, 6, 7]]), 3)


def test_degree_certificate_eq3_equality_on_fano_branch():
    from papc.completion import extend_with_class_points
    from papc.sampling import fano_pap

    E = extend_with_class_points(fano_pap())
    assert (E.n, E.k, E.e) == (3, 7, 2)
    c = degree_certificate(E.structure, 3, k=E.k, e=E.e)
    assert c.f0 == 2 and c.eq3_applicable
    assert (c.eq3_lhs, c.eq3_rhs) == (6, 6) and c.eq3_holds
