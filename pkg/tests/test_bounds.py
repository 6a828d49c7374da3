import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import (
    heptagonal_x_literal,
    lemma2_x_literal,
    phi_literal,
    psi_literal,
    random_angles_valid,
    random_weights,
)
from pentagonal import (
    COS_PI_5,
    InvalidArgumentError,
    cosine_sum,
    enumerate_arrangements,
    heptagonal_rhs,
    heptagonal_substitution,
    lemma2_rhs,
    lemma2_substitution,
    odd_n_rhs_experimental,
    pentagonal_bound_check,
    pentagonal_rhs_normal,
    pentagonal_rhs_strong,
    sigma0,
    toth_from_pentagonal,
    toth_rhs,
)
from pentagonal.bounds import (
    HEPTAGONAL_BETA,
    LEMMA2_BETA,
    BoundReport,
    applicable_checks,
    heptagonal_bound_check,
    lemma2_bound_check,
    odd_n_bound_check,
    toth_bound_check,
    validate_angles,
)

PI5 = [math.pi / 5] * 5
SKEW = [math.pi / 2] + [math.pi / 8] * 4
COS_PI_7 = math.cos(math.pi / 7)

# frozen from the literal-expansion oracle (tests/oracles.py)
NORMAL_12345 = 31.767400645789603  # cos(pi/5) * 4712 / 120
STRONG_12345 = 14.29263356729074   # cos(pi/5) * 2120 / 120


def test_cos_pi_5_closed_form():
    assert abs(math.cos(math.pi / 5) - COS_PI_5) <= 1e-14


def test_cosine_sum_examples():
    assert cosine_sum([1] * 5, PI5) == pytest.approx(4.045084971874737, abs=1e-14)
    assert cosine_sum([1, 2, 3, 4, 5], PI5) == pytest.approx(12.135254915624211, abs=1e-13)
    # cos(pi/2) term vanishes
    assert cosine_sum([7, 1, 1, 1, 1], SKEW) == pytest.approx(4 * math.cos(math.pi / 8), abs=1e-14)


def test_cosine_sum_length_mismatch():
    with pytest.raises(InvalidArgumentError):
        cosine_sum([1, 2, 3], PI5)


def test_toth_rhs_examples():
    assert toth_rhs([1] * 5) == pytest.approx(4.045084971874737, abs=1e-14)
    assert toth_rhs([1, 1, 1], 3) == pytest.approx(1.5, abs=1e-15)
    assert toth_rhs([1, 2, 3, 4, 5], 5) == pytest.approx(44.49593469062211, rel=1e-14)
    with pytest.raises(InvalidArgumentError):
        toth_rhs([1, 1], 2)


def test_pentagonal_rhs_examples():
    assert phi_literal([1, 4, 9, 16, 25]) == 4712
    assert phi_literal([1, 25, 4, 9, 16]) == 2120
    assert pentagonal_rhs_normal([1] * 5) == pytest.approx(5 * COS_PI_5, rel=1e-15)
    assert pentagonal_rhs_normal([1, 2, 3, 4, 5]) == pytest.approx(NORMAL_12345, rel=1e-14)
    assert pentagonal_rhs_strong([1, 2, 3, 4, 5]) == pytest.approx(STRONG_12345, rel=1e-14)
    assert pentagonal_rhs_strong([1] * 5) == pytest.approx(4.045084971874737, rel=1e-15)
    assert pentagonal_rhs_strong([1, 2, 3, 4, 5]) < pentagonal_rhs_normal([1, 2, 3, 4, 5])
    t = 3.7
    assert pentagonal_rhs_normal([t] * 5) == pytest.approx(5 * t * COS_PI_5, rel=1e-14)


def test_strong_rejects_unsorted():
    with pytest.raises(InvalidArgumentError):
        pentagonal_rhs_strong([2, 1, 3, 4, 5])


def test_lemma2_rhs_special_cases():
    a = (1, 2, 3, 4, 5)
    arrs = {arr.order: arr for arr in enumerate_arrangements(a)}
    assert lemma2_rhs(arrs[(1, 2, 3, 4, 5)]) == pytest.approx(NORMAL_12345, rel=1e-14)
    assert lemma2_rhs(sigma0(a)) == pytest.approx(STRONG_12345, rel=1e-14)
    values = {lemma2_rhs(arr) for arr in enumerate_arrangements((2, 2, 2, 2, 2))}
    assert len(values) == 1


def test_strong_is_min_over_arrangements(rng):
    for a in np.sort(random_weights(rng, 5, 300), axis=1):
        strong = pentagonal_rhs_strong(a)
        assert min(lemma2_rhs(arr) for arr in enumerate_arrangements(a)) == pytest.approx(strong, rel=1e-12)


def test_heptagonal_rhs_examples():
    assert heptagonal_rhs([1] * 7) == pytest.approx(7 * COS_PI_7, rel=1e-15)
    assert heptagonal_rhs([1] * 7) == pytest.approx(6.306782075316934, rel=1e-15)
    assert heptagonal_rhs([2.5] * 7) == pytest.approx(7 * 2.5 * COS_PI_7, rel=1e-14)
    assert psi_literal([1, 4, 1, 4, 1, 4, 1]) == 88
    assert heptagonal_rhs([1, 2, 1, 2, 1, 2, 1]) == pytest.approx(COS_PI_7 * 88 / 8, rel=1e-14)
    with pytest.raises(InvalidArgumentError):
        heptagonal_rhs([1] * 5)


def test_odd_n_experimental():
    assert odd_n_rhs_experimental([1] * 9, 9) == pytest.approx(9 * math.cos(math.pi / 9), rel=1e-14)
    assert odd_n_rhs_experimental([2.0] * 9) == pytest.approx(18 * math.cos(math.pi / 9), rel=1e-14)
    for bad_n, w in [(8, [1] * 8), (7, [1] * 7), (10, [1] * 10)]:
        with pytest.raises(InvalidArgumentError):
            odd_n_rhs_experimental(w, bad_n)
    rep = odd_n_bound_check([1] * 9, [math.pi / 9] * 9)
    assert rep.experimental and rep.theorem == "odd-n-experimental"


def test_odd_n_monte_carlo_evidence(rng):
    a = random_weights(rng, 9)
    alpha = np.random.default_rng(3).dirichlet(np.ones(9), 100_000) * math.pi
    lhs = (a * np.cos(alpha)).sum(axis=1)
    assert lhs.max() <= odd_n_rhs_experimental(a) + 1e-9


# --- validation -----------------------------------------------------------

@pytest.mark.parametrize("alpha", [
    [math.pi / 5] * 4 + [math.pi / 5 + 1e-9],
    [0.0, math.pi / 4, math.pi / 4, math.pi / 4, math.pi / 4],
    [-0.1, math.pi / 4, math.pi / 4, math.pi / 4, math.pi / 4 + 0.1],
    [float("nan")] * 5,
])
def test_invalid_angles(alpha):
    with pytest.raises(InvalidArgumentError):
        validate_angles(alpha, 5)


def test_angle_sum_tolerance_edge():
    validate_angles([math.pi / 5] * 4 + [math.pi / 5 + 5e-13], 5)


# --- bound checks ---------------------------------------------------------

def test_bound_check_equality_case():
    for form in ("normal", "strong"):
        rep = pentagonal_bound_check([1] * 5, PI5, form)
        assert abs(rep.gap) <= 1e-12
        assert rep.holds


def test_bound_check_12345_strong():
    rep = pentagonal_bound_check([1, 2, 3, 4, 5], PI5, "strong")
    assert rep.lhs == pytest.approx(12.13525, abs=1e-5)
    assert rep.rhs == pytest.approx(14.29263, abs=1e-5)
    assert rep.holds


def test_strong_joint_sort_preserves_lhs():
    a = [5, 1, 4, 2, 3]
    alpha = [0.2, 1.0, 0.5, 0.9, math.pi - 2.6]
    rep = pentagonal_bound_check(a, alpha, "strong")
    assert rep.weights == (1, 2, 3, 4, 5)
    assert rep.angles == (1.0, 0.9, math.pi - 2.6, 0.5, 0.2)
    assert rep.lhs == pytest.approx(cosine_sum(a, alpha), rel=1e-14)


def test_bound_check_bad_form():
    with pytest.raises(InvalidArgumentError):
        pentagonal_bound_check([1] * 5, PI5, "weak")


def test_report_invariant_holds_iff_gap():
    rep = BoundReport.build(lhs=1.0, rhs=1.0 - 5e-10, theorem="toth", tol=1e-9)
    assert rep.holds
    rep = BoundReport.build(lhs=1.0, rhs=1.0 - 2e-9, theorem="toth", tol=1e-9)
    assert not rep.holds


def test_applicable_checks():
    assert [r.theorem for r in applicable_checks([1] * 5, PI5)] == ["pentagonal-normal", "pentagonal-strong"]
    assert [r.theorem for r in applicable_checks([1] * 7, [math.pi / 7] * 7)] == ["heptagonal"]
    with pytest.raises(InvalidArgumentError):
        applicable_checks([1] * 9, [math.pi / 9] * 9)
    with pytest.raises(InvalidArgumentError):
        applicable_checks([1] * 6, [math.pi / 6] * 6)


def test_random_bound_checks_hold(rng):
    for _ in range(2000):
        a, alpha = random_weights(rng, 5), random_angles_valid(rng, 5)
        for form in ("normal", "strong"):
            assert pentagonal_bound_check(a, alpha, form).holds
        a7, alpha7 = random_weights(rng, 7), random_angles_valid(rng, 7)
        assert heptagonal_bound_check(a7, alpha7).holds
        assert toth_bound_check(a, alpha).holds


def test_lemma2_holds_for_every_arrangement(rng):
    for _ in range(200):
        a, alpha = random_weights(rng, 5), random_angles_valid(rng, 5)
        for arr in enumerate_arrangements(a):
            rep = lemma2_bound_check(arr, alpha)
            assert rep.lhs <= rep.rhs + 1e-9


def test_homogeneity_of_gap(rng):
    a, alpha = random_weights(rng, 5), random_angles_valid(rng, 5)
    t = 2.75
    for form in ("normal", "strong"):
        base = pentagonal_bound_check(a, alpha, form)
        scaled = pentagonal_bound_check(t * a, alpha, form)
        assert scaled.lhs == pytest.approx(t * base.lhs, rel=1e-12)
        assert scaled.rhs == pytest.approx(t * base.rhs, rel=1e-12)
        assert scaled.gap == pytest.approx(t * base.gap, rel=1e-12)


def test_equality_requires_equal_sine_products(rng):
    # the only zero-gap points found are stationary: a_i sin(alpha_i) all equal
    a = np.ones(5)
    rep = pentagonal_bound_check(a, PI5, "normal")
    assert abs(rep.gap) <= 1e-9
    prods = a * np.sin(PI5)
    np.testing.assert_allclose(prods, prods[0], rtol=1e-6)
    for _ in range(500):
        alpha = random_angles_valid(rng, 5)
        rep = pentagonal_bound_check(a, alpha, "normal")
        if abs(rep.gap) <= 1e-9:
            prods = a * np.sin(alpha)
            np.testing.assert_allclose(prods, prods[0], rtol=1e-6)


# --- substitutions ----------------------------------------------------------

def test_lemma2_substitution_12345():
    res = lemma2_substitution([1, 2, 3, 4, 5], PI5)
    expected = [math.sqrt(0.3), math.sqrt(20 / 6), math.sqrt(24 / 5), math.sqrt(10 / 12), math.sqrt(30)]
    np.testing.assert_allclose(res.x, expected, rtol=1e-14)
    assert res.beta_index == LEMMA2_BETA == (1, 4, 2, 5, 3)
    assert res.product_P == 120.0
    assert res.sum_sq * res.product_P == pytest.approx(phi_literal([1, 4, 9, 16, 25]), rel=1e-12)
    assert res.termwise_residual() <= 1e-12
    assert sorted(res.beta_index) == [1, 2, 3, 4, 5]


def test_lemma2_substitution_unit_weights():
    alpha = [0.3, 0.5, 0.7, 0.9, math.pi - 2.4]
    res = lemma2_substitution([1] * 5, alpha)
    np.testing.assert_allclose(res.x, 1.0)
    assert np.cos(res.beta).sum() == pytest.approx(np.cos(alpha).sum(), rel=1e-14)


def test_lemma2_substitution_rejects_bad_alpha():
    with pytest.raises(InvalidArgumentError):
        lemma2_substitution([1] * 5, [0.5] * 5)


@settings(max_examples=300)
@given(st.lists(st.floats(0.1, 10.0), min_size=5, max_size=5),
       st.lists(st.floats(0.05, 1.0), min_size=5, max_size=5))
def test_lemma2_substitution_identities(b, raw):
    alpha = np.asarray(raw) * (math.pi / sum(raw))
    res = lemma2_substitution(b, alpha)
    np.testing.assert_allclose(res.x, lemma2_x_literal(b), rtol=1e-12)
    assert res.sum_sq_residual() <= 1e-12
    assert res.termwise_residual() <= 1e-12
    assert res.product_residual() <= 1e-12
    assert res.substituted_terms.sum() == pytest.approx(cosine_sum(b, alpha), rel=1e-12, abs=1e-12)


def test_heptagonal_substitution_examples(rng):
    res = heptagonal_substitution([1] * 7, [math.pi / 7] * 7)
    np.testing.assert_allclose(res.x, 1.0)
    res = heptagonal_substitution([1, 2, 3, 4, 5, 6, 7], [math.pi / 7] * 7)
    assert res.x[0] == pytest.approx(math.sqrt(24 / 210), rel=1e-14)
    assert res.beta_index == HEPTAGONAL_BETA
    for _ in range(500):
        a, alpha = random_weights(rng, 7), random_angles_valid(rng, 7)
        res = heptagonal_substitution(a, alpha)
        np.testing.assert_allclose(res.x, heptagonal_x_literal(a), rtol=1e-12)
        assert res.sum_sq * res.product_P == pytest.approx(psi_literal(a**2), rel=1e-12)
        assert res.termwise_residual() <= 1e-12
        assert res.product_residual() <= 1e-12


def test_toth_from_pentagonal_unit():
    rt = toth_from_pentagonal([1] * 5, PI5)
    for v in (rt.lhs, rt.rhs_via_pentagonal, rt.rhs_direct):
        assert v == pytest.approx(5 * COS_PI_5, rel=1e-14)


def test_toth_from_pentagonal_skewed_angles():
    x = [1.3, 0.4, 2.2, 0.9, 1.7]
    rt = toth_from_pentagonal(x, SKEW)
    literal = sum(x[i] * x[(i + 1) % 5] * math.cos(SKEW[i]) for i in range(5))
    assert rt.lhs == pytest.approx(literal, rel=1e-14)
    assert rt.weighted_terms.sum() == pytest.approx(literal, rel=1e-13)
    assert rt.termwise_residual() <= 1e-12


def test_toth_from_pentagonal_random(rng):
    for _ in range(1000):
        x, alpha = random_weights(rng, 5), random_angles_valid(rng, 5)
        rt = toth_from_pentagonal(x, alpha)
        assert rt.rhs_residual() <= 1e-12
        assert rt.termwise_residual() <= 1e-12
        assert rt.sum_sq_residual() <= 1e-12
        assert rt.lhs <= rt.rhs_direct + 1e-9
