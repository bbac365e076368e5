import math

import numpy as np
import pytest

from filippov.errors import (
    EigenvalueOrderViolationError,
    NearDegenerateError,
    NoZeroEigenvalueError,
)
from filippov.spectrum import (
    NormalFormParams,
    RealPlusPair,
    ThreeReal,
    char_poly_coeffs,
    companion_from_eigs,
    companion_matrix,
    companion_orbit,
    crossing_function,
    crossing_indicator,
    decay_coefficients,
    decay_eigvectors,
    eig3,
    eig_gap_product,
    nonzero_pair,
    normal_form_from_spectrum,
    pair_sum_product,
)


def char_poly(M, lam):
    tr, m, det = char_poly_coeffs(M)
    return lam ** 3 - tr * lam ** 2 + m * lam - det


def residual_bound(M):
    return 1e-8 * (1.0 + np.linalg.norm(M) ** 3)


# --------------------------------------------------------------------------
# eig3
# --------------------------------------------------------------------------

def test_eig3_diag():
    got = eig3(np.diag([-1.0, -2.0, -3.0]))
    assert isinstance(got, ThreeReal)
    assert np.max(np.abs(np.array(got.lams) - [-3, -2, -1])) <= 1e-12


def test_eig3_companion_with_pair():
    # characteristic polynomial (l + 1)(l^2 - 0.2 l + 5)
    M = companion_matrix(0.2 - 1.0, 5.0 - 0.2, -5.0)
    got = eig3(M)
    assert isinstance(got, RealPlusPair)
    # oracle: quadratic formula on l^2 - 0.2 l + 5
    assert abs(got.real_eig + 1.0) <= 1e-10
    assert abs(got.alpha - 0.1) <= 1e-10
    assert abs(got.beta - math.sqrt(5.0 - 0.01)) <= 1e-10
    # back-substitution into the characteristic polynomial
    assert abs(char_poly(M, got.real_eig)) <= residual_bound(M)
    pair_val = char_poly(M, complex(got.alpha, got.beta))
    assert abs(pair_val) <= residual_bound(M)


def test_eig3_rotation_like():
    got = eig3(np.array([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, -1.0]]))
    assert isinstance(got, RealPlusPair)
    assert abs(got.real_eig + 1.0) <= 1e-12
    assert abs(got.alpha) <= 1e-12
    assert abs(got.beta - 1.0) <= 1e-12


def test_eig3_near_degenerate():
    with pytest.raises(NearDegenerateError):
        eig3(np.diag([1.0, 1.0, 2.0]))
    with pytest.raises(NearDegenerateError):
        eig3(np.eye(3))


def test_eig3_scale_invariant_classification():
    M = companion_matrix(-0.8, 4.8, -5.0)
    for s in (1e-4, 1e-2, 1.0, 1e2, 1e4):
        got = eig3(s * M)
        assert isinstance(got, RealPlusPair)
        assert abs(got.real_eig + s) <= 1e-8 * s


def test_eig3_random_residuals():
    rng = np.random.default_rng(42)
    n_real = n_pair = 0
    for _ in range(200):
        M = rng.uniform(-3, 3, size=(3, 3))
        try:
            got = eig3(M)
        except NearDegenerateError:
            continue
        bound = residual_bound(M)
        if isinstance(got, ThreeReal):
            n_real += 1
            assert got.lams[0] <= got.lams[1] <= got.lams[2]
            for lam in got.lams:
                assert abs(char_poly(M, lam)) <= bound
        else:
            n_pair += 1
            assert got.beta > 0
            assert abs(char_poly(M, got.real_eig)) <= bound
            assert abs(char_poly(M, complex(got.alpha, got.beta))) <= bound
    assert n_real > 20 and n_pair > 20


# --------------------------------------------------------------------------
# deflated pair
# --------------------------------------------------------------------------

def test_nonzero_pair_diag():
    lam1, lam2 = nonzero_pair(np.diag([0.0, -1.0, -2.0]))
    assert {lam1, lam2} == {complex(-1), complex(-2)}


def test_nonzero_pair_planar_block():
    c, d = 0.2, 1.0
    M = np.array([[0.0, 0.0, 0.0], [0.0, c, 1.0], [0.0, -d, 0.0]])
    lam1, lam2 = nonzero_pair(M)
    # roots of l^2 - c l + d
    assert abs(lam1 - complex(0.1, math.sqrt(0.99))) <= 1e-12
    assert abs(lam2 - complex(0.1, -math.sqrt(0.99))) <= 1e-12
    s, pr = pair_sum_product(M)
    assert abs(s - c) <= 1e-12 and abs(pr - d) <= 1e-12


def test_nonzero_pair_repeated_flagged_on_request():
    M = np.diag([0.0, -1.0, -1.0])
    assert nonzero_pair(M) == (complex(-1), complex(-1))
    with pytest.raises(NearDegenerateError):
        nonzero_pair(M, require_distinct=True)


def test_nonzero_pair_requires_zero_eigenvalue():
    with pytest.raises(NoZeroEigenvalueError):
        nonzero_pair(np.diag([1.0, 2.0, 3.0]))


# --------------------------------------------------------------------------
# scaled characteristic coefficients
# --------------------------------------------------------------------------

def test_normal_form_coefficients_direct():
    nf = normal_form_from_spectrum(0.0, 1.0, 1.0, -1.0, 0.5)
    assert nf.tau_l == -1.0
    assert nf.sigma_l == 1.0
    assert nf.delta_l == -1.0
    assert nf.tau_s == -1.0
    assert nf.delta_s == 0.5


def test_normal_form_consistent_with_hybrid_params():
    # tau_l = a - 1, sigma_l = b - a, delta_l = -b for the matching
    # hybrid parameters a = 2*alpha/gamma, b = (alpha^2 + beta^2)/gamma^2
    rng = np.random.default_rng(9)
    for _ in range(20):
        alpha = rng.uniform(-1, 1)
        beta = rng.uniform(0.2, 3)
        gamma = rng.uniform(0.2, 3)
        a = 2 * alpha / gamma
        b = (alpha ** 2 + beta ** 2) / gamma ** 2
        nf = normal_form_from_spectrum(alpha, beta, gamma, -0.3, 0.7)
        assert abs(nf.tau_l - (a - 1)) <= 1e-12 * max(1, abs(a))
        assert abs(nf.sigma_l - (b - a)) <= 1e-12 * max(1, abs(b) + abs(a))
        assert abs(nf.delta_l + b) <= 1e-12 * max(1, abs(b))


def test_normal_form_companion_spectrum():
    alpha, beta, gamma = 0.3, 1.7, 2.0
    nf = normal_form_from_spectrum(alpha, beta, gamma, -1.0, 1.0)
    M = companion_matrix(nf.tau_l, nf.sigma_l, nf.delta_l)
    got = eig3(M)
    assert isinstance(got, RealPlusPair)
    assert abs(got.real_eig + 1.0) <= 1e-9
    assert abs(got.alpha - alpha / gamma) <= 1e-9
    assert abs(got.beta - beta / gamma) <= 1e-9


def test_normal_form_rejects_bad_spectrum():
    with pytest.raises(ValueError):
        normal_form_from_spectrum(0.1, 0.0, 1.0, -1.0, 1.0)
    with pytest.raises(ValueError):
        normal_form_from_spectrum(0.1, 1.0, -1.0, -1.0, 1.0)


def test_slide_block_convention():
    # the planar block [[tau_s, 1], [-delta_s, 0]] has eigenvalues with
    # sum tau_s and product delta_s (plus sign on the constant term)
    nf = NormalFormParams(0.0, 0.0, 0.0, tau_s=-0.7, delta_s=0.3)
    block = np.array([[nf.tau_s, 1.0], [-nf.delta_s, 0.0]])
    eigs = np.linalg.eigvals(block)
    assert abs(eigs.sum() - nf.tau_s) <= 1e-12
    assert abs(eigs.prod() - nf.delta_s) <= 1e-12


# --------------------------------------------------------------------------
# decay orbit (three distinct negative eigenvalues)
# --------------------------------------------------------------------------

def test_decay_orbit_initial_condition():
    for lams in [(-3.0, -2.0, -1.0), (-50.0, -1.0, -0.03)]:
        start = companion_orbit(lams, 0.0)
        assert np.max(np.abs(start - [0.0, 0.0, -1.0])) <= 1e-12


def test_decay_eigvectors_residual():
    lams = (-3.0, -2.0, -1.0)
    C = companion_from_eigs(lams)
    for lam, v in zip(lams, decay_eigvectors(lams)):
        assert np.linalg.norm(C @ v - lam * v) <= 1e-10


def test_decay_coefficients_sum_to_zero():
    k = decay_coefficients((-3.0, -2.0, -1.0))
    assert abs(sum(k)) <= 1e-15


def test_gap_product_positive():
    assert eig_gap_product((-3.0, -2.0, -1.0)) == 2.0


def test_crossing_function_hand_value():
    # (-1) e^{-3t} + 2 e^{-2t} + (-1) e^{-t} at t = 1
    lams = (-3.0, -2.0, -1.0)
    want = -math.exp(-3) + 2 * math.exp(-2) - math.exp(-1)
    assert abs(crossing_function(lams, 1.0) - want) <= 1e-12
    assert crossing_function(lams, 0.0) == 0.0


def test_first_component_negative_for_positive_times():
    t_grid = np.logspace(-4, 2, 101)[1:]
    rng = np.random.default_rng(17)
    for _ in range(50):
        mags = 10.0 ** rng.uniform(-2, 2, size=3)
        lams = tuple(sorted(-mags))
        if not (lams[0] < lams[1] < lams[2] < 0):
            continue
        assert np.all(crossing_indicator(lams, t_grid) < 0.0)
        assert eig_gap_product(lams) > 0.0
        # where representable, the first component itself is negative
        first = companion_orbit(lams, t_grid)[0]
        assert np.all(first <= 0.0)


def test_orbit_satisfies_companion_ode():
    lams = (-2.5, -0.9, -0.2)
    C = companion_from_eigs(lams)
    eps = 1e-6
    for t in np.linspace(0.1, 8.0, 15):
        deriv = (companion_orbit(lams, t + eps)
                 - companion_orbit(lams, t - eps)) / (2 * eps)
        want = C @ companion_orbit(lams, t)
        assert np.max(np.abs(deriv - want)) <= 1e-6 * max(1.0, np.max(np.abs(want)))


def test_decay_orbit_validates_input():
    with pytest.raises(EigenvalueOrderViolationError):
        companion_orbit((-1.0, -2.0, -3.0), 1.0)  # wrong order
    with pytest.raises(EigenvalueOrderViolationError):
        companion_orbit((-2.0, -1.0, 0.5), 1.0)  # not all negative
    with pytest.raises(ValueError):
        companion_orbit((-3.0, -2.0, -1.0), -1.0)  # negative time
