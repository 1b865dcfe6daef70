import numpy as np
import pytest

from threelevel.errors import DegeneracyError
from threelevel.lambda_atom import (LambdaAtomParams, PureInitialStateLambda, alpha1, alpha2, alpha3,
                                    build_lambda_solution, density_matrix_lambda, phase_factors,
                                    theta_coherence, xi)
from threelevel.oracle import integrate_lambda_c3
from threelevel.spectrum import LorentzianSpectrum

from _shared import LAMBDA_CASES, random_lambda

GRID = np.linspace(0, 20, 201)


@pytest.mark.parametrize("params, spec", [
    (LambdaAtomParams(90, 92, 0, 0), LorentzianSpectrum(91, 1.0)),
    LAMBDA_CASES["red"],
])
def test_trivial_cases_freeze_c3(params, spec):
    sol = build_lambda_solution(params, spec)
    np.testing.assert_allclose(xi(sol, GRID), 1.0)
    assert np.all(alpha1(sol, GRID) == 0) and np.all(theta_coherence(sol, GRID) == 0)


@pytest.mark.parametrize("key", ["blue", "black"])
def test_xi_matches_oracle(key):
    params, spec = LAMBDA_CASES[key]
    sol = build_lambda_solution(params, spec)
    assert abs(xi(sol, 0.0) - 1) < 1e-12
    assert np.max(np.abs(xi(sol, GRID) - integrate_lambda_c3(params, spec, 1.0, GRID))) < 1e-6


def test_coefficients_vanish_at_t0():
    sol = build_lambda_solution(*LAMBDA_CASES["black"])
    for fn in (alpha1, alpha2, theta_coherence):
        assert abs(fn(sol, 0.0)) < 1e-12


def test_blue_setting_conservation_at_20():
    sol = build_lambda_solution(*LAMBDA_CASES["blue"])
    assert abs(alpha1(sol, 20.0) + alpha2(sol, 20.0) - (1 - abs(xi(sol, 20.0)) ** 2)) < 1e-8


def test_symmetric_channels_share_populations():
    sol = build_lambda_solution(*LAMBDA_CASES["blue"])
    np.testing.assert_allclose(alpha1(sol, GRID), alpha2(sol, GRID), atol=1e-12)


def test_one_dark_channel_has_no_ground_coherence():
    sol = build_lambda_solution(LambdaAtomParams(90, 92, 0.0, 1.5), LorentzianSpectrum(91, 1.0))
    assert np.max(np.abs(theta_coherence(sol, GRID))) < 1e-14


def test_trace_identity_and_ground_block_positivity():
    rng = np.random.default_rng(11)
    for _ in range(20):
        sol = build_lambda_solution(*random_lambda(rng))
        a1, a2, a3 = alpha1(sol, GRID), alpha2(sol, GRID), alpha3(sol, GRID)
        assert np.max(np.abs(a1 + a2 + a3 - 1)) < 1e-8
        assert np.min(a1 * a2 - np.abs(theta_coherence(sol, GRID)) ** 2) >= -1e-8


def test_phase_factors_are_conjugate_xi():
    sol = build_lambda_solution(*LAMBDA_CASES["black"])
    t1, t2 = phase_factors(sol, GRID)
    np.testing.assert_allclose(t1, np.exp(90j * GRID) * xi(sol, GRID).conj(), atol=1e-12)
    np.testing.assert_allclose(t2, np.exp(92j * GRID) * xi(sol, GRID).conj(), atol=1e-12)


def test_lower_state_is_inert():
    sol = build_lambda_solution(*LAMBDA_CASES["black"])
    rho = density_matrix_lambda(sol, PureInitialStateLambda(1, 0, 0), GRID)
    target = np.zeros((3, 3))
    target[0, 0] = 1
    assert np.max(np.abs(rho - target)) < 1e-15


def test_lower_superposition_rotates():
    sol = build_lambda_solution(*LAMBDA_CASES["black"])
    s = 1 / np.sqrt(2)
    rho = density_matrix_lambda(sol, PureInitialStateLambda(s, s, 0), GRID)
    np.testing.assert_allclose(rho[:, 0, 1], 0.5 * np.exp(1j * (90 - 92) * GRID), atol=1e-14)
    np.testing.assert_allclose(rho[:, 0, 0], 0.5, atol=1e-14)


def test_excited_start_structure():
    sol = build_lambda_solution(*LAMBDA_CASES["black"])
    rho = density_matrix_lambda(sol, PureInitialStateLambda(0, 0, 1), GRID)
    np.testing.assert_allclose(rho[:, 2, 2], np.abs(xi(sol, GRID)) ** 2)
    np.testing.assert_allclose(rho[:, 0, 1], theta_coherence(sol, GRID))


def test_coherence_modulus_follows_xi():
    sol = build_lambda_solution(*LAMBDA_CASES["black"])
    init = PureInitialStateLambda(0.6, 0, 0.8)
    rho = density_matrix_lambda(sol, init, GRID)
    np.testing.assert_allclose(np.abs(rho[:, 0, 2]), 0.48 * np.abs(xi(sol, GRID)), atol=1e-14)


def test_degenerate_spectrum_rejected():
    # resonant levels: R(p) = (p + lam)(p^2 + lam p + (g1 + g2) lam / 2),
    # a double root at -lam/2 when g1 = g2 = lam/4
    lam = 1.0
    g = lam / 4
    with pytest.raises(DegeneracyError):
        build_lambda_solution(LambdaAtomParams(90, 90, g, g), LorentzianSpectrum(90, lam))
