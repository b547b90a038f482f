import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tilewigner import (
    FieldState,
    LocalModeSet,
    NotGaussianError,
    OneParticleProfile,
    ccr_check,
    covariance,
    symplectic_eigenvalues,
    symplectic_form,
    wightman_quadratic_form,
    wightman_smeared,
)

# Frozen from an independent 128x64 Gauss-Legendre evaluation at k_max = 160.
REF_SIGMA_XX = 0.238017592844059
REF_NU_SINGLE = 0.59599


def test_symplectic_form_blocks():
    om = symplectic_form(2)
    expected = np.array([[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]], dtype=float)
    assert np.array_equal(om, expected)
    assert np.array_equal(om @ om, -np.eye(4))
    assert np.array_equal(om.T, -om)


def test_ccr_at_reference_grid(modes, grid):
    rep = ccr_check(modes, grid)
    assert rep.max_abs_residual <= 1e-6
    assert rep.within_mode_residual <= 1e-6
    assert rep.cross_mode_max <= 1e-6
    assert np.allclose(rep.measured, -rep.measured.T, atol=0.0)


def test_vacuum_sigma_matches_refined_value(vacuum_cov):
    assert vacuum_cov.sigma[2, 2] == pytest.approx(REF_SIGMA_XX, abs=1e-9)


def test_covariance_symmetric_and_positive(vacuum_cov, thermal_cov):
    for cov in (vacuum_cov, thermal_cov):
        assert np.array_equal(cov.sigma, cov.sigma.T)
        assert np.linalg.eigvalsh(cov.sigma).min() > 0


def test_thermal_exceeds_vacuum(vacuum_cov, thermal_cov):
    assert np.linalg.eigvalsh(thermal_cov.sigma - vacuum_cov.sigma).min() > 0


def test_uncertainty_all_states(modes, grid, vacuum_cov, thermal_cov):
    coh = covariance(modes, FieldState.coherent([0.3, 0.2j, -0.1, 1.0]), grid)
    for cov in (vacuum_cov, thermal_cov, coh):
        assert symplectic_eigenvalues(cov.sigma).min() >= 0.5 - 1e-9


def test_single_mode_vacuum_is_mixed(single, grid):
    nu = covariance(single, FieldState.vacuum(), grid).symplectic_eigenvalues()
    assert nu.shape == (1,)
    assert nu[0] >= 0.5 + 1e-6
    assert nu[0] == pytest.approx(REF_NU_SINGLE, abs=1e-5)


def test_symplectic_eigenvalues_known_matrix():
    # diag(a, b) for one mode has nu = sqrt(ab)
    assert symplectic_eigenvalues(np.diag([2.0, 0.125]))[0] == pytest.approx(0.5, abs=1e-14)
    sig = np.diag([1.0, 1.0, 3.0, 3.0])
    assert np.allclose(symplectic_eigenvalues(sig), [1.0, 3.0], atol=1e-14)


@given(st.integers(0, 2**32 - 1))
def test_uncertainty_random_symplectic_images(seed):
    # S Sigma S^T keeps the symplectic spectrum; random thermal diagonals stay above 1/2
    rng = np.random.default_rng(seed)
    nus = 0.5 + rng.uniform(0.0, 2.0, size=2)
    sig = np.diag(np.repeat(nus, 2))
    a = rng.normal(size=(4, 4))
    h = a + a.T
    om = symplectic_form(2)
    from scipy.linalg import expm

    s = expm(0.3 * om @ h)
    out = symplectic_eigenvalues(s @ sig @ s.T)
    assert np.allclose(out, np.sort(nus), rtol=1e-8)


def test_quadratic_form_two_routes(modes, grid, vacuum_cov, rng):
    for _ in range(20):
        eta = rng.normal(size=2 * modes.N)
        h = modes.contraction(eta)
        direct = wightman_smeared(h, h, grid, modes.spec).real
        via_m = wightman_quadratic_form(modes, None, eta, grid, cov=vacuum_cov)
        assert direct == pytest.approx(via_m, abs=1e-9 * max(1.0, abs(via_m)))


def test_one_particle_has_no_covariance(single, grid):
    st1 = FieldState.one_particle(OneParticleProfile(2.0, x_c=(-0.65,)))
    with pytest.raises(NotGaussianError):
        covariance(single, st1, grid)


def test_coherent_mean_and_shared_covariance(modes, grid, vacuum_cov):
    amps = [0.8, -0.5j, 0.0, 0.25 + 0.25j]
    coh = covariance(modes, FieldState.coherent(amps), grid)
    assert np.array_equal(coh.sigma, vacuum_cov.sigma)
    expected = np.sqrt(2.0) * np.array([0.8, 0.0, 0.0, -0.5, 0.0, 0.0, 0.25, 0.25])
    assert np.allclose(coh.mean, expected, atol=1e-15)


def test_mode_set_round_trip(modes):
    back = LocalModeSet.from_dict(modes.to_dict())
    assert back.N == modes.N
    assert back.to_dict() == modes.to_dict()


def test_rescaled_modes_keep_ccr(modes, grid):
    assert ccr_check(modes.rescaled(2.0), grid).max_abs_residual <= 1e-6
