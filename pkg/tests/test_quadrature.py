import numpy as np
import pytest

from tilewigner import ConfigError, MomentumGrid, reference_grid
from tilewigner.quadrature import composite_gauss_legendre


def test_composite_rule_integrates_polynomials_and_gaussians():
    x, w = composite_gauss_legendre(-3.0, 5.0, 7, 12)
    assert np.all(w > 0)
    assert np.sum(w) == pytest.approx(8.0, abs=1e-13)
    assert np.sum(w * x**5) == pytest.approx((5.0**6 - 3.0**6) / 6.0, rel=1e-13)
    x, w = composite_gauss_legendre(-12.0, 12.0, 16, 16)
    assert np.sum(w * np.exp(-(x**2))) == pytest.approx(np.sqrt(np.pi), abs=1e-14)


def test_reference_grid_shape():
    g = reference_grid(1)
    assert g.size == 4096 and g.k_max == 80.0
    assert np.all(np.abs(g.points) <= g.k_max)
    assert g.edge.sum() == 2 * 64


def test_refined_doubles_cutoff_and_nodes():
    g = MomentumGrid.cartesian(1, 40.0, 32, 64)
    r = g.refined()
    assert r.k_max == 80.0 and r.size == 2 * g.size
    assert g.denser().size == 2 * g.size and g.denser().k_max == g.k_max


def test_fingerprint_tracks_parameters():
    a = MomentumGrid.cartesian(1, 40.0, 32, 64)
    assert a.fingerprint == MomentumGrid.cartesian(1, 40.0, 32, 64).fingerprint
    assert a == MomentumGrid.cartesian(1, 40.0, 32, 64)
    assert a.fingerprint != MomentumGrid.cartesian(1, 40.0, 32, 32).fingerprint


def test_three_dimensional_rules_agree_on_a_gaussian():
    cart = MomentumGrid.cartesian(3, 8.0, 4, 16)
    sph = MomentumGrid.spherical(8.0, 4, 16, 16, 32)
    exact = np.pi**1.5
    for g in (cart, sph):
        assert np.all(g.weights > 0)
        assert np.sum(g.weights * np.exp(-np.sum(g.points**2, axis=1))) == pytest.approx(exact, rel=1e-12)


def test_bad_parameters():
    with pytest.raises(ConfigError):
        MomentumGrid.cartesian(2, 10.0, 4, 4)
    with pytest.raises(ConfigError):
        MomentumGrid.cartesian(1, -1.0, 4, 4)
