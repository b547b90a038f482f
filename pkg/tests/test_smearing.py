import dataclasses

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate

from conftest import random_smearing
from oracles import position_space_causal
from tilewigner import (
    BumpProfile,
    ConfigError,
    SmearingFunction,
    Tile,
    causal_smeared,
    make_local_mode,
    momentum_transform,
    rescale_mode,
    wightman_smeared,
)
from tilewigner.quadrature import MomentumGrid

BUMP = BumpProfile()


def _bump(s):
    return np.exp(-1.0 / (1.0 - s * s)) if abs(s) < 1 else 0.0


@pytest.mark.parametrize("kappa", [0.0, 0.7, 5.0, 23.0, 80.0])
def test_bump_transform_matches_adaptive_quadrature(kappa):
    ref = integrate.quad(lambda s: _bump(s) * np.cos(kappa * s), -1, 1, epsabs=1e-15, limit=400)[0]
    assert BUMP.ft(np.array([kappa]))[0] == pytest.approx(ref, abs=2e-15)


def test_bump_moments():
    mass = integrate.quad(_bump, -1, 1, epsabs=1e-15)[0]
    l2 = integrate.quad(lambda s: _bump(s) ** 2, -1, 1, epsabs=1e-15)[0]
    assert BUMP.mass == pytest.approx(mass, rel=1e-13)
    assert BUMP.l2sq == pytest.approx(l2, rel=1e-13)
    # frozen from the adaptive-quadrature values above
    assert BUMP.mass == pytest.approx(0.443993816168, abs=1e-12)
    assert BUMP.l2sq == pytest.approx(0.133086120845, abs=1e-12)


def test_gaussian_profile_leak_and_transform():
    g = BumpProfile("gaussian_truncated", 0.3)
    assert g.cut == pytest.approx(1.0)
    assert 0 < g.leak_bound < 1e-3
    for kappa in (0.0, 3.0, 17.0):
        ref = integrate.quad(lambda s: np.exp(-0.5 * (s / 0.3) ** 2) * np.cos(kappa * s), -1, 1, epsabs=1e-15)[0]
        assert g.ft(np.array([kappa]))[0] == pytest.approx(ref, abs=1e-14)


@pytest.mark.filterwarnings("ignore::scipy.integrate.IntegrationWarning")
def test_gaussian_smearing_against_spacetime_quadrature():
    g = BumpProfile("gaussian_truncated", 0.3)
    f = SmearingFunction(g, 0.05, 0.1, g, (0.2,), (0.5,))
    omega, k = 2.0, 1.0
    val = momentum_transform(f, omega, k)

    def part(fn):
        integrand = lambda x, t: fn(f(np.array([t]), np.array([[x]]))[0] * np.exp(1j * (omega * t - k * x)))
        return integrate.dblquad(integrand, 0.05, 0.15, -0.3, 0.7, epsabs=1e-15, epsrel=1e-13)[0]

    ref = part(np.real) + 1j * part(np.imag)
    assert abs(val - ref) <= 1e-8 * abs(ref)


def test_zero_frequency_value_is_spatial_mass():
    f = SmearingFunction(BUMP, 0.05, 0.0, BUMP, (0.3,), (0.5,), amplitude=1.7)
    expected = 1.7 * 0.5 * BUMP.mass / np.sqrt(0.5 * BUMP.l2sq)
    assert momentum_transform(f, 0.0, 0.0)[()] == pytest.approx(expected, rel=1e-14)


def test_reality_symmetry(rng):
    for _ in range(4):
        f = random_smearing(rng)
        om = rng.uniform(-30, 30, 20)
        k = rng.uniform(-30, 30, (20, 1))
        assert np.allclose(f.transform(-om, -k), np.conj(f.transform(om, k)), rtol=0, atol=1e-14)


@given(seed=st.integers(0, 2**32 - 1))
def test_support_containment(seed):
    rng = np.random.default_rng(seed)
    f = random_smearing(rng)
    (c,), (w,) = f.center, f.half_widths
    t = rng.uniform(-1, 1, 1000)
    x = rng.uniform(-4, 4, (1000, 1))
    outside = (np.abs(t - f.t_center) >= f.epsilon) | (np.abs(x[:, 0] - c) >= w)
    assert np.all(f(t, x)[outside] == 0.0)


def test_local_mode_normalization_and_support(spec, grid):
    tile = Tile(0, (0.0,), (0.5,), 0.05)
    pair = make_local_mode(tile, BUMP, spec, grid)
    assert causal_smeared(pair.f1, pair.f2, grid, spec) == pytest.approx(1.0, abs=1e-10)
    assert pair.f1.center == pair.f2.center and pair.f1.half_widths == pair.f2.half_widths
    assert pair.f1.epsilon == pair.f2.epsilon
    again = make_local_mode(tile, BUMP, spec, grid)
    assert again == pair


def test_raw_constant_matches_position_space(spec, grid):
    tile = Tile(0, (0.0,), (0.5,), 0.05)
    pair = make_local_mode(tile, BUMP, spec, grid)
    raw = dataclasses.replace(pair.f2, amplitude=1.0)
    c = 1.0 / pair.normalization
    assert c < 0
    assert position_space_causal(pair.f1, raw, spec.m, 64, 64, 64) == pytest.approx(c, abs=1e-6)


def test_unresolved_grid_rejected(spec):
    with pytest.raises(ConfigError):
        make_local_mode(Tile(0, (0.0,), (0.5,), 0.05), BUMP, spec, MomentumGrid.cartesian(1, 10.0, 8, 16))


def test_rescale(spec, grid, single):
    pair = single.pairs[0]
    assert rescale_mode(pair, 1.0) is pair
    twice = rescale_mode(pair, 2.0)
    e0 = causal_smeared(pair.f1, pair.f2, grid, spec)
    e2 = causal_smeared(twice.f1, twice.f2, grid, spec)
    assert abs(e2 - e0) <= 1e-12
    with pytest.raises(ConfigError):
        rescale_mode(pair, 0.0)


def test_bilinearity(spec, grid, rng):
    for _ in range(5):
        f, g = random_smearing(rng), random_smearing(rng)
        lhs = wightman_smeared(f + g, f + g, grid, spec)
        rhs = wightman_smeared(f, f, grid, spec) + wightman_smeared(g, g, grid, spec) + 2 * wightman_smeared(f, g, grid, spec).real
        assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(lhs))


def test_serialization_round_trip(single):
    pair = single.pairs[0]
    from tilewigner import LocalModePair

    assert LocalModePair.from_dict(pair.to_dict()) == pair
    g = BumpProfile("gaussian_truncated", 0.25, 3.0)
    assert BumpProfile.from_dict(g.to_dict()) == g


@pytest.mark.parametrize("kwargs", [{"family": "box"}, {"family": "gaussian_truncated", "sigma": 0.5, "r_cut": 3.0}])
def test_profile_validation(kwargs):
    with pytest.raises(ConfigError):
        BumpProfile(**kwargs)
