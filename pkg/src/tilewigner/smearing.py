"""Compactly localized smearing functions and normalized local-mode pairs.

A smearing function is a separable product ``chi(t - t0) * prod_i F_i(x_i - c_i)``
of one-dimensional bump profiles, optionally acted on by ``-d/dt``. Its
momentum transform

    f^(omega, k) = \\int dV f(t, x) exp(i (omega t - k.x))

factorizes into one-dimensional transforms that are evaluated without any
spacetime quadrature.

Profile normalization: the temporal factor has unit time integral and each
spatial factor unit L2 norm, so the raw commutator of a pair approaches
``-1`` as the slab thickness goes to zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np
from scipy.special import erf, erfc, wofz

from .errors import ConfigError, DegenerateModeError

__all__ = [
    "BumpProfile",
    "LocalModePair",
    "SmearingCombination",
    "SmearingFunction",
    "make_local_mode",
    "momentum_transform",
    "rescale_mode",
]

FAMILIES = ("smooth_bump", "gaussian_truncated")

# Double-exponential (s = tanh u) trapezoid for the bump exp(-1/(1-s^2)).
# In u the integrand is exp(-cosh(u)^2) sech(u)^2, analytic and doubly
# exponentially decaying, so the trapezoid rule converges geometrically.
_DE_STEP = 0.02
_DE_HALF_RANGE = 3.6


@lru_cache(maxsize=None)
def _de_rule(level=0):
    """Nodes ``s``, weights and ``u`` of the rule with step ``_DE_STEP / 2**level``."""
    h = _DE_STEP / 2**level
    u = np.arange(-_DE_HALF_RANGE, _DE_HALF_RANGE + 0.5 * h, h)
    s = np.tanh(u)
    w = h * np.exp(-np.cosh(u) ** 2) / np.cosh(u) ** 2
    return s, w, u


def _bump(s):
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    inside = np.abs(s) < 1.0
    out[inside] = np.exp(-1.0 / (1.0 - s[inside] ** 2))
    return out


def _bump_derivative(s):
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    inside = np.abs(s) < 1.0
    si = s[inside]
    out[inside] = np.exp(-1.0 / (1.0 - si**2)) * (-2.0 * si / (1.0 - si**2) ** 2)
    return out


def _bump_ft(kappa):
    """``\\int_{-1}^{1} exp(-1/(1-s^2)) cos(kappa s) ds`` for an array of ``kappa``.

    The trapezoid step is halved for every doubling of ``kappa`` beyond 100
    so that ``cos(kappa tanh u)`` stays resolved.
    """
    kappa = np.abs(np.asarray(kappa, dtype=float))
    flat = kappa.ravel()
    uniq, inverse = np.unique(flat, return_inverse=True)
    levels = np.where(uniq > 100.0, np.ceil(np.log2(np.maximum(uniq, 100.0) / 100.0)), 0).astype(int)
    out = np.empty(uniq.shape)
    chunk = 8192
    for level in np.unique(levels):
        idx = np.nonzero(levels == level)[0]
        s, w, _ = _de_rule(int(level))
        for start in range(0, idx.size, chunk):
            sel = idx[start:start + chunk]
            out[sel] = np.cos(uniq[sel][:, None] * s[None, :]) @ w
    return out[inverse].reshape(kappa.shape)


@lru_cache(maxsize=None)
def _bump_moments():
    _, w, u = _de_rule()
    # the profile itself is folded into w; the squared profile needs one more factor
    mass = float(w.sum())
    l2sq = float((w * np.exp(-np.cosh(u) ** 2)).sum())
    return mass, l2sq


@dataclass(frozen=True)
class BumpProfile:
    """One-dimensional compactly localized profile on the unit interval.

    ``sigma`` is the Gaussian standard deviation in units of the half-width
    and ``r_cut`` the truncation radius in units of ``sigma`` (default: the
    truncation sits exactly at the half-width). Both are ignored by the
    ``smooth_bump`` family.
    """

    family: str = "smooth_bump"
    sigma: float = 0.3
    r_cut: float | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ConfigError(f"unknown profile family {self.family!r}; expected one of {FAMILIES}")
        if self.family == "gaussian_truncated":
            if not self.sigma > 0:
                raise ConfigError("gaussian sigma must be positive")
            if self.r_cut is None:
                object.__setattr__(self, "r_cut", 1.0 / self.sigma)
            if not self.r_cut > 0 or self.r_cut * self.sigma > 1.0 + 1e-12:
                raise ConfigError("gaussian truncation must lie inside the tile (r_cut * sigma <= 1)")

    @property
    def cut(self):
        """Support half-extent in units of the half-width."""
        return 1.0 if self.family == "smooth_bump" else self.r_cut * self.sigma

    @property
    def leak_bound(self):
        """Upper bound on the profile mass lost to truncation."""
        return 0.0 if self.family == "smooth_bump" else float(erfc(self.r_cut / math.sqrt(2.0)))

    def shape(self, s):
        if self.family == "smooth_bump":
            return _bump(s)
        s = np.asarray(s, dtype=float)
        return np.where(np.abs(s) <= self.cut, np.exp(-0.5 * (s / self.sigma) ** 2), 0.0)

    def shape_derivative(self, s):
        """Pointwise derivative (the truncation jumps of the Gaussian are omitted)."""
        if self.family == "smooth_bump":
            return _bump_derivative(s)
        s = np.asarray(s, dtype=float)
        return np.where(np.abs(s) <= self.cut, -s / self.sigma**2 * np.exp(-0.5 * (s / self.sigma) ** 2), 0.0)

    def ft(self, kappa):
        """``\\int shape(s) exp(-i kappa s) ds`` (real and even in ``kappa``)."""
        if self.family == "smooth_bump":
            return _bump_ft(kappa)
        kappa = np.asarray(kappa, dtype=float)
        sig, a = self.sigma, self.cut
        z = (1j * a - kappa * sig**2) / (sig * math.sqrt(2.0))
        edge = np.exp(-0.5 * (a / sig) ** 2) * np.real(np.exp(-1j * a * kappa) * wofz(z))
        return sig * math.sqrt(2.0 * math.pi) * (np.exp(-0.5 * (kappa * sig) ** 2) - edge)

    @property
    def mass(self):
        if self.family == "smooth_bump":
            return _bump_moments()[0]
        return self.sigma * math.sqrt(2.0 * math.pi) * float(erf(self.r_cut / math.sqrt(2.0)))

    @property
    def l2sq(self):
        if self.family == "smooth_bump":
            return _bump_moments()[1]
        return self.sigma * math.sqrt(math.pi) * float(erf(self.r_cut))

    def to_dict(self):
        if self.family == "smooth_bump":
            return {"family": self.family}
        return {"family": self.family, "sigma": self.sigma, "r_cut": self.r_cut}

    @classmethod
    def from_dict(cls, d):
        if isinstance(d, str):
            return cls(d)
        return cls(d.get("family", "smooth_bump"), float(d.get("sigma", 0.3)), d.get("r_cut"))


class _Smearing:
    """Arithmetic shared by single smearing functions and their combinations."""

    def __add__(self, other):
        return SmearingCombination(_terms(self) + _terms(other))

    def __sub__(self, other):
        return self + (-1.0) * other

    def __rmul__(self, coef):
        return SmearingCombination(tuple((coef * c, f) for c, f in _terms(self)))

    def __neg__(self):
        return (-1.0) * self


def _terms(f):
    if isinstance(f, SmearingCombination):
        return f.terms
    return ((1.0, f),)


@dataclass(frozen=True)
class SmearingFunction(_Smearing):
    temporal: BumpProfile
    epsilon: float
    t_center: float
    spatial: BumpProfile
    center: tuple
    half_widths: tuple
    amplitude: float = 1.0
    derivative_order: int = 0
    tile_index: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))
        object.__setattr__(self, "half_widths", tuple(float(h) for h in self.half_widths))
        if self.derivative_order not in (0, 1):
            raise ConfigError("derivative_order must be 0 or 1")

    @property
    def dim(self):
        return len(self.center)

    def temporal_transform(self, omega):
        """``\\int chi(t) exp(i omega t) dt`` including the ``-d/dt`` factor when present."""
        omega = np.asarray(omega, dtype=float)
        prof = self.temporal
        val = np.exp(1j * omega * self.t_center) * prof.ft(omega * self.epsilon) / prof.mass
        if self.derivative_order == 1:
            val = 1j * omega * val
        return val

    def spatial_transform(self, k):
        """``\\int F(x) exp(-i k.x) d^n x`` for ``k`` of shape ``(..., n)``."""
        k = np.asarray(k, dtype=float)
        prof = self.spatial
        out = np.ones(k.shape[:-1], dtype=complex)
        for axis, (c, w) in enumerate(zip(self.center, self.half_widths)):
            ka = k[..., axis]
            out = out * np.exp(-1j * ka * c) * (w * prof.ft(ka * w) / math.sqrt(w * prof.l2sq))
        return out

    def transform(self, omega, k):
        return self.amplitude * self.temporal_transform(omega) * self.spatial_transform(k)

    def temporal_values(self, t):
        prof = self.temporal
        s = (np.asarray(t, dtype=float) - self.t_center) / self.epsilon
        if self.derivative_order == 0:
            return prof.shape(s) / (self.epsilon * prof.mass)
        return -prof.shape_derivative(s) / (self.epsilon**2 * prof.mass)

    def spatial_values(self, x):
        """Product profile at points ``x`` of shape ``(..., n)``."""
        x = np.asarray(x, dtype=float)
        prof = self.spatial
        out = np.ones(x.shape[:-1])
        for axis, (c, w) in enumerate(zip(self.center, self.half_widths)):
            out = out * prof.shape((x[..., axis] - c) / w) / math.sqrt(w * prof.l2sq)
        return out

    def __call__(self, t, x):
        """Position-space value; ``x`` has shape ``(..., n)`` broadcasting against ``t``."""
        return self.amplitude * self.temporal_values(t) * self.spatial_values(x)

    def scaled(self, factor):
        return replace(self, amplitude=self.amplitude * factor)

    def to_dict(self):
        return {
            "temporal": self.temporal.to_dict(),
            "epsilon": self.epsilon,
            "t_center": self.t_center,
            "spatial": self.spatial.to_dict(),
            "center": list(self.center),
            "half_widths": list(self.half_widths),
            "amplitude": self.amplitude,
            "derivative_order": self.derivative_order,
            "tile_index": self.tile_index,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            BumpProfile.from_dict(d["temporal"]),
            float(d["epsilon"]),
            float(d["t_center"]),
            BumpProfile.from_dict(d["spatial"]),
            tuple(d["center"]),
            tuple(d["half_widths"]),
            float(d["amplitude"]),
            int(d["derivative_order"]),
            d.get("tile_index"),
        )


@dataclass(frozen=True)
class SmearingCombination(_Smearing):
    """Finite real-linear combination ``sum_i c_i f_i`` of smearing functions."""

    terms: tuple = ()

    def transform(self, omega, k):
        omega = np.asarray(omega, dtype=float)
        out = np.zeros(omega.shape, dtype=complex)
        for c, f in self.terms:
            if c != 0:
                out = out + c * f.transform(omega, k)
        return out

    def __call__(self, t, x):
        return sum(c * f(t, x) for c, f in self.terms)


def momentum_transform(f, omega, k):
    """Closed-form ``f^(omega, k)``; ``k`` is an ``n``-vector or an array ``(..., n)``."""
    omega = np.asarray(omega, dtype=float)
    k = np.asarray(k, dtype=float)
    if k.ndim == 0:
        k = k[None]
    return f.transform(omega, k)


@dataclass(frozen=True)
class LocalModePair:
    """``(f1, f2)`` on a common tile with ``E(f1, f2) = 1``.

    ``normalization`` is the factor ``1/c`` applied to the raw ``-d/dt``
    partner and ``lam`` the accumulated rescaling ``(f1, f2) -> (lam f1, f2/lam)``.
    """

    f1: SmearingFunction
    f2: SmearingFunction
    normalization: float
    lam: float = 1.0

    @property
    def smearings(self):
        return (self.f1, self.f2)

    def to_dict(self):
        return {"f1": self.f1.to_dict(), "f2": self.f2.to_dict(), "normalization": self.normalization, "lambda": self.lam}

    @classmethod
    def from_dict(cls, d):
        return cls(SmearingFunction.from_dict(d["f1"]), SmearingFunction.from_dict(d["f2"]), float(d["normalization"]), float(d.get("lambda", 1.0)))


def make_local_mode(tile, profile, spec, grid, temporal_profile=None):
    """Build the normalized local mode living on ``tile``.

    ``f1 = chi(t) F(x)`` and ``f2 = -d/dt(chi F) / c`` with ``c = E(f1, -d/dt(chi F))``
    measured on ``grid``; the sign of ``c`` is absorbed by the division.
    """
    from .propagator import causal_smeared

    if grid.k_max < 10.0 / min(tile.half_widths):
        raise ConfigError(
            f"grid k_max={grid.k_max} does not resolve tile {tile.index} "
            f"(needs >= {10.0 / min(tile.half_widths):g})"
        )
    tprof = temporal_profile if temporal_profile is not None else profile
    f1 = SmearingFunction(tprof, tile.epsilon, spec.t0, profile, tile.center, tile.half_widths, 1.0, 0, tile.index)
    f2_raw = replace(f1, derivative_order=1)
    c = causal_smeared(f1, f2_raw, grid, spec)
    if abs(c) < 1e-12:
        raise DegenerateModeError(f"tile {tile.index}: E(f1, f2) = {c:.3e} cannot be normalized")
    return LocalModePair(f1, f2_raw.scaled(1.0 / c), 1.0 / c, 1.0)


def rescale_mode(pair: LocalModePair, lam: float) -> LocalModePair:
    """``(f1, f2) -> (lam f1, f2 / lam)``; the commutator is unchanged."""
    if not lam > 0:
        raise ConfigError(f"rescaling factor must be positive, got {lam}")
    if lam == 1:
        return pair
    return LocalModePair(pair.f1.scaled(lam), pair.f2.scaled(1.0 / lam), pair.normalization, pair.lam * lam)
