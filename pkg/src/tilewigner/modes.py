"""Sets of local modes, their joint commutation relations and covariances.

The phase-space vector of ``N`` modes is ordered
``(x_1, p_1, x_2, p_2, ..., x_N, p_N)`` with ``x_k = phi(f1^(k))`` and
``p_k = phi(f2^(k))``. The symplectic form is the exact block-diagonal
matrix with blocks ``[[0, 1], [-1, 0]]``; the quadrature estimate of
``E(f_A, f_B)`` is only ever used as a diagnostic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, IllConditionedError, NotGaussianError
from .propagator import FieldState, MomentumEngine
from .smearing import LocalModePair, make_local_mode

__all__ = [
    "CCRReport",
    "CovarianceMatrix",
    "LocalModeSet",
    "assemble_modes",
    "ccr_check",
    "covariance",
    "symplectic_eigenvalues",
    "symplectic_form",
    "wightman_quadratic_form",
]


def symplectic_form(nmodes: int) -> np.ndarray:
    """Block-diagonal ``Omega`` for ``nmodes`` modes (integer entries)."""
    return np.kron(np.eye(nmodes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


@dataclass(frozen=True, eq=False)
class LocalModeSet:
    pairs: tuple
    spec: object
    layout: object = None
    omega: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple(self.pairs))
        if not self.pairs:
            raise ConfigError("a mode set needs at least one mode")
        object.__setattr__(self, "omega", symplectic_form(len(self.pairs)))

    @property
    def N(self):
        return len(self.pairs)

    @property
    def smearings(self):
        """Flattened ``(f1^(1), f2^(1), ..., f1^(N), f2^(N))``."""
        return tuple(f for p in self.pairs for f in (p.f1, p.f2))

    def contraction(self, eta):
        """Smearing ``h_eta = sum_AB eta_A Omega_AB f_B`` as a combination."""
        coefs = np.asarray(eta, dtype=float) @ self.omega
        funcs = self.smearings
        h = coefs[0] * funcs[0]
        for c, f in zip(coefs[1:], funcs[1:]):
            h = h + c * f
        return h

    def rescaled(self, lam):
        from .smearing import rescale_mode

        return LocalModeSet(tuple(rescale_mode(p, lam) for p in self.pairs), self.spec, self.layout)

    def to_dict(self):
        return {
            "spec": self.spec.to_dict(),
            "layout": None if self.layout is None else self.layout.to_dict(),
            "pairs": [p.to_dict() for p in self.pairs],
        }

    @classmethod
    def from_dict(cls, d):
        from .geometry import SpacetimeSpec, TilingLayout

        spec = SpacetimeSpec(**d["spec"])
        layout = None if d.get("layout") is None else TilingLayout.from_dict(d["layout"])
        return cls(tuple(LocalModePair.from_dict(p) for p in d["pairs"]), spec, layout)


@dataclass(frozen=True, eq=False)
class CCRReport:
    measured: np.ndarray
    residual: np.ndarray
    max_abs_residual: float
    fingerprint: str = ""

    @property
    def within_mode_residual(self):
        n = self.residual.shape[0] // 2
        return max(float(np.max(np.abs(self.residual[2 * k : 2 * k + 2, 2 * k : 2 * k + 2]))) for k in range(n))

    @property
    def cross_mode_max(self):
        mask = ~np.kron(np.eye(self.residual.shape[0] // 2, dtype=bool), np.ones((2, 2), dtype=bool))
        return float(np.max(np.abs(self.measured[mask]))) if mask.any() else 0.0


@dataclass(frozen=True, eq=False)
class CovarianceMatrix:
    sigma: np.ndarray
    mean: np.ndarray
    state_tag: str
    fingerprint: str = ""
    omega: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        if self.omega is None:
            object.__setattr__(self, "omega", symplectic_form(self.sigma.shape[0] // 2))

    @property
    def N(self):
        return self.sigma.shape[0] // 2

    @property
    def quadratic_form(self):
        """``M = Omega^T Sigma Omega`` so that ``W(h_eta, h_eta) = eta.M.eta``."""
        m = self.__dict__.get("_m")
        if m is None:
            m = self.omega.T @ self.sigma @ self.omega
            m = 0.5 * (m + m.T)
            object.__setattr__(self, "_m", m)
        return m

    def symplectic_eigenvalues(self):
        return symplectic_eigenvalues(self.sigma, self.omega)


def assemble_modes(layout, profile, spec, grid) -> LocalModeSet:
    """One normalized local mode per tile of ``layout``."""
    pairs = tuple(make_local_mode(t, profile, spec, grid) for t in layout.tiles)
    return LocalModeSet(pairs, spec, layout)


def ccr_check(modes: LocalModeSet, grid) -> CCRReport:
    """Measure ``E(f_A, f_B)`` on ``grid`` and compare with ``Omega``."""
    eng = MomentumEngine(modes.spec, grid)
    w = eng.wightman_matrix(modes.smearings)
    e = (2.0 / modes.spec.hbar) * w.imag
    e = 0.5 * (e - e.T)
    resid = e - modes.omega
    return CCRReport(e, resid, float(np.max(np.abs(resid))), grid.fingerprint)


def _sigma_for_state(modes, state, grid):
    eng = MomentumEngine(modes.spec, grid)
    w = eng.wightman_matrix(modes.smearings, state=state)
    s = w.real
    return 0.5 * (s + s.T)


def covariance(modes: LocalModeSet, state: FieldState, grid) -> CovarianceMatrix:
    """Covariance ``Sigma_AB = Re W(f_A, f_B)`` and mean of a Gaussian state.

    Coherent states share the vacuum covariance; their mean is
    ``sqrt(2 hbar) (Re alpha_k, Im alpha_k)`` per mode.
    """
    if state is None:
        state = FieldState.vacuum()
    if not state.is_gaussian:
        raise NotGaussianError("one-particle states have no covariance description; use the characteristic function")
    sigma = _sigma_for_state(modes, state, grid)
    mean = np.zeros(2 * modes.N)
    if state.variant == "coherent":
        if len(state.amplitudes) != modes.N:
            raise ConfigError(f"coherent state has {len(state.amplitudes)} amplitudes for {modes.N} modes")
        scale = math.sqrt(2.0 * modes.spec.hbar)
        for k, a in enumerate(state.amplitudes):
            mean[2 * k] = scale * a.real
            mean[2 * k + 1] = scale * a.imag
    return CovarianceMatrix(sigma, mean, state.tag, grid.fingerprint, modes.omega)


def symplectic_eigenvalues(sigma, omega=None) -> np.ndarray:
    """Williamson spectrum of ``sigma``: moduli of the eigenvalues of ``i Omega Sigma``, sorted, one per mode."""
    sigma = np.asarray(sigma, dtype=float)
    if omega is None:
        omega = symplectic_form(sigma.shape[0] // 2)
    if not np.all(np.isfinite(sigma)):
        raise IllConditionedError("covariance matrix has non-finite entries")
    ev = np.sort(np.abs(np.linalg.eigvals(1j * omega @ sigma)))
    return ev[::2]


def wightman_quadratic_form(modes: LocalModeSet, state, eta, grid, cov: CovarianceMatrix | None = None) -> float:
    """``W(h_eta, h_eta) = eta.M.eta`` with ``h_eta = Omega(eta, f)``."""
    if cov is None:
        cov = covariance(modes, state, grid)
    eta = np.asarray(eta, dtype=float)
    return float(eta @ cov.quadratic_form @ eta)
