"""Characteristic functions, Wigner functions and s-ordered distributions.

Conventions
-----------
Phase-space points are ``xi = (x_1, p_1, ..., x_N, p_N)``. For a real
coefficient vector ``eta`` the displacement smearing is
``h_eta = sum_AB eta_A Omega_AB f_B`` and the characteristic function is
``chi(eta) = omega(exp(i phi(h_eta)))``. The Wigner function is its
symplectic Fourier transform

    W(xi) = (2 pi)^(-2N) \\int d^{2N} eta  exp(i eta.Omega.xi) chi(eta).

``hbar`` lives inside ``Sigma`` (through ``W(f, g)``), so the measure above
carries no ``hbar``; it corresponds to ``(2 pi hbar)^(-N) d^{2N} eta'`` in
the rescaled variables ``eta' = sqrt(hbar) eta``.

For a Gaussian ``chi = exp(-eta.M.eta / 2 + i mu.Omega.eta)`` with
``M = Omega^T Sigma Omega``, completing the square gives

    W(xi) = exp(-(xi - mu).Sigma^-1.(xi - mu) / 2) / ((2 pi)^N sqrt(det Sigma)),

using ``(Omega^T Sigma Omega)^-1 = Omega^T Sigma^-1 Omega`` and
``Omega^2 = -1``.

s-ordering multiplies ``chi`` by ``exp(s hbar |eta|^2 / 4)``, which shifts
``M`` by ``-(s hbar / 2) 1`` and therefore ``Sigma`` by the same amount.

One-particle states ``a^dag(G)|0>`` have
``chi(eta) = exp(-eta.M.eta / 2) (1 - eta.B.eta)`` where
``B = Omega Re(b b^dag) Omega^T`` and ``b_A = beta_G(f_A)`` is the
displacement of the ``G`` mode by ``exp(i phi(f_A))``: on the ``G`` mode the
Weyl operator acts as ``D(beta)`` and ``<1|D(beta)|1> = <0|D(beta)|0> (1 - |beta|^2)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import (
    ConfigError,
    CostGuardError,
    CutoffError,
    IllConditionedError,
    NormalizationError,
    NotGaussianError,
    OrderingDomainError,
)
from .modes import covariance, symplectic_form
from .propagator import FieldState, MomentumEngine

__all__ = [
    "CharacteristicFunction",
    "PhaseGrid",
    "QuasiDistribution",
    "characteristic",
    "characteristic_function",
    "marginals",
    "mode_overlap",
    "negativity",
    "s_ordered",
    "wigner_gaussian",
    "wigner_numeric",
]

CHI_BOUNDARY = 1e-8
MAX_NUMERIC_MODES = 2
COND_LIMIT = 1e12
NORMALIZATION_TOL = 1e-2


@dataclass(frozen=True, eq=False)
class PhaseGrid:
    """Uniform grid on ``prod_d [-L_d, L_d]`` for the ``2N`` phase-space coordinates."""

    half_ranges: tuple
    nodes: tuple

    def __post_init__(self):
        object.__setattr__(self, "half_ranges", tuple(float(v) for v in self.half_ranges))
        object.__setattr__(self, "nodes", tuple(int(v) for v in self.nodes))
        if len(self.half_ranges) != len(self.nodes) or len(self.nodes) % 2:
            raise ConfigError("phase grid needs one range and node count per coordinate (2N of each)")
        if any(not v > 0 for v in self.half_ranges) or any(v < 3 for v in self.nodes):
            raise ConfigError("phase grid ranges must be positive with at least 3 nodes per axis")

    @classmethod
    def auto(cls, sigma, nodes=81, width=5.0, mean=None):
        """Ranges ``width`` standard deviations (plus ``|mean|``) along each axis."""
        sd = np.sqrt(np.diag(np.asarray(sigma, dtype=float)))
        shift = np.zeros_like(sd) if mean is None else np.abs(np.asarray(mean, dtype=float))
        nodes = (nodes,) * sd.size if np.isscalar(nodes) else tuple(nodes)
        return cls(tuple(width * sd + shift), nodes)

    @property
    def dim(self):
        return len(self.nodes)

    @property
    def N(self):
        return self.dim // 2

    def axes(self):
        return [np.linspace(-h, h, n) for h, n in zip(self.half_ranges, self.nodes)]

    def spacings(self):
        return [2.0 * h / (n - 1) for h, n in zip(self.half_ranges, self.nodes)]

    def axis_weights(self):
        out = []
        for h, n in zip(self.half_ranges, self.nodes):
            w = np.full(n, 2.0 * h / (n - 1))
            w[0] = w[-1] = 0.5 * w[0]
            out.append(w)
        return out

    def points(self):
        """All grid points, shape ``nodes + (2N,)``."""
        return np.stack(np.meshgrid(*self.axes(), indexing="ij"), axis=-1)

    def scaled(self, factors):
        return PhaseGrid(tuple(h * f for h, f in zip(self.half_ranges, factors)), self.nodes)

    def integrate(self, values, axes=None):
        """Trapezoid quadrature of ``values`` over ``axes`` (all by default)."""
        axes = range(self.dim) if axes is None else axes
        out = values
        ws = self.axis_weights()
        for a in sorted(axes, reverse=True):
            out = np.sum(np.moveaxis(out, a, -1) * ws[a], axis=-1)
        return out

    def to_dict(self):
        return {"half_ranges": list(self.half_ranges), "nodes": list(self.nodes)}


@dataclass(frozen=True, eq=False)
class QuasiDistribution:
    s: float
    grid: PhaseGrid
    values: np.ndarray = field(repr=False)
    normalization: float
    min_value: float
    negativity: float
    state_tag: str = ""
    fingerprint: str = ""
    imag_residue: float = 0.0
    method: str = "gaussian"
    tolerance: float = 1e-3

    def summary(self):
        return {
            "s": self.s,
            "method": self.method,
            "normalization": self.normalization,
            "min_value": self.min_value,
            "negativity": self.negativity,
            "imag_residue": self.imag_residue,
            "state": self.state_tag,
            "grid_fingerprint": self.fingerprint,
            "phase_grid": self.grid.to_dict(),
        }


def _make_distribution(s, pgrid, values, tag, fingerprint, method, imag_residue=0.0):
    norm = float(pgrid.integrate(values))
    dist = QuasiDistribution(s, pgrid, values, norm, float(values.min()), 0.0, tag, fingerprint, float(imag_residue), method)
    if abs(norm - 1.0) <= NORMALIZATION_TOL:
        object.__setattr__(dist, "negativity", negativity(dist)[0])
    else:
        object.__setattr__(dist, "negativity", float("nan"))
    return dist


class CharacteristicFunction:
    """``chi(eta)`` of a state restricted to a mode set, with ``Sigma`` and ``B`` precomputed."""

    def __init__(self, modes, state, grid, cov=None):
        self.modes = modes
        self.state = state if state is not None else FieldState.vacuum()
        self.omega = modes.omega
        self.hbar = modes.spec.hbar
        gauss_state = self.state if self.state.is_gaussian else FieldState.vacuum()
        self.cov = cov if cov is not None else covariance(modes, gauss_state, grid)
        self.M = self.cov.quadratic_form
        self.mean = self.cov.mean
        self.B = None
        self.fingerprint = grid.fingerprint
        if not self.state.is_gaussian:
            eng = MomentumEngine(modes.spec, grid)
            b = eng.overlap_rows(self.state.profile, eng.transforms(modes.smearings))
            self.overlaps = b
            self.B = self.omega @ np.real(np.outer(b, np.conj(b))) @ self.omega.T

    @classmethod
    def from_matrices(cls, M, B=None, mean=None, hbar=1.0, tag="synthetic"):
        """Characteristic function given directly by ``M`` (and ``B`` / ``mean``), with no field behind it.

        Used for idealized fixtures such as a single oscillator in its first
        Fock state (``M = B = 1/2``).
        """
        M = np.asarray(M, dtype=float)
        if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] % 2:
            raise ConfigError("M must be a square matrix of even size")
        self = object.__new__(cls)
        self.modes = None
        self._n = M.shape[0] // 2
        self.omega = symplectic_form(self._n)
        self.hbar = float(hbar)
        self.M = 0.5 * (M + M.T)
        self.mean = np.zeros(M.shape[0]) if mean is None else np.asarray(mean, dtype=float)
        self.B = None if B is None else np.asarray(B, dtype=float)
        self.fingerprint = ""
        self._tag = tag
        return self

    @property
    def N(self):
        return self.modes.N if self.modes is not None else self._n

    @property
    def tag(self):
        return self.state.tag if self.modes is not None else self._tag

    def moment_matrix(self):
        """Second moments of the quasi-distribution about the origin, in ``xi`` coordinates."""
        eta_mom = self.M if self.B is None else self.M + 2.0 * self.B
        return self.omega @ eta_mom @ self.omega.T + np.outer(self.mean, self.mean)

    def __call__(self, eta):
        eta = np.asarray(eta, dtype=float)
        quad = np.einsum("...a,ab,...b->...", eta, self.M, eta)
        out = np.exp(-0.5 * quad).astype(complex)
        if np.any(self.mean):
            out = out * np.exp(1j * np.einsum("a,ab,...b->...", self.mean, self.omega, eta))
        if self.B is not None:
            out = out * (1.0 - np.einsum("...a,ab,...b->...", eta, self.B, eta))
        return out


def characteristic_function(modes, state, grid) -> CharacteristicFunction:
    return CharacteristicFunction(modes, state, grid)


def characteristic(modes, state, eta, grid):
    """``chi(eta)`` for one ``eta`` (shape ``(2N,)``) or a batch (shape ``(..., 2N)``)."""
    out = CharacteristicFunction(modes, state, grid)(eta)
    return complex(out) if np.ndim(out) == 0 else out


def _gaussian_values(sigma, mean, pgrid):
    sigma = 0.5 * (sigma + sigma.T)
    if np.linalg.cond(sigma) > COND_LIMIT:
        raise IllConditionedError(f"covariance condition number {np.linalg.cond(sigma):.3e} exceeds {COND_LIMIT:g}")
    chol = np.linalg.cholesky(sigma)
    d = pgrid.points() - mean
    z = np.linalg.solve(chol, d.reshape(-1, d.shape[-1]).T)
    quad = np.sum(z * z, axis=0).reshape(d.shape[:-1])
    logdet = 2.0 * np.sum(np.log(np.diag(chol)))
    n = sigma.shape[0] // 2
    return np.exp(-0.5 * quad - 0.5 * logdet - n * math.log(2.0 * math.pi))


def wigner_gaussian(modes, state, phase_grid=None, grid=None, cov=None, s=0.0) -> QuasiDistribution:
    """Closed-form (s-ordered) Wigner function of a Gaussian state."""
    if state is None:
        state = FieldState.vacuum()
    if not state.is_gaussian:
        raise NotGaussianError("the closed-form path only applies to Gaussian states")
    if cov is None:
        if grid is None:
            raise ConfigError("wigner_gaussian needs a momentum grid or a precomputed covariance")
        cov = covariance(modes, state, grid)
    hbar = modes.spec.hbar if modes is not None else 1.0
    sigma_s = cov.sigma - 0.5 * s * hbar * np.eye(cov.sigma.shape[0])
    if s != 0.0 and np.linalg.eigvalsh(0.5 * (sigma_s + sigma_s.T)).min() <= 0:
        raise OrderingDomainError(f"s = {s} makes Sigma - (s hbar / 2) 1 indefinite for this state")
    if phase_grid is None:
        phase_grid = PhaseGrid.auto(sigma_s, mean=cov.mean)
    values = _gaussian_values(sigma_s, cov.mean, phase_grid)
    return _make_distribution(float(s), phase_grid, values, state.tag, cov.fingerprint, "gaussian")


def _eta_rule(half, nodes):
    x, w = leggauss(nodes)
    return half * x, half * w


def _boundary_max(chi, half, nodes):
    """Largest ``|chi|`` on the faces of the ``eta`` box, sampled at Gauss nodes."""
    rules = [_eta_rule(h, nodes)[0] for h in half]
    worst = 0.0
    for d, h in enumerate(half):
        for sign in (-1.0, 1.0):
            axes = [r if a != d else np.array([sign * h]) for a, r in enumerate(rules)]
            pts = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)
            worst = max(worst, float(np.max(np.abs(chi(pts)))))
    return worst


def auto_cutoff(chi_fn, margin=1.15, s=0.0):
    """Per-axis ``eta`` half-ranges enclosing the region where ``|chi| > 1e-8``.

    The Gaussian envelope ``exp(-eta.M.eta / 2)`` falls below ``1e-8`` outside
    the ellipsoid whose extent along axis ``d`` is ``sqrt(2 ln(1e8) (M^-1)_dd)``.
    """
    msym = chi_fn.M - 0.5 * s * chi_fn.hbar * np.eye(chi_fn.M.shape[0])
    minv = np.linalg.inv(msym)
    return margin * np.sqrt(2.0 * math.log(1.0 / CHI_BOUNDARY) * np.diag(minv))


def wigner_numeric(modes, state, phase_grid=None, grid=None, eta_cutoff=None, eta_nodes=None, s=0.0, chi_fn=None) -> QuasiDistribution:
    """Direct quadrature of the symplectic Fourier transform of ``chi``.

    The kernel ``exp(i eta.Omega.xi)`` factorizes over the ``eta`` axes, so the
    ``2N``-dimensional sum is done as ``2N`` successive one-axis contractions.
    """
    if chi_fn is None:
        if modes.N > MAX_NUMERIC_MODES:
            raise CostGuardError(f"numeric Wigner path is limited to N <= {MAX_NUMERIC_MODES} modes, got {modes.N}")
        if grid is None:
            raise ConfigError("wigner_numeric needs a momentum grid")
        chi_fn = CharacteristicFunction(modes, state, grid)
    n = chi_fn.N
    if n > MAX_NUMERIC_MODES:
        raise CostGuardError(f"numeric Wigner path is limited to N <= {MAX_NUMERIC_MODES} modes, got {n}")
    if s > 0:
        raise OrderingDomainError("the numeric path only supports s <= 0")
    hbar = chi_fn.hbar
    if eta_nodes is None:
        eta_nodes = 64 if n == 1 else 48

    def chi(eta):
        out = chi_fn(eta)
        if s != 0.0:
            out = out * np.exp(0.25 * s * hbar * np.sum(np.asarray(eta) ** 2, axis=-1))
        return out

    dim = 2 * n
    if eta_cutoff is None:
        half = auto_cutoff(chi_fn, s=s)
        for _ in range(8):
            edge = _boundary_max(chi, half, min(eta_nodes, 24))
            if edge <= CHI_BOUNDARY:
                break
            half = 1.1 * half
    else:
        half = np.broadcast_to(np.asarray(eta_cutoff, dtype=float), (dim,)).copy()
        edge = _boundary_max(chi, half, min(eta_nodes, 24))
    if edge > CHI_BOUNDARY:
        raise CutoffError(f"|chi| = {edge:.3e} on the eta boundary exceeds {CHI_BOUNDARY:g}; increase eta_cutoff")
    if phase_grid is None:
        phase_grid = PhaseGrid.auto(chi_fn.moment_matrix() - np.outer(chi_fn.mean, chi_fn.mean), mean=chi_fn.mean)
    if phase_grid.dim != dim:
        raise ConfigError(f"phase grid has {phase_grid.dim} coordinates, mode set needs {dim}")

    rules = [_eta_rule(h, eta_nodes) for h in half]
    mesh = np.stack(np.meshgrid(*[r[0] for r in rules], indexing="ij"), axis=-1)
    tensor = chi(mesh)
    del mesh
    # (Omega xi)_a pairs eta_a with a single xi coordinate: x_k <-> p_k
    xi_axes = phase_grid.axes()
    partner = [a + 1 if a % 2 == 0 else a - 1 for a in range(dim)]
    sign = [1.0 if a % 2 == 0 else -1.0 for a in range(dim)]
    for a in range(dim):
        nodes_a, weights_a = rules[a]
        kern = weights_a[:, None] * np.exp(1j * sign[a] * np.outer(nodes_a, xi_axes[partner[a]]))
        tensor = np.einsum("i...,ij->...j", tensor, kern, optimize=False)
    # axis a of the result is xi coordinate partner[a]; reorder to xi order
    tensor = np.transpose(tensor, [partner.index(d) for d in range(dim)])
    tensor = tensor / (2.0 * math.pi) ** dim
    peak = float(np.max(np.abs(tensor)))
    residue = float(np.max(np.abs(tensor.imag))) / peak if peak > 0 else 0.0
    return _make_distribution(float(s), phase_grid, np.ascontiguousarray(tensor.real), chi_fn.tag, chi_fn.fingerprint, "numeric", residue)


def s_ordered(modes, state, s, phase_grid=None, grid=None, numeric=None, **kwargs) -> QuasiDistribution:
    """s-ordered quasi-distribution; ``s = 0`` is the Wigner function, ``s = -1`` the Husimi analogue.

    Gaussian states use the closed form with ``Sigma_s = Sigma - (s hbar / 2) 1``;
    one-particle states (or ``numeric=True``) use the quadrature path, which
    requires ``s <= 0``.
    """
    s = float(s)
    if not -1.0 <= s <= 1.0:
        raise OrderingDomainError(f"s must lie in [-1, 1], got {s}")
    state = state if state is not None else FieldState.vacuum()
    if numeric is None:
        numeric = not state.is_gaussian
    if numeric:
        if s > 0:
            raise OrderingDomainError("the numeric path only supports s <= 0")
        return wigner_numeric(modes, state, phase_grid, grid, s=s, **kwargs)
    return wigner_gaussian(modes, state, phase_grid, grid, s=s, **kwargs)


def negativity(dist: QuasiDistribution, tol: float = 1e-12):
    """``(volume, min_value)`` with ``volume = \\int |W| - \\int W = 2 \\int W_-``.

    Subtracting the computed integral rather than 1 keeps quadrature error
    in the normalization from appearing as negativity; values within
    ``tol`` of zero are reported as zero.
    """
    if abs(dist.normalization - 1.0) > NORMALIZATION_TOL:
        raise NormalizationError(f"distribution normalization {dist.normalization!r} is not within {NORMALIZATION_TOL} of 1")
    g = dist.grid
    vol = float(g.integrate(np.abs(dist.values)) - g.integrate(dist.values))
    if vol < tol:
        vol = 0.0
    return vol, float(dist.values.min())


def marginals(dist: QuasiDistribution, mode_index: int, axis: str = "position") -> np.ndarray:
    """Reduced density of ``x_k`` (``axis='position'``) or ``p_k`` (``'momentum'``)."""
    if axis not in ("position", "momentum"):
        raise ConfigError(f"axis must be 'position' or 'momentum', got {axis!r}")
    if not 0 <= mode_index < dist.grid.N:
        raise ConfigError(f"mode index {mode_index} out of range for {dist.grid.N} modes")
    keep = 2 * mode_index + (0 if axis == "position" else 1)
    return dist.grid.integrate(dist.values, [a for a in range(dist.grid.dim) if a != keep])


def mode_overlap(chi_fn: CharacteristicFunction) -> float:
    """``tr(B M^-1) / 2``: equals 1 for a pure mode exactly matched to the particle, 0 without overlap."""
    if chi_fn.B is None:
        return 0.0
    return 0.5 * float(np.trace(chi_fn.B @ np.linalg.inv(chi_fn.M)))
