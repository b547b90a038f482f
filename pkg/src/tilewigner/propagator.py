"""Smeared two-point functions of the free Klein-Gordon field.

Conventions (used everywhere in the package):

* positive-frequency modes ``u_k(t, x) = exp(-i w_k t + i k.x) / sqrt((2 pi)^n 2 w_k)``
  with ``w_k = sqrt(k^2 + m^2)``;
* smeared Wightman function
  ``W(f, g) = hbar \\int d^n k  f^(w_k, k) conj(g^(w_k, k)) / ((2 pi)^n 2 w_k)``;
* causal propagator ``E(f, g) = (2 / hbar) Im W(f, g)``, advanced minus
  retarded, so ``[phi(f), phi(g)] = i hbar E(f, g)`` and ``E`` carries no hbar.

Thermal (KMS) states at inverse temperature ``beta`` replace the vacuum
integrand by ``(1 + n_k) f^ conj(g^) + n_k conj(f^) g^`` with the Bose
factor ``n_k = 1 / (exp(beta w_k) - 1)``. This follows from
``<a_k^dag a_q> = n_k delta(k - q)`` in the mode expansion; the
antisymmetric part is state independent, as it must be.

All reductions over momentum nodes go through ``numpy.sum`` along a
contiguous axis, whose pairwise summation order is fixed, so results do not
depend on BLAS threading.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import BandwidthWarning, ConfigError, InfraredDivergenceError

__all__ = [
    "FieldState",
    "MomentumEngine",
    "OneParticleProfile",
    "causal_smeared",
    "overlap_beta",
    "thermal_wightman",
    "wightman_matrix",
    "wightman_smeared",
]

IR_MASS_FLOOR = 1e-6
TAIL_TOLERANCE = 1e-6


@dataclass(frozen=True)
class OneParticleProfile:
    """Gaussian wavepacket ``G(k)`` defining the state ``|1_G> = a^dag(G)|0>``.

    ``G(k) = c exp(-|k - k0|^2 / (4 sigma_k^2)) exp(-i (k.x_c - w_k t_c))`` with
    ``c = (2 pi sigma_k^2)^(-n/4)`` so that ``\\int |G|^2 d^n k = 1``. The
    phase makes ``\\int G(k) u_k(t, x) d^n k`` peak at ``(t_c, x_c)``.
    """

    sigma_k: float
    k0: tuple = (0.0,)
    x_c: tuple = (0.0,)
    t_c: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "k0", tuple(float(v) for v in self.k0))
        object.__setattr__(self, "x_c", tuple(float(v) for v in self.x_c))
        if not self.sigma_k > 0:
            raise ConfigError("one-particle width sigma_k must be positive")
        if len(self.k0) != len(self.x_c):
            raise ConfigError("k0 and x_c must have the same dimension")

    @property
    def n(self):
        return len(self.k0)

    @property
    def normalization(self):
        return (2.0 * math.pi * self.sigma_k**2) ** (-self.n / 4.0)

    def values(self, k, omega):
        k = np.asarray(k, dtype=float)
        dk = k - np.asarray(self.k0)
        env = np.exp(-np.sum(dk**2, axis=-1) / (4.0 * self.sigma_k**2))
        phase = np.exp(-1j * (k @ np.asarray(self.x_c) - np.asarray(omega) * self.t_c))
        return self.normalization * env * phase

    def to_dict(self):
        return {"sigma_k": self.sigma_k, "k0": list(self.k0), "x_c": list(self.x_c), "t_c": self.t_c}


@dataclass(frozen=True)
class FieldState:
    """Algebraic state of the field, restricted to what the pipeline evaluates.

    ``amplitudes`` (coherent) are complex displacements ``alpha_k`` of the
    local modes, ``<(x_k, p_k)> = sqrt(2 hbar) (Re alpha_k, Im alpha_k)``.
    """

    variant: str = "vacuum"
    beta: float | None = None
    amplitudes: tuple = ()
    profile: OneParticleProfile | None = None

    def __post_init__(self):
        if self.variant not in ("vacuum", "thermal", "coherent", "one_particle"):
            raise ConfigError(f"unknown state variant {self.variant!r}")
        if self.variant == "thermal" and not (self.beta is not None and self.beta > 0):
            raise ConfigError(f"thermal state needs beta > 0, got {self.beta}")
        if self.variant == "one_particle" and self.profile is None:
            raise ConfigError("one-particle state needs a wavepacket profile")
        object.__setattr__(self, "amplitudes", tuple(complex(a) for a in self.amplitudes))

    @classmethod
    def vacuum(cls):
        return cls("vacuum")

    @classmethod
    def thermal(cls, beta):
        return cls("thermal", beta=float(beta))

    @classmethod
    def coherent(cls, amplitudes):
        return cls("coherent", amplitudes=tuple(amplitudes))

    @classmethod
    def one_particle(cls, profile):
        return cls("one_particle", profile=profile)

    @property
    def is_gaussian(self):
        return self.variant != "one_particle"

    @property
    def tag(self):
        if self.variant == "thermal":
            return f"thermal(beta={self.beta!r})"
        if self.variant == "coherent":
            return "coherent(" + ",".join(f"{a.real!r}{a.imag:+}j" for a in self.amplitudes) + ")"
        if self.variant == "one_particle":
            p = self.profile
            return f"one_particle(sigma_k={p.sigma_k!r},k0={list(p.k0)},x_c={list(p.x_c)},t_c={p.t_c!r})"
        return "vacuum"

    def to_dict(self):
        d = {"variant": self.variant}
        if self.variant == "thermal":
            d["beta"] = self.beta
        elif self.variant == "coherent":
            d["amplitudes"] = [[a.real, a.imag] for a in self.amplitudes]
        elif self.variant == "one_particle":
            d["profile"] = self.profile.to_dict()
        return d

    @classmethod
    def from_dict(cls, d):
        variant = d.get("variant", "vacuum")
        if variant == "thermal":
            return cls.thermal(d["beta"])
        if variant == "coherent":
            return cls.coherent(complex(*a) if isinstance(a, (list, tuple)) else complex(a) for a in d["amplitudes"])
        if variant == "one_particle":
            p = d["profile"]
            return cls.one_particle(
                OneParticleProfile(float(p["sigma_k"]), tuple(p.get("k0", (0.0,))), tuple(p.get("x_c", (0.0,))), float(p.get("t_c", 0.0)))
            )
        return cls(variant)


class MomentumEngine:
    """On-shell quadrature for one spacetime and one momentum grid.

    The engine holds only the grid-derived arrays; every method is a pure
    function of its arguments.
    """

    def __init__(self, spec, grid):
        if grid.n != spec.n:
            raise ConfigError(f"grid dimension {grid.n} does not match spacetime n={spec.n}")
        self.spec = spec
        self.grid = grid
        self.k = grid.points
        self.omega = np.sqrt(np.sum(self.k**2, axis=-1) + spec.m**2)
        self.measure = grid.weights / ((2.0 * math.pi) ** spec.n * 2.0 * self.omega)

    def transforms(self, funcs):
        """Rows of on-shell transforms ``f^(w_k, k)``, shape ``(len(funcs), M)``."""
        return np.stack([f.transform(self.omega, self.k) for f in funcs])

    def _ir_guard(self, funcs):
        if self.spec.n != 1 or self.spec.m > IR_MASS_FLOOR:
            return
        for f in funcs:
            if abs(f.transform(np.array([self.spec.m]), np.zeros((1, 1)))[0]) > 1e-12:
                raise InfraredDivergenceError(
                    "1+1 dimensional field with m below the IR floor: smearing with nonzero "
                    "spatial mean has a log-divergent two-point function"
                )

    def _tail_check(self, rows):
        weight = np.abs(rows) ** 2 * self.measure
        total = weight.sum(axis=-1)
        tail = weight[:, self.grid.edge].sum(axis=-1)
        frac = np.max(np.where(total > 0, tail / np.where(total > 0, total, 1.0), 0.0))
        if frac > TAIL_TOLERANCE:
            warnings.warn(
                f"momentum cutoff k_max={self.grid.k_max} truncates a fraction {frac:.2e} "
                "of at least one integrand",
                BandwidthWarning,
                stacklevel=3,
            )
        return frac

    def occupation(self, beta):
        with np.errstate(over="ignore"):
            return 1.0 / np.expm1(beta * self.omega)

    def wightman_rows(self, rows_a, rows_b, beta=None):
        """``W`` between every row of ``rows_a`` and ``rows_b`` (transform arrays).

        With ``a conj(b) = P + iQ`` the thermal integrand
        ``(1 + n) a conj(b) + n conj(a) b`` is ``(1 + 2n) P + iQ``. Real and
        imaginary parts are formed separately so that ``Q`` vanishes exactly
        when ``a = b``.
        """
        hbar = self.spec.hbar
        weight_re = self.measure if beta is None else (1.0 + 2.0 * self.occupation(beta)) * self.measure
        ar, ai = rows_a.real, rows_a.imag
        br, bi = rows_b.real, rows_b.imag
        out = np.empty((rows_a.shape[0], rows_b.shape[0]), dtype=complex)
        for i in range(rows_a.shape[0]):
            p = ar[i][None, :] * br + ai[i][None, :] * bi
            q = ai[i][None, :] * br - ar[i][None, :] * bi
            out[i] = hbar * (np.sum(p * weight_re, axis=-1) + 1j * np.sum(q * self.measure, axis=-1))
        return out

    def wightman_matrix(self, funcs, gfuncs=None, state=None, check=True):
        funcs = list(funcs)
        gfuncs = funcs if gfuncs is None else list(gfuncs)
        self._ir_guard(funcs + gfuncs)
        ra = self.transforms(funcs)
        rb = ra if gfuncs is funcs else self.transforms(gfuncs)
        if check:
            self._tail_check(np.concatenate([ra, rb]) if rb is not ra else ra)
        beta = _state_beta(state)
        return self.wightman_rows(ra, rb, beta)

    def wightman(self, f, g, state=None):
        return complex(self.wightman_matrix([f], [g], state)[0, 0])

    def causal(self, f, g):
        return 2.0 / self.spec.hbar * self.wightman(f, g).imag

    def positive_frequency(self, rows):
        """``h_+(k) = h^(w_k, k) / sqrt((2 pi)^n 2 w_k)`` for each row."""
        return rows / np.sqrt((2.0 * math.pi) ** self.spec.n * 2.0 * self.omega)

    def profile_values(self, profile):
        if profile.n != self.spec.n:
            raise ConfigError("one-particle profile dimension does not match spacetime")
        return profile.values(self.k, self.omega)

    def check_profile(self, profile, tol=1e-6):
        g = self.profile_values(profile)
        norm = float(np.sum(np.abs(g) ** 2 * self.grid.weights))
        if abs(norm - 1.0) > tol:
            raise ConfigError(f"one-particle profile norm on this grid is {norm!r}, not 1")
        return g

    def overlap_rows(self, profile, rows):
        """``beta_G`` for every transform row: ``i sqrt(hbar) \\int conj(G) h_+``.

        For real ``h``, ``phi(h) = sqrt(hbar) \\int (a_k conj(h_+) + a_k^dag h_+) d^n k``, so
        ``exp(i phi(h))`` displaces the normalized mode ``a(G)`` by
        ``i sqrt(hbar) <G, h_+>``.
        """
        g = self.check_profile(profile)
        hp = self.positive_frequency(rows)
        return 1j * math.sqrt(self.spec.hbar) * np.sum(np.conj(g)[None, :] * hp * self.grid.weights, axis=-1)


def _state_beta(state):
    if state is None or state.variant in ("vacuum", "coherent", "one_particle"):
        return None
    return state.beta


def wightman_smeared(f, g, grid, spec, state=None):
    """Smeared Wightman function ``W(f, g)`` (vacuum unless a thermal state is given)."""
    return MomentumEngine(spec, grid).wightman(f, g, state)


def causal_smeared(f, g, grid, spec):
    """Smeared causal propagator ``E(f, g) = (2/hbar) Im W(f, g)``."""
    return MomentumEngine(spec, grid).causal(f, g)


def thermal_wightman(f, g, beta, grid, spec):
    if beta is None or not beta > 0:
        raise ConfigError(f"thermal state needs beta > 0, got {beta}")
    return MomentumEngine(spec, grid).wightman(f, g, FieldState.thermal(beta))


def wightman_matrix(funcs, grid, spec, state=None):
    return MomentumEngine(spec, grid).wightman_matrix(funcs, state=state)


def overlap_beta(profile, h, grid, spec):
    """Displacement ``beta_G(h)`` that ``exp(i phi(h))`` imparts on the ``G`` mode."""
    eng = MomentumEngine(spec, grid)
    rows = eng.transforms([h])
    return complex(eng.overlap_rows(profile, rows)[0])
