"""Poincare transformations of smearing functions and invariance checks.

A Poincare element ``(Lambda, a)`` pushes a test function forward,
``f'(x) = f(Lambda^-1 (x - a))``. With the transform convention
``f^(p) = \\int f(x) exp(i p.x)`` (``p.x = w t - k.x``) this becomes

    f'^(p) = exp(i p.a) f^(Lambda^-1 p),

so transformed smearings are evaluated lazily from the closed-form
transform of the original, with no resampling in position space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial.transform import Rotation

from .errors import ConfigError
from .modes import covariance
from .propagator import FieldState, MomentumEngine
from .smearing import _Smearing

__all__ = ["PoincareElement", "TransformedSmearing", "invariance_check", "transform_smearing"]


@dataclass(frozen=True)
class PoincareElement:
    """``x -> Lambda x + a`` with ``Lambda = R(rotation) B(rapidity, boost_axis)``.

    ``translation`` is ``(a0, a1, ..., an)``. Rotations exist only in 3+1
    dimensions and are given as an axis and an angle in radians.
    """

    translation: tuple = (0.0, 0.0)
    rapidity: float = 0.0
    boost_axis: tuple = (1.0,)
    rotation_axis: tuple = (0.0, 0.0, 1.0)
    rotation_angle: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "translation", tuple(float(v) for v in self.translation))
        object.__setattr__(self, "boost_axis", tuple(float(v) for v in self.boost_axis))
        object.__setattr__(self, "rotation_axis", tuple(float(v) for v in self.rotation_axis))
        n = self.n
        if n not in (1, 3):
            raise ConfigError(f"translation must have 2 or 4 components, got {len(self.translation)}")
        if len(self.boost_axis) != n or not np.linalg.norm(self.boost_axis) > 0:
            raise ConfigError(f"boost axis must be a nonzero {n}-vector")
        if n == 1 and self.rotation_angle != 0.0:
            raise ConfigError("rotations need 3+1 dimensions")
        if n == 3 and self.rotation_angle != 0.0 and not np.linalg.norm(self.rotation_axis) > 0:
            raise ConfigError("rotation axis must be nonzero")

    @classmethod
    def identity(cls, n=1):
        return cls((0.0,) * (n + 1), 0.0, (1.0,) + (0.0,) * (n - 1))

    @property
    def n(self):
        return len(self.translation) - 1

    @property
    def is_identity(self):
        return not any(self.translation) and self.rapidity == 0.0 and self.rotation_angle == 0.0

    def lorentz(self) -> np.ndarray:
        """The ``(n+1) x (n+1)`` matrix ``Lambda`` acting on ``(t, x)``."""
        n = self.n
        u = np.asarray(self.boost_axis) / np.linalg.norm(self.boost_axis)
        ch, sh = math.cosh(self.rapidity), math.sinh(self.rapidity)
        boost = np.eye(n + 1)
        boost[0, 0] = ch
        boost[0, 1:] = boost[1:, 0] = sh * u
        boost[1:, 1:] += (ch - 1.0) * np.outer(u, u)
        if n == 1 or self.rotation_angle == 0.0:
            return boost
        axis = np.asarray(self.rotation_axis) / np.linalg.norm(self.rotation_axis)
        rot = np.eye(4)
        rot[1:, 1:] = Rotation.from_rotvec(self.rotation_angle * axis).as_matrix()
        return rot @ boost

    def lorentz_inverse(self) -> np.ndarray:
        eta = np.diag([1.0] + [-1.0] * self.n)
        return eta @ self.lorentz().T @ eta

    def inverse(self):
        """Only pure translations and pure boosts invert in closed form here."""
        if self.rotation_angle != 0.0 or (self.rapidity != 0.0 and any(self.translation)):
            raise ConfigError("inverse is implemented for pure translations or pure boosts")
        return PoincareElement(tuple(-v for v in self.translation), -self.rapidity, self.boost_axis)

    def to_dict(self):
        d = {"translation": list(self.translation), "rapidity": self.rapidity, "boost_axis": list(self.boost_axis)}
        if self.n == 3:
            d.update(rotation_axis=list(self.rotation_axis), rotation_angle=self.rotation_angle)
        return d

    @classmethod
    def from_dict(cls, d, n=1):
        translation = tuple(d.get("translation", (0.0,) * (n + 1)))
        n = len(translation) - 1
        return cls(
            translation,
            float(d.get("rapidity", 0.0)),
            tuple(d.get("boost_axis", (1.0,) + (0.0,) * (n - 1))),
            tuple(d.get("rotation_axis", (0.0, 0.0, 1.0))),
            float(d.get("rotation_angle", 0.0)),
        )


@dataclass(frozen=True, eq=False)
class TransformedSmearing(_Smearing):
    base: object
    element: PoincareElement

    def transform(self, omega, k):
        omega = np.asarray(omega, dtype=float)
        k = np.asarray(k, dtype=float)
        if self.element.is_identity:
            return self.base.transform(omega, k)
        p = np.concatenate([omega[..., None], k], axis=-1)
        q = p @ self.element.lorentz_inverse().T
        a = np.asarray(self.element.translation)
        phase = np.exp(1j * (omega * a[0] - k @ a[1:]))
        return phase * self.base.transform(q[..., 0], q[..., 1:])


def transform_smearing(f, element: PoincareElement) -> TransformedSmearing:
    if element.n != f.dim:
        raise ConfigError(f"element acts in {element.n}+1 dimensions, smearing lives in {f.dim}+1")
    return TransformedSmearing(f, element)


def invariance_check(modes, element: PoincareElement, state=None, grid=None, cov=None) -> float:
    """``max|Sigma' - Sigma| / max|Sigma|`` with every smearing transformed by ``element``."""
    state = state if state is not None else FieldState.vacuum()
    if state.variant not in ("vacuum", "thermal"):
        raise ConfigError("invariance checks are defined for vacuum and thermal states")
    if cov is None:
        cov = covariance(modes, state, grid)
    moved = [transform_smearing(f, element) for f in modes.smearings]
    w = MomentumEngine(modes.spec, grid).wightman_matrix(moved, state=state)
    sigma = 0.5 * (w.real + w.real.T)
    return float(np.max(np.abs(sigma - cov.sigma)) / np.max(np.abs(cov.sigma)))
