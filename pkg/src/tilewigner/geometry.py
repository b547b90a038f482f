"""Tilings of a thickened Cauchy slice in Minkowski spacetime.

Tiles are axis-aligned boxes on the slice ``t = t0``, thickened in time by
``epsilon``. Two tiles give commuting local modes when their supports are
spacelike separated, which for boxes sharing the slab centre reduces to a
Euclidean gap condition (see :func:`check_spacelike`).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CausalOverlapError, ConfigError

__all__ = [
    "SpacetimeSpec",
    "Tile",
    "TilingLayout",
    "build_tiling",
    "check_spacelike",
    "covariant_scales",
    "layout_from_tiles",
    "spatial_gap",
]


@dataclass(frozen=True)
class SpacetimeSpec:
    """Flat ``(n+1)``-dimensional spacetime carrying a Klein-Gordon field.

    ``xi`` (curvature coupling) is stored so configurations round-trip, but
    only the flat, minimally coupled case is implemented.
    """

    n: int = 1
    m: float = 1.0
    hbar: float = 1.0
    t0: float = 0.0
    xi: float = 0.0

    def __post_init__(self):
        if self.n not in (1, 3):
            raise ConfigError(f"spatial dimension must be 1 or 3, got {self.n}")
        if not self.m > 0:
            raise ConfigError(f"mass must be positive, got {self.m}")
        if not self.hbar > 0:
            raise ConfigError(f"hbar must be positive, got {self.hbar}")
        if self.xi != 0:
            raise ConfigError("only minimal coupling (xi = 0) is implemented")

    def to_dict(self):
        return {"n": self.n, "m": self.m, "hbar": self.hbar, "t0": self.t0}


@dataclass(frozen=True)
class Tile:
    index: int
    center: tuple
    half_widths: tuple
    epsilon: float
    profile_id: str = "smooth_bump"

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))
        object.__setattr__(self, "half_widths", tuple(float(h) for h in self.half_widths))
        if len(self.center) != len(self.half_widths):
            raise ConfigError("tile center and half_widths differ in dimension")
        if any(not h > 0 for h in self.half_widths) or not self.epsilon > 0:
            raise ConfigError(f"tile {self.index}: half-widths must be positive")

    @property
    def dim(self):
        return len(self.center)

    @property
    def volume(self):
        return math.prod(2.0 * h for h in self.half_widths)

    def contains(self, t, x, t0=0.0):
        """Boolean mask of spacetime points inside the closed support box."""
        x = np.atleast_2d(np.asarray(x, dtype=float))
        inside = np.abs(np.asarray(t, dtype=float) - t0) <= self.epsilon
        for axis, (c, h) in enumerate(zip(self.center, self.half_widths)):
            inside = inside & (np.abs(x[..., axis] - c) <= h)
        return inside

    def translated(self, shift):
        center = tuple(c + s for c, s in zip(self.center, shift))
        return Tile(self.index, center, self.half_widths, self.epsilon, self.profile_id)


def spatial_gap(a: Tile, b: Tile) -> float:
    """Minimum Euclidean distance between the spatial supports of two tiles."""
    sq = 0.0
    for ca, cb, ha, hb in zip(a.center, b.center, a.half_widths, b.half_widths):
        d = max(0.0, abs(ca - cb) - (ha + hb))
        sq += d * d
    return math.sqrt(sq)


def check_spacelike(a: Tile, b: Tile) -> bool:
    """True when every point of ``a`` is spacelike to every point of ``b``.

    Both tiles sit in the slab around the same ``t0``, so the largest time
    separation between their points is ``eps_a + eps_b``.
    """
    return spatial_gap(a, b) > a.epsilon + b.epsilon


@dataclass(frozen=True)
class TilingLayout:
    spec: SpacetimeSpec
    tiles: tuple
    corridor: float
    l_uv: float
    l_ir: float
    epsilon: float = field(default=0.0)

    @property
    def N(self):
        return len(self.tiles)

    def translated(self, shift):
        tiles = tuple(t.translated(shift) for t in self.tiles)
        return TilingLayout(self.spec, tiles, self.corridor, self.l_uv, self.l_ir, self.epsilon)

    def to_dict(self):
        d = self.spec.to_dict()
        d.update(
            epsilon=self.epsilon,
            corridor=self.corridor,
            tiles=[
                {"center": list(t.center), "half_widths": list(t.half_widths), "profile": t.profile_id}
                for t in self.tiles
            ],
        )
        return d

    @classmethod
    def from_dict(cls, d):
        spec = SpacetimeSpec(n=int(d["n"]), m=float(d["m"]), hbar=float(d.get("hbar", 1.0)), t0=float(d.get("t0", 0.0)))
        eps = float(d["epsilon"])
        tiles = [
            Tile(i, t["center"], t["half_widths"], eps, t.get("profile", "smooth_bump"))
            for i, t in enumerate(d["tiles"])
        ]
        return layout_from_tiles(spec, tiles, corridor=float(d.get("corridor", 0.0)))


def covariant_scales(layout) -> tuple:
    """``(l_uv, l_ir)``: smallest tile volume to the ``1/n`` and ``N**(1/n) * l_uv``."""
    tiles = layout.tiles if isinstance(layout, TilingLayout) else tuple(layout)
    if not tiles:
        raise ConfigError("cannot compute scales of an empty layout")
    n = tiles[0].dim
    l_uv = min(t.volume for t in tiles) ** (1.0 / n)
    return l_uv, len(tiles) ** (1.0 / n) * l_uv


def _overlapping_pairs(tiles):
    return [(a.index, b.index) for a, b in itertools.combinations(tiles, 2) if not check_spacelike(a, b)]


def layout_from_tiles(spec: SpacetimeSpec, tiles, corridor: float = 0.0) -> TilingLayout:
    """Validate a user-supplied tile list and wrap it as a layout.

    Raises :class:`CausalOverlapError` listing every offending index pair.
    """
    tiles = tuple(tiles)
    if not tiles:
        raise ConfigError("layout needs at least one tile")
    for t in tiles:
        if t.dim != spec.n:
            raise ConfigError(f"tile {t.index} has dimension {t.dim}, spacetime has n={spec.n}")
    bad = _overlapping_pairs(tiles)
    if bad:
        raise CausalOverlapError(
            "tiles are not pairwise spacelike: " + ", ".join(f"({i}, {j})" for i, j in bad), pairs=bad
        )
    l_uv, l_ir = covariant_scales(tiles)
    eps = max(t.epsilon for t in tiles)
    return TilingLayout(spec, tiles, float(corridor), l_uv, l_ir, eps)


def build_tiling(
    spec: SpacetimeSpec,
    tiles_per_axis: int,
    l_uv: float,
    epsilon: float,
    corridor: float,
    profile_id: str = "smooth_bump",
) -> TilingLayout:
    """Regular grid of cubic tiles of side ``l_uv`` separated by ``corridor``.

    The grid is centred on the spatial origin.
    """
    if int(tiles_per_axis) != tiles_per_axis or tiles_per_axis < 1:
        raise ConfigError(f"tiles_per_axis must be a positive integer, got {tiles_per_axis}")
    if not l_uv > 0:
        raise ConfigError(f"l_uv must be positive, got {l_uv}")
    if not epsilon > 0:
        raise ConfigError(f"epsilon must be positive, got {epsilon}")
    if not corridor > 2 * epsilon:
        raise CausalOverlapError(
            f"corridor {corridor} must exceed 2*epsilon = {2 * epsilon} for spacelike tiles"
        )
    spacing = l_uv + corridor
    offsets = [(i - (tiles_per_axis - 1) / 2.0) * spacing for i in range(tiles_per_axis)]
    half = (0.5 * l_uv,) * spec.n
    tiles = [
        Tile(k, center, half, epsilon, profile_id)
        for k, center in enumerate(itertools.product(offsets, repeat=spec.n))
    ]
    return layout_from_tiles(spec, tiles, corridor=corridor)
