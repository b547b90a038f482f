"""Run configuration: one structured-text file per run, flags only override keys."""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass
from pathlib import Path

import yaml

from .errors import ConfigError
from .geometry import SpacetimeSpec, Tile, build_tiling, layout_from_tiles
from .io import config_hash
from .propagator import FieldState
from .quadrature import MomentumGrid
from .smearing import BumpProfile
from .symmetry import PoincareElement

__all__ = ["DEFAULTS", "RunConfig", "apply_override", "load_config"]

DEFAULTS = {
    "spacetime": {"n": 1, "m": 1.0, "hbar": 1.0, "t0": 0.0},
    "tiling": {"tiles_per_axis": 4, "l_uv": 1.0, "epsilon": 0.05, "corridor": 0.3, "profile": "smooth_bump", "sigma": 0.3},
    "quadrature": {"kind": "cartesian", "k_max": 80.0, "panels": 64, "nodes": 64},
    "state": {"variant": "vacuum"},
    "output": {
        "modes": [0],
        "phase_nodes": 81,
        "phase_width": 5.0,
        "s": [0.0, -1.0],
        "eta_nodes": None,
        "ccr_tolerance": 1e-6,
    },
    "symmetry": {"translation": [0.3, 0.7], "rapidity": 0.5},
}

_KNOWN = {
    "spacetime": {"n", "m", "hbar", "t0", "xi"},
    "tiling": {"tiles_per_axis", "l_uv", "epsilon", "corridor", "profile", "sigma", "r_cut", "tiles"},
    "quadrature": {"kind", "k_max", "panels", "nodes", "polar", "azimuthal"},
    "state": {"variant", "beta", "amplitudes", "profile"},
    "output": {"modes", "phase_nodes", "phase_width", "s", "eta_nodes", "ccr_tolerance"},
    "symmetry": {"translation", "rapidity", "boost_axis", "rotation_axis", "rotation_angle"},
}


def _merge(base, extra):
    out = copy.deepcopy(base)
    for k, v in extra.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict):
            out[k] = _merge(out[k], v)
        else:
            out[k] = v
    return out


def apply_override(raw: dict, assignment: str) -> dict:
    """Apply ``section.key=value`` (value parsed as YAML) to a raw config dict."""
    key, sep, value = assignment.partition("=")
    if not sep or not key:
        raise ConfigError(f"override {assignment!r} must look like section.key=value")
    parts = key.strip().split(".")
    node = raw
    for p in parts[:-1]:
        node = node.setdefault(p, {})
        if not isinstance(node, dict):
            raise ConfigError(f"override {assignment!r} descends into a non-mapping")
    node[parts[-1]] = yaml.safe_load(value)
    return raw


def load_config(path=None, overrides=()) -> "RunConfig":
    raw = {}
    if path is not None:
        text = Path(path).read_text()
        try:
            raw = json.loads(text) if str(path).endswith(".json") else yaml.safe_load(text)
        except (ValueError, yaml.YAMLError) as exc:
            raise ConfigError(f"cannot parse config {path}: {exc}") from exc
        raw = raw or {}
        if not isinstance(raw, dict):
            raise ConfigError(f"config {path} must be a mapping")
    for o in overrides:
        apply_override(raw, o)
    return RunConfig.from_raw(raw)


@dataclass(frozen=True, eq=False)
class RunConfig:
    """Validated configuration; every domain object is built eagerly so errors surface before any work."""

    raw: dict
    spec: SpacetimeSpec
    layout: object
    profile: BumpProfile
    grid: MomentumGrid
    state: FieldState
    element: PoincareElement

    @classmethod
    def from_raw(cls, raw):
        for section, keys in raw.items():
            if section == "cache_dir":
                continue
            if section not in _KNOWN:
                raise ConfigError(f"unknown config section {section!r}")
            if not isinstance(keys, dict):
                raise ConfigError(f"config section {section!r} must be a mapping")
            unknown = set(keys) - _KNOWN[section]
            if unknown:
                raise ConfigError(f"unknown keys in {section!r}: {sorted(unknown)}")
        cfg = _merge(DEFAULTS, raw)
        if "tiles" in raw.get("tiling", {}):
            for k in ("tiles_per_axis",):
                cfg["tiling"].pop(k, None)
        if cfg["spacetime"]["n"] == 3 and "symmetry" not in raw:
            cfg["symmetry"] = {"translation": [0.3, 0.7, 0.0, 0.0], "rapidity": 0.5, "boost_axis": [1.0, 0.0, 0.0]}
        try:
            spec = SpacetimeSpec(**{k: (int(v) if k == "n" else float(v)) for k, v in cfg["spacetime"].items()})
            til = cfg["tiling"]
            profile = BumpProfile(til["profile"], float(til["sigma"]), til.get("r_cut"))
            if "tiles" in til:
                eps = float(til["epsilon"])
                tiles = [
                    Tile(i, t["center"], t.get("half_widths", [0.5 * float(til["l_uv"])] * spec.n), eps, til["profile"])
                    for i, t in enumerate(til["tiles"])
                ]
                layout = layout_from_tiles(spec, tiles, corridor=float(til["corridor"]))
            else:
                layout = build_tiling(
                    spec, til["tiles_per_axis"], float(til["l_uv"]), float(til["epsilon"]), float(til["corridor"]), til["profile"]
                )
            q = cfg["quadrature"]
            if q["kind"] == "cartesian":
                grid = MomentumGrid.cartesian(spec.n, float(q["k_max"]), int(q["panels"]), int(q["nodes"]))
            elif q["kind"] == "spherical":
                grid = MomentumGrid.spherical(float(q["k_max"]), int(q["panels"]), int(q["nodes"]), int(q.get("polar", 32)), int(q.get("azimuthal", 64)))
            else:
                raise ConfigError(f"unknown quadrature kind {q['kind']!r}")
            state = FieldState.from_dict(cfg["state"])
            element = PoincareElement.from_dict(cfg["symmetry"], spec.n)
        except (KeyError, TypeError) as exc:
            raise ConfigError(f"malformed configuration: {exc!r}") from exc
        if grid.n != spec.n:
            raise ConfigError("quadrature grid dimension differs from spacetime dimension")
        if element.n != spec.n:
            raise ConfigError("symmetry element dimension differs from spacetime dimension")
        if state.variant == "coherent" and len(state.amplitudes) != layout.N:
            raise ConfigError(f"coherent state needs {layout.N} amplitudes, got {len(state.amplitudes)}")
        if state.variant == "one_particle" and state.profile.n != spec.n:
            raise ConfigError("one-particle profile dimension differs from spacetime dimension")
        modes = cfg["output"]["modes"]
        if not modes or any(not 0 <= int(i) < layout.N for i in modes) or len(set(modes)) != len(modes):
            raise ConfigError(f"output.modes must be distinct indices in [0, {layout.N})")
        for s in cfg["output"]["s"]:
            if not -1.0 <= float(s) <= 1.0:
                raise ConfigError(f"s values must lie in [-1, 1], got {s}")
        return cls(cfg, spec, layout, profile, grid, state, element)

    @property
    def output(self):
        return self.raw["output"]

    def hash(self, *sections):
        """Hash of the named sections (all physics sections by default)."""
        sections = sections or ("spacetime", "tiling", "quadrature", "state", "output", "symmetry")
        return config_hash({s: self.raw[s] for s in sections})

    def to_dict(self):
        return copy.deepcopy({k: v for k, v in self.raw.items() if k != "cache_dir"})
