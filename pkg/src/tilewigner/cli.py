"""Command-line front end.

Usage::

    tilewigner <command> [config.yaml] [--set section.key=value ...] [--out DIR]

Commands: ``tile``, ``ccr``, ``covariance``, ``wigner``, ``negativity``,
``s-ordered``, ``symmetry`` and ``all``. Covariance and commutator matrices are
cached under ``$TILEWIGNER_CACHE`` (default ``~/.cache/tilewigner``), keyed by
a hash of every configuration field they depend on.

Exit codes: 0 success, 2 configuration or validation error, 3 numerical
domain error, 4 cost guard.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
import warnings
from pathlib import Path

import numpy as np
from filelock import FileLock

from . import __version__
from .config import load_config
from .errors import ConfigError, CostGuardError, NumericalDomainError, OrderingDomainError, TileWignerError
from .geometry import covariant_scales
from .io import config_hash, read_matrix, write_csv, write_curve_csv, write_json, write_matrix
from .modes import CovarianceMatrix, LocalModeSet, assemble_modes, symplectic_eigenvalues
from .propagator import FieldState, MomentumEngine
from .symmetry import invariance_check
from .wigner import CharacteristicFunction, PhaseGrid, marginals, negativity, wigner_gaussian, wigner_numeric

COMMANDS = ("tile", "ccr", "covariance", "wigner", "negativity", "s-ordered", "symmetry", "all")
MAX_PHASE_POINTS = 20_000_000
CACHE_ENV = "TILEWIGNER_CACHE"


def exit_code(exc):
    if isinstance(exc, ConfigError):
        return 2
    if isinstance(exc, CostGuardError):
        return 4
    if isinstance(exc, NumericalDomainError):
        return 3
    return 1


def _default_cache():
    return Path(os.environ.get(CACHE_ENV) or Path.home() / ".cache" / "tilewigner")


class Pipeline:
    """Lazily computed, cached stages for one configuration."""

    def __init__(self, cfg, out_dir, cache_dir=None):
        self.cfg = cfg
        self.out = Path(out_dir)
        self.cache = Path(cache_dir) if cache_dir else Path(cfg.raw.get("cache_dir") or _default_cache())
        self.artifacts = []
        self.timings = {}
        self.cache_hits = []
        self._modes = None
        self.mode_warnings = []
        self.key_base = {s: cfg.raw[s] for s in ("spacetime", "tiling", "quadrature")}

    # bookkeeping

    def emit(self, name):
        path = self.out / name
        if name not in self.artifacts:
            self.artifacts.append(name)
        return path

    def timed(self, label, fn, *args, **kwargs):
        t = time.perf_counter()
        out = fn(*args, **kwargs)
        self.timings[label] = self.timings.get(label, 0.0) + time.perf_counter() - t
        return out

    def _cached(self, label, extra, compute):
        """Return ``(matrix, meta)`` from the cache or compute and store it."""
        key = config_hash({"version": __version__, "label": label, "base": self.key_base, "extra": extra})
        entry = self.cache / key
        mpath, jpath = entry / "matrix.txt", entry / "meta.json"
        fp = self.cfg.grid.fingerprint
        self.cache.mkdir(parents=True, exist_ok=True)
        with FileLock(str(self.cache / ".lock")):
            if mpath.exists() and jpath.exists():
                try:
                    mat = read_matrix(mpath, fingerprint=fp, config=key)
                    meta = json.loads(jpath.read_text())
                    self.cache_hits.append(label)
                    return mat, meta
                except (ConfigError, ValueError, OSError):
                    pass
            mat, meta = compute()
            write_matrix(mat, mpath, label, fp, key)
            write_json(meta, jpath)
        return read_matrix(mpath), meta

    # stages

    @property
    def modes(self):
        if self._modes is None:
            c = self.cfg
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter("always")
                self._modes = self.timed("modes", assemble_modes, c.layout, c.profile, c.spec, c.grid)
            self.mode_warnings = sorted({str(x.message) for x in caught})
        return self._modes

    def _wightman(self, state):
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            w = MomentumEngine(self.cfg.spec, self.cfg.grid).wightman_matrix(self.modes.smearings, state=state)
        return w, sorted({str(x.message) for x in caught})

    def measured_commutator(self):
        def compute():
            w, warns = self.timed("ccr", self._wightman, None)
            e = (2.0 / self.cfg.spec.hbar) * w.imag
            return 0.5 * (e - e.T), {"warnings": warns}

        return self._cached("ccr", {}, compute)

    def sigma(self, state):
        gauss = state if state.is_gaussian else FieldState.vacuum()
        key_state = {"variant": "thermal", "beta": gauss.beta} if gauss.variant == "thermal" else {"variant": "vacuum"}

        def compute():
            w, warns = self.timed("covariance", self._wightman, gauss)
            return 0.5 * (w.real + w.real.T), {"warnings": warns}

        return self._cached("sigma", key_state, compute)

    def covariance(self, state):
        sig, meta = self.sigma(state)
        mean = np.zeros(sig.shape[0])
        if state.variant == "coherent":
            scale = math.sqrt(2.0 * self.cfg.spec.hbar)
            for k, a in enumerate(state.amplitudes):
                mean[2 * k], mean[2 * k + 1] = scale * a.real, scale * a.imag
        return CovarianceMatrix(sig, mean, state.tag, self.cfg.grid.fingerprint, self.modes.omega), meta

    def reduced(self, state):
        """Mode subset selected by ``output.modes`` with the matching state and covariance."""
        idx = [int(i) for i in self.cfg.output["modes"]]
        sub = LocalModeSet(tuple(self.modes.pairs[i] for i in idx), self.cfg.spec, None)
        coords = [2 * i + j for i in idx for j in (0, 1)]
        if state.variant == "coherent":
            state = FieldState.coherent([state.amplitudes[i] for i in idx])
        cov, meta = self.covariance(state)
        cov = CovarianceMatrix(cov.sigma[np.ix_(coords, coords)], cov.mean[coords], state.tag, cov.fingerprint, sub.omega)
        return sub, state, cov, meta

    def phase_grid(self, moments):
        nodes = int(self.cfg.output["phase_nodes"])
        dim = moments.shape[0]
        if nodes**dim > MAX_PHASE_POINTS:
            raise CostGuardError(f"phase grid of {nodes}^{dim} points exceeds {MAX_PHASE_POINTS}; select fewer modes")
        return PhaseGrid.auto(moments, nodes, float(self.cfg.output["phase_width"]))

    def chi_fn(self, sub, state, cov):
        vac = cov if state.is_gaussian else CovarianceMatrix(cov.sigma, np.zeros_like(cov.mean), "vacuum", cov.fingerprint, sub.omega)
        return CharacteristicFunction(sub, state, self.cfg.grid, cov=vac)

    def distribution(self, s=0.0, numeric=False):
        state = self.cfg.state
        sub, rstate, cov, meta = self.reduced(state)
        extra = {}
        if rstate.is_gaussian and not numeric:
            sigma_s = cov.sigma - 0.5 * s * self.cfg.spec.hbar * np.eye(cov.sigma.shape[0])
            if np.linalg.eigvalsh(sigma_s).min() <= 0:
                raise OrderingDomainError(f"s = {s} makes Sigma - (s hbar / 2) 1 indefinite for this state")
            pg = self.phase_grid(sigma_s + np.outer(cov.mean, cov.mean))
            dist = self.timed("wigner", wigner_gaussian, sub, rstate, pg, cov=cov, s=s)
            return dist, extra, meta
        chi = self.chi_fn(sub, rstate, cov)
        pg = self.phase_grid(chi.moment_matrix() - 0.5 * s * self.cfg.spec.hbar * np.eye(cov.sigma.shape[0]))
        dist = self.timed("wigner_numeric", wigner_numeric, sub, rstate, pg, chi_fn=chi, s=s, eta_nodes=self.cfg.output["eta_nodes"])
        if rstate.is_gaussian:
            ref = self.timed("wigner", wigner_gaussian, sub, rstate, pg, cov=cov, s=s)
            peak = float(np.max(ref.values))
            mask = np.abs(ref.values) > 1e-6 * peak
            extra["max_relative_deviation"] = float(np.max(np.abs(dist.values - ref.values)[mask]) / peak)
        else:
            extra["mode_overlap"] = 0.5 * float(np.trace(chi.B @ np.linalg.inv(chi.M)))
        return dist, extra, meta

    # commands

    def cmd_tile(self):
        lay = self.cfg.layout
        l_uv, l_ir = covariant_scales(lay)
        write_json(lay.to_dict(), self.emit("layout.json"))
        report = {"N": lay.N, "n": lay.spec.n, "l_uv": l_uv, "l_ir": l_ir, "corridor": lay.corridor, "epsilon": lay.epsilon}
        write_json(report, self.emit("scales.json"))
        return report

    def cmd_ccr(self):
        e, meta = self.measured_commutator()
        omega = self.modes.omega
        resid = e - omega
        n = self.modes.N
        block = np.kron(np.eye(n, dtype=bool), np.ones((2, 2), dtype=bool))
        report = {
            "N": n,
            "max_abs_residual": float(np.max(np.abs(resid))),
            "within_mode_residual": float(np.max(np.abs(resid[block]))),
            "cross_mode_max": float(np.max(np.abs(e[~block]))) if n > 1 else 0.0,
            "tolerance": float(self.cfg.output["ccr_tolerance"]),
            "grid_fingerprint": self.cfg.grid.fingerprint,
            "warnings": sorted(set(meta["warnings"]) | set(self.mode_warnings)),
        }
        if report["max_abs_residual"] > report["tolerance"]:
            report["warn"] = f"max |E - Omega| = {report['max_abs_residual']!r} exceeds tolerance {report['tolerance']!r}"
        write_matrix(e, self.emit("ccr_measured.txt"), "measured_commutator", self.cfg.grid.fingerprint, self.cfg.hash())
        write_matrix(omega, self.emit("omega.txt"), "omega", self.cfg.grid.fingerprint, self.cfg.hash())
        write_json(report, self.emit("ccr.json"))
        return report

    def cmd_covariance(self):
        state = self.cfg.state
        if not state.is_gaussian:
            state = FieldState.vacuum()
        cov, meta = self.covariance(state)
        nu = symplectic_eigenvalues(cov.sigma, cov.omega)
        report = {
            "state": self.cfg.state.tag,
            "covariance_state": state.tag,
            "symplectic_eigenvalues": nu.tolist(),
            "min_symplectic_eigenvalue": float(nu.min()),
            "uncertainty_ok": bool(nu.min() >= 0.5 * self.cfg.spec.hbar - 1e-9),
            "mean": cov.mean.tolist(),
            "grid_fingerprint": cov.fingerprint,
            "warnings": sorted(set(meta["warnings"]) | set(self.mode_warnings)),
        }
        write_matrix(cov.sigma, self.emit("sigma.txt"), "sigma", cov.fingerprint, self.cfg.hash())
        write_matrix(cov.omega, self.emit("omega.txt"), "omega", cov.fingerprint, self.cfg.hash())
        write_json(report, self.emit("covariance.json"))
        return report

    def _write_distribution(self, dist, stem, extra):
        write_csv(dist, self.emit(f"{stem}.csv"))
        for k in range(dist.grid.N):
            for axis, label in (("position", "x"), ("momentum", "p")):
                coords = dist.grid.axes()[2 * k + (axis == "momentum")]
                write_curve_csv(coords, marginals(dist, k, axis), self.emit(f"{stem}_marginal_{label}{k + 1}.csv"), (f"{label}{k + 1}", "density"))
        summary = dist.summary()
        summary.update(extra)
        summary["modes"] = [int(i) for i in self.cfg.output["modes"]]
        write_json(summary, self.emit(f"{stem}.json"))
        return summary

    def cmd_wigner(self, numeric=False):
        dist, extra, meta = self.distribution(0.0, numeric)
        extra["warnings"] = meta["warnings"]
        return self._write_distribution(dist, "wigner", extra)

    def cmd_negativity(self, numeric=False):
        dist, extra, _ = self.distribution(0.0, numeric)
        vol, vmin = negativity(dist)
        report = {"negativity_volume": vol, "min_value": vmin, "normalization": dist.normalization, "state": dist.state_tag, "method": dist.method}
        report.update(extra)
        write_json(report, self.emit("negativity.json"))
        return report

    def cmd_s_ordered(self, numeric=False):
        out = []
        for i, s in enumerate(self.cfg.output["s"]):
            dist, extra, _ = self.distribution(float(s), numeric or not self.cfg.state.is_gaussian)
            out.append(self._write_distribution(dist, f"s_ordered_{i}", extra))
        return out

    def cmd_symmetry(self):
        state = self.cfg.state
        if state.variant not in ("vacuum", "thermal"):
            raise ConfigError("symmetry checks are defined for vacuum and thermal states")
        cov, _ = self.covariance(state)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            residual = self.timed("symmetry", invariance_check, self.modes, self.cfg.element, state, self.cfg.grid, cov=cov)
        report = {
            "element": self.cfg.element.to_dict(),
            "state": state.tag,
            "residual": residual,
            "grid_fingerprint": self.cfg.grid.fingerprint,
            "warnings": sorted({str(x.message) for x in caught}),
        }
        write_json(report, self.emit("symmetry.json"))
        return report

    def run(self, command, numeric=False):
        self.out.mkdir(parents=True, exist_ok=True)
        results = {}
        gaussian_only = ("symmetry",)
        todo = ("tile", "ccr", "covariance", "wigner", "negativity", "s-ordered", "symmetry") if command == "all" else (command,)
        for cmd in todo:
            if command == "all" and cmd in gaussian_only and self.cfg.state.variant not in ("vacuum", "thermal"):
                continue
            fn = getattr(self, "cmd_" + cmd.replace("-", "_"))
            results[cmd] = fn(numeric=numeric) if cmd in ("wigner", "negativity", "s-ordered") else fn()
        manifest = {
            "tool_version": __version__,
            "command": command,
            "config_hash": self.cfg.hash(),
            "grid_fingerprints": {"momentum": self.cfg.grid.fingerprint},
            "artifacts": list(self.artifacts),
            "config": self.cfg.to_dict(),
        }
        write_json(manifest, self.out / "manifest.json")
        write_json({"seconds": self.timings, "cache_hits": self.cache_hits}, self.out / "timings.json")
        return results


def build_parser():
    parser = argparse.ArgumentParser(prog="tilewigner", description="Local-mode Wigner functions of a free scalar field.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("config", nargs="?", help="YAML or JSON configuration file")
        p.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE", help="override a config key, e.g. quadrature.k_max=40")
        p.add_argument("--out", default="tilewigner-out", help="output directory")
        p.add_argument("--cache-dir", default=None, help=f"cache directory (default ${CACHE_ENV} or ~/.cache/tilewigner)")
        if name in ("wigner", "negativity", "s-ordered", "all"):
            p.add_argument("--numeric", action="store_true", help="use the direct quadrature path (cross-checked against the closed form for Gaussian states)")
    return parser


def _error_payload(exc):
    item = {"code": getattr(exc, "code", type(exc).__name__), "type": type(exc).__name__, "message": str(exc)}
    pairs = getattr(exc, "pairs", None)
    if pairs:
        item["pairs"] = [list(p) for p in pairs]
    return {"status": "error", "exit_code": exit_code(exc), "errors": [item]}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, args.overrides)
        pipe = Pipeline(cfg, args.out, args.cache_dir)
        results = pipe.run(args.command, numeric=getattr(args, "numeric", False))
    except (TileWignerError, OSError) as exc:
        if isinstance(exc, OSError) and not isinstance(exc, TileWignerError):
            exc = ConfigError(str(exc))
        print(json.dumps(_error_payload(exc), sort_keys=True))
        return exit_code(exc)
    print(json.dumps({"status": "ok", "command": args.command, "out": str(args.out), "results": results}, sort_keys=True, default=str))
    return 0


if __name__ == "__main__":
    sys.exit(main())
