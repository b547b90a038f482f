"""Serialization of matrices, distributions and reports.

Every float is written so that it reads back to the same double: matrices
and CSV files use 17 significant digits, JSON uses Python's shortest
round-trip ``repr``. Writers never embed timestamps, so identical inputs give
identical bytes.
"""

from __future__ import annotations

import hashlib
import json
import os
from pathlib import Path

import numpy as np

from .errors import ConfigError

__all__ = ["canonical_json", "config_hash", "read_matrix", "write_csv", "write_json", "write_matrix"]

FLOAT_FMT = "%.17g"


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def canonical_json(obj) -> str:
    return json.dumps(_plain(obj), sort_keys=True, separators=(",", ":"), allow_nan=True)


def config_hash(obj) -> str:
    return hashlib.sha256(canonical_json(obj).encode()).hexdigest()[:20]


def _atomic_write(path, text):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + f".tmp{os.getpid()}")
    with open(tmp, "w", newline="\n") as fh:
        fh.write(text)
    os.replace(tmp, path)


def write_json(obj, path):
    _atomic_write(path, json.dumps(_plain(obj), sort_keys=True, indent=2) + "\n")


def write_matrix(matrix, path, name="matrix", fingerprint="", config=""):
    """Row-major text matrix with a small ``#`` header."""
    m = np.atleast_2d(np.asarray(matrix, dtype=float))
    lines = [
        "# tilewigner matrix",
        f"# name: {name}",
        f"# shape: {m.shape[0]} {m.shape[1]}",
        f"# grid: {fingerprint}",
        f"# config: {config}",
    ]
    lines += [" ".join(FLOAT_FMT % v for v in row) for row in m]
    _atomic_write(path, "\n".join(lines) + "\n")


def read_matrix(path, fingerprint=None, config=None):
    """Inverse of :func:`write_matrix`; checks the header when ``fingerprint``/``config`` are given."""
    header, rows = {}, []
    with open(path) as fh:
        for line in fh:
            if line.startswith("#"):
                key, _, val = line[1:].partition(":")
                header[key.strip()] = val.strip()
            elif line.strip():
                rows.append([float(v) for v in line.split()])
    if fingerprint is not None and header.get("grid") != fingerprint:
        raise ConfigError(f"{path}: grid fingerprint {header.get('grid')!r} does not match {fingerprint!r}")
    if config is not None and header.get("config") != config:
        raise ConfigError(f"{path}: config hash {header.get('config')!r} does not match {config!r}")
    m = np.array(rows, dtype=float)
    shape = tuple(int(v) for v in header.get("shape", "").split()) or m.shape
    return m.reshape(shape)


def write_csv(dist, path):
    """One row per phase-space point: ``x_1,p_1,...,value``."""
    names = []
    for k in range(dist.grid.N):
        names += [f"x{k + 1}", f"p{k + 1}"]
    pts = dist.grid.points().reshape(-1, dist.grid.dim)
    vals = dist.values.reshape(-1)
    data = np.column_stack([pts, vals])
    body = "\n".join(",".join(FLOAT_FMT % v for v in row) for row in data)
    _atomic_write(path, ",".join(names + ["value"]) + "\n" + body + "\n")


def write_curve_csv(x, y, path, names=("x", "value")):
    body = "\n".join(f"{FLOAT_FMT % a},{FLOAT_FMT % b}" for a, b in zip(x, y))
    _atomic_write(path, ",".join(names) + "\n" + body + "\n")
