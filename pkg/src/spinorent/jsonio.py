"""JSON encodings for complex matrices and spinors.

Complex scalars are ``[re, im]`` pairs.  Matrices are row-major, either
nested (a list of rows) or flat (``dim*dim`` pairs).
"""

from __future__ import annotations

import json
import math

import numpy as np

from .errors import InvalidArgumentError


def sig(x: float, digits: int = 12) -> float:
    """Round to ``digits`` significant digits for stable, readable output."""
    x = float(x)
    if x == 0.0 or not math.isfinite(x):
        return x + 0.0
    return float(f"{x:.{digits}g}") + 0.0


def _scalar(pair) -> complex:
    if isinstance(pair, (int, float)):
        return complex(pair)
    if not isinstance(pair, (list, tuple)) or len(pair) != 2:
        raise InvalidArgumentError(f"expected an [re, im] pair, got {pair!r}")
    return complex(float(pair[0]), float(pair[1]))


def complex_to_json(z, digits: int | None = None) -> list:
    z = complex(z)
    if digits is None:
        return [z.real + 0.0, z.imag + 0.0]
    return [sig(z.real, digits), sig(z.imag, digits)]


def vector_from_json(data, dim: int) -> np.ndarray:
    if not isinstance(data, (list, tuple)) or len(data) != dim:
        raise InvalidArgumentError(f"expected {dim} [re, im] pairs")
    return np.array([_scalar(p) for p in data], dtype=complex)


def vector_to_json(v, digits: int | None = None) -> list:
    return [complex_to_json(z, digits) for z in np.asarray(v).ravel()]


def matrix_from_json(data, dim: int | None = None) -> np.ndarray:
    if not isinstance(data, (list, tuple)) or not data:
        raise InvalidArgumentError("matrix must be a non-empty list")
    if isinstance(data[0], (list, tuple)) and data[0] and isinstance(data[0][0], (list, tuple)):
        rows = [[_scalar(p) for p in row] for row in data]
        m = np.array(rows, dtype=complex)
    else:
        flat = [_scalar(p) for p in data]
        n = int(round(math.sqrt(len(flat))))
        if n * n != len(flat):
            raise InvalidArgumentError(f"flat matrix has {len(flat)} entries, not a square")
        m = np.array(flat, dtype=complex).reshape(n, n)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvalidArgumentError(f"matrix is not square: shape {m.shape}")
    if dim is not None and m.shape[0] != dim:
        raise InvalidArgumentError(f"expected a {dim}x{dim} matrix, got {m.shape[0]}x{m.shape[1]}")
    return m


def matrix_to_json(m, digits: int | None = None) -> list:
    return [[complex_to_json(z, digits) for z in row] for row in np.asarray(m)]


def spinor_from_json(data) -> np.ndarray:
    """Parse ``{"components": [[re, im], x4]}``."""
    if not isinstance(data, dict) or "components" not in data:
        raise InvalidArgumentError('spinor JSON must be an object with a "components" key')
    return vector_from_json(data["components"], 4)


def spinor_to_json(psi, digits: int | None = None) -> dict:
    return {"components": vector_to_json(psi, digits)}


def load_json(path):
    with open(path, "r", encoding="utf-8") as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidArgumentError(f"{path}: invalid JSON ({exc})") from exc


def load_spinor(path) -> np.ndarray:
    return spinor_from_json(load_json(path))
