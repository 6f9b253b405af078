"""Coefficient space <-> grid space, L_q norms and pointwise operations.

Coefficient vectors are plain arrays aligned with ``data.eigenvalues``;
grid functions are arrays aligned with ``data.weights``. Both accept a
leading batch axis where noted.
"""

from __future__ import annotations

import numpy as np

from .spectral_domain import SpectralData


def _check_len(arr: np.ndarray, expected: int, what: str) -> None:
    if arr.shape[-1] != expected:
        raise ValueError(f"{what} has length {arr.shape[-1]}, expected {expected}")


def synthesize(c, data: SpectralData) -> np.ndarray:
    """Grid values of ``sum_j c_j phi_j``. Batched over leading axes of ``c``."""
    c = np.asarray(c, dtype=float)
    _check_len(c, data.n_modes, "coefficient vector")
    return c @ data.eigenfunctions


def analyze(g, data: SpectralData) -> np.ndarray:
    """Quadrature projection ``c_j = <g, phi_j>`` onto the retained modes."""
    g = np.asarray(g, dtype=float)
    _check_len(g, data.n_nodes, "grid function")
    return (g * data.weights) @ data.eigenfunctions.T


def inner(f, g, data: SpectralData) -> float:
    """Quadrature inner product of two grid functions."""
    return float(np.dot(data.weights, np.asarray(f) * np.asarray(g)))


def lq_norm(g, q: float, data: SpectralData) -> np.ndarray | float:
    """Discrete L_q norm ``(sum_i w_i |g_i|**q)**(1/q)``; batched over leading axes."""
    if not q >= 1:
        raise ValueError(f"q must be >= 1, got {q}")
    if not np.isfinite(q):
        raise ValueError("q must be finite")
    g = np.asarray(g, dtype=float)
    _check_len(g, data.n_nodes, "grid function")
    # Scale by the max to keep |g|**q finite for large q.
    amax = np.max(np.abs(g), axis=-1)
    safe = np.where(amax > 0, amax, 1.0)
    ratio = np.abs(g) / np.expand_dims(safe, -1)
    val = amax * (ratio**q @ data.weights) ** (1.0 / q)
    return float(val) if np.ndim(val) == 0 else val


def abs_substitute(g) -> np.ndarray:
    return np.abs(np.asarray(g, dtype=float))


def abs_project(c, data: SpectralData) -> np.ndarray:
    """Coefficients of ``|u|`` re-projected onto the truncated basis."""
    return analyze(abs_substitute(synthesize(c, data)), data)


def mean_split(c) -> tuple[float, np.ndarray]:
    """Split ``c`` into its mean (``c_0``, unit measure) and mean-free part."""
    c = np.asarray(c, dtype=float)
    hat = c.copy()
    hat[..., 0] = 0.0
    return c[..., 0], hat


def mean_free_fraction(c) -> float:
    """``||hat c|| / ||c||``; zero for constants."""
    c = np.asarray(c, dtype=float)
    total = np.linalg.norm(c)
    if total == 0:
        raise ValueError("zero coefficient vector")
    return float(np.linalg.norm(c[1:]) / total)
