"""Spectral Neumann fractional quadratic form and the H^s norm."""

from __future__ import annotations

import numpy as np

from .spectral_domain import SpectralData


def check_order(s: float) -> float:
    s = float(s)
    if not 0.0 < s <= 1.0:
        raise ValueError(f"fractional order s must lie in (0, 1], got {s}")
    return s


def eigen_powers(eigenvalues, s: float) -> np.ndarray:
    """``lambda_j**s`` with the zero mode mapped to 0 (no ``0**s`` evaluation)."""
    lam = np.asarray(eigenvalues, dtype=float)
    out = np.zeros_like(lam)
    pos = lam > 0
    out[pos] = np.exp(s * np.log(lam[pos]))
    return out


def quadratic_form(c, s: float, data: SpectralData):
    """``sum_j lambda_j**s c_j**2``; batched over leading axes of ``c``."""
    s = check_order(s)
    c = np.asarray(c, dtype=float)
    if c.shape[-1] != data.n_modes:
        raise ValueError(f"coefficient vector has length {c.shape[-1]}, expected {data.n_modes}")
    val = (c * c) @ eigen_powers(data.eigenvalues, s)
    return float(val) if np.ndim(val) == 0 else val


def hs_norm_sq(c, s: float, data: SpectralData):
    c = np.asarray(c, dtype=float)
    val = quadratic_form(c, s, data) + np.sum(c * c, axis=-1)
    return float(val) if np.ndim(val) == 0 else val
