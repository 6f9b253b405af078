"""The scaled Rayleigh quotient, the auxiliary functional and their differentials.

For ``u = sum_j c_j phi_j`` on a unit-measure domain::

    I(u) = (<A_s u, u> + eps**(2s) ||u||_2**2) / ||u||_q**2
    J(u) = <A_s u, u> + eps**(2s) ||u||_2**2 - eps**(2s) ||u||_q**2

where ``<A_s u, u> = sum_j lambda_j**s c_j**2``. ``I(1) = eps**(2s)`` and
``J = ||u||_q**2 (I(u) - I(1))``, so the constant is a global minimizer of
``I`` exactly when ``J >= 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .field_transforms import analyze, lq_norm, synthesize
from .fractional_form import check_order, eigen_powers, quadratic_form
from .spectral_domain import SpectralData


class DomainError(ValueError):
    """Raised when a base function is outside the domain of a formula."""


def critical_exponent(n: int, s: float) -> float:
    """``2n / (n - 2s)`` for ``n > 2s``; ``inf`` otherwise."""
    if n > 2 * s:
        return 2.0 * n / (n - 2.0 * s)
    return math.inf


@dataclass(frozen=True)
class ProblemParams:
    """Fractional order ``s``, exponent ``q`` and dilation ``eps``.

    ``dimension`` only enters through the critical exponent check.
    """

    s: float
    q: float
    eps: float
    dimension: int = 1

    def __post_init__(self):
        check_order(self.s)
        if not self.eps > 0:
            raise ValueError(f"eps must be positive, got {self.eps}")
        if not (self.q >= 1 and math.isfinite(self.q)):
            raise ValueError(f"q must be finite and >= 1, got {self.q}")
        crit = self.crit_exponent
        if self.q > crit * (1 + 1e-14):
            raise ValueError(f"q={self.q} exceeds the critical exponent {crit}")

    @property
    def crit_exponent(self) -> float:
        return critical_exponent(self.dimension, self.s)

    @property
    def eps2s(self) -> float:
        return self.eps ** (2 * self.s)

    def with_(self, **changes) -> "ProblemParams":
        return replace(self, **changes)


def signed_power(u: np.ndarray, p: float) -> np.ndarray:
    """``|u|**(p-1) * u``, finite at zeros for any ``p >= 1``."""
    return np.sign(u) * np.abs(u) ** (p - 1.0)


def rayleigh_I(c, p: ProblemParams, data: SpectralData):
    """Scaled Rayleigh quotient; batched over leading axes of ``c``."""
    c = np.asarray(c, dtype=float)
    u = synthesize(c, data)
    lq = lq_norm(u, p.q, data)
    if np.any(np.asarray(lq) == 0):
        raise ValueError("Rayleigh quotient undefined for the zero function")
    num = quadratic_form(c, p.s, data) + p.eps2s * np.sum(c * c, axis=-1)
    val = num / np.asarray(lq) ** 2
    return float(val) if np.ndim(val) == 0 else val


def auxiliary_J(c, p: ProblemParams, data: SpectralData):
    c = np.asarray(c, dtype=float)
    u = synthesize(c, data)
    lq = np.asarray(lq_norm(u, p.q, data))
    val = quadratic_form(c, p.s, data) + p.eps2s * (np.sum(c * c, axis=-1) - lq**2)
    return float(val) if np.ndim(val) == 0 else val


def grad_rayleigh(c, p: ProblemParams, data: SpectralData) -> np.ndarray:
    """Gradient of :func:`rayleigh_I` with respect to the coefficients.

    Uses ``|u|**(q-2) u`` so that sign-changing iterates are admissible.
    """
    c = np.asarray(c, dtype=float)
    u = synthesize(c, data)
    lq = lq_norm(u, p.q, data)
    if lq == 0:
        raise ValueError("gradient undefined for the zero function")
    denom = lq * lq
    lam_s = eigen_powers(data.eigenvalues, p.s)
    value = (np.dot(lam_s, c * c) + p.eps2s * np.dot(c, c)) / denom
    # Normalize before the power to avoid overflow for large q.
    proj = analyze(signed_power(u / lq, p.q), data) * lq
    return (2.0 / denom) * ((lam_s + p.eps2s) * c - value * proj)


def d2J_at_one(j: int, p: ProblemParams, data: SpectralData) -> float:
    """Second differential of J at the constant along ``phi_j``, ``j >= 1``."""
    if j < 1:
        raise ValueError("the mean direction j = 0 is neutral; need j >= 1")
    lam_s = float(eigen_powers(data.eigenvalues[j : j + 1], p.s)[0])
    return 2.0 * (lam_s - (p.q - 2.0) * p.eps2s)


def d2J_general(c_base, h, p: ProblemParams, data: SpectralData) -> float:
    """Second differential ``D^2 J[u; h, h]`` evaluated by quadrature."""
    c_base = np.asarray(c_base, dtype=float)
    h = np.asarray(h, dtype=float)
    u = synthesize(c_base, data)
    if p.q < 3 and np.min(u) <= 0:
        raise DomainError("base function must be strictly positive on the grid when q < 3")
    hg = synthesize(h, data)
    w = data.weights
    lq = lq_norm(u, p.q, data)
    first = np.dot(w, signed_power(u, p.q) * hg)
    second = np.dot(w, np.abs(u) ** (p.q - 2.0) * hg * hg)
    return float(
        2.0 * quadratic_form(h, p.s, data)
        + 2.0 * p.eps2s * np.dot(h, h)
        + 2.0 * (p.q - 2.0) * p.eps2s * lq ** (2.0 * (1.0 - p.q)) * first**2
        - 2.0 * (p.q - 1.0) * p.eps2s * lq ** (2.0 - p.q) * second
    )


def phi1_cubed_integral(data: SpectralData) -> float:
    """Quadrature value of the integral of ``phi_1**3``."""
    if data.n_modes < 2:
        raise ValueError("need at least two modes")
    phi1 = data.eigenfunctions[data.first_nonzero_index]
    return float(np.dot(data.weights, phi1**3))


def d3J_at_one_phi1(p: ProblemParams, data: SpectralData) -> float:
    """Third differential of J at the constant along ``phi_1``."""
    return -2.0 * (p.q - 1.0) * (p.q - 2.0) * p.eps2s * phi1_cubed_integral(data)
