"""Thresholds, phase sweeps, the sharp Sobolev constant and bubble test functions."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .field_transforms import analyze
from .fractional_form import check_order, eigen_powers
from .functionals import ProblemParams, critical_exponent, rayleigh_I
from .inequality import gamma_fn, log_gamma
from .minimize import SolverOptions, minimize_quotient
from .spectral_domain import DomainSpec, SpectralData, build_box_basis, gauss_legendre_unit


class ResolutionError(ValueError):
    """Raised when the grid/truncation cannot resolve a requested bubble width."""


def epsilon_threshold(q: float, s: float, data: SpectralData) -> float:
    """Local bifurcation threshold ``(lambda_1**s / (q - 2))**(1/(2s))``.

    Returns ``math.inf`` for ``q <= 2`` (the constant is then always a minimizer).
    """
    check_order(s)
    if q <= 2:
        return math.inf
    lam_s = float(eigen_powers([data.lambda1], s)[0])
    return (lam_s / (q - 2.0)) ** (1.0 / (2.0 * s))


# ---------------------------------------------------------------------------
# Global threshold by bisection


@dataclass
class Probe:
    eps: float
    constant: bool
    value: float
    converged: bool


@dataclass
class BigEEstimate:
    q: float
    value: float
    lower: float
    upper: float
    eps_threshold_local: float
    at_cap: bool = False
    probes: list[Probe] = field(default_factory=list)

    @property
    def failed_probes(self) -> list[Probe]:
        return [pr for pr in self.probes if not pr.converged]


def probe_constancy(eps: float, template: ProblemParams, data: SpectralData,
                    opts: SolverOptions) -> Probe:
    res = minimize_quotient(template.with_(eps=eps), data, opts)
    return Probe(eps, res.is_constant, res.value, res.converged)


def estimate_big_E(q: float, template: ProblemParams, data: SpectralData, tol: float,
                   opts: SolverOptions | None = None,
                   eps_max: float | None = None) -> BigEEstimate:
    """Bisect for the largest ``eps`` at which the constant is the global minimizer.

    The bracket starts at ``(0, eps_s(q)]``. If ``eps_max`` is given and lies
    below ``eps_s(q)`` the bracket is capped there; a constant verdict at the
    cap is reported with ``at_cap=True`` (the true value is ``>= eps_max``).
    """
    opts = opts or SolverOptions()
    template = template.with_(q=q)
    if not q > 2:
        raise ValueError(f"q must exceed 2, got {q}")
    es = epsilon_threshold(q, template.s, data)
    upper = es if eps_max is None else min(es, eps_max)
    probes: list[Probe] = []
    if eps_max is not None and eps_max < es:
        pr = probe_constancy(eps_max, template, data, opts)
        probes.append(pr)
        if pr.constant:
            return BigEEstimate(q, eps_max, eps_max, eps_max, es, True, probes)
    lo, hi = 0.0, upper
    while hi - lo >= tol:
        mid = 0.5 * (lo + hi)
        pr = probe_constancy(mid, template, data, opts)
        probes.append(pr)
        if pr.constant:
            lo = mid
        else:
            hi = mid
    return BigEEstimate(q, 0.5 * (lo + hi), lo, hi, es, False, probes)


# ---------------------------------------------------------------------------
# Phase sweep


AUTO_EPS_FACTORS = (0.25, 0.5, 0.75, 1.0, 1.25, 1.5)


@dataclass
class PhaseCell:
    q: float
    eps: float
    constant_global: bool
    min_value: float
    eps_threshold_local: float
    converged: bool = True
    error: str = ""

    def as_row(self) -> dict:
        return asdict(self)


def _cell(args) -> PhaseCell:
    q, eps, template, data, opts = args
    es = epsilon_threshold(q, template.s, data)
    try:
        res = minimize_quotient(template.with_(q=q, eps=eps), data, opts)
    except (ValueError, FloatingPointError) as exc:
        return PhaseCell(q, eps, False, math.nan, es, False, str(exc))
    return PhaseCell(q, eps, res.is_constant, res.value, es, res.converged)


def eps_grid_for(q: float, eps_grid, s: float, data: SpectralData) -> list[float]:
    """Resolve an eps grid: ``"auto"`` means fixed multiples of ``eps_s(q)``."""
    if isinstance(eps_grid, str):
        if eps_grid != "auto":
            raise ValueError(f"unknown eps grid {eps_grid!r}")
        es = epsilon_threshold(q, s, data)
        return [f * es for f in AUTO_EPS_FACTORS]
    return [float(e) for e in eps_grid]


def phase_sweep(q_grid, eps_grid, template: ProblemParams, data: SpectralData,
                opts: SolverOptions | None = None, workers: int = 1) -> list[PhaseCell]:
    """Constancy verdict on every ``(q, eps)`` cell, row-major in ``q``."""
    opts = opts or SolverOptions()
    tasks = []
    for q in q_grid:
        if not q > 2:
            raise ValueError(f"phase sweep needs q > 2, got {q}")
        for eps in eps_grid_for(q, eps_grid, template.s, data):
            tasks.append((float(q), float(eps), template, data, opts))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_cell, tasks))
    return [_cell(t) for t in tasks]


def staircase_violations(cells: list[PhaseCell]) -> list[tuple[PhaseCell, PhaseCell]]:
    """Pairs (nonconstant cell, constant cell up-right of it).

    Non-global-minimality of the constant propagates to larger ``q`` and
    larger ``eps``, so a consistent sweep has no such pair.
    """
    bad = []
    for a in cells:
        if a.constant_global:
            continue
        for b in cells:
            if b.constant_global and b.q >= a.q and b.eps >= a.eps:
                bad.append((a, b))
    return bad


# ---------------------------------------------------------------------------
# Sharp constant and the cube comparison


def _check_dim(n: int, s: float):
    check_order(s)
    if not n > 2 * s:
        raise ValueError(f"need n > 2s, got n={n}, s={s}")


def sobolev_sharp_constant(n: int, s: float) -> float:
    """Best constant of the fractional Sobolev inequality on R^n."""
    _check_dim(n, s)
    log_val = (2 * s * math.log(2) + s * math.log(math.pi)
               + log_gamma(n / 2 + s) - log_gamma(n / 2 - s)
               + (2 * s / n) * (log_gamma(n / 2) - log_gamma(n)))
    return math.exp(log_val)


def reduced_sharp_constant(n: int, s: float) -> float:
    """``pi**s G((n+2s)/2)/G((n-2s)/2) [G(n/2)/G(n)]**(2s/n)``, equal to ``2**(-2s) S``."""
    _check_dim(n, s)
    return (math.pi**s * gamma_fn((n + 2 * s) / 2) / gamma_fn((n - 2 * s) / 2)
            * (gamma_fn(n / 2) / gamma_fn(n)) ** (2 * s / n))


def constant_value_at_critical(n: int, s: float) -> float:
    """``I[1] = eps_s(2*_s)**(2s) = pi**(2s) (n - 2s) / (4s)`` on the unit cube."""
    _check_dim(n, s)
    return math.pi ** (2 * s) * (n - 2 * s) / (4 * s)


@dataclass
class CubeGap:
    n: int
    s: float
    lhs: float
    rhs: float
    holds: bool

    @property
    def margin(self) -> float:
        return self.lhs - self.rhs


def cube_gap_check(n: int, s: float) -> CubeGap:
    lhs = constant_value_at_critical(n, s)
    rhs = 2 ** (-2 * s) * sobolev_sharp_constant(n, s)
    return CubeGap(n, s, lhs, rhs, lhs > rhs)


# ---------------------------------------------------------------------------
# Bubble test functions


@dataclass(frozen=True)
class BubbleParams:
    """Width ``a`` and center of ``(a**2 + |x - center|**2)**((2s - n)/2)``.

    ``center=None`` puts the bubble at the origin corner of the box.
    """

    a: float
    center: tuple[float, ...] | None = None

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError(f"bubble width must be positive, got {self.a}")


def bubble_samples(bp: BubbleParams, s: float, nodes: np.ndarray) -> np.ndarray:
    n = nodes.shape[1]
    center = np.zeros(n) if bp.center is None else np.asarray(bp.center, dtype=float)
    r2 = np.sum((nodes - center) ** 2, axis=1)
    return (bp.a**2 + r2) ** ((2 * s - n) / 2)


def _max_gap(t: np.ndarray) -> float:
    return float(np.max(np.diff(np.concatenate(([0.0], np.sort(t), [1.0])))))


def bubble_resolution(a: float) -> tuple[int, int]:
    """Smallest ``(N, M)`` per axis with ``N >= 4/a``, ``M >= 4N`` and node gaps ``<= a/8``."""
    big_n = max(1, math.ceil(4.0 / a - 1e-12))
    m = 4 * big_n
    while _max_gap(gauss_legendre_unit(m)[0]) > a / 8:
        m += 1
    return big_n, m


def box_data_for_bubble(a: float, n: int) -> SpectralData:
    big_n, m = bubble_resolution(a)
    return build_box_basis(DomainSpec(n, big_n, m))


def check_bubble_resolution(a: float, data: SpectralData) -> None:
    if data.multi_indices is None:
        raise ResolutionError("bubble quotients need box data with known modes per axis")
    big_n = int(np.max(data.multi_indices))
    if big_n < 4.0 / a - 1e-9:
        raise ResolutionError(f"need at least {math.ceil(4 / a)} modes per axis for a={a}, "
                              f"have {big_n}")
    axis = np.unique(data.nodes[:, 0])
    gap = _max_gap(axis)
    if gap > a / 8 * (1 + 1e-12):
        raise ResolutionError(f"quadrature gap {gap:.3g} exceeds a/8 = {a / 8:.3g}")


def bubble_quotient(bp: BubbleParams, s: float, data: SpectralData,
                    eps: float | None = None) -> float:
    """Rayleigh quotient of the projected bubble at ``q = 2*_s``.

    ``eps`` defaults to the local threshold ``eps_s(2*_s)``.
    """
    n = data.dimension
    _check_dim(n, s)
    if bp.center is not None:
        c = np.asarray(bp.center, dtype=float)
        if c.shape != (n,) or np.any(c < 0) or np.any(c > 1):
            raise ValueError("bubble center must lie in the closed unit box")
    check_bubble_resolution(bp.a, data)
    q = critical_exponent(n, s)
    if eps is None:
        eps = epsilon_threshold(q, s, data)
    p = ProblemParams(s, q, eps, n)
    coeffs = analyze(bubble_samples(bp, s, data.nodes), data)
    return rayleigh_I(coeffs, p, data)


def bubble_ladder(widths, s: float, n: int = 1) -> list[tuple[float, float]]:
    """Bubble quotients at matching resolution for each width."""
    out = []
    for a in widths:
        data = box_data_for_bubble(a, n)
        out.append((float(a), bubble_quotient(BubbleParams(a), s, data)))
    return out
