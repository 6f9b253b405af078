"""Floating-point verification of the Gamma-function inequality chain.

The chain shows, for every dimension ``n`` and ``s`` with ``n > 2s``::

    A_n(s) = 2s G((n+2s)/2) / G((n-2s+2)/2) * [G(n/2)/G(n)]**(2s/n) < pi**s

(``G`` is the Gamma function), by proving ``A_{n+2} < A_n`` through the
auxiliary sequence ``B_n >= 1`` and its ratio ``g(n) = B_{n+2}/B_n > 1``,
and checking the base cases n = 1, 2, 3 directly. Every link is evaluated
on a grid and reported with its smallest slack.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

# Lanczos approximation, g = 7, 9 terms.
_LANCZOS_G = 7.0
_LANCZOS = np.array([
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
])
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def _lanczos_log(x: np.ndarray) -> np.ndarray:
    # Valid for x >= 0.5.
    z = x - 1.0
    a = np.full_like(z, _LANCZOS[0])
    for i in range(1, len(_LANCZOS)):
        a = a + _LANCZOS[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * np.log(t) - t + np.log(a)


def log_gamma(x):
    """``ln G(x)`` for ``x > 0``."""
    arr = np.asarray(x, dtype=float)
    if np.any(arr <= 0):
        raise ValueError("log_gamma requires x > 0")
    small = arr < 0.5
    safe = np.where(small, 1.0 - arr, arr)
    out = _lanczos_log(safe)
    # Reflection for x < 1/2: G(x) = pi / (sin(pi x) G(1-x)).
    sin_term = np.log(np.sin(np.pi * np.where(small, arr, 0.25)))
    out = np.where(small, math.log(math.pi) - sin_term - out, out)
    return float(out) if out.ndim == 0 else out


def gamma_fn(x):
    """Gamma function for ``x > 0`` (Lanczos, relative error ~1e-15).

    Direct product form below 140, exp of :func:`log_gamma` above.
    """
    arr = np.asarray(x, dtype=float)
    if np.any(arr <= 0):
        raise ValueError("gamma_fn requires x > 0")
    small = arr < 0.5
    safe = np.where(small, 1.0 - arr, arr)
    z = safe - 1.0
    a = np.full_like(z, _LANCZOS[0])
    for i in range(1, len(_LANCZOS)):
        a = a + _LANCZOS[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    with np.errstate(over="ignore"):
        direct = math.sqrt(2.0 * math.pi) * t ** (z + 0.5) * np.exp(-t) * a
    big = safe > 140.0
    val = np.where(big, np.exp(_lanczos_log(np.where(big, safe, 1.0))), direct)
    val = np.where(small, math.pi / (np.sin(np.pi * arr) * val), val)
    return float(val) if val.ndim == 0 else val


# ---------------------------------------------------------------------------
# Quantities of the chain


def _require(n, s):
    if not n > 2 * s:
        raise ValueError(f"need n > 2s, got n={n}, s={s}")


def log_A_value(n, s):
    _require(n, s)
    return (math.log(2 * s) + log_gamma((n + 2 * s) / 2) - log_gamma((n - 2 * s + 2) / 2)
            + (2 * s / n) * (log_gamma(n / 2) - log_gamma(n)))


def A_value(n, s) -> float:
    return math.exp(log_A_value(n, s))


def A_ratio(n, s) -> float:
    """Closed form of ``A_{n+2} / A_n``."""
    inner = log_gamma(n) - log_gamma(n / 2) - (n / 2) * math.log(2 * (n + 1))
    return (n + 2 * s) / (n - 2 * s + 2) * math.exp(4 * s / (n * (n + 2)) * inner)


def log_f(n, s):
    """``ln f(s)`` with ``f(s) = [(n+2s)/(n-2s+2)]**(n(n+2)/(4s))``."""
    s = np.asarray(s, dtype=float)
    return n * (n + 2) / (4 * s) * np.log((n + 2 * s) / (n - 2 * s + 2))


def log_arb_lhs(n, s):
    """Log of the left side of the raised ratio inequality ``(... ) < 1``."""
    return log_f(n, s) + log_gamma(n) - log_gamma(n / 2) - (n / 2) * math.log(2 * (n + 1))


def log_B_value(n) -> float:
    if n < 2:
        raise ValueError(f"B_n needs n >= 2, got {n}")
    bracket = math.log(2 * (n + 1)) + (n + 2) / 2 * (math.log(n) - math.log(n + 2))
    return (math.log(n + 2) - math.log(n + 4) + log_gamma(n / 2) - log_gamma(n)
            + (n / 2) * bracket)


def B_value(n) -> float:
    return math.exp(log_B_value(n))


def B_value_direct(n) -> float:
    """Straight evaluation without logarithms (overflows past n ~ 170)."""
    if n < 2:
        raise ValueError(f"B_n needs n >= 2, got {n}")
    bracket = 2 * (n + 1) * (n / (n + 2)) ** ((n + 2) / 2)
    return (n + 2) * gamma_fn(n / 2) / ((n + 4) * gamma_fn(n)) * bracket ** (n / 2)


def g_ratio(n) -> float:
    """Closed form of ``B_{n+2} / B_n``."""
    n = float(n)
    inner = ((n + 3) * (n + 2) ** 2 / ((n + 1) * (n + 4) ** 2)
             * ((n + 2) ** 2 / (n * n + 4 * n)) ** (n / 2))
    return (n + 4) ** 2 / ((n + 2) * (n + 6)) * inner ** ((n + 2) / 2)


def log_derivative_g(x):
    """Exact logarithmic derivative of ``g`` at real ``x >= 2``."""
    x = np.asarray(x, dtype=float)
    return (-8 / ((x + 2) * (x + 4) * (x + 6))
            + 0.5 * (np.log1p(2 / ((x + 1) * (x + 4))) - np.log1p(2 / (x + 2)))
            + (x + 1) / 2 * np.log1p(4 / (x * x + 4 * x))
            - (x + 2) / ((x + 1) * (x + 3)))


def log_derivative_bound(x):
    """Upper bound of :func:`log_derivative_g` from the series estimates of ln(1+t)."""
    x = np.asarray(x, dtype=float)
    v = x * x + 4 * x
    return (-8 / ((x + 2) * (x + 4) * (x + 6)) + 1 / ((x + 1) * (x + 4))
            - (x + 1) / (x + 2) ** 2
            + (x + 1) / 2 * (4 / v - 8 / v**2 + 64 / (3 * v**3))
            - (x + 2) / ((x + 1) * (x + 3)))


# Numerators of -bound, in x and in y = x - 2 (highest degree first).
CERT_NUMERATOR_X = (18, 219, 910, 1236, -968, -4080, -5024, -4608, -2304)
CERT_NUMERATOR_Y = (18, 507, 5992, 38616, 147472, 338112, 443968, 285504, 50688)


def cert_denominator_x(x):
    x = np.asarray(x, dtype=float)
    return 3 * x**3 * (x + 1) * (x + 2) ** 2 * (x + 3) * (x + 4) ** 3 * (x + 6)


# ---------------------------------------------------------------------------
# Reports


@dataclass
class IneqReport:
    """Outcome of one link of the chain.

    ``min_margin`` is the smallest slack (positive means the inequality
    holds). For equality checks ``kind == "equality"`` and the margin is
    ``tolerance - |deviation|``.
    """

    name: str
    domain_checked: str
    min_margin: float
    holds: bool
    worst_point: dict = field(default_factory=dict)
    kind: str = "strict"

    def line(self) -> str:
        status = "PASS" if self.holds else "FAIL"
        return (f"{status}  {self.name:<38s} margin={self.min_margin:.6e}  "
                f"worst={self.worst_point}  [{self.domain_checked}]")


WEAK_TOL = 1e-12


def _report(name, domain, margins, points, kind="strict") -> IneqReport:
    """Reduce margins to a report; ``kind="weak"`` accepts ``margin >= -WEAK_TOL``."""
    margins = np.asarray(margins, dtype=float)
    k = int(np.argmin(margins))
    m = float(margins[k])
    holds = m >= -WEAK_TOL if kind in ("weak", "monotone") else m > 0
    return IneqReport(name, domain, m, bool(holds), dict(points[k]), kind)


def s_grid(s_step: float, include_one: bool = False) -> np.ndarray:
    """Grid ``s_step, 2 s_step, ... < 1`` (optionally with ``s = 1``)."""
    count = int(round(1.0 / s_step))
    grid = np.arange(1, count) * s_step
    grid = grid[grid < 1.0 - 1e-12]
    if include_one:
        grid = np.append(grid, 1.0)
    return grid


def f_monotonicity_check(n: int, s_values) -> IneqReport:
    """``f(s)`` nondecreasing on ``s_values``; margin = smallest relative increment."""
    s_values = np.sort(np.asarray(s_values, dtype=float))
    lf = log_f(n, s_values)
    # Increments of ln f, so huge exponents stay finite.
    inc = np.diff(lf)
    k = int(np.argmin(inc))
    return IneqReport(
        name=f"f(s) increasing, n={n}",
        domain_checked=f"s in [{s_values[0]:g}, {s_values[-1]:g}], {s_values.size} pts",
        min_margin=float(inc[k]),
        holds=bool(inc[k] > 0),
        worst_point={"n": n, "s": float(s_values[k])},
        kind="monotone",
    )


def f_log_derivative_lower_bound(n: int, s_values) -> IneqReport:
    """The closing rational lower bound ``2n + 8s - 8s**2 >= 0`` (times a positive factor)."""
    s_values = np.asarray(s_values, dtype=float)
    val = (2 * n + 8 * s_values - 8 * s_values**2) / (
        s_values**2 * (n - 2 * s_values + 2) * (n + 2 * s_values))
    pts = [{"n": n, "s": float(s)} for s in s_values]
    return _report(f"f log-derivative bound >= 0, n={n}", "s grid", val, pts)


def verify_chain(n_max: int = 20, s_step: float = 0.01, b_max: int = 60) -> list[IneqReport]:
    """Evaluate every link of the chain on an ``(n, s)`` grid."""
    if n_max < 3:
        raise ValueError("n_max must be >= 3")
    grid = s_grid(s_step)
    grid_with_one = s_grid(s_step, include_one=True)
    reports = []
    dom = f"n<={n_max}, s step {s_step:g}"

    # (i) A_{n+2} < A_n, checked on the values and on the closed-form ratio.
    margins, ratio_margins, pts = [], [], []
    for n in range(1, n_max + 1):
        for s in grid:
            if n <= 2 * s:
                continue
            margins.append(log_A_value(n, s) - log_A_value(n + 2, s))
            ratio_margins.append(1.0 - A_ratio(n, s))
            pts.append({"n": n, "s": float(s)})
    reports.append(_report("A_{n+2} < A_n", dom, margins, pts))
    reports.append(_report("closed-form A_{n+2}/A_n < 1", dom, ratio_margins, pts))

    # (ii) A_n < pi^s.
    margins, pts = [], []
    for n in range(1, n_max + 1):
        for s in grid:
            if n <= 2 * s:
                continue
            margins.append(s * math.log(math.pi) - log_A_value(n, s))
            pts.append({"n": n, "s": float(s)})
    reports.append(_report("A_n < pi^s", dom, margins, pts))

    # Raised form at arbitrary s, and its reduction to s = 1.
    margins, red_margins, pts = [], [], []
    for n in range(1, n_max + 1):
        at_one = float(log_arb_lhs(n, 1.0))
        for s in grid_with_one:
            val = float(log_arb_lhs(n, s))
            margins.append(-val)
            red_margins.append(at_one - val)
            pts.append({"n": n, "s": float(s)})
    reports.append(_report("raised ratio inequality < 1", dom, margins, pts))
    reports.append(_report("raised ratio maximal at s = 1", dom, red_margins, pts,
                           kind="monotone"))

    # f(s) monotone, with the rational lower bound of its log-derivative.
    for n in range(1, n_max + 1):
        reports.append(f_monotonicity_check(n, grid_with_one))
    for n in range(1, n_max + 1):
        reports.append(f_log_derivative_lower_bound(n, grid_with_one))

    # (iii) n = 1 base case, s < 1/2, plus the Gamma ordering used for it.
    s1 = grid[grid < 0.5]
    lhs = 2 * s1 * gamma_fn((1 + 2 * s1) / 2) / gamma_fn((3 - 2 * s1) / 2)
    pts = [{"n": 1, "s": float(s)} for s in s1]
    reports.append(_report("n=1 base inequality", "s < 1/2", 1.0 - lhs, pts))
    rewritten = ((1 - (1 - 2 * s1) ** 2 / (1 + 2 * s1))
                 * gamma_fn((3 + 2 * s1) / 2) / gamma_fn((5 - 2 * s1) / 2))
    reports.append(_report("n=1 rewritten form identity", "s < 1/2",
                           1e-12 - np.abs(rewritten - lhs), pts, kind="equality"))
    order = np.minimum(gamma_fn(2.0) - gamma_fn((3 + 2 * s1) / 2),
                       gamma_fn((5 - 2 * s1) / 2) - gamma_fn(2.0))
    reports.append(_report("n=1 Gamma ordering", "s < 1/2", order, pts, kind="weak"))

    # (iv) n = 2 base case and its two-range estimate split at s = 0.7.
    g1 = gamma_fn(1 + grid)
    lhs2 = 2 * g1**2 * np.sin(np.pi * grid)
    rhs2 = np.pi ** (1 + grid) * (1 - grid)
    pts = [{"n": 2, "s": float(s)} for s in grid]
    reports.append(_report("n=2 reflected form", "s in (0,1)", rhs2 - lhs2, pts))
    direct = np.pi**grid - 2 * grid * g1 / gamma_fn(2 - grid)
    reports.append(_report("n=2 original form", "s in (0,1)", direct, pts))
    reports.append(_report("Gamma(1+s) < 1", "s in (0,1)", 1 - g1, pts))
    # The two ranges overlap at s = 0.7, where both estimates must hold.
    low = grid <= 0.7 + 1e-12
    hi = grid >= 0.7 - 1e-12
    lo_pts = [p for p, k in zip(pts, low) if k]
    hi_pts = [p for p, k in zip(pts, hi) if k]
    reports.append(_report("n=2 split s<=0.7: lhs < 2", "s in (0,0.7]", 2 - lhs2[low], lo_pts))
    reports.append(_report("n=2 split s<=0.7: 2 < rhs", "s in (0,0.7]", rhs2[low] - 2, lo_pts))
    sh = grid[hi]
    chain = [2 * np.sin(np.pi * (1 - sh)) - lhs2[hi],
             2 * np.pi * (1 - sh) - 2 * np.sin(np.pi * (1 - sh)),
             rhs2[hi] - 2 * np.pi * (1 - sh)]
    reports.append(_report("n=2 split s>=0.7: chain", "s in [0.7,1)",
                           np.min(chain, axis=0), hi_pts))

    # (v) Euler reflection identity.
    z = grid
    resid = np.abs(gamma_fn(z) * gamma_fn(1 - z) * np.sin(np.pi * z) - np.pi)
    pts = [{"z": float(v)} for v in z]
    reports.append(_report("Euler reflection residual < 1e-11", "z in (0,1)",
                           1e-11 - resid, pts, kind="equality"))

    # (vi) n = 3 base case and its estimate chain.
    lhs3 = 2 * grid * gamma_fn((3 + 2 * grid) / 2)
    rhs3 = (4 * np.pi) ** (2 * grid / 3) * gamma_fn((5 - 2 * grid) / 2)
    pts = [{"n": 3, "s": float(s)} for s in grid]
    reports.append(_report("n=3 base inequality", "s in (0,1)", rhs3 - lhs3, pts))
    g32, g52 = gamma_fn(1.5), gamma_fn(2.5)
    chain3 = [2 * grid * g52 - lhs3,
              (4 * np.pi) ** (2 * grid / 3) * g32 - 3 * grid * g32,
              rhs3 - (4 * np.pi) ** (2 * grid / 3) * g32]
    reports.append(_report("n=3 estimate chain", "s in (0,1)", np.min(chain3, axis=0), pts))
    reports.append(_report("2s G(5/2) = 3s G(3/2)", "identity",
                           [1e-12 - abs(2 * g52 - 3 * g32)], [{}], kind="equality"))

    # (vii) Bernoulli-type bounds and the ln(1+t) sandwich.
    ns = np.arange(2, b_max + 1, dtype=float)
    pts = [{"n": int(n)} for n in ns]
    lhs_b1 = (1 + 4 / (ns**2 + 4 * ns)) ** (ns / 2)
    reports.append(_report("Bernoulli bound 1", f"n=2..{b_max}",
                           lhs_b1 - (ns + 6) / (ns + 4), pts, kind="weak"))
    base = (ns + 3) * (ns + 2) ** 2 * (ns + 6) / ((ns + 1) * (ns + 4) ** 3)
    lower = 1 - (ns**2 + 2 * ns - 4) * (ns + 2) / ((ns + 1) * (ns + 4) ** 3)
    reports.append(_report("Bernoulli bound 2", f"n=2..{b_max}",
                           base ** ((ns + 2) / 2) - lower, pts, kind="weak"))
    ident = np.abs(base - (1 - 2 * (ns**2 + 2 * ns - 4) / ((ns + 1) * (ns + 4) ** 3)))
    reports.append(_report("Bernoulli base rewrite identity", f"n=2..{b_max}",
                           1e-12 - ident, pts, kind="equality"))
    tt = np.linspace(0.001, 0.999, 999)
    ln = np.log1p(tt)
    sandwich = np.min([tt - (tt - tt**2 / 2 + tt**3 / 3),
                       tt - tt**2 / 2 + tt**3 / 3 - ln,
                       ln - (tt - tt**2 / 2)], axis=0)
    reports.append(_report("ln(1+t) series sandwich", "t in (0,1)", sandwich,
                           [{"t": float(t)} for t in tt]))

    # (viii) B_n >= 1, B_2 = 1, B_3 >= 1.05, g(n) > 1 and decreasing, derivative certificate.
    reports.append(_report("B_2 = 1", "n=2", [1e-12 - abs(B_value(2) - 1.0)], [{"n": 2}],
                           kind="equality"))
    reports.append(_report("B_3 >= 1.05", "n=3", [B_value(3) - 1.05], [{"n": 3}]))
    bvals = np.array([B_value(int(n)) for n in ns])
    reports.append(_report("B_n >= 1", f"n=2..{b_max}", bvals - 1.0, pts, kind="weak"))
    gv = np.array([g_ratio(n) for n in ns])
    reports.append(_report("g(n) > 1", f"n=2..{b_max}", gv - 1.0, pts))
    reports.append(_report("g(n) decreasing", f"n=2..{b_max}", gv[:-1] - gv[1:], pts[:-1]))
    xs = np.linspace(2.0, 102.0, 2001)
    xpts = [{"x": float(v)} for v in xs]
    reports.append(_report("log-derivative D < 0", "x in [2,102]",
                           -log_derivative_g(xs), xpts))
    reports.append(_report("D <= series bound", "x in [2,102]",
                           log_derivative_bound(xs) - log_derivative_g(xs) + 1e-300, xpts,
                           kind="weak"))
    reports.append(_report("certificate coefficients (y form) > 0", "coefficients",
                           np.array(CERT_NUMERATOR_Y, dtype=float),
                           [{"power": 8 - k} for k in range(9)]))
    ys = xs - 2.0
    reports.append(_report("certificate numerator (y form) > 0", "y in [0,100]",
                           np.polyval(CERT_NUMERATOR_Y, ys), [{"y": float(v)} for v in ys]))
    reports.append(_report("certificate numerator (x form) > 0", "x in [2,102]",
                           np.polyval(CERT_NUMERATOR_X, xs), xpts))
    rel = np.abs(-np.polyval(CERT_NUMERATOR_X, xs) / cert_denominator_x(xs)
                 - log_derivative_bound(xs)) / np.abs(log_derivative_bound(xs))
    reports.append(_report("certificate equals series bound", "x in [2,102]",
                           1e-10 - rel, xpts, kind="equality"))
    return reports


def chain_holds(reports: list[IneqReport]) -> bool:
    return all(r.holds for r in reports)
