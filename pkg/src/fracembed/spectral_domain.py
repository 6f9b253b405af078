"""Neumann-Laplacian spectral data on unit-measure domains.

A :class:`SpectralData` object is the discrete stand-in for a domain: the
eigenvalues of the Neumann Laplacian, the eigenfunctions sampled on a
quadrature grid, and the quadrature itself (weights summing to one).

Unit boxes ``(0, 1)^n`` are built from tensor-product cosines. Any other
domain enters through a spectral-data JSON file; a Ritz generator for
triangles is included so that an asymmetric sample can be produced.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from pathlib import Path

import numpy as np
from numpy.polynomial import legendre

FORMAT_NAME = "fracembed-spectral-data"
FORMAT_VERSION = 1

ORTHONORMALITY_TOL = 1e-10
WEIGHT_SUM_TOL = 1e-12
OVERSAMPLING = 4
# Cosines are not polynomials; small grids need a floor to stay orthonormal to ~1e-15.
MIN_NODES_PER_AXIS = 24

MAX_GRID_NODES = 1 << 22
MAX_MATRIX_ENTRIES = 60_000_000


class ConfigurationError(ValueError):
    """Raised for a domain/resolution request outside the supported limits."""


class SpectralDataError(ValueError):
    """Raised when spectral data violates one of its invariants.

    The failed invariant is available as :attr:`invariant`.
    """

    def __init__(self, invariant: str, message: str = ""):
        self.invariant = invariant
        super().__init__(f"{invariant}: {message}" if message else invariant)


class DomainKind(str, Enum):
    UNIT_BOX = "unit_box"
    EXTERNAL = "external"


@dataclass(frozen=True)
class DomainSpec:
    """Resolution request for a domain.

    Parameters
    ----------
    dimension : int
        Space dimension ``n >= 1``.
    modes_per_axis : int
        Highest cosine index ``N`` kept on each axis (``N + 1`` modes per axis).
    quadrature_nodes_per_axis : int, optional
        Gauss-Legendre nodes per axis. Defaults to ``max(4 * N, 24)``.
    kind : DomainKind
        Only ``UNIT_BOX`` can be built; external domains are loaded from file.
    """

    dimension: int
    modes_per_axis: int
    quadrature_nodes_per_axis: int | None = None
    kind: DomainKind = DomainKind.UNIT_BOX

    @property
    def nodes_per_axis(self) -> int:
        if self.quadrature_nodes_per_axis is not None:
            return self.quadrature_nodes_per_axis
        return max(OVERSAMPLING * self.modes_per_axis, MIN_NODES_PER_AXIS)

    def validate(self) -> None:
        if self.kind != DomainKind.UNIT_BOX:
            raise ConfigurationError("only unit boxes can be built; load external data from file")
        if self.dimension < 1:
            raise ConfigurationError(f"dimension must be >= 1, got {self.dimension}")
        if self.modes_per_axis < 1:
            raise ConfigurationError(f"modes_per_axis must be >= 1, got {self.modes_per_axis}")
        m = self.nodes_per_axis
        if m < OVERSAMPLING * self.modes_per_axis:
            raise ConfigurationError(
                f"quadrature_nodes_per_axis={m} violates M >= {OVERSAMPLING}*N "
                f"(N={self.modes_per_axis})"
            )
        n_nodes = m**self.dimension
        n_modes = (self.modes_per_axis + 1) ** self.dimension
        if n_nodes > MAX_GRID_NODES or n_nodes * n_modes > MAX_MATRIX_ENTRIES:
            raise ConfigurationError(
                f"resolution too large: {n_modes} modes x {n_nodes} nodes"
            )


@dataclass(frozen=True, eq=False)
class SpectralData:
    """Eigenpairs of the Neumann Laplacian sampled on a quadrature grid.

    ``eigenfunctions[j]`` holds the samples of the j-th eigenfunction at
    ``nodes``; row 0 is the constant 1. Arrays are read-only.
    """

    eigenvalues: np.ndarray
    eigenfunctions: np.ndarray
    nodes: np.ndarray
    weights: np.ndarray
    multi_indices: np.ndarray | None = None
    name: str = ""
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        if nodes.ndim == 1:
            nodes = nodes[:, None]
        arrays = {
            "eigenvalues": np.asarray(self.eigenvalues, dtype=float),
            "eigenfunctions": np.atleast_2d(np.asarray(self.eigenfunctions, dtype=float)),
            "nodes": nodes,
            "weights": np.asarray(self.weights, dtype=float),
        }
        if self.multi_indices is not None:
            arrays["multi_indices"] = np.asarray(self.multi_indices, dtype=int)
        for key, arr in arrays.items():
            arr = arr.copy()
            arr.setflags(write=False)
            object.__setattr__(self, key, arr)

    @property
    def n_modes(self) -> int:
        return self.eigenvalues.shape[0]

    @property
    def n_nodes(self) -> int:
        return self.weights.shape[0]

    @property
    def dimension(self) -> int:
        return self.nodes.shape[1]

    @property
    def first_nonzero_index(self) -> int:
        idx = np.flatnonzero(self.eigenvalues > 0)
        if idx.size == 0:
            raise SpectralDataError("no_nonzero_eigenvalue", "need at least two modes")
        return int(idx[0])

    @property
    def lambda1(self) -> float:
        """First nonzero eigenvalue."""
        return float(self.eigenvalues[self.first_nonzero_index])

    def truncate(self, n_modes: int) -> "SpectralData":
        """Keep only the first ``n_modes`` modes (same quadrature)."""
        if not 1 <= n_modes <= self.n_modes:
            raise ConfigurationError(f"cannot truncate {self.n_modes} modes to {n_modes}")
        mi = None if self.multi_indices is None else self.multi_indices[:n_modes]
        return SpectralData(
            self.eigenvalues[:n_modes],
            self.eigenfunctions[:n_modes],
            self.nodes,
            self.weights,
            mi,
            self.name,
            dict(self.metadata),
        )


def gauss_legendre_unit(m: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre rule with ``m`` nodes rescaled to (0, 1)."""
    x, w = legendre.leggauss(m)
    return 0.5 * (x + 1.0), 0.5 * w


def _cosine_mode(k: int, t: np.ndarray) -> np.ndarray:
    if k == 0:
        return np.ones_like(t)
    return np.sqrt(2.0) * np.cos(k * np.pi * t)


def build_box_basis(spec: DomainSpec) -> SpectralData:
    """Tensor-product Neumann cosine basis on the unit box.

    Modes are all multi-indices ``0 <= k_i <= N`` with eigenvalue
    ``pi**2 * |k|**2``, sorted by eigenvalue with lexicographic tie-breaks.
    The quadrature is the tensor Gauss-Legendre rule on ``(0, 1)^n``.
    """
    spec.validate()
    n, big_n, m = spec.dimension, spec.modes_per_axis, spec.nodes_per_axis

    t, w1 = gauss_legendre_unit(m)
    axis_vals = np.array([_cosine_mode(k, t) for k in range(big_n + 1)])

    indices = sorted(
        itertools.product(range(big_n + 1), repeat=n),
        key=lambda k: (sum(ki * ki for ki in k), k),
    )
    k_arr = np.array(indices, dtype=int)
    eigenvalues = np.pi**2 * np.sum(k_arr**2, axis=1).astype(float)

    grids = np.meshgrid(*([t] * n), indexing="ij")
    nodes = np.stack([g.ravel() for g in grids], axis=1)
    wgrids = np.meshgrid(*([w1] * n), indexing="ij")
    weights = np.prod(np.stack([g.ravel() for g in wgrids], axis=1), axis=1)

    phi = np.empty((len(indices), m**n))
    for row, k in enumerate(indices):
        val = axis_vals[k[0]]
        for ki in k[1:]:
            val = np.multiply.outer(val, axis_vals[ki])
        phi[row] = np.ravel(val)
    phi[0] = 1.0

    return SpectralData(
        eigenvalues,
        phi,
        nodes,
        weights,
        k_arr,
        name=f"unit_box_n{n}_N{big_n}_M{m}",
        metadata={"kind": DomainKind.UNIT_BOX.value, "modes_per_axis": big_n,
                  "quadrature_nodes_per_axis": m},
    )


def gram_matrix(data: SpectralData) -> np.ndarray:
    phi = data.eigenfunctions
    return (phi * data.weights) @ phi.T


def check_orthonormality(data: SpectralData) -> float:
    """Largest deviation of the quadrature Gram matrix from the identity."""
    gram = gram_matrix(data)
    return float(np.max(np.abs(gram - np.eye(gram.shape[0]))))


def validate_spectral_data(data: SpectralData, tol: float = ORTHONORMALITY_TOL) -> None:
    """Raise :class:`SpectralDataError` naming the first failed invariant."""
    lam, phi, w = data.eigenvalues, data.eigenfunctions, data.weights
    if lam.ndim != 1 or phi.ndim != 2 or w.ndim != 1:
        raise SpectralDataError("schema", "bad array ranks")
    if phi.shape != (lam.size, w.size) or data.nodes.shape[0] != w.size:
        raise SpectralDataError(
            "shape_mismatch",
            f"eigenvalues {lam.shape}, eigenfunctions {phi.shape}, "
            f"nodes {data.nodes.shape}, weights {w.shape}",
        )
    if lam.size == 0:
        raise SpectralDataError("schema", "no modes")
    if not (np.all(np.isfinite(lam)) and np.all(np.isfinite(phi)) and np.all(np.isfinite(w))):
        raise SpectralDataError("non_finite")
    if abs(float(np.sum(w)) - 1.0) > WEIGHT_SUM_TOL:
        raise SpectralDataError("weights_sum", f"weights sum to {np.sum(w)!r}")
    if lam[0] != 0.0:
        raise SpectralDataError("lambda0_nonzero", f"lambda_0 = {lam[0]!r}")
    if np.any(lam < 0):
        raise SpectralDataError("negative_eigenvalue")
    if np.any(np.diff(lam) < 0):
        raise SpectralDataError("eigenvalues_not_sorted")
    if np.max(np.abs(phi[0] - 1.0)) > tol:
        raise SpectralDataError("constant_mode", "row 0 must be identically 1")
    dev = check_orthonormality(data)
    if dev > tol:
        raise SpectralDataError("not_orthonormal", f"max Gram deviation {dev:.3e}")


def to_dict(data: SpectralData) -> dict:
    doc = {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "name": data.name,
        "dimension": data.dimension,
        "eigenvalues": data.eigenvalues.tolist(),
        "quadrature_nodes": data.nodes.tolist(),
        "quadrature_weights": data.weights.tolist(),
        "eigenfunctions": data.eigenfunctions.tolist(),
    }
    if data.multi_indices is not None:
        doc["multi_indices"] = data.multi_indices.tolist()
    if data.metadata:
        doc["metadata"] = data.metadata
    return doc


def from_dict(doc: dict, validate: bool = True) -> SpectralData:
    required = ("dimension", "eigenvalues", "quadrature_nodes", "quadrature_weights",
                "eigenfunctions")
    if not isinstance(doc, dict):
        raise SpectralDataError("schema", "top level must be an object")
    missing = [k for k in required if k not in doc]
    if missing:
        raise SpectralDataError("schema", f"missing keys {missing}")
    try:
        nodes = np.asarray(doc["quadrature_nodes"], dtype=float)
        if nodes.ndim == 1:
            nodes = nodes[:, None]
        data = SpectralData(
            np.asarray(doc["eigenvalues"], dtype=float),
            np.asarray(doc["eigenfunctions"], dtype=float),
            nodes,
            np.asarray(doc["quadrature_weights"], dtype=float),
            doc.get("multi_indices"),
            doc.get("name", ""),
            doc.get("metadata", {}),
        )
    except (TypeError, ValueError) as exc:
        raise SpectralDataError("schema", str(exc)) from exc
    if nodes.ndim != 2 or nodes.shape[1] != int(doc["dimension"]):
        raise SpectralDataError("schema", "quadrature_nodes must be n-vectors")
    if validate:
        validate_spectral_data(data)
    return data


def save_spectral_data(data: SpectralData, path) -> None:
    """Write ``data`` as a JSON spectral-data document (lossless floats)."""
    Path(path).write_text(json.dumps(to_dict(data)))


def load_spectral_data(path) -> SpectralData:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SpectralDataError("schema", f"not valid JSON: {exc}") from exc
    return from_dict(doc)


SAMPLES = ("asym_triangle",)


def load_sample(name: str = "asym_triangle") -> SpectralData:
    """Load one of the spectral-data files shipped with the package."""
    if name not in SAMPLES:
        raise KeyError(f"unknown sample {name!r}; available: {SAMPLES}")
    ref = resources.files("fracembed") / "data" / f"{name}.json"
    return from_dict(json.loads(ref.read_text()))


# ---------------------------------------------------------------------------
# Ritz generator for triangles (used to produce the shipped asymmetric sample)


def triangle_quadrature(vertices, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Collapsed Gauss-Legendre rule on a triangle, weights summing to 1."""
    v = np.asarray(vertices, dtype=float)
    t, w = gauss_legendre_unit(order)
    u, r = np.meshgrid(t, t, indexing="ij")
    wu, wr = np.meshgrid(w, w, indexing="ij")
    u, r, wu, wr = u.ravel(), r.ravel(), wu.ravel(), wr.ravel()
    pts = v[0] + np.outer(u, v[1] - v[0]) + np.outer(u * r, v[2] - v[1])
    weights = wu * wr * u
    return pts, weights / weights.sum()


def triangle_ritz_basis(vertices, degree: int = 12, n_modes: int = 12,
                        quad_order: int | None = None, name: str = "triangle") -> SpectralData:
    """Neumann eigenpairs of a triangle by Rayleigh-Ritz on polynomials.

    The triangle is rescaled to unit area. Natural (Neumann) boundary
    conditions need no constraint, so the trial space is all polynomials of
    total degree ``<= degree`` (Legendre products on the bounding box).
    Eigenvectors are orthonormal in the quadrature inner product by
    construction.
    """
    v = np.asarray(vertices, dtype=float)
    e1, e2 = v[1] - v[0], v[2] - v[0]
    area = 0.5 * abs(e1[0] * e2[1] - e1[1] * e2[0])
    v = (v - v[0]) / np.sqrt(area)
    if quad_order is None:
        quad_order = 2 * degree + 4
    pts, w = triangle_quadrature(v, quad_order)

    lo, hi = v.min(axis=0), v.max(axis=0)
    scale = 2.0 / (hi - lo)
    xi = (pts - lo) * scale - 1.0

    def leg(k, x, deriv=0):
        coef = np.zeros(k + 1)
        coef[k] = 1.0
        if deriv:
            coef = legendre.legder(coef, deriv)
        return legendre.legval(x, coef)

    pairs = [(i, d - i) for d in range(degree + 1) for i in range(d + 1)]
    psi = np.array([leg(i, xi[:, 0]) * leg(j, xi[:, 1]) for i, j in pairs])
    dpsi_x = np.array([scale[0] * leg(i, xi[:, 0], 1) * leg(j, xi[:, 1]) for i, j in pairs])
    dpsi_y = np.array([scale[1] * leg(i, xi[:, 0]) * leg(j, xi[:, 1], 1) for i, j in pairs])

    mass = (psi * w) @ psi.T
    stiff = (dpsi_x * w) @ dpsi_x.T + (dpsi_y * w) @ dpsi_y.T

    mu, vecs = np.linalg.eigh(mass)
    keep = mu > 1e-13 * mu.max()
    t_mat = vecs[:, keep] / np.sqrt(mu[keep])
    lam, y = np.linalg.eigh(t_mat.T @ stiff @ t_mat)
    coeffs = t_mat @ y[:, :n_modes]
    phi = coeffs.T @ psi

    # Re-orthonormalize in the quadrature inner product to remove eigh round-off.
    phi[0] = 1.0
    for j in range(1, n_modes):
        for i in range(j):
            phi[j] -= np.dot(w * phi[i], phi[j]) * phi[i]
        phi[j] /= np.sqrt(np.dot(w, phi[j] ** 2))
        if phi[j, np.argmax(np.abs(phi[j]))] < 0:
            phi[j] = -phi[j]

    eigenvalues = np.array(lam[:n_modes], dtype=float)
    eigenvalues[0] = 0.0
    eigenvalues = np.maximum.accumulate(np.maximum(eigenvalues, 0.0))
    return SpectralData(
        eigenvalues,
        phi,
        pts,
        w,
        name=name,
        metadata={
            "kind": DomainKind.EXTERNAL.value,
            "generator": "triangle_ritz_basis",
            "vertices_unit_area": v.tolist(),
            "degree": degree,
            "quad_order": quad_order,
            "phi1_cubed": float(np.dot(w, phi[1] ** 3)),
        },
    )
