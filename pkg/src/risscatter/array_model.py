"""Planar array geometry, embedded patterns, coupling and port scattering matrices.

All lengths are in wavelengths (lambda = 1), so the spacing ``a`` below is the
dimensionless ratio a/lambda. Elements are ordered row-major: element
``(row l, col k)`` sits at index ``l * n_side + k``, which is the ordering of the
Kronecker product ``y_vector (x) x_vector``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DomainError, InadmissiblePatternError
from .grid import AngularGrid, default_grid
from .special import bessel_j1

# Eigenvalue clamping window for sqrt(I - Lambda).
EIG_LOWER_TOL = 1e-10
EIG_UPPER_TOL = 1e-6


@dataclass(frozen=True)
class ArrayGeometry:
    """Square ``n_side x n_side`` uniform planar array."""

    n_side: int
    spacing: float = 0.5

    def __post_init__(self):
        if int(self.n_side) != self.n_side or self.n_side < 1:
            raise ValueError(f"n_side must be a positive integer, got {self.n_side!r}")
        if not self.spacing > 0:
            raise ValueError(f"spacing must be positive, got {self.spacing!r}")

    @property
    def n_elements(self) -> int:
        return self.n_side * self.n_side

    @property
    def area(self) -> float:
        """Aperture area ``M a^2`` in square wavelengths."""
        return self.n_elements * self.spacing**2

    @cached_property
    def index_xy(self) -> tuple[np.ndarray, np.ndarray]:
        """Integer (column, row) index of every element."""
        rows, cols = np.divmod(np.arange(self.n_elements), self.n_side)
        return cols, rows


def _check_theta(theta):
    th = np.asarray(theta, dtype=float)
    if np.any(~np.isfinite(th)) or np.any(th < 0.0) or np.any(th > np.pi / 2):
        raise DomainError(f"theta must lie in [0, pi/2], got {theta!r}")
    return th


def steering_vector(geom: ArrayGeometry, theta, phi) -> np.ndarray:
    """Unit-modulus array response; broadcasts over angle arrays.

    Returns an array of shape ``broadcast(theta, phi).shape + (M,)``.
    """
    th = _check_theta(theta)
    ph = np.asarray(phi, dtype=float)
    kx = geom.spacing * np.sin(th) * np.cos(ph)
    ky = geom.spacing * np.sin(th) * np.sin(ph)
    cx, cy = geom.index_xy
    phase = np.multiply.outer(kx, cx) + np.multiply.outer(ky, cy)
    return np.exp(-2j * np.pi * phase)


def effective_area(geom: ArrayGeometry, theta):
    """Cosine-shaped element effective area ``a^2 cos(theta)``."""
    th = _check_theta(theta)
    out = geom.spacing**2 * np.cos(th)
    # cos(pi/2) is 6e-17 in floating point; the pattern vanishes at grazing.
    out = np.where(th == np.pi / 2, 0.0, out)
    return float(out) if out.ndim == 0 else out


def embedded_pattern(geom: ArrayGeometry, theta, phi) -> np.ndarray:
    """Embedded element patterns ``sqrt(A_e) * steering_vector``."""
    amp = np.sqrt(effective_area(geom, theta))
    return np.asarray(amp)[..., None] * steering_vector(geom, theta, phi)


def element_distances(geom: ArrayGeometry) -> np.ndarray:
    cx, cy = geom.index_xy
    return np.hypot(cx[:, None] - cx[None, :], cy[:, None] - cy[None, :])


def coupling_matrix(geom: ArrayGeometry) -> np.ndarray:
    """Closed-form embedded-pattern coupling matrix of the cosine pattern.

    Diagonal entries are ``pi a^2``; off-diagonal entries are
    ``a J1(2 pi a d) / d`` with ``d`` the element distance in spacings.
    """
    a = geom.spacing
    d = element_distances(geom)
    off = d > 0
    B = np.full(d.shape, np.pi * a * a)
    B[off] = a * bessel_j1(2.0 * np.pi * a * d[off]) / d[off]
    return 0.5 * (B + B.T)


def quadrature_coupling_matrix(geom: ArrayGeometry, grid: AngularGrid | None = None) -> np.ndarray:
    """Coupling matrix by direct spherical quadrature of ``s s^H``.

    Independent of :func:`coupling_matrix`; returns the complex Gram matrix.
    """
    grid = grid or default_grid()
    s = embedded_pattern(geom, grid.theta, grid.phi)
    return (s * grid.weights[:, None]).T @ s.conj()


def scattering_matrix(B: np.ndarray, return_eig: bool = False):
    """Reciprocal lossless port scattering matrix ``U sqrt(I - Lambda) U^T``.

    All sign choices of the square root are fixed to +1.

    Raises
    ------
    InadmissiblePatternError
        If an eigenvalue of ``B`` exceeds ``1 + 1e-6`` (or falls below
        ``-1e-10``).
    """
    B = np.asarray(B)
    lam, U = np.linalg.eigh(B)
    if lam.max() > 1.0 + EIG_UPPER_TOL:
        raise InadmissiblePatternError(
            f"coupling matrix eigenvalue {lam.max():.9g} exceeds 1: pattern is not passive")
    if lam.min() < -EIG_LOWER_TOL:
        raise InadmissiblePatternError(
            f"coupling matrix eigenvalue {lam.min():.3g} is negative")
    lam = np.clip(lam, 0.0, 1.0)
    S = (U * np.sqrt(1.0 - lam)) @ U.T
    S = 0.5 * (S + S.T)
    if return_eig:
        return S, lam, U
    return S


def dft_matrix(m: int) -> np.ndarray:
    """Unitary symmetric DFT matrix with entries ``exp(-2 pi j k n / m) / sqrt(m)``."""
    if int(m) != m or m < 1:
        raise ValueError(f"DFT size must be a positive integer, got {m!r}")
    k = np.arange(m)
    # reduce k*n mod m first so large sizes keep exact phases
    return np.exp(-2j * np.pi * (np.outer(k, k) % m) / m) / np.sqrt(m)


def dft2_matrix(n_side: int) -> np.ndarray:
    """2D DFT over an ``n_side x n_side`` grid in the row-major element order."""
    F = dft_matrix(n_side)
    return np.kron(F, F)


@dataclass(frozen=True, eq=False)
class CoupledArray:
    """Coupling matrix and port scattering matrix of one geometry."""

    geometry: ArrayGeometry
    B: np.ndarray
    S_aa: np.ndarray
    eigvals: np.ndarray
    eigvecs: np.ndarray

    @classmethod
    def from_geometry(cls, geom: ArrayGeometry) -> "CoupledArray":
        B = coupling_matrix(geom)
        S, lam, U = scattering_matrix(B, return_eig=True)
        return cls(geom, B, S, lam, U)

    @property
    def n_elements(self) -> int:
        return self.geometry.n_elements

    def pattern(self, theta, phi) -> np.ndarray:
        return embedded_pattern(self.geometry, theta, phi)

    @property
    def s_aa_norm(self) -> float:
        """Spectral norm of ``S_aa``, ``sqrt(1 - min eig B)``."""
        return float(np.sqrt(max(1.0 - float(np.min(self.eigvals)), 0.0)))

    def lossless_error(self) -> float:
        M = self.n_elements
        return float(np.linalg.norm(self.S_aa @ self.S_aa.conj().T + self.B - np.eye(M)))

    def reciprocity_error(self) -> float:
        return float(np.linalg.norm(self.S_aa - self.S_aa.T))


def transition_fraction(eigvals, lo: float = 0.1, hi: float = 0.9) -> float:
    """Fraction of eigenvalues strictly inside ``(lo, hi)``."""
    lam = np.asarray(eigvals)
    return float(np.mean((lam > lo) & (lam < hi)))


def mode_count(eigvals, threshold: float = 0.5) -> int:
    return int(np.sum(np.asarray(eigvals) > threshold))


def visible_mode_estimate(geom: ArrayGeometry) -> float:
    """Expected number of radiating modes, ``pi a^2 M``."""
    return np.pi * geom.spacing**2 * geom.n_elements


def dft_offdiagonal_fraction(B: np.ndarray, n_side: int) -> float:
    """Share of Frobenius energy left off the diagonal after a 2D DFT."""
    F2 = dft2_matrix(n_side)
    D = F2.conj().T @ B @ F2
    total = np.sum(np.abs(D) ** 2)
    return float(1.0 - np.sum(np.abs(np.diag(D)) ** 2) / total)
