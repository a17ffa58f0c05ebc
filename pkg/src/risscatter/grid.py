"""Quadrature grids on the upper hemisphere."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class AngularGrid:
    """Flattened quadrature nodes ``(theta, phi)`` with weights for ``sin(theta) dphi dtheta``.

    The default construction is Gauss-Legendre in ``cos(theta)`` on ``[0, 1]``
    times a periodic trapezoid rule in ``phi`` on ``[-pi, pi)``.
    """

    theta: np.ndarray
    phi: np.ndarray
    weights: np.ndarray
    shape: tuple = field(default=())

    def __post_init__(self):
        if not (self.theta.shape == self.phi.shape == self.weights.shape):
            raise ValueError("theta, phi and weights must have equal shapes")
        if np.any(self.weights <= 0):
            raise ValueError("quadrature weights must be positive")
        if np.any(self.theta < 0) or np.any(self.theta > np.pi / 2):
            raise ValueError("grid nodes must lie on the upper hemisphere")

    @classmethod
    def gauss_legendre(cls, n_theta: int = 64, n_phi: int = 128) -> "AngularGrid":
        mu, w_mu = np.polynomial.legendre.leggauss(n_theta)
        # map [-1, 1] -> [0, 1] in mu = cos(theta)
        mu = 0.5 * (mu + 1.0)
        w_mu = 0.5 * w_mu
        theta_1d = np.arccos(mu)
        phi_1d = -np.pi + TWO_PI * np.arange(n_phi) / n_phi
        w_phi = TWO_PI / n_phi
        th, ph = np.meshgrid(theta_1d, phi_1d, indexing="ij")
        w = np.broadcast_to(w_mu[:, None] * w_phi, th.shape)
        return cls(th.ravel(), ph.ravel(), np.array(w).ravel(), (n_theta, n_phi))

    @property
    def size(self) -> int:
        return self.theta.size

    def nearest(self, theta: float, phi: float) -> int:
        """Index of the node closest (great-circle) to a direction."""
        cos_d = (np.cos(self.theta) * np.cos(theta)
                 + np.sin(self.theta) * np.sin(theta) * np.cos(self.phi - phi))
        return int(np.argmax(cos_d))

    def integrate(self, values) -> complex:
        """Weighted sum of per-node values."""
        return np.sum(self.weights * np.asarray(values), axis=-1)


def default_grid() -> AngularGrid:
    return AngularGrid.gauss_legendre()
