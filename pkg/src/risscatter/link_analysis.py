"""Deployment sizing, bandwidth limits and control-overhead rate analysis.

Distances and RIS sizes are in wavelengths.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .errors import DomainError
from .special import lambert_w

DEFAULT_GRID_POINTS = 512


def fresnel_size(d_tx: float, d_rx: float) -> tuple[float, float]:
    """First-Fresnel-zone RIS size and its maximum over RIS placement.

    Returns ``(sqrt(d_rx d_tx / (d_tx + d_rx)), sqrt(d_tx + d_rx) / 2)``.
    """
    if not (d_tx > 0 and d_rx > 0):
        raise DomainError("distances must be positive")
    if np.isinf(d_tx) or np.isinf(d_rx):
        required = np.sqrt(min(d_tx, d_rx))
    else:
        required = np.sqrt(d_rx * d_tx / (d_tx + d_rx))
    return float(required), float(0.5 * np.sqrt(d_tx + d_rx))


@dataclass(frozen=True)
class GeometryScenario:
    d_tx: float
    d_rx: float
    theta_i: float
    theta_r: float
    size: float

    def __post_init__(self):
        if not (self.d_tx > 0 and self.d_rx > 0):
            raise DomainError("distances must be positive")
        for ang in (self.theta_i, self.theta_r):
            if abs(ang) > np.pi / 2:
                raise DomainError(f"angle {ang!r} outside [-pi/2, pi/2]")


def fractional_bandwidth_limit(scn: GeometryScenario, use_distance_form: bool = False) -> float:
    """Largest fractional bandwidth of a phased RIS without true-delay elements.

    Either ``1 / (L |sin(theta_i) - sin(theta_r)|)`` or, with the size set by
    the Fresnel rule, ``2 / |dsin| * sqrt(1 / (d_rx + d_tx))``. Specular
    geometries have no dispersion and return ``inf``.
    """
    if not scn.size > 0:
        raise DomainError(f"RIS size must be positive, got {scn.size!r}")
    dsin = abs(np.sin(scn.theta_i) - np.sin(scn.theta_r))
    if dsin == 0.0:
        return float("inf")
    if use_distance_form:
        return float(2.0 / dsin * np.sqrt(1.0 / (scn.d_rx + scn.d_tx)))
    return float(1.0 / (scn.size * dsin))


@dataclass(frozen=True)
class OverheadParams:
    """Control-overhead rate parameters.

    ``snr`` is the isotropic link SNR ``G_c P_T / (B_w N_0)``; build it from
    physical quantities with :meth:`from_link_budget`.
    """

    K: int
    snr: float
    M_B: float
    M_A: float
    b_A: float
    eta_B: float
    N_s: float

    def __post_init__(self):
        for name in ("K", "snr", "M_B", "M_A", "eta_B", "N_s"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive")
        if self.b_A < 0:
            raise DomainError("b_A must be non-negative")

    @classmethod
    def from_link_budget(cls, *, K, G_c, P_T, B_w, N_0, M_B, M_A, b_A, eta_B, N_s) -> "OverheadParams":
        return cls(K=K, snr=G_c * P_T / (B_w * N_0), M_B=M_B, M_A=M_A,
                   b_A=b_A, eta_B=eta_B, N_s=N_s)

    def with_gain(self, M_A: float) -> "OverheadParams":
        return dataclasses.replace(self, M_A=M_A)

    @property
    def control_bits_per_symbol(self) -> float:
        return self.eta_B * self.N_s / self.b_A if self.b_A else float("inf")


class RateResult(NamedTuple):
    rate: float
    overhead: float
    saturated: bool


def _rate(K, overhead, snr_gain) -> RateResult:
    if overhead >= 1.0:
        return RateResult(0.0, float(overhead), True)
    return RateResult(float(K * (1.0 - overhead) * np.log2(1.0 + snr_gain)), float(overhead), False)


def overhead_redirective(p: OverheadParams) -> float:
    """Control bandwidth fraction ``b_A log2(M_A) / (eta_B N_s)``."""
    return p.b_A * np.log2(p.M_A) / (p.eta_B * p.N_s)


def overhead_reflective(p: OverheadParams) -> float:
    return p.b_A * p.M_A / (p.eta_B * p.N_s)


def rate_redirective(p: OverheadParams) -> RateResult:
    """Sum rate of K redirective nodes with logarithmic control overhead."""
    return _rate(p.K, overhead_redirective(p), p.snr * p.M_B * p.M_A)


def rate_reflective(p: OverheadParams) -> RateResult:
    """Sum rate of K reflective nodes (``M_A = M_B``) with linear control overhead."""
    return _rate(p.K, overhead_reflective(p), p.snr * p.M_A**2)


def optimal_gain_redirective(p: OverheadParams) -> float:
    """High-SNR optimal access gain ``2^(eta_B N_s / 2 b_A) / sqrt(snr M_B)``."""
    if p.b_A == 0:
        return float("inf")
    return float(2.0 ** (p.eta_B * p.N_s / (2.0 * p.b_A)) / np.sqrt(p.snr * p.M_B))


def optimal_gain_reflective(p: OverheadParams) -> float:
    """High-SNR optimal access gain ``c / W(c sqrt(snr))`` with ``c = eta_B N_s / b_A``."""
    c = p.control_bits_per_symbol
    arg = c * np.sqrt(p.snr)
    if not (np.isfinite(arg) and arg > 0):
        raise DomainError(f"Lambert W argument must be positive and finite, got {arg!r}")
    return float(c / lambert_w(arg))


def log_gain_grid(upper: float, n: int = DEFAULT_GRID_POINTS) -> np.ndarray:
    """``n`` log-spaced gains covering ``[1, upper)``."""
    if not upper > 1:
        return np.ones(1)
    return np.logspace(0.0, np.log10(upper), n, endpoint=False)


def saturation_gain(rate_fn: Callable[[OverheadParams], RateResult], p: OverheadParams) -> float:
    """Access gain at which the control overhead uses the whole band."""
    c = p.control_bits_per_symbol
    if rate_fn is rate_reflective:
        return c
    return 2.0**c if np.isfinite(c) else float("inf")


def brute_force_gain(rate_fn: Callable[[OverheadParams], RateResult], p: OverheadParams,
                     grid=None) -> tuple[float, float]:
    """Exhaustive maximizer of ``rate_fn`` over a grid of access gains.

    Returns ``(M_A, rate)``; ties go to the first grid point.
    """
    if grid is None:
        upper = saturation_gain(rate_fn, p)
        if not np.isfinite(upper):
            raise DomainError("no overhead saturation point; pass an explicit grid")
        grid = log_gain_grid(upper)
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0:
        raise ValueError("empty gain grid")
    rates = np.array([rate_fn(p.with_gain(g)).rate for g in grid])
    i = int(np.argmax(rates))
    return float(grid[i]), float(rates[i])
