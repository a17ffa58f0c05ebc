"""Load configurations, exact and naive scattering, and amplified noise/interference.

The residual space-to-space scattering kernel is taken as zero throughout; the
far field is the port-mediated term only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence, Union

import numpy as np

from .array_model import CoupledArray, dft2_matrix, dft_matrix
from .errors import ConfigurationError, InstabilityError
from .grid import AngularGrid

# Exact transfer needs spectral radius of S_L S_aa below 1 - STABILITY_TOL.
STABILITY_TOL = 1e-9


class Model(str, Enum):
    EXACT = "exact"
    NAIVE = "naive"


class LoadConfig:
    """Base class of terminal load descriptions."""

    def matrix(self, m: int) -> np.ndarray:
        raise NotImplementedError

    def norm_bound(self) -> float:
        """Upper bound on the spectral norm of the load matrix (inf if unknown)."""
        return float("inf")


@dataclass(frozen=True)
class ZeroLoad(LoadConfig):
    """Matched (absorbing) termination on every port."""

    def matrix(self, m: int) -> np.ndarray:
        return np.zeros((m, m), dtype=complex)

    def norm_bound(self) -> float:
        return 0.0


@dataclass(frozen=True)
class PhasedLoad(LoadConfig):
    """Reflective RIS: diagonal unitary ``Diag(exp(j phases))``."""

    phases: tuple

    def __post_init__(self):
        object.__setattr__(self, "phases", tuple(float(p) for p in np.ravel(self.phases)))

    def matrix(self, m: int) -> np.ndarray:
        if len(self.phases) != m:
            raise ConfigurationError(f"phased load has {len(self.phases)} phases, array has {m} ports")
        return np.diag(np.exp(1j * np.asarray(self.phases)))

    def norm_bound(self) -> float:
        return 1.0


@dataclass(frozen=True)
class SwitchedDFTLoad(LoadConfig):
    """Redirective RIS: ``F S' F`` with ``S'`` a partial symmetric permutation.

    ``pairs`` lists back-to-back beam-port connections ``(i, j)``; ``(i, i)``
    reflects a beam port onto itself. Every port not in a pair is absorbed.
    With ``n_side`` set the beam transform is the 2D DFT of the planar grid,
    otherwise the ``m``-point DFT.
    """

    pairs: tuple = ()
    absorbed: frozenset = field(default_factory=frozenset)
    n_side: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple(tuple(int(i) for i in p) for p in self.pairs))
        object.__setattr__(self, "absorbed", frozenset(int(i) for i in self.absorbed))

    def permutation(self, m: int) -> np.ndarray:
        P = np.zeros((m, m))
        used: set[int] = set()
        for pair in self.pairs:
            if len(pair) != 2:
                raise ConfigurationError(f"connection {pair!r} is not a port pair")
            i, j = pair
            for port in {i, j}:
                if not 0 <= port < m:
                    raise ConfigurationError(f"beam port {port} out of range for {m} ports")
                if port in used:
                    raise ConfigurationError(f"beam port {port} appears in more than one connection")
                if port in self.absorbed:
                    raise ConfigurationError(f"beam port {port} is both connected and absorbed")
                used.add(port)
            P[i, j] = P[j, i] = 1.0
        bad = [p for p in self.absorbed if not 0 <= p < m]
        if bad:
            raise ConfigurationError(f"absorbed ports {bad} out of range for {m} ports")
        return P

    def beam_transform(self, m: int) -> np.ndarray:
        if self.n_side is None:
            return dft_matrix(m)
        if self.n_side**2 != m:
            raise ConfigurationError(f"n_side={self.n_side} does not match {m} ports")
        return dft2_matrix(self.n_side)

    def matrix(self, m: int) -> np.ndarray:
        F = self.beam_transform(m)
        S = F @ self.permutation(m) @ F
        return 0.5 * (S + S.T)

    def norm_bound(self) -> float:
        # unitary transform around a partial permutation
        return 1.0

    @property
    def support(self) -> frozenset:
        return frozenset(p for pair in self.pairs for p in pair)


@dataclass(frozen=True)
class ActiveLoad(LoadConfig):
    """Any load scaled by an amplitude gain (amplifiers on every path)."""

    inner: LoadConfig
    gain: float

    def __post_init__(self):
        if not self.gain > 0:
            raise ConfigurationError(f"active gain must be positive, got {self.gain!r}")

    def matrix(self, m: int) -> np.ndarray:
        return self.gain * self.inner.matrix(m)

    def norm_bound(self) -> float:
        return self.gain * self.inner.norm_bound()


LoadLike = Union[LoadConfig, np.ndarray]


def realize_load(cfg: LoadLike, m: int) -> np.ndarray:
    """Terminal load scattering matrix ``S_L`` for ``m`` ports."""
    if isinstance(cfg, LoadConfig):
        return cfg.matrix(m)
    S = np.asarray(cfg, dtype=complex)
    if S.shape != (m, m):
        raise ConfigurationError(f"load matrix shape {S.shape} does not match {m} ports")
    return S


def spectral_radius(A: np.ndarray) -> float:
    return float(np.max(np.abs(np.linalg.eigvals(A)))) if A.size else 0.0


def exact_transfer(S_aa: np.ndarray, S_L: np.ndarray, loop_norm_bound: float = np.inf) -> np.ndarray:
    """Port-to-port transfer ``(I - S_L S_aa)^-1 S_L``.

    Equal to ``(S_L^-1 - S_aa)^-1`` for invertible loads, and defined for
    absorbing (singular) loads too.

    Raises
    ------
    InstabilityError
        If the spectral radius of ``S_L S_aa`` is not below ``1 - 1e-9``.

    A ``loop_norm_bound`` below the threshold certifies stability (the
    spectral radius never exceeds a norm) and skips the eigenvalue check.
    """
    m = S_aa.shape[0]
    loop = S_L @ S_aa
    if loop_norm_bound >= 1.0 - STABILITY_TOL and (rho := spectral_radius(loop)) >= 1.0 - STABILITY_TOL:
        raise InstabilityError(f"loop gain spectral radius {rho:.6g} >= 1: configuration oscillates")
    return np.linalg.solve(np.eye(m) - loop, S_L)


def _loop_bound(coupled: CoupledArray, load: LoadLike) -> float:
    return load.norm_bound() * coupled.s_aa_norm if isinstance(load, LoadConfig) else np.inf


def transfer(coupled: CoupledArray, load: LoadLike, model: Model | str = Model.EXACT) -> np.ndarray:
    S_L = realize_load(load, coupled.n_elements)
    if Model(model) is Model.NAIVE:
        return S_L
    return exact_transfer(coupled.S_aa, S_L, _loop_bound(coupled, load))


def apply_transfer(coupled: CoupledArray, load: LoadLike, x: np.ndarray,
                   model: Model | str = Model.EXACT) -> np.ndarray:
    """``T @ x`` without forming ``T``; ``x`` may hold several columns."""
    S_L = realize_load(load, coupled.n_elements)
    y = S_L @ x
    if Model(model) is Model.NAIVE:
        return y
    loop = S_L @ coupled.S_aa
    if _loop_bound(coupled, load) >= 1.0 - STABILITY_TOL:
        rho = spectral_radius(loop)
        if rho >= 1.0 - STABILITY_TOL:
            raise InstabilityError(f"loop gain spectral radius {rho:.6g} >= 1: configuration oscillates")
    return np.linalg.solve(np.eye(coupled.n_elements) - loop, y)


@dataclass(frozen=True, eq=False)
class PlaneWaveSet:
    """Incident plane waves as point sources of the angular spectrum.

    Each wave carries a spectral amplitude (sqrt(W) per steradian) and the
    solid-angle weight of the sample it occupies.
    """

    theta: np.ndarray
    phi: np.ndarray
    amplitude: np.ndarray
    weight: np.ndarray

    def __post_init__(self):
        arrs = [np.atleast_1d(np.asarray(v)) for v in (self.theta, self.phi, self.amplitude, self.weight)]
        if len({a.shape for a in arrs}) != 1:
            raise ValueError("plane-wave fields must have matching lengths")
        th = arrs[0].astype(float)
        if np.any(th < 0) or np.any(th > np.pi / 2):
            raise ValueError("incident directions must lie on the upper hemisphere")
        if not np.all(np.isfinite(arrs[2])):
            raise ValueError("incident amplitudes must be finite")
        if np.any(arrs[3] <= 0):
            raise ValueError("solid-angle weights must be positive")
        object.__setattr__(self, "theta", th)
        object.__setattr__(self, "phi", arrs[1].astype(float))
        object.__setattr__(self, "amplitude", arrs[2].astype(complex))
        object.__setattr__(self, "weight", arrs[3].astype(float))

    @classmethod
    def on_grid(cls, grid: AngularGrid, indices: Sequence[int], amplitudes) -> "PlaneWaveSet":
        idx = np.asarray(indices, dtype=int)
        return cls(grid.theta[idx], grid.phi[idx], np.asarray(amplitudes), grid.weights[idx])

    @classmethod
    def empty(cls) -> "PlaneWaveSet":
        z = np.zeros(0)
        return cls(z, z, z.astype(complex), z)

    def __len__(self) -> int:
        return self.theta.size

    def port_excitation(self, coupled: CoupledArray) -> np.ndarray:
        """Incident port waves ``sum_i s(theta_i, phi_i) a_i w_i``."""
        if len(self) == 0:
            return np.zeros(coupled.n_elements, dtype=complex)
        s = coupled.pattern(self.theta, self.phi)
        return (self.amplitude * self.weight) @ s

    def impinging_power(self) -> float:
        """Quadrature of ``|a|^2`` over the incident spectrum."""
        return float(np.sum(self.weight * np.abs(self.amplitude) ** 2))


@dataclass(frozen=True, eq=False)
class FarFieldSpectrum:
    grid: AngularGrid
    values: np.ndarray

    def power(self) -> float:
        return scattered_power(self)


def scatter(coupled: CoupledArray, load: LoadLike, incident: PlaneWaveSet,
            out_grid: AngularGrid, model: Model | str = Model.EXACT) -> FarFieldSpectrum:
    """Scattered angular spectrum on ``out_grid``.

    ``b(theta, phi) = s(theta, phi)^T T x`` with ``x`` the incident port
    excitation; ``T`` is the exact transfer or, for the naive model, ``S_L``.
    """
    x = incident.port_excitation(coupled)
    s_out = coupled.pattern(out_grid.theta, out_grid.phi)
    return FarFieldSpectrum(out_grid, s_out @ apply_transfer(coupled, load, x, model))


def scattered_power(spec: FarFieldSpectrum) -> float:
    return float(np.sum(spec.grid.weights * np.abs(spec.values) ** 2))


def spectral_norm(A: np.ndarray, rtol: float = 1e-10, max_iter: int = 10_000) -> float:
    """Largest singular value by power iteration on ``A^H A``."""
    A = np.asarray(A, dtype=complex)
    if not A.any():
        return 0.0
    n = A.shape[1]
    # deterministic start vector with no special symmetry
    v = np.exp(1j * 0.7 * np.arange(n)) * (1.0 + 0.01 * np.arange(n))
    v /= np.linalg.norm(v)
    sigma = 0.0
    for _ in range(max_iter):
        w = A.conj().T @ (A @ v)
        nrm = np.linalg.norm(w)
        if nrm == 0.0:
            return 0.0
        v = w / nrm
        new = float(np.sqrt(nrm))
        if abs(new - sigma) <= rtol * new:
            return new
        sigma = new
    return sigma


def stability_margin(S_aa: np.ndarray, S_L: np.ndarray) -> float:
    """``1 - ||S_L S_aa||_2``; positive means the loop is stable."""
    return 1.0 - spectral_norm(S_L @ S_aa)


def _amplified_form(coupled: CoupledArray, load: LoadLike, theta, phi) -> np.ndarray:
    T = transfer(coupled, load, Model.EXACT)
    s = coupled.pattern(theta, phi)
    v = s @ T
    return np.real(np.einsum("...i,ij,...j->...", v, coupled.B, v.conj()))


def noise_density(coupled: CoupledArray, load: LoadLike, theta, phi,
                  N0: float, NF_inf: float = 1.0):
    """Far-field noise density radiated by amplification (W/Hz/sr).

    The non-amplified thermal re-radiation of the aperture, ``A cos(theta)``,
    is subtracted and the result clamped at zero.
    """
    q = _amplified_form(coupled, load, theta, phi)
    passive = coupled.geometry.area * np.cos(np.asarray(theta, dtype=float))
    out = NF_inf * N0 * np.maximum(q - passive, 0.0)
    return float(out) if out.ndim == 0 else out


def interference_density(coupled: CoupledArray, load: LoadLike, theta, phi, N_I: float):
    """Re-radiated isotropic interference density (no clamp)."""
    out = N_I * _amplified_form(coupled, load, theta, phi)
    return float(out) if out.ndim == 0 else out


def integrated_interference(coupled: CoupledArray, load: LoadLike, N_I: float,
                            grid: AngularGrid) -> float:
    vals = interference_density(coupled, load, grid.theta, grid.phi, N_I)
    return float(grid.integrate(vals))


def random_phased_load(m: int, rng) -> PhasedLoad:
    """Passive reflective load with i.i.d. uniform phases."""
    return PhasedLoad(rng.uniform(-np.pi, np.pi, m))


def random_waves(grid: AngularGrid, rng, max_waves: int = 3) -> PlaneWaveSet:
    """Between 1 and ``max_waves`` plane waves on random grid nodes with complex Gaussian amplitudes."""
    k = int(rng.integers(1, max_waves + 1))
    idx = rng.choice(grid.size, size=k, replace=False)
    amps = (rng.standard_normal(k) + 1j * rng.standard_normal(k)) / np.sqrt(2)
    return PlaneWaveSet.on_grid(grid, idx, amps)
