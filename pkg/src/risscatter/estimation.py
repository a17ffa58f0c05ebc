"""Retrodirective versus cascaded channel estimation with +/-1 beam-port probing.

Beam indexing convention: the symmetric DFT satisfies ``F F = J`` (index
reversal), so ``h^T F S' F h = M (J s)^T S' (J s)`` for ``h = sqrt(M) F s``.
The beam-domain vector ``s`` used throughout is the one seen by the beam
ports, i.e. the physical sparse vector with the reversal already applied.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.linalg

from .array_model import dft_matrix
from .errors import ConfigurationError, UnderdeterminedError


def _rng(seed):
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def reversal_indices(m: int) -> np.ndarray:
    """Index map of ``F @ F`` for the symmetric DFT: ``k -> -k mod m``."""
    return (-np.arange(m)) % m


@dataclass(frozen=True, eq=False)
class SparseAngularChannel:
    """Channel ``h = sqrt(M) F s`` with a sparse beam-domain vector ``s``."""

    s: np.ndarray

    @classmethod
    def from_support(cls, m: int, support: Sequence[int], coefficients) -> "SparseAngularChannel":
        s = np.zeros(m, dtype=complex)
        s[np.asarray(support, dtype=int)] = coefficients
        return cls(s)

    @classmethod
    def random(cls, m: int, sparsity: int, seed=None) -> "SparseAngularChannel":
        """Random support with unit-power complex Gaussian coefficients."""
        rng = _rng(seed)
        support = rng.choice(m, size=sparsity, replace=False)
        coef = (rng.standard_normal(sparsity) + 1j * rng.standard_normal(sparsity)) / np.sqrt(2)
        return cls.from_support(m, support, coef)

    @property
    def m(self) -> int:
        return self.s.size

    @property
    def support(self) -> np.ndarray:
        return np.flatnonzero(self.s)

    def realized(self) -> np.ndarray:
        return np.sqrt(self.m) * dft_matrix(self.m) @ self.s

    def physical_beams(self) -> np.ndarray:
        """Beam vector ``s_phys`` with ``h = sqrt(M) F s_phys`` in the reversed convention."""
        return self.s[reversal_indices(self.m)]


@dataclass(frozen=True, eq=False)
class ProbeSchedule:
    """``T x M`` matrix of +/-1 beam-port states; row t is ``diag(S'^(t))``."""

    P: np.ndarray

    def __post_init__(self):
        P = np.asarray(self.P)
        if P.ndim != 2 or not np.all(np.isin(P, (-1, 1))):
            raise ConfigurationError("probe schedule entries must be +1 or -1")
        object.__setattr__(self, "P", P.astype(float))

    @property
    def shape(self) -> tuple[int, int]:
        return self.P.shape

    def loads(self, t: int) -> np.ndarray:
        """Beam-domain load ``S'^(t)`` for time index ``t``."""
        return np.diag(self.P[t])


def make_probe_schedule(m: int, t: int | None = None, kind: str = "orthogonal", seed=None) -> ProbeSchedule:
    """Build a +/-1 probe schedule.

    ``orthogonal`` is the Sylvester-Hadamard matrix (``t == m``, ``m`` a power
    of two); ``random`` draws i.i.d. signs from ``seed``.
    """
    t = m if t is None else t
    if kind == "orthogonal":
        if t != m or m < 1 or m & (m - 1):
            raise ConfigurationError(f"orthogonal schedule needs T == M == 2^k, got M={m}, T={t}")
        return ProbeSchedule(scipy.linalg.hadamard(m))
    if kind == "random":
        if t < 1:
            raise ConfigurationError("random schedule needs T >= 1")
        return ProbeSchedule(_rng(seed).choice((-1.0, 1.0), size=(t, m)))
    raise ConfigurationError(f"unknown schedule kind {kind!r}")


def complex_noise(size, sd: float, rng) -> np.ndarray:
    """Circularly-symmetric complex Gaussian with ``E|n|^2 = sd^2``."""
    return sd * (rng.standard_normal(size) + 1j * rng.standard_normal(size)) / np.sqrt(2)


def retro_measure(ch: SparseAngularChannel, sched: ProbeSchedule, noise_sd: float = 0.0,
                  seed=None) -> np.ndarray:
    """Monostatic retro-reflected samples ``y = M P (s * s) + n``."""
    y = ch.m * sched.P @ (ch.s * ch.s)
    if noise_sd:
        y = y + complex_noise(y.shape, noise_sd, _rng(seed))
    return y


def retro_measure_full(h: np.ndarray, sched: ProbeSchedule) -> np.ndarray:
    """Noiseless samples ``h^T F S'^(t) F h`` from the full matrix product."""
    F = dft_matrix(h.size)
    return np.array([h @ F @ sched.loads(t) @ F @ h for t in range(sched.shape[0])])


def retro_recover(y: np.ndarray, sched: ProbeSchedule) -> np.ndarray:
    """Least-squares estimate of ``s * s`` from retro samples.

    Orthogonal schedules use ``P^T y / (M T)``; other full-column-rank
    schedules use the pseudo-inverse.

    Raises
    ------
    UnderdeterminedError
        If the schedule has rank below ``M``.
    """
    P = sched.P
    t, m = P.shape
    gram = P.T @ P
    if np.array_equal(gram, t * np.eye(m)):
        return P.T @ y / (m * t)
    if t < m or np.linalg.matrix_rank(P) < m:
        raise UnderdeterminedError(f"schedule of rank {np.linalg.matrix_rank(P)} cannot resolve {m} beams")
    return np.linalg.lstsq(m * P, y, rcond=None)[0]


def dft_phase_schedule(m: int) -> np.ndarray:
    """Unit-modulus orthogonal phase rows ``sqrt(M) conj(F)`` for cascaded probing."""
    return np.sqrt(m) * dft_matrix(m).conj()


def cascaded_measure(ch: SparseAngularChannel, phase_schedule: np.ndarray, noise_sd: float = 0.0,
                     seed=None) -> np.ndarray:
    """Two-hop samples ``y = sqrt(M) Phi F s + n`` at a non-colocated receiver."""
    Phi = np.asarray(phase_schedule)
    if not np.allclose(np.abs(Phi), 1.0):
        raise ConfigurationError("cascaded phase schedule must be unit modulus")
    m = ch.m
    y = np.sqrt(m) * Phi @ (dft_matrix(m) @ ch.s)
    if noise_sd:
        y = y + complex_noise(y.shape, noise_sd, _rng(seed))
    return y


def cascaded_recover(y: np.ndarray, phase_schedule: np.ndarray) -> np.ndarray:
    Phi = np.asarray(phase_schedule)
    m = Phi.shape[1]
    A = np.sqrt(m) * Phi @ dft_matrix(m)
    if Phi.shape[0] < m:
        raise UnderdeterminedError("cascaded recovery needs T >= M")
    return np.linalg.lstsq(A, y, rcond=None)[0]


@dataclass
class EstimatorComparison:
    m: int
    sparsity: int
    noise_sd: np.ndarray
    mse_retro: np.ndarray
    mse_cascaded: np.ndarray

    @property
    def gain_ratio(self) -> np.ndarray:
        """Cascaded over retro MSE; NaN where both are exact."""
        with np.errstate(divide="ignore", invalid="ignore"):
            r = self.mse_cascaded / self.mse_retro
        return np.where((self.mse_retro == 0) & (self.mse_cascaded == 0), np.nan, r)

    def rows(self):
        for i, sd in enumerate(self.noise_sd):
            yield {"M": self.m, "sparsity": self.sparsity, "noise_sd": float(sd),
                   "mse_retro": float(self.mse_retro[i]), "mse_cascaded": float(self.mse_cascaded[i]),
                   "gain_ratio": float(self.gain_ratio[i])}


def _trial_errors(m, sparsity, noise_sd, trials, rng):
    """Per-entry MSE of both estimators over vectorised trials."""
    P = make_probe_schedule(m).P
    Phi = dft_phase_schedule(m)
    F = dft_matrix(m)
    A = np.sqrt(m) * Phi @ F
    S = np.zeros((trials, m), dtype=complex)
    for i in range(trials):
        S[i] = SparseAngularChannel.random(m, sparsity, rng).s
    q = S * S
    y_r = m * q @ P.T + complex_noise((trials, m), noise_sd, rng)
    q_hat = y_r @ P / (m * m)
    y_c = S @ A.T + complex_noise((trials, m), noise_sd, rng)
    # A^H A = M^2 I for the DFT-matched phase rows
    s_hat = y_c @ A.conj() / (m * m)
    return float(np.mean(np.abs(q_hat - q) ** 2)), float(np.mean(np.abs(s_hat - S) ** 2))


def compare_estimators(m: int, sparsity: int, noise_grid, trials: int = 1000, seed=0) -> EstimatorComparison:
    """Monte-Carlo MSE of retrodirective and cascaded estimation per noise level.

    Both schemes use ``T = M`` orthogonal probes. The gain ratio is the
    cascaded MSE over the retro MSE.
    """
    noise_grid = np.atleast_1d(np.asarray(noise_grid, dtype=float))
    seeds = np.random.SeedSequence(seed).spawn(noise_grid.size)
    retro = np.empty(noise_grid.size)
    casc = np.empty(noise_grid.size)
    for i, (sd, ss) in enumerate(zip(noise_grid, seeds)):
        retro[i], casc[i] = _trial_errors(m, sparsity, sd, trials, np.random.default_rng(ss))
    return EstimatorComparison(m, sparsity, noise_grid, retro, casc)
