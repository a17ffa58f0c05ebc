"""Special functions used by the closed-form models.

Both functions are implemented directly so the package has no special-function
dependency: ``bessel_j1`` feeds the coupling-matrix kernel and ``lambert_w``
the reflective optimal-gain formula.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError

# Switch from the ascending series to the Hankel expansion at this argument.
_SERIES_CUTOFF = 12.0
_SERIES_TERMS = 40
_HANKEL_MAX_TERMS = 40

_INV_E = float(np.exp(-1.0))


def _j1_series(x: np.ndarray) -> np.ndarray:
    half = 0.5 * x
    term = half.copy()
    total = term.copy()
    h2 = half * half
    for k in range(1, _SERIES_TERMS):
        term = -term * h2 / (k * (k + 1))
        total += term
    return total


def _j1_hankel(x: np.ndarray) -> np.ndarray:
    # P and Q series of the Hankel expansion for order one (mu = 4).
    mu = 4.0
    p = np.ones_like(x)
    q = np.zeros_like(x)
    term = np.ones_like(x)
    prev = np.full_like(x, np.inf)
    active = np.ones(x.shape, dtype=bool)
    for k in range(1, _HANKEL_MAX_TERMS):
        term = term * (mu - (2 * k - 1) ** 2) / (k * 8.0 * x)
        mag = np.abs(term)
        # Stop each element at its smallest term (asymptotic series diverge).
        active &= mag < prev
        if not active.any():
            break
        contrib = np.where(active, term, 0.0)
        if k % 2 == 1:
            # odd k feeds Q with sign (-1)^((k-1)/2)
            q += contrib if (k // 2) % 2 == 0 else -contrib
        else:
            p += contrib if (k // 2) % 2 == 0 else -contrib
        prev = np.where(active, mag, prev)
    chi = x - 0.75 * np.pi
    return np.sqrt(2.0 / (np.pi * x)) * (p * np.cos(chi) - q * np.sin(chi))


def bessel_j1(x):
    """Bessel function of the first kind, order one.

    Uses the ascending power series for ``|x| < 12`` and the Hankel
    asymptotic expansion beyond, truncated at its smallest term.

    Parameters
    ----------
    x : float or array_like
        Real argument.

    Returns
    -------
    float or ndarray
        ``J1(x)`` with the same shape as ``x``.
    """
    arr = np.asarray(x, dtype=float)
    ax = np.abs(arr)
    out = np.empty_like(ax)
    small = ax < _SERIES_CUTOFF
    if small.any():
        out[small] = _j1_series(ax[small])
    if (~small).any():
        out[~small] = _j1_hankel(ax[~small])
    out = out * np.sign(arr)
    if np.ndim(x) == 0:
        return float(out)
    return out


def _lambert_initial(x: np.ndarray) -> np.ndarray:
    w = np.empty_like(x)
    near = x < -0.25
    mid = (~near) & (x < 3.0)
    far = x >= 3.0
    if near.any():
        p = np.sqrt(np.maximum(2.0 * (np.e * x[near] + 1.0), 0.0))
        w[near] = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p**3
    if mid.any():
        w[mid] = np.log1p(x[mid])
    if far.any():
        lx = np.log(x[far])
        w[far] = lx - np.log(lx)
    return w


def lambert_w(x, tol: float = 1e-15, max_iter: int = 64):
    """Principal branch of the Lambert W function.

    Solves ``w * exp(w) = x`` by Halley iteration for real ``x >= -1/e``.

    Raises
    ------
    DomainError
        If any ``x < -1/e``.
    """
    arr = np.asarray(x, dtype=float)
    if np.any(np.isnan(arr)) or np.any(arr < -_INV_E - 1e-15):
        raise DomainError(f"lambert_w defined for x >= -1/e, got {x!r}")
    flat = np.atleast_1d(arr).astype(float).ravel()
    w = _lambert_initial(flat)
    branch = flat <= -_INV_E
    for _ in range(max_iter):
        ew = np.exp(w)
        f = w * ew - flat
        wp1 = w + 1.0
        with np.errstate(divide="ignore", invalid="ignore"):
            denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1)
            step = np.where(denom != 0.0, f / denom, 0.0)
        step[branch] = 0.0
        w = w - step
        if np.all(np.abs(step) <= tol * (1.0 + np.abs(w))):
            break
    w[branch] = -1.0
    w = w.reshape(arr.shape)
    if w.ndim == 0:
        return float(w)
    return w
