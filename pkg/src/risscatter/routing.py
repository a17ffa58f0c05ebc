"""Multi-route configuration of redirective and reflective surfaces."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .array_model import ArrayGeometry, CoupledArray
from .errors import DomainError, RouteConflictError
from .scattering import LoadLike, Model, PhasedLoad, SwitchedDFTLoad, apply_transfer, transfer


def _wrap(k):
    return (np.asarray(k, dtype=float) + 0.5) % 1.0 - 0.5


def beam_frequency(geom: ArrayGeometry, port: int) -> tuple[float, float]:
    """Spatial frequency (k_x, k_y) that the 2D DFT maps onto ``port``.

    The symmetric DFT squares to an index reversal, so a wave with spatial
    frequency ``(u/n, v/n)`` lands on the port of ``(-u, -v) mod n``.
    """
    n = geom.n_side
    if not 0 <= port < geom.n_elements:
        raise DomainError(f"beam port {port} out of range")
    v, u = divmod(port, n)
    return float(_wrap(-u / n)), float(_wrap(-v / n))


def beam_direction(geom: ArrayGeometry, port: int) -> tuple[float, float]:
    """Far-field direction ``(theta, phi)`` served by a beam port.

    Raises
    ------
    DomainError
        If the beam lies outside the visible region.
    """
    kx, ky = beam_frequency(geom, port)
    sin_t = np.hypot(kx, ky) / geom.spacing
    if sin_t > 1.0:
        raise DomainError(f"beam port {port} is outside the visible region")
    return float(np.arcsin(sin_t)), float(np.arctan2(ky, kx))


def visible_ports(geom: ArrayGeometry, max_sin: float = 1.0) -> list[int]:
    out = []
    for p in range(geom.n_elements):
        kx, ky = beam_frequency(geom, p)
        if np.hypot(kx, ky) / geom.spacing <= max_sin:
            out.append(p)
    return out


def combine_redirective(routes: Sequence[SwitchedDFTLoad]) -> SwitchedDFTLoad:
    """Union of disjoint beam-port connections.

    Raises
    ------
    RouteConflictError
        If two routes touch the same beam port.
    """
    if not routes:
        raise ValueError("need at least one route")
    seen: dict[int, int] = {}
    clash: set[int] = set()
    for k, r in enumerate(routes):
        for port in r.support:
            if port in seen and seen[port] != k:
                clash.add(port)
            seen[port] = k
    if clash:
        raise RouteConflictError(clash)
    n_sides = {r.n_side for r in routes}
    if len(n_sides) != 1:
        raise ValueError("routes use different beam transforms")
    pairs = tuple(p for r in routes for p in r.pairs)
    return SwitchedDFTLoad(pairs=pairs, n_side=n_sides.pop())


def redirective_objective(combined: SwitchedDFTLoad, routes: Sequence[SwitchedDFTLoad], m: int,
                          restrict: bool = True) -> float:
    """Sum of squared Frobenius errors between the combined and per-route loads.

    Evaluated on the beam-domain permutations (the DFT is unitary). With
    ``restrict`` each term only counts the rows of that route's ports.
    """
    P = combined.permutation(m)
    total = 0.0
    for r in routes:
        D = P - r.permutation(m)
        if restrict:
            D = D[sorted(r.support), :]
        total += float(np.sum(np.abs(D) ** 2))
    return total


def combine_reflective(routes: Sequence) -> PhasedLoad:
    """Closest diagonal unitary load to a set of per-route phase profiles.

    Each element takes the phase of the sum of the route phasors; exactly
    cancelling sums get phase zero.
    """
    if not routes:
        raise ValueError("need at least one route")
    phasors = np.array([np.exp(1j * np.asarray(r.phases)) if isinstance(r, PhasedLoad)
                        else np.diag(np.asarray(r)) if np.ndim(r) == 2 else np.asarray(r)
                        for r in routes])
    total = phasors.sum(axis=0)
    degenerate = np.abs(total) <= 1e-12 * len(routes)
    phases = np.where(degenerate, 0.0, np.angle(total))
    return PhasedLoad(phases)


def steering_phases(coupled: CoupledArray, incident_dir, outgoing_dir) -> PhasedLoad:
    """Single-route phase profile that co-phases incident and outgoing patterns."""
    s_in = coupled.pattern(*incident_dir)
    s_out = coupled.pattern(*outgoing_dir)
    return PhasedLoad(-np.angle(s_in * s_out))


def beam_route(port_in: int, port_out: int, n_side: int) -> SwitchedDFTLoad:
    return SwitchedDFTLoad(pairs=((port_in, port_out),), n_side=n_side)


def raw_route_gain(coupled: CoupledArray, load: LoadLike, incident_dir, outgoing_dir,
                   model: Model | str = Model.EXACT) -> float:
    T = transfer(coupled, load, model)
    s_in = coupled.pattern(*incident_dir)
    s_out = coupled.pattern(*outgoing_dir)
    return float(np.abs(s_out @ T @ s_in) ** 2)


def route_gain(coupled: CoupledArray, load: LoadLike, incident_dir, outgoing_dir,
               reference: LoadLike | None = None, model: Model | str = Model.EXACT) -> float:
    """Power gain ``|s_out^T T s_in|^2`` of one route.

    With ``reference`` (the route's own single-route load) the gain is
    normalized by the reference gain, so a lossless multi-route combination
    scores 1.
    """
    g = raw_route_gain(coupled, load, incident_dir, outgoing_dir, model)
    if reference is None:
        return g
    return g / raw_route_gain(coupled, reference, incident_dir, outgoing_dir, model)


def _route_amplitudes(coupled: CoupledArray, load: LoadLike, s_in: np.ndarray, s_out: np.ndarray,
                      model: Model | str) -> np.ndarray:
    """``s_out[k]^T T s_in[k]`` for each row pair."""
    Tx = apply_transfer(coupled, load, s_in.T, model)
    return np.einsum("ki,ik->k", s_out, Tx)


def redirective_gains(coupled: CoupledArray, K: int, rng, model: Model | str = Model.EXACT,
                      max_sin: float = 0.9) -> list[float]:
    """Normalized gains of K disjoint beam-port routes drawn from the visible beams."""
    geom = coupled.geometry
    ports = visible_ports(geom, max_sin)
    if 2 * K > len(ports):
        raise DomainError(f"{K} disjoint routes need {2 * K} visible beams, array has {len(ports)}")
    chosen = rng.permutation(ports)[: 2 * K]
    routes = [beam_route(int(chosen[2 * k]), int(chosen[2 * k + 1]), geom.n_side) for k in range(K)]
    s_in = np.array([coupled.pattern(*beam_direction(geom, int(p))) for p in chosen[0::2]])
    s_out = np.array([coupled.pattern(*beam_direction(geom, int(p))) for p in chosen[1::2]])
    combined = _route_amplitudes(coupled, combine_redirective(routes), s_in, s_out, model)
    single = [_route_amplitudes(coupled, r, s_in[k:k + 1], s_out[k:k + 1], model)[0]
              for k, r in enumerate(routes)]
    return [float(g) for g in np.abs(combined) ** 2 / np.abs(single) ** 2]


def random_direction(rng, min_cos: float = 0.3) -> tuple[float, float]:
    """Direction uniform in solid angle over the cap ``cos(theta) >= min_cos``."""
    return float(np.arccos(rng.uniform(min_cos, 1.0))), float(rng.uniform(-np.pi, np.pi))


def reflective_gains(coupled: CoupledArray, K: int, draws: int, rng,
                     model: Model | str = Model.EXACT) -> np.ndarray:
    """Per-route gains of K combined reflective routes over random draws.

    Each gain is normalized by the route's own single-route phase profile.
    """
    out = np.empty((draws, K))
    for d in range(draws):
        dirs = [(random_direction(rng), random_direction(rng)) for _ in range(K)]
        s_in = np.array([coupled.pattern(*i) for i, _ in dirs])
        s_out = np.array([coupled.pattern(*o) for _, o in dirs])
        singles = [steering_phases(coupled, i, o) for i, o in dirs]
        combined = _route_amplitudes(coupled, combine_reflective(singles), s_in, s_out, model)
        single = np.array([_route_amplitudes(coupled, ld, s_in[k:k + 1], s_out[k:k + 1], model)[0]
                           for k, ld in enumerate(singles)])
        out[d] = np.abs(combined) ** 2 / np.abs(single) ** 2
    return out.ravel()
