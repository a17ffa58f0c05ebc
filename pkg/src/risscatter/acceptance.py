"""Acceptance checks, one function per criterion.

Each check returns a :class:`Criterion` with a pass flag and a one-line
detail string. Results are cached so the CLI self-test and the pytest suite
can share one evaluation per process.
"""

from __future__ import annotations

import contextlib
import filecmp
import functools
import io
import json
import tempfile
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import estimation, link_analysis as la, routing
from .array_model import (ArrayGeometry, CoupledArray, coupling_matrix, mode_count,
                          quadrature_coupling_matrix, transition_fraction, visible_mode_estimate)
from .errors import InstabilityError
from .grid import AngularGrid
from .scattering import (ActiveLoad, Model, SwitchedDFTLoad, noise_density, random_phased_load,
                         random_waves, realize_load, scatter, spectral_radius)
from .special import lambert_w

FIXTURE = la.OverheadParams(K=4, snr=1e-6, M_B=1024, M_A=1.0, b_A=8, eta_B=2, N_s=1024)


@dataclass(frozen=True)
class Criterion:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.number}. {self.name}: {self.detail} ({self.seconds:.1f} s)"


_RESULTS: dict[int, Criterion] = {}


def evaluated() -> list[Criterion]:
    """Criteria already evaluated in this process, in criterion order."""
    return [_RESULTS[k] for k in sorted(_RESULTS)]


def _timed(number: int, name: str):
    def deco(fn):
        @functools.cache
        def wrapper() -> Criterion:
            t0 = time.perf_counter()
            passed, detail = fn()
            res = Criterion(number, name, bool(passed), detail, time.perf_counter() - t0)
            _RESULTS[number] = res
            return res
        wrapper.number = number
        return wrapper
    return deco


@_timed(1, "lossless construction")
def lossless_construction():
    t0 = time.perf_counter()
    worst_l = worst_r = 0.0
    for n in (2, 4, 8, 16):
        for a in (0.25, 0.5):
            c = CoupledArray.from_geometry(ArrayGeometry(n, a))
            worst_l = max(worst_l, c.lossless_error())
            worst_r = max(worst_r, c.reciprocity_error())
    dt = time.perf_counter() - t0
    ok = worst_l <= 1e-9 and worst_r <= 1e-12 and dt < 10
    return ok, f"max lossless err {worst_l:.2e} (<=1e-9), max reciprocity err {worst_r:.2e} (<=1e-12), {dt:.2f}s (<10s)"


@_timed(2, "quadrature consistency")
def quadrature_consistency():
    t0 = time.perf_counter()
    geom = ArrayGeometry(4, 0.5)
    B = coupling_matrix(geom)
    Bq = quadrature_coupling_matrix(geom)
    rel = float(np.linalg.norm(Bq - B) / np.linalg.norm(B))
    dt = time.perf_counter() - t0
    return rel <= 1e-3 and dt < 5, f"relative Frobenius error {rel:.2e} (<=1e-3), {dt:.2f}s (<5s)"


@_timed(3, "passivity and power ordering")
def passivity_and_ordering(trials: int = 200, seed: int = 3):
    t0 = time.perf_counter()
    c = CoupledArray.from_geometry(ArrayGeometry(4, 0.5))
    grid = AngularGrid.gauss_legendre()
    rng = np.random.default_rng(seed)
    excess = order = 0
    worst_excess = worst_order = -np.inf
    for _ in range(trials):
        load = random_phased_load(c.n_elements, rng)
        waves = random_waves(grid, rng, 3)
        p_in = waves.impinging_power()
        p_ex = scatter(c, load, waves, grid, Model.EXACT).power()
        p_nv = scatter(c, load, waves, grid, Model.NAIVE).power()
        worst_excess = max(worst_excess, p_ex - p_in)
        worst_order = max(worst_order, p_nv - p_ex)
        excess += p_ex > p_in + 1e-9
        order += p_nv > p_ex + 1e-9
    dt = time.perf_counter() - t0
    ok = excess == 0 and order == 0 and dt < 30
    return ok, (f"{trials} trials: exact>impinging in {excess} (worst {worst_excess:.2e}), "
                f"naive>exact in {order} (worst {worst_order:.2e}), {dt:.1f}s (<30s)")


@_timed(4, "partial-isometry trend")
def partial_isometry_trend():
    fracs, devs = [], []
    for n in (4, 8, 16):
        c = CoupledArray.from_geometry(ArrayGeometry(n, 0.5))
        fracs.append(transition_fraction(c.eigvals))
        if n >= 8:
            est = visible_mode_estimate(c.geometry)
            devs.append(abs(mode_count(c.eigvals) - est) / est)
    mono = all(b <= a for a, b in zip(fracs, fracs[1:]))
    ok = mono and max(devs) <= 0.15
    return ok, (f"transition fractions {', '.join(f'{f:.4f}' for f in fracs)} non-increasing={mono}; "
                f"max mode-count deviation {max(devs):.1%} (<=15%)")


def _uniform_hemisphere(rng, k):
    return np.arccos(rng.uniform(0.0, 1.0, k)), rng.uniform(-np.pi, np.pi, k)


@_timed(5, "noise clamp")
def noise_clamp(n_angles: int = 1000, n_phased: int = 5, seed: int = 5):
    geom = ArrayGeometry(4, 0.5)
    c = CoupledArray.from_geometry(geom)
    m = c.n_elements
    rng = np.random.default_rng(seed)
    th, ph = _uniform_hemisphere(rng, n_angles)
    # all beam ports paired: a unitary switched load
    perm = rng.permutation(m)
    full = SwitchedDFTLoad(pairs=tuple(zip(perm[::2], perm[1::2])), n_side=geom.n_side)
    passive = {f"phased#{i}": random_phased_load(m, rng) for i in range(n_phased)}
    passive["switched-full"] = full
    nonzero = {k: int(np.count_nonzero(noise_density(c, ld, th, ph, 1.0))) for k, ld in passive.items()}

    vis = routing.visible_ports(geom, 0.9)
    inner = {"phased#0": passive["phased#0"], "switched-full": full,
             "switched-route": routing.beam_route(vis[0], vis[-1], geom.n_side)}
    pos = {}
    for k, ld in inner.items():
        load = ActiveLoad(ld, 10.0)
        try:
            pos[k] = float(np.max(noise_density(c, load, th, ph, 1.0)))
        except InstabilityError:
            pos[k] = f"unstable (rho={spectral_radius(realize_load(load, m) @ c.S_aa):.2f})"
    active_ok = any(isinstance(v, float) and v > 0 for v in pos.values())
    ok = all(v == 0 for v in nonzero.values()) and active_ok
    nz = ", ".join(f"{k} {v}" for k, v in nonzero.items())
    act = ", ".join(f"{k} {v:.3g}" if isinstance(v, float) else f"{k} {v}" for k, v in pos.items())
    return ok, f"passive loads nonzero at [{nz}] of {n_angles} angles; gain-10 peak N: {act}"


@_timed(6, "overhead optimality")
def overhead_optimality():
    p = FIXTURE
    parts, ok = [], True
    for name, rate_fn, closed, tol in (("redirective", la.rate_redirective, la.optimal_gain_redirective, 0.02),
                                       ("reflective", la.rate_reflective, la.optimal_gain_reflective, 0.05)):
        _, r_bf = la.brute_force_gain(rate_fn, p)
        m_cf = closed(p)
        r_cf = rate_fn(p.with_gain(m_cf)).rate
        gap = abs(r_bf - r_cf) / r_bf
        ok &= gap <= tol
        parts.append(f"{name} M_A*={m_cf:.4g} gap {gap:.2%} (<={tol:.0%})")
    _, best_rd = la.brute_force_gain(la.rate_redirective, p)
    _, best_rf = la.brute_force_gain(la.rate_reflective, p)
    ok &= best_rd >= best_rf
    x = np.concatenate([-1 / np.e + np.logspace(-6, np.log10(1 / np.e), 400), np.logspace(-8, 12, 2000)])
    w = lambert_w(x)
    rt = float(np.max(np.abs(w * np.exp(w) - x) / np.maximum(np.abs(x), 1.0)))
    ok &= rt <= 1e-12
    parts.append(f"max rates {best_rd:.4g} >= {best_rf:.4g}; Lambert W round-trip {rt:.1e} (<=1e-12)")
    return ok, "; ".join(parts)


@_timed(7, "routing")
def routing_check(draws: int = 200, seed: int = 7):
    rng = np.random.default_rng(seed)
    geom = ArrayGeometry(16, 0.5)
    c = CoupledArray.from_geometry(geom)
    ports = rng.permutation(routing.visible_ports(geom, 0.9))
    routes = [routing.beam_route(int(ports[2 * k]), int(ports[2 * k + 1]), geom.n_side) for k in range(4)]
    combined = routing.combine_redirective(routes)
    obj = routing.redirective_objective(combined, routes, c.n_elements)
    red_naive = np.asarray(routing.redirective_gains(c, 4, np.random.default_rng(seed), Model.NAIVE))
    red_exact = np.asarray(routing.redirective_gains(c, 4, np.random.default_rng(seed), Model.EXACT))
    dev = float(np.max(np.abs(red_naive - 1)))
    ok = obj == 0 and dev <= 1e-9
    parts = [f"redirective objective {obj:g}, max |gain-1| {dev:.1e} (<=1e-9; exact model {np.max(np.abs(red_exact - 1)):.1e})"]
    for K in (2, 4):
        g = routing.reflective_gains(c, K, draws, rng, Model.EXACT)
        ok &= 0.7 / K <= g.mean() <= 1.3 / K
        parts.append(f"reflective K={K} mean gain*K {g.mean() * K:.3f} (in [0.7, 1.3])")
    return ok, "; ".join(parts)


def _slope(x, y) -> float:
    return float(np.polyfit(np.log(x), np.log(y), 1)[0])


@_timed(8, "estimation scaling")
def estimation_scaling(trials: int = 2000, seed: int = 8):
    t0 = time.perf_counter()
    exact_err = 0.0
    for m in (16, 64, 256):
        ch = estimation.SparseAngularChannel.random(m, 4, seed)
        sched = estimation.make_probe_schedule(m)
        q_hat = estimation.retro_recover(estimation.retro_measure(ch, sched), sched)
        exact_err = max(exact_err, float(np.max(np.abs(q_hat - ch.s**2))))
    Ms = np.array([16, 64, 256])
    sds = np.array([0.01, 0.1, 1.0])
    comps = [estimation.compare_estimators(m, 4, sds, trials, seed + i) for i, m in enumerate(Ms)]
    retro = np.array([c.mse_retro for c in comps])
    casc = np.array([c.mse_cascaded for c in comps])
    # with T = M probes: retro ~ sd^2 / M^3, cascaded ~ sd^2 / M^2
    checks = {
        "retro vs M": (_slope(Ms, retro[:, -1]), -3.0),
        "cascaded vs M": (_slope(Ms, casc[:, -1]), -2.0),
        "retro vs sd": (_slope(sds, retro[-1]), 2.0),
        "cascaded vs sd": (_slope(sds, casc[-1]), 2.0),
    }
    ok = exact_err <= 1e-12
    parts = [f"noiseless retro err {exact_err:.1e}"]
    for k, (s, ref) in checks.items():
        ok &= abs(s - ref) <= 0.1 * abs(ref)
        parts.append(f"{k} slope {s:.3f} (ref {ref:g})")
    ratio_slope = _slope(Ms, casc[:, -1] / retro[:, -1])
    ok &= abs(ratio_slope - 1) <= 0.2
    dt = time.perf_counter() - t0
    ok &= dt < 120
    parts.append(f"gain-ratio slope {ratio_slope:.3f} (1+-0.2)")
    return ok, "; ".join(parts)


_DETERMINISM_CONFIGS = (
    {"workflow": "coupling", "seed": 0, "n_side": [4, 8], "spacing": [0.5]},
    {"workflow": "scatter", "seed": 11, "n_side": 4, "trials": 8, "active_gains": [1.0, 10.0]},
    {"workflow": "routing", "seed": 12, "n_side": 8, "K": [1, 2], "draws": 4},
    {"workflow": "estimate", "seed": 13, "M": [16, 64], "noise_sd": [0.1, 1.0], "trials": 50},
)


def cli_determinism() -> tuple[bool, str]:
    """Run each config twice (serial and with two workers) and compare CSV bytes."""
    from .cli import main

    mismatched = []
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        for i, cfg in enumerate(_DETERMINISM_CONFIGS):
            path = tmp / f"cfg{i}.json"
            path.write_text(json.dumps(cfg))
            dirs = [tmp / f"run{i}_{k}" for k in range(2)]
            for d, jobs in zip(dirs, ("1", "2")):
                with contextlib.redirect_stdout(io.StringIO()):
                    code = main(["run", "--config", str(path), "--out", str(d), "--jobs", jobs])
                if code != 0:
                    return False, f"{cfg['workflow']} exited {code}"
            csvs = sorted(p.name for p in dirs[0].glob("*.csv"))
            _, bad, err = filecmp.cmpfiles(dirs[0], dirs[1], csvs, shallow=False)
            mismatched += bad + err
    return not mismatched, f"{len(_DETERMINISM_CONFIGS)} workflows, mismatched CSVs: {mismatched or 'none'}"


CRITERIA = (lossless_construction, quadrature_consistency, passivity_and_ordering, partial_isometry_trend,
            noise_clamp, overhead_optimality, routing_check, estimation_scaling)


@functools.cache
def cli_check() -> Criterion:
    t0 = time.perf_counter()
    det_ok, det = cli_determinism()
    others = [fn() for fn in CRITERIA]
    red = [c.number for c in others if not c.passed]
    ok = det_ok and not red
    detail = f"{det}; selftest criteria red: {red or 'none'}"
    _RESULTS[9] = Criterion(9, "CLI determinism", ok, detail, time.perf_counter() - t0)
    return _RESULTS[9]


cli_check.number = 9
ALL = CRITERIA + (cli_check,)


def run_all(only=None) -> list[Criterion]:
    wanted = set(only) if only else None
    return [fn() for fn in ALL if wanted is None or fn.number in wanted]
