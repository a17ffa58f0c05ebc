"""Scenario workflows: compose library calls into result tables.

Each workflow takes a validated configuration and returns a list of
:class:`ResultTable`. Sweep items are dispatched through :func:`sweep_map`,
which keeps results in sweep order whatever the worker count.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from functools import partial

import numpy as np

from . import estimation, link_analysis as la, routing
from .array_model import (ArrayGeometry, CoupledArray, dft_offdiagonal_fraction, mode_count,
                          transition_fraction, visible_mode_estimate)
from .errors import InstabilityError
from .grid import AngularGrid
from .results import ResultTable
from .scattering import (ActiveLoad, LoadConfig, Model, PhasedLoad, PlaneWaveSet, SwitchedDFTLoad,
                         ZeroLoad, integrated_interference, noise_density, random_phased_load,
                         random_waves, realize_load, scatter, spectral_radius, stability_margin)


def sweep_map(fn, items, jobs: int = 1) -> list:
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def child_seeds(seed: int, n: int) -> list[np.random.SeedSequence]:
    return np.random.SeedSequence(seed).spawn(n)


def load_from_spec(spec: dict) -> LoadConfig:
    kind = spec["kind"]
    if kind == "zero":
        return ZeroLoad()
    if kind == "phased":
        return PhasedLoad(spec["phases"])
    if kind == "switched":
        return SwitchedDFTLoad(pairs=tuple(tuple(p) for p in spec["pairs"]), n_side=spec.get("n_side"))
    return ActiveLoad(load_from_spec(spec["inner"]), spec["gain"])


# -- coupling ---------------------------------------------------------------

def _coupling_item(item):
    n, a = item
    c = CoupledArray.from_geometry(ArrayGeometry(n, a))
    summary = (n, a, c.n_elements, c.lossless_error(), c.reciprocity_error(),
               transition_fraction(c.eigvals), mode_count(c.eigvals),
               visible_mode_estimate(c.geometry), dft_offdiagonal_fraction(c.B, n))
    return summary, [(n, a, i, float(v)) for i, v in enumerate(c.eigvals)]


def run_coupling(cfg: dict, jobs: int = 1) -> list[ResultTable]:
    items = list(itertools.product(cfg["n_side"], cfg.get("spacing", [0.5])))
    eig = ResultTable("eigenvalues", ["n_side", "spacing", "index", "eigenvalue"])
    summ = ResultTable("summary", ["n_side", "spacing", "M", "lossless_error", "reciprocity_error",
                                   "transition_fraction", "mode_count", "visible_mode_estimate",
                                   "dft_offdiagonal_fraction"])
    for summary, rows in sweep_map(_coupling_item, items, jobs):
        summ.add(*summary)
        for r in rows:
            eig.add(*r)
    return [eig, summ]


# -- scatter ----------------------------------------------------------------

def _scatter_trial(args):
    geom, grid_shape, max_waves, seed_seq = args
    rng = np.random.default_rng(seed_seq)
    c = CoupledArray.from_geometry(geom)
    grid = AngularGrid.gauss_legendre(*grid_shape)
    load = random_phased_load(c.n_elements, rng)
    waves = random_waves(grid, rng, max_waves)
    exact = scatter(c, load, waves, grid, Model.EXACT).power()
    naive = scatter(c, load, waves, grid, Model.NAIVE).power()
    return (len(waves), waves.impinging_power(), exact, naive,
            stability_margin(c.S_aa, realize_load(load, c.n_elements)))


def _amplification_rows(c: CoupledArray, grid: AngularGrid, gains, N0, NF_inf, N_I, rng):
    m = c.n_elements
    n = c.geometry.n_side
    visible = routing.visible_ports(c.geometry, 0.9)
    archs = {
        "reflective": random_phased_load(m, rng),
        "redirective": SwitchedDFTLoad(pairs=((visible[0], visible[-1]),), n_side=n),
    }
    for gain in gains:
        for name, inner in archs.items():
            load = ActiveLoad(inner, gain) if gain != 1 else inner
            S_L = realize_load(load, m)
            rho = spectral_radius(S_L @ c.S_aa)
            margin = stability_margin(c.S_aa, S_L)
            try:
                interf = integrated_interference(c, load, N_I, grid)
                noise = float(np.max(noise_density(c, load, grid.theta, grid.phi, N0, NF_inf)))
                stable = True
            except InstabilityError:
                interf = noise = float("nan")
                stable = False
            yield (name, float(gain), stable, rho, margin, interf, noise)


def run_scatter(cfg: dict, jobs: int = 1) -> list[ResultTable]:
    geom = ArrayGeometry(cfg["n_side"], cfg.get("spacing", 0.5))
    g = cfg.get("grid", {})
    grid_shape = (g.get("n_theta", 64), g.get("n_phi", 128))
    seed = cfg.get("seed", 0)
    trials = cfg.get("trials", 100)
    seeds = child_seeds(seed, trials + 1)
    items = [(geom, grid_shape, cfg.get("max_waves", 3), s) for s in seeds[:trials]]
    t = ResultTable("trials", ["trial", "n_waves", "impinging_power", "exact_power", "naive_power",
                               "stability_margin"])
    for i, row in enumerate(sweep_map(_scatter_trial, items, jobs)):
        t.add(i, *row)
    tables = [t]

    c = CoupledArray.from_geometry(geom)
    grid = AngularGrid.gauss_legendre(*grid_shape)
    amp = ResultTable("amplification", ["architecture", "gain", "stable", "spectral_radius",
                                        "stability_margin", "integrated_interference", "peak_noise_density"])
    for row in _amplification_rows(c, grid, cfg.get("active_gains", [1.0, 10.0]), cfg.get("N0", 1.0),
                                   cfg.get("NF_inf", 1.0), cfg.get("N_I", 1.0),
                                   np.random.default_rng(seeds[-1])):
        amp.add(*row)
    tables.append(amp)

    if cfg.get("loads"):
        wv = cfg.get("waves", [])
        th = np.radians([w["theta_deg"] for w in wv])
        ph = np.radians([w["phi_deg"] for w in wv])
        amps = np.array([w["amp_re"] + 1j * w.get("amp_im", 0.0) for w in wv])
        # explicit waves carry the mean solid angle of one grid sample
        waves = PlaneWaveSet(th, ph, amps, np.full(len(wv), 2 * np.pi / grid.size))
        ex = ResultTable("explicit", ["load", "impinging_power", "exact_power", "naive_power"])
        for i, spec in enumerate(cfg["loads"]):
            load = load_from_spec(spec)
            ex.add(i, waves.impinging_power(), scatter(c, load, waves, grid, Model.EXACT).power(),
                   scatter(c, load, waves, grid, Model.NAIVE).power())
        tables.append(ex)
    return tables


# -- bandwidth --------------------------------------------------------------

def run_bandwidth(cfg: dict, jobs: int = 1) -> list[ResultTable]:
    t = ResultTable("bandwidth", ["d_tx", "d_rx", "theta_i_deg", "theta_r_deg", "size",
                                  "fresnel_size", "l_max", "fbw_size_form", "fbw_distance_form"])
    sizes = cfg.get("size", [None])
    for d_tx, d_rx, ti, tr, size in itertools.product(cfg["d_tx"], cfg["d_rx"], cfg["theta_i_deg"],
                                                      cfg["theta_r_deg"], sizes):
        req, lmax = la.fresnel_size(d_tx, d_rx)
        L = req if size is None else size
        scn = la.GeometryScenario(d_tx, d_rx, np.radians(ti), np.radians(tr), L)
        t.add(d_tx, d_rx, ti, tr, L, req, lmax, la.fractional_bandwidth_limit(scn),
              la.fractional_bandwidth_limit(scn, use_distance_form=True))
    return [t]


# -- overhead ---------------------------------------------------------------

def run_overhead(cfg: dict, jobs: int = 1) -> list[ResultTable]:
    p = la.OverheadParams(K=cfg["K"], snr=cfg["snr"], M_B=cfg["M_B"], M_A=1.0, b_A=cfg["b_A"],
                          eta_B=cfg["eta_B"], N_s=cfg["N_s"])
    rates = ResultTable("rates", ["M_A", "rate_redirective", "saturated_redirective",
                                  "rate_reflective", "saturated_reflective"])
    for m_a in cfg["M_A"]:
        rd = la.rate_redirective(p.with_gain(m_a))
        rf = la.rate_reflective(p.with_gain(m_a))
        rates.add(float(m_a), rd.rate, rd.saturated, rf.rate, rf.saturated)

    n = cfg.get("grid_points", la.DEFAULT_GRID_POINTS)
    opt = ResultTable("optima", ["scheme", "closed_form_M_A", "closed_form_rate", "brute_M_A",
                                 "brute_rate", "relative_gap"])
    for name, rate_fn, closed in (("redirective", la.rate_redirective, la.optimal_gain_redirective),
                                  ("reflective", la.rate_reflective, la.optimal_gain_reflective)):
        if p.b_A == 0:
            continue
        grid = la.log_gain_grid(la.saturation_gain(rate_fn, p), n)
        m_bf, r_bf = la.brute_force_gain(rate_fn, p, grid)
        m_cf = closed(p)
        r_cf = rate_fn(p.with_gain(m_cf)).rate
        gap = (r_bf - r_cf) / r_bf if r_bf > 0 else float("nan")
        opt.add(name, m_cf, r_cf, m_bf, r_bf, gap)
    return [rates, opt]


# -- routing ----------------------------------------------------------------

def _routing_item(args):
    n, a, K, draws, model, seed_seq = args
    rng = np.random.default_rng(seed_seq)
    c = CoupledArray.from_geometry(ArrayGeometry(n, a))
    red = routing.redirective_gains(c, K, rng, model)
    refl = routing.reflective_gains(c, K, draws, rng, model)
    return K, red, refl


def run_routing(cfg: dict, jobs: int = 1) -> list[ResultTable]:
    n, a = cfg["n_side"], cfg.get("spacing", 0.5)
    draws, model = cfg.get("draws", 200), cfg.get("model", "exact")
    Ks = cfg["K"]
    items = [(n, a, K, draws, model, s) for K, s in zip(Ks, child_seeds(cfg.get("seed", 0), len(Ks)))]
    t = ResultTable("route_gains", ["K", "architecture", "mean_gain", "mean_gain_times_K",
                                    "min_gain", "max_gain", "samples"])
    for K, red, refl in sweep_map(_routing_item, items, jobs):
        for name, g in (("redirective", red), ("reflective", refl)):
            g = np.asarray(g)
            if g.size:
                t.add(K, name, float(g.mean()), float(g.mean() * K), float(g.min()), float(g.max()), int(g.size))
    return [t]


# -- estimate ---------------------------------------------------------------

def _estimate_item(args):
    m, sparsity, noise, trials, seed = args
    return list(estimation.compare_estimators(m, min(sparsity, m), noise, trials, seed).rows())


def run_estimate(cfg: dict, jobs: int = 1) -> list[ResultTable]:
    Ms = cfg["M"]
    seeds = [int(s.generate_state(1)[0]) for s in child_seeds(cfg.get("seed", 0), len(Ms))]
    items = [(m, cfg.get("sparsity", 4), cfg["noise_sd"], cfg.get("trials", 1000), s)
             for m, s in zip(Ms, seeds)]
    cols = ["M", "sparsity", "noise_sd", "mse_retro", "mse_cascaded", "gain_ratio"]
    t = ResultTable("estimation", cols)
    for rows in sweep_map(_estimate_item, items, jobs):
        for r in rows:
            t.add(*(r[c] for c in cols))
    return [t]


WORKFLOW_FUNCS = {
    "coupling": run_coupling,
    "scatter": run_scatter,
    "bandwidth": run_bandwidth,
    "overhead": run_overhead,
    "routing": run_routing,
    "estimate": run_estimate,
}


def run_workflow(cfg: dict, jobs: int = 1) -> list[ResultTable]:
    return WORKFLOW_FUNCS[cfg["workflow"]](cfg, jobs)
