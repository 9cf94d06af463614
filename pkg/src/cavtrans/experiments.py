"""Scenario runner: seeded parameter sweeps emitting tidy CSV + JSON metadata.

Each scenario reproduces one of the standard figures of the study at desk
scale (deep variants behind the ``deep`` flag).  Every emitted row carries
the full resolved parameter tuple, so any single row can be recomputed in
isolation; aggregate rows (seed columns "mean"/"stderr") are recomputable
from the per-seed rows they summarize.

CSV schema (one file per scenario), columns:
    scenario, seed, N, M, g, Jprime, Delta, kappa, gamma_P, gamma_out,
    gamma_sp, gamma_deph, deltaJ, observable_name, t_or_none, value
Values not applicable to a scenario (e.g. Jprime in the lead-free pumped
layout) are written as 0.  A JSON sidecar records resolved parameters,
overrides, versions and wall time.
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .model import (AllToAll, ChainSpec, DipolarLongRange, DisorderSpec,
                    build_hamiltonian, sample_positions)
from .dynamics import (SpectralPropagator, WavePacketSpec, cavity_occupation,
                       evolve, evolve_lossy_cavity, in_cavity_weight,
                       initial_wave_packet, timescales, transmission_at)
from .lindblad import (DissipationRates, chain_liouvillian, current_out,
                       steady_state)
from .scattering import (ScatterParams, impedance_jprime, jprime_fixed_ratio,
                         packet_averaged_transmission)

__all__ = [
    "CSV_COLUMNS",
    "SCENARIO_IDS",
    "Scenario",
    "EnsembleResult",
    "FitResult",
    "run_scenario",
    "fit_scaling",
    "crossover_locator",
    "peak_characterize",
]

CSV_COLUMNS = [
    "scenario", "seed", "N", "M", "g", "Jprime", "Delta", "kappa",
    "gamma_P", "gamma_out", "gamma_sp", "gamma_deph", "deltaJ",
    "observable_name", "t_or_none", "value",
]

SCENARIO_IDS = [
    "fig1b", "fig2a", "fig2b", "fig2c", "fig2d",
    "fig3a", "fig3b", "fig3c", "fig3d",
    "figS1", "figS2", "figS3", "figA1",
]

SIGN_CONVENTIONS = {
    "hopping": "nearest-neighbor bonds enter as -J_k; dipolar pairs as +Jbar/r^3",
    "current": "I_out is reported as the magnitude gamma_out*<n_N>",
    "pump": "pump operator truncated to |site1><vac| (refill from vacuum only)",
}


@dataclass(frozen=True)
class Scenario:
    """One runnable sweep: id, parameter overrides, seed list, output dir."""

    id: str
    overrides: dict = field(default_factory=dict)
    seeds: tuple[int, ...] = ()
    out_dir: Path = Path("out")
    deep: bool = False
    threads: int | None = None


@dataclass
class EnsembleResult:
    rows: list[tuple]
    csv_path: Path
    meta_path: Path


@dataclass(frozen=True)
class FitResult:
    exponent: float
    r_squared: float
    intercept: float


def fit_scaling(xs, ys, model: str) -> FitResult:
    """Least-squares fit of log y against log x ("powerlaw") or x
    ("exponential"); returns the slope (exponent/rate) and R^2."""
    xs = np.asarray(xs, float)
    ys = np.asarray(ys, float)
    if len(xs) < 4:
        raise ValueError("need at least 4 points")
    if np.any(ys <= 0):
        raise ValueError("log fit needs positive ys")
    if model == "powerlaw":
        if np.any(xs <= 0):
            raise ValueError("power-law fit needs positive xs")
        X = np.log(xs)
    elif model == "exponential":
        X = xs
    else:
        raise ValueError(f"unknown model {model!r}")
    Y = np.log(ys)
    slope, intercept = np.polyfit(X, Y, 1)
    resid = Y - (slope * X + intercept)
    ss_tot = float(np.sum((Y - Y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0
    return FitResult(exponent=float(slope), r_squared=r2, intercept=float(intercept))


def crossover_locator(gs, ys) -> float | None:
    """g at the point of maximum log-log slope of y(g); None for a flat curve."""
    gs = np.asarray(gs, float)
    ys = np.asarray(ys, float)
    if np.any(gs <= 0) or np.any(ys <= 0):
        raise ValueError("crossover location needs positive data")
    ly = np.log(ys)
    if np.ptp(ly) < 1e-9:
        return None
    slopes = np.diff(ly) / np.diff(np.log(gs))
    k = int(np.argmax(slopes))
    return float(math.sqrt(gs[k] * gs[k + 1]))


def peak_characterize(xs, ys) -> dict[str, float]:
    """Peak position (parabolic refinement), height, and interpolated FWHM."""
    xs = np.asarray(xs, float)
    ys = np.asarray(ys, float)
    i = int(np.argmax(ys))
    pos, height = float(xs[i]), float(ys[i])
    if 0 < i < len(xs) - 1:
        y0, y1, y2 = ys[i - 1: i + 2]
        denom = y0 - 2 * y1 + y2
        if denom < 0:
            shift = 0.5 * (y0 - y2) / denom
            dx = 0.5 * (xs[i + 1] - xs[i - 1])
            pos = float(xs[i] + shift * dx)
            height = float(y1 - 0.25 * (y0 - y2) * shift)
    half = height / 2.0
    left = right = math.nan
    for k in range(i, 0, -1):
        if ys[k - 1] < half <= ys[k]:
            f = (half - ys[k - 1]) / (ys[k] - ys[k - 1])
            left = xs[k - 1] + f * (xs[k] - xs[k - 1])
            break
    for k in range(i, len(xs) - 1):
        if ys[k + 1] < half <= ys[k]:
            f = (ys[k] - half) / (ys[k] - ys[k + 1])
            right = xs[k] + f * (xs[k + 1] - xs[k])
            break
    width = right - left if not (math.isnan(left) or math.isnan(right)) else math.nan
    return {"position": pos, "height": height, "fwhm": float(width)}


# ---------------------------------------------------------------------------
# shared machinery

_Q0 = np.pi / 2
_DELTA = 5.0
_DELTA_X = 20


def _default_lead(delta: float = _DELTA, delta_x: int = _DELTA_X) -> int:
    # leads must contain the packet and its 5-sigma tails
    return max(50, int(math.ceil(delta_x + 5 * delta)))


def _fmt(x) -> str:
    if x is None:
        return ""
    return repr(float(x))


def _row(scenario, seed, spec_like, rates, deltaJ, name, t, value):
    """Assemble one CSV tuple from resolved parameters."""
    N, M, g, jp, delta = spec_like
    kappa, gp, gout, gsp, gdeph = rates
    return (scenario, str(seed), str(N), str(M), _fmt(g), _fmt(jp), _fmt(delta),
            _fmt(kappa), _fmt(gp), _fmt(gout), _fmt(gsp), _fmt(gdeph),
            _fmt(deltaJ), name, _fmt(t) if t is not None else "", _fmt(value))


_NO_RATES = (0.0, 0.0, 0.0, 0.0, 0.0)


def _packet_run(spec: ChainSpec, wp: WavePacketSpec, *, kappa: float = 0.0,
                want_trajectory: bool = False, dt: float = 0.5,
                t_max: float | None = None):
    """Transmission at the two reference times (and optionally a trajectory).

    Returns dict with T_ts, T_tl, in_cavity_ts/tl and, if requested, arrays
    (times, T(t), photon occupation, in-cavity weight).
    """
    h = build_hamiltonian(spec, sparse=spec.dim > 2000)
    psi0 = initial_wave_packet(wp, spec)
    ts = timescales(wp, spec)
    out = {"t_s": ts.t_s, "t_l": ts.t_l}

    if kappa > 0:
        states = {t: evolve_lossy_cavity(h, kappa, psi0, t) for t in (ts.t_s, ts.t_l)}
    elif spec.dim <= 2000:
        prop = SpectralPropagator(h if isinstance(h, np.ndarray) else h.toarray())
        states = {t: prop(psi0, t) for t in (ts.t_s, ts.t_l)}
    else:
        states = {t: evolve(h, psi0, t) for t in (ts.t_s, ts.t_l)}
    out["T_ts"] = transmission_at(states[ts.t_s], spec)
    out["T_tl"] = transmission_at(states[ts.t_l], spec)
    out["in_cavity_ts"] = in_cavity_weight(states[ts.t_s], spec)
    out["in_cavity_tl"] = in_cavity_weight(states[ts.t_l], spec)

    if want_trajectory:
        tmax = t_max if t_max is not None else ts.t_l * 1.3
        times = np.arange(0.0, tmax + dt / 2, dt)
        if kappa > 0:
            snaps = [evolve_lossy_cavity(h, kappa, psi0, t) for t in times]
        else:
            dense = h if isinstance(h, np.ndarray) else h.toarray()
            prop = SpectralPropagator(dense)
            snaps = [prop(psi0, t) for t in times]
        out["times"] = times
        out["T_t"] = np.array([transmission_at(s, spec) for s in snaps])
        out["n_c"] = np.array([cavity_occupation(s) for s in snaps])
        out["inside"] = np.array([in_cavity_weight(s, spec) for s in snaps])
    return out


def _max_transmission_over_delta(N, g, *, seed=0, deltaJ=0.0, kappa=0.0,
                                 jfactor=4.0, npts=25, window=None):
    """max_Delta T_ts near the upper polariton line, with the argmax.

    Two-stage scan: a coarse window around g sqrt(N) - J, then a refinement
    around the coarse maximum (the inelastic-regime peak is much narrower
    than the impedance width w, so one pass undersamples it).
    """
    jp = impedance_jprime(N, _DELTA, jfactor)
    w = jp**2 / (2.0 * N)
    center = g * math.sqrt(N) - 1.0
    half = window if window is not None else max(6.0 * w, 4.0)
    wp = WavePacketSpec(q0=_Q0, delta=_DELTA, delta_x=_DELTA_X)
    M = _default_lead()
    dis = DisorderSpec(kind="tunneling", deltaJ=deltaJ, seed=seed) if deltaJ > 0 \
        else DisorderSpec()

    def at(d: float) -> float:
        spec = ChainSpec(M=M, N=int(N), omega=float(d), Jprime=jp, g=g, disorder=dis)
        return _packet_run(spec, wp, kappa=kappa)["T_ts"]

    best_T, best_d = -1.0, center
    spacing = 2.0 * half / (npts - 1)
    for d in np.linspace(center - half, center + half, npts):
        T = at(float(d))
        if T > best_T:
            best_T, best_d = T, float(d)
    for d in np.linspace(best_d - spacing, best_d + spacing, 17):
        T = at(float(d))
        if T > best_T:
            best_T, best_d = T, float(d)
    return best_T, best_d, jp


def _aggregate(rows: list[tuple]) -> list[tuple]:
    """Mean and unbiased-stderr rows over seeds, keyed by everything else."""
    groups: dict[tuple, list[float]] = {}
    order: list[tuple] = []
    for r in rows:
        key = r[:1] + r[2:15]  # all but seed and value
        if key not in groups:
            groups[key] = []
            order.append(key)
        groups[key].append(float(r[15]))
    agg = []
    for key in order:
        vals = np.asarray(groups[key])
        if len(vals) < 2:
            continue
        mean = vals.mean()
        err = vals.std(ddof=1) / math.sqrt(len(vals))
        agg.append((key[0], "mean") + key[1:] + (_fmt(mean),))
        agg.append((key[0], "stderr") + key[1:] + (_fmt(err),))
    return agg


# ---------------------------------------------------------------------------
# scenario builders: each returns (jobs, description, resolved_params)
# where jobs is a list of zero-argument callables producing CSV rows.


def _sc_fig1b(o, seeds, deep):
    N, M, g, jp, delta = o.get("N", 50), _default_lead(), o.get("g", 10.0), \
        o.get("Jprime", 10.0), o.get("Delta", 69.0)
    params = dict(N=N, M=M, g=g, Jprime=jp, Delta=delta, delta=_DELTA,
                  delta_x=_DELTA_X, q0=_Q0, dt=o.get("dt", 0.5))

    def job():
        spec = ChainSpec(M=M, N=N, omega=delta, Jprime=jp, g=g)
        wp = WavePacketSpec(q0=_Q0, delta=_DELTA, delta_x=_DELTA_X)
        r = _packet_run(spec, wp, want_trajectory=True, dt=params["dt"])
        pt = (N, M, g, jp, delta)
        rows = []
        for t, T, nc, inside in zip(r["times"], r["T_t"], r["n_c"], r["inside"]):
            rows.append(_row("fig1b", 0, pt, _NO_RATES, 0.0, "transmission", t, T))
            rows.append(_row("fig1b", 0, pt, _NO_RATES, 0.0, "cavity_occupation", t, nc))
            rows.append(_row("fig1b", 0, pt, _NO_RATES, 0.0, "in_cavity", t, inside))
        rows.append(_row("fig1b", 0, pt, _NO_RATES, 0.0, "T_ts", r["t_s"], r["T_ts"]))
        rows.append(_row("fig1b", 0, pt, _NO_RATES, 0.0, "T_tl", r["t_l"], r["T_tl"]))
        return rows

    return [job], "single wave-packet shot through a strongly coupled cavity " \
                  "segment, trajectory of transmitted/in-cavity weight", params


def _fig2a_deltas(g, N):
    center = g * math.sqrt(N) - 1.0
    coarse = np.linspace(-1.2 * center - 40, 1.2 * center + 40, 81)
    fine_u = np.linspace(center - 8, center + 8, 33)
    fine_d = np.linspace(-center - 8, -center + 8, 33)
    near0 = np.linspace(-8, 8, 17)
    return np.unique(np.concatenate([coarse, fine_u, fine_d, near0]))


def _sc_fig2a(o, seeds, deep):
    N, g = o.get("N", 100), o.get("g", 50.0)
    M = _default_lead()
    jp = impedance_jprime(N, _DELTA, o.get("Jprime_factor", 4.0))
    deltas = _fig2a_deltas(g, N) if "Delta_list" not in o else np.asarray(o["Delta_list"], float)
    params = dict(N=N, M=M, g=g, Jprime=jp, Delta_points=len(deltas))
    wp = WavePacketSpec(q0=_Q0, delta=_DELTA, delta_x=_DELTA_X)

    def one(d):
        def job():
            spec = ChainSpec(M=M, N=N, omega=float(d), Jprime=jp, g=g)
            r = _packet_run(spec, wp)
            p = ScatterParams(N=N, Jprime=jp, g=g, omega=float(d), q=_Q0)
            pt = (N, M, g, jp, d)
            return [
                _row("fig2a", 0, pt, _NO_RATES, 0.0, "T_ts", r["t_s"], r["T_ts"]),
                _row("fig2a", 0, pt, _NO_RATES, 0.0, "T_tl", r["t_l"], r["T_tl"]),
                _row("fig2a", 0, pt, _NO_RATES, 0.0, "analytic_T", None,
                     packet_averaged_transmission(p, _DELTA)),
                _row("fig2a", 0, pt, _NO_RATES, 0.0, "analytic_T_pbc", None,
                     packet_averaged_transmission(p, _DELTA, theory="pbc")),
            ]
        return job

    return [one(d) for d in deltas], \
        "transmission spectrum against lead detuning at strong collective " \
        "coupling, with the stationary-theory overlay", params


def _sc_fig2b(o, seeds, deep):
    gs = np.asarray(o.get("g_list", np.geomspace(1.0, 60.0, 21)), float)
    Ns = np.asarray(o.get("N_list",
                          sorted(set(int(round(n)) for n in np.geomspace(10, 400, 13)))), int)
    params = dict(g_list=list(map(float, gs)), N_list=list(map(int, Ns)))

    def one(g, N):
        def job():
            T, dmax, jp = _max_transmission_over_delta(int(N), float(g))
            pt = (int(N), _default_lead(), float(g), jp, dmax)
            return [
                _row("fig2b", 0, pt, _NO_RATES, 0.0, "max_T_ts", None, T),
                _row("fig2b", 0, pt, _NO_RATES, 0.0, "Delta_at_max", None, dmax),
            ]
        return job

    jobs = [one(g, N) for N in Ns for g in gs]
    return jobs, "best ultra-fast transmission over detuning on a (g, N) grid", params


def _sc_fig2c(o, seeds, deep):
    Ns = list(o.get("N_list", (50, 100, 200)))
    xs = np.asarray(o.get("x_list", np.geomspace(0.1, 2.0, 13)), float)
    params = dict(N_list=Ns, g_over_sqrtN=list(map(float, xs)))

    def one(N, x):
        def job():
            g = float(x) * math.sqrt(N)
            T, dmax, jp = _max_transmission_over_delta(int(N), g)
            pt = (int(N), _default_lead(), g, jp, dmax)
            return [_row("fig2c", 0, pt, _NO_RATES, 0.0, "max_T_ts", None, T)]
        return job

    return [one(N, x) for N in Ns for x in xs], \
        "collapse of the best transmission against g/sqrt(N)", params


def _sc_fig2d(o, seeds, deep):
    N = o.get("N", 50)
    M = o.get("M", 50)
    g = o.get("g", 10.0)
    kappas = list(o.get("kappa_list", (0.0, 1.0, 10.0)))
    jp = impedance_jprime(N, _DELTA, 4.0)
    center = g * math.sqrt(N) - 1.0
    deltas = np.asarray(o.get("Delta_list", np.linspace(center - 30, center + 30, 61)), float)
    params = dict(N=N, M=M, g=g, Jprime=jp, kappa_list=kappas)
    wp = WavePacketSpec(q0=_Q0, delta=_DELTA, delta_x=_DELTA_X)

    def one(kappa, d):
        def job():
            spec = ChainSpec(M=M, N=N, omega=float(d), Jprime=jp, g=g)
            r = _packet_run(spec, wp, kappa=float(kappa))
            pt = (N, M, g, jp, d)
            rates = (float(kappa), 0.0, 0.0, 0.0, 0.0)
            return [_row("fig2d", 0, pt, rates, 0.0, "T_ts", r["t_s"], r["T_ts"])]
        return job

    return [one(k, d) for k in kappas for d in deltas], \
        "shrinkage and broadening of the polariton transmission peak under " \
        "cavity decay", params


def _sc_fig3a(o, seeds, deep):
    Ns = list(o.get("N_list", (25, 50, 100, 200, 400)))
    if deep:
        Ns = Ns + [1000, 3162, 10000]
    gs = list(o.get("g_list", (0.0, 0.05, 0.1, 0.2)))
    deltaJ = o.get("deltaJ", 0.2)
    params = dict(N_list=Ns, g_list=gs, deltaJ=deltaJ, seeds=len(seeds))
    wp = WavePacketSpec(q0=_Q0, delta=_DELTA, delta_x=_DELTA_X)
    M = _default_lead()

    def one(N, g, seed):
        def job():
            jp = impedance_jprime(int(N), _DELTA, 4.0)
            d = g * math.sqrt(N) - 1.0
            spec = ChainSpec(M=M, N=int(N), omega=d, Jprime=jp, g=float(g),
                             disorder=DisorderSpec(kind="tunneling", deltaJ=deltaJ, seed=seed))
            r = _packet_run(spec, wp)
            pt = (int(N), M, g, jp, d)
            return [
                _row("fig3a", seed, pt, _NO_RATES, deltaJ, "T_ts", r["t_s"], r["T_ts"]),
                _row("fig3a", seed, pt, _NO_RATES, deltaJ, "T_tl", r["t_l"], r["T_tl"]),
            ]
        return job

    jobs = [one(N, g, s) for N in Ns for g in gs for s in seeds]
    return jobs, "disorder-averaged transmission against system size: " \
                 "exponential suppression without the cavity, algebraic with it", params


_FIG3_RATES = dict(gamma_sp=0.04, gamma_deph=0.9, gamma_out=2.0)


def _steady_point(N, g, gamma_P, kappa, deltaJ, seed, *, gamma_out=2.0):
    rates = DissipationRates(kappa=kappa, gamma_P=gamma_P, gamma_out=gamma_out,
                             gamma_sp=_FIG3_RATES["gamma_sp"],
                             gamma_deph=_FIG3_RATES["gamma_deph"])
    spec = ChainSpec(M=0, N=int(N), g=float(g),
                     disorder=DisorderSpec(kind="tunneling", deltaJ=deltaJ, seed=seed))
    lv = chain_liouvillian(spec, rates)
    rho = steady_state(lv)
    return current_out(rho, rates, lv.n_sites), rates


def _sc_fig3b(o, seeds, deep):
    N = o.get("N", 50)
    gs = list(o.get("g_list", (0.0, 0.05, 0.1, 0.2)))
    gps = np.asarray(o.get("gammaP_list", np.geomspace(0.01, 10.0, 13)), float)
    deltaJ = o.get("deltaJ", 0.2)
    kappa = o.get("kappa", 1.0)
    seed = seeds[0]
    params = dict(N=N, g_list=gs, gammaP_points=len(gps), deltaJ=deltaJ,
                  kappa=kappa, kappa_choice="lossy cavity kappa=J by default "
                  "(recycles dark-state population; swept explicitly in fig3d)",
                  seed=seed, **_FIG3_RATES)

    def one(g, gp):
        def job():
            iout, rates = _steady_point(N, g, float(gp), kappa, deltaJ, seed)
            pt = (N, 0, g, 0.0, 0.0)
            rt = (kappa, float(gp), rates.gamma_out, rates.gamma_sp, rates.gamma_deph)
            return [_row("fig3b", seed, pt, rt, deltaJ, "I_out", None, iout)]
        return job

    return [one(g, gp) for g in gs for gp in gps], \
        "steady-state exciton current against pump rate under incoherent " \
        "pumping, with and without the cavity", params


def _sc_fig3c(o, seeds, deep):
    Ns = list(o.get("N_list", (10, 15, 20, 30, 40, 60, 80, 100, 120, 150)))
    gs = list(o.get("g_list", (0.0, 0.05, 0.1, 0.2)))
    gamma_P = o.get("gamma_P", 0.5)
    deltaJ = o.get("deltaJ", 0.2)
    kappa = o.get("kappa", 1.0)
    seed = seeds[0]
    params = dict(N_list=Ns, g_list=gs, gamma_P=gamma_P, deltaJ=deltaJ,
                  kappa=kappa, kappa_choice="lossy cavity kappa=J by default "
                  "(recycles dark-state population; swept explicitly in fig3d)",
                  seed=seed, **_FIG3_RATES)

    def one(N, g):
        def job():
            iout, rates = _steady_point(N, g, gamma_P, kappa, deltaJ, seed)
            pt = (int(N), 0, g, 0.0, 0.0)
            rt = (kappa, gamma_P, rates.gamma_out, rates.gamma_sp, rates.gamma_deph)
            return [_row("fig3c", seed, pt, rt, deltaJ, "I_out", None, iout)]
        return job

    return [one(N, g) for g in gs for N in Ns], \
        "steady-state current against chain length: exponential versus " \
        "algebraic decay", params


def _sc_fig3d(o, seeds, deep):
    N = o.get("N", 50)
    gamma_P = o.get("gamma_P", 0.5)
    kappas = list(o.get("kappa_list", (0.0, 1.0, 10.0)))
    gs = np.asarray(o.get("g_list", np.geomspace(0.02, 2.0, 17)), float)
    deltaJ = o.get("deltaJ", 0.2)
    seed = seeds[0]
    params = dict(N=N, gamma_P=gamma_P, kappa_list=kappas,
                  g_points=len(gs), deltaJ=deltaJ, seed=seed, **_FIG3_RATES)

    def one(kappa, g):
        def job():
            iout, rates = _steady_point(N, float(g), gamma_P, float(kappa), deltaJ, seed)
            pt = (N, 0, float(g), 0.0, 0.0)
            rt = (float(kappa), gamma_P, rates.gamma_out, rates.gamma_sp, rates.gamma_deph)
            return [_row("fig3d", seed, pt, rt, deltaJ, "I_out", None, iout)]
        return job

    return [one(k, g) for k in kappas for g in gs], \
        "crossover of the steady current as the collective coupling exceeds " \
        "the other scales, shifting with cavity decay", params


def _sc_figS1(o, seeds, deep):
    N = o.get("N", 1000 if deep else 100)
    gs = list(o.get("g_list", (1.0, 5.0, 10.0, 20.0, 50.0)))
    M = _default_lead()
    jp_factor = o.get("Jprime_factor", 4.0)
    params = dict(N=N, M=M, g_list=gs, Jprime_factor=jp_factor, dt=o.get("dt", 0.5))
    wp = WavePacketSpec(q0=_Q0, delta=_DELTA, delta_x=_DELTA_X)

    def one(g):
        def job():
            jp = impedance_jprime(N, _DELTA, jp_factor)
            d = g * math.sqrt(N) - 1.0
            spec = ChainSpec(M=M, N=N, omega=d, Jprime=jp, g=float(g))
            r = _packet_run(spec, wp, want_trajectory=True, dt=params["dt"])
            pt = (N, M, float(g), jp, d)
            rows = []
            for t, T, nc in zip(r["times"], r["T_t"], r["n_c"]):
                rows.append(_row("figS1", 0, pt, _NO_RATES, 0.0, "cavity_occupation", t, nc))
                rows.append(_row("figS1", 0, pt, _NO_RATES, 0.0, "transmission", t, T))
            return rows
        return job

    return [one(g) for g in gs], \
        "time evolution of the photon occupation and transmission across " \
        "coupling regimes", params


def _sc_figS2(o, seeds, deep):
    N = o.get("N", 100)
    M = _default_lead()
    gs = np.asarray(o.get("g_list", np.geomspace(1.0, 50.0, 11)), float)
    jp = jprime_fixed_ratio(N, _DELTA, 1.5)
    params = dict(N=N, M=M, Jprime=jp, g_points=len(gs),
                  segment_bonds="tight-binding bonds inside the segment set to zero")
    wp = WavePacketSpec(q0=_Q0, delta=_DELTA, delta_x=_DELTA_X)
    packet_fwhm = math.sqrt(8 * math.log(2)) * 2.0 * (1.0 / (2 * _DELTA))

    def one(g):
        def job():
            center = float(g) * math.sqrt(N)
            deltas = np.linspace(center - 4.0, center + 4.0, 41)
            tvals = []
            for d in deltas:
                spec = ChainSpec(M=M, N=N, omega=float(d), Jprime=jp, g=float(g))
                bonds = np.full(spec.ntot - 1, 1.0)
                bonds[M - 1] = jp
                bonds[M + N - 1] = jp
                bonds[M:M + N - 1] = 0.0
                h = build_hamiltonian(spec, tunnelings=bonds)
                psi0 = initial_wave_packet(wp, spec)
                tsc = timescales(wp, spec)
                tvals.append(transmission_at(evolve(h, psi0, tsc.t_s), spec))
            peak = peak_characterize(deltas, np.asarray(tvals))
            pt = (N, M, float(g), jp, center)
            rows = [
                _row("figS2", 0, pt, _NO_RATES, 0.0, "fwhm_numeric", None, peak["fwhm"]),
                _row("figS2", 0, pt, _NO_RATES, 0.0, "peak_T", None, peak["height"]),
                _row("figS2", 0, pt, _NO_RATES, 0.0, "peak_offset", None,
                     peak["position"] - center),
                _row("figS2", 0, pt, _NO_RATES, 0.0, "fwhm_analytic", None,
                     2.0 * jp**2 / N),
                _row("figS2", 0, pt, _NO_RATES, 0.0, "fwhm_packet", None, packet_fwhm),
            ]
            return rows
        return job

    return [one(g) for g in gs], \
        "numerical width, height and position of the transmission peak " \
        "against coupling, for a dispersionless segment", params


def _sc_figS3(o, seeds, deep):
    N = o.get("N", 100)
    M = _default_lead()
    jinf = o.get("J_inf", 1.0)
    # softer matching than the cavity panels: the collective mode here has
    # twice the polariton's contact weight, and 4x overcouples the contacts
    jp = impedance_jprime(N, _DELTA, o.get("Jprime_factor", 2.5))
    center = N * jinf
    deltas = np.asarray(o.get("Delta_list", np.unique(np.concatenate([
        np.linspace(center - 40, center + 40, 41),
        np.linspace(center - 4, center + 4, 33)]))), float)
    params = dict(N=N, M=M, J_inf=jinf, Jprime=jp, Delta_points=len(deltas))
    wp = WavePacketSpec(q0=_Q0, delta=_DELTA, delta_x=_DELTA_X)

    def one(d):
        def job():
            spec = ChainSpec(M=M, N=N, omega=float(d), Jprime=jp, g=0.0,
                             hopping=AllToAll(jinf=jinf))
            r = _packet_run(spec, wp)
            pt = (N, M, 0.0, jp, d)
            return [
                _row("figS3", 0, pt, _NO_RATES, 0.0, "T_ts", r["t_s"], r["T_ts"]),
                _row("figS3", 0, pt, _NO_RATES, 0.0, "T_tl", r["t_l"], r["T_tl"]),
            ]
        return job

    return [one(d) for d in deltas], \
        "ultra-fast transmission mediated by an all-to-all coupled segment, " \
        "peaking at the dominant collective eigenvalue", params


def _sc_figA1(o, seeds, deep):
    Ns = list(o.get("N_list", (25, 50, 100, 200)))
    sigma = o.get("sigma_frac", 0.05)
    g_strong, g_weak = 0.2, 0.02
    M = _default_lead()
    params = dict(N_list=Ns, sigma_frac=sigma, seeds=len(seeds),
                  series=["nn", "lr", "cavity_g0.2", "cavity_g0.02"],
                  dipolar_sign="nearest-neighbour limit matched to the -J "
                  "tight-binding convention (negative dipolar amplitude); the "
                  "uniform-positive variant suppresses rather than assists the "
                  "long-range series",
                  disorder_region="displacements applied to the central segment "
                  "only; the packet propagates from a clean lead into the "
                  "disordered area")
    wp = WavePacketSpec(q0=_Q0, delta=_DELTA, delta_x=_DELTA_X)

    def one(N, series, g, max_range, seed):
        def job():
            d = g * math.sqrt(N) - 1.0
            spec = ChainSpec(
                M=M, N=int(N), omega=d, g=g,
                hopping=DipolarLongRange(jbar=-1.0, max_range=max_range),
                disorder=DisorderSpec(kind="positional", sigma_frac=sigma, seed=seed))
            pos = np.arange(spec.ntot, dtype=float)
            lo, hi = spec.M, spec.M + spec.N
            pos[lo:hi] = sample_positions(spec)[lo:hi]
            h = build_hamiltonian(spec, positions=pos)
            psi0 = initial_wave_packet(wp, spec)
            ts = timescales(wp, spec)
            prop = SpectralPropagator(h)
            pt = (int(N), M, g, 0.0, d)
            return [
                _row("figA1", seed, pt, _NO_RATES, 0.0, f"T_tl_{series}", ts.t_l,
                     transmission_at(prop(psi0, ts.t_l), spec)),
                _row("figA1", seed, pt, _NO_RATES, 0.0, f"T_ts_{series}", ts.t_s,
                     transmission_at(prop(psi0, ts.t_s), spec)),
            ]
        return job

    jobs = []
    for N in Ns:
        for series, g, mr in (("nn", 0.0, 1), ("lr", 0.0, None),
                              ("cavity_g0.2", g_strong, None),
                              ("cavity_g0.02", g_weak, None)):
            for s in seeds:
                jobs.append(one(N, series, g, mr, s))
    return jobs, "positional disorder: truncated against full dipolar hopping, " \
                 "and the cavity-coupled variant that restores algebraic decay", params


_BUILDERS = {
    "fig1b": _sc_fig1b, "fig2a": _sc_fig2a, "fig2b": _sc_fig2b,
    "fig2c": _sc_fig2c, "fig2d": _sc_fig2d, "fig3a": _sc_fig3a,
    "fig3b": _sc_fig3b, "fig3c": _sc_fig3c, "fig3d": _sc_fig3d,
    "figS1": _sc_figS1, "figS2": _sc_figS2, "figS3": _sc_figS3,
    "figA1": _sc_figA1,
}

_MULTI_SEED = {"fig3a": 50, "figA1": 50}

_KNOWN_OVERRIDES = {
    "N", "M", "g", "Jprime", "Delta", "J_inf", "deltaJ", "sigma_frac",
    "kappa", "gamma_P", "dt", "Jprime_factor",
    "N_list", "g_list", "x_list", "kappa_list", "gammaP_list", "Delta_list",
    "seeds", "base_seed",
}


def run_scenario(s: Scenario) -> EnsembleResult:
    """Execute one scenario, write <id>.csv and <id>.meta.json, return rows."""
    if s.id not in _BUILDERS:
        raise ValueError(f"unknown scenario id {s.id!r} (choose from {SCENARIO_IDS})")
    unknown = set(s.overrides) - _KNOWN_OVERRIDES
    if unknown:
        raise ValueError(f"unresolvable override keys: {sorted(unknown)}")

    seeds = tuple(s.seeds)
    if not seeds:
        base = int(s.overrides.get("base_seed", 1))
        count = int(s.overrides.get("seeds", _MULTI_SEED.get(s.id, 1)))
        if s.deep and s.id == "fig3a":
            count = max(count, 200)
        seeds = tuple(range(base, base + count))

    t0 = time.time()
    jobs, description, params = _BUILDERS[s.id](dict(s.overrides), seeds, s.deep)
    workers = s.threads or None
    with ThreadPoolExecutor(max_workers=workers) as pool:
        chunks = list(pool.map(lambda jb: jb(), jobs))
    rows: list[tuple] = [r for chunk in chunks for r in chunk]
    if len(seeds) > 1:
        rows += _aggregate(rows)

    out_dir = Path(s.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / f"{s.id}.csv"
    with open(csv_path, "w", newline="") as fh:
        fh.write(",".join(CSV_COLUMNS) + "\n")
        for r in rows:
            fh.write(",".join(r) + "\n")

    meta = {
        "scenario": s.id,
        "description": description,
        "resolved_parameters": params,
        "overrides": {k: (list(v) if isinstance(v, (list, tuple, np.ndarray)) else v)
                      for k, v in s.overrides.items()},
        "seeds": list(seeds),
        "deep": s.deep,
        "version": __version__,
        "conventions": SIGN_CONVENTIONS,
        "wall_time_s": round(time.time() - t0, 3),
        "csv": csv_path.name,
    }
    meta_path = out_dir / f"{s.id}.meta.json"
    with open(meta_path, "w") as fh:
        json.dump(meta, fh, indent=2, default=float)
        fh.write("\n")
    return EnsembleResult(rows=rows, csv_path=csv_path, meta_path=meta_path)
