"""Acceptance suite: one test (and one printed pass/fail line) per criterion.

Heavier ensembles run threaded; the whole module targets a few minutes on a
desktop-class machine.  Tolerances are pinned here, not tuned elsewhere.
"""

import math
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from cavtrans.model import (AllToAll, ChainSpec, DipolarLongRange,
                            DisorderSpec, build_hamiltonian, sample_positions)
from cavtrans.dynamics import (SpectralPropagator, WavePacketSpec,
                               initial_wave_packet, timescales,
                               transmission_at)
from cavtrans.scattering import (ScatterParams, impedance_jprime,
                                 obc_eigenvalues, obc_eigenvalues_direct,
                                 packet_averaged_transmission,
                                 transmission_exact)
from cavtrans.lindblad import (DissipationRates, chain_liouvillian,
                               continuity_audit, steady_state,
                               time_integrate, vacuum_state)
from cavtrans.experiments import (_max_transmission_over_delta, _steady_point,
                                  crossover_locator, fit_scaling,
                                  peak_characterize)

WP = WavePacketSpec(q0=np.pi / 2, delta=5.0, delta_x=20)
POOL = 8


def report(name: str, ok: bool, detail: str) -> None:
    print(f"\n[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    assert ok, f"{name}: {detail}"


def _packet_T(N, g, delta, jp, seed=0, deltaJ=0.0, which="ts", hopping=None,
              positions=None, M=50):
    dis = DisorderSpec(kind="tunneling", deltaJ=deltaJ, seed=seed) if deltaJ > 0 \
        else DisorderSpec(seed=seed)
    kwargs = {} if hopping is None else {"hopping": hopping}
    spec = ChainSpec(M=M, N=int(N), omega=float(delta), Jprime=jp, g=float(g),
                     disorder=dis, **kwargs)
    h = build_hamiltonian(spec, positions=positions)
    psi0 = initial_wave_packet(WP, spec)
    ts = timescales(WP, spec)
    t = ts.t_s if which == "ts" else ts.t_l
    return transmission_at(SpectralPropagator(h)(psi0, t), spec)


def test_criterion_polariton_peak_placement():
    # Fig 2a setup: numeric maxima of T_ts(Delta) within one w of the
    # polariton lines, heights > 0.9, under the stated runtime budget.
    t0 = time.time()
    N, g = 100, 50.0
    jp = impedance_jprime(N, 5.0, 4.0)
    w = jp**2 / (2.0 * N)
    results = {}
    for sign in (+1, -1):
        center = sign * g * math.sqrt(N) - 1.0
        grid = np.linspace(center - 5 * w, center + 5 * w, 41)
        with ThreadPoolExecutor(POOL) as ex:
            vals = list(ex.map(lambda d: _packet_T(N, g, d, jp), grid))
        k = int(np.argmax(vals))
        results[sign] = (grid[k], vals[k], abs(grid[k] - center))
    elapsed = time.time() - t0
    ok = all(off < w and height > 0.9 for _, height, off in results.values())
    ok = ok and elapsed < 120.0
    report("polariton peak placement",
           ok,
           f"upper off={results[1][2]:.3f} T={results[1][1]:.3f}, "
           f"lower off={results[-1][2]:.3f} T={results[-1][1]:.3f}, "
           f"w={w:.3f}, {elapsed:.0f}s")


def test_criterion_analytic_numeric_agreement():
    N, g = 100, 50.0
    jp = impedance_jprime(N, 5.0, 4.0)
    center = g * math.sqrt(N) - 1.0
    grid = np.linspace(center - 8, center + 8, 33)

    def dev(d):
        tn = _packet_T(N, g, d, jp)
        p = ScatterParams(N=N, Jprime=jp, g=g, omega=float(d), q=np.pi / 2)
        return abs(tn - packet_averaged_transmission(p, 5.0))

    with ThreadPoolExecutor(POOL) as ex:
        devs = list(ex.map(dev, grid))
    report("analytic-numeric agreement", max(devs) < 0.05,
           f"max |T_ts - packet-averaged theory| = {max(devs):.2e} over the upper peak")


def test_criterion_scaling_laws():
    ns = (50, 100, 200)
    # quartic sub-branch of the weak-coupling window (the source's own
    # g^4 -> g crossover sits near g/sqrt(N) ~ 0.3)
    xq = np.geomspace(0.1, 0.2, 4)
    with ThreadPoolExecutor(POOL) as ex:
        tq = np.array(list(ex.map(
            lambda a: _max_transmission_over_delta(a[0], float(a[1] * math.sqrt(a[0])))[0],
            [(n, x) for n in ns for x in xq]))).reshape(len(ns), len(xq))
    pooled = fit_scaling(np.tile(xq, len(ns)), tq.ravel(), "powerlaw")
    ok_g = 3.5 <= pooled.exponent <= 4.5

    nsN = (50, 71, 100, 141, 200)
    with ThreadPoolExecutor(POOL) as ex:
        tn = list(ex.map(lambda n: _max_transmission_over_delta(n, 1.5)[0], nsN))
    fit_n = fit_scaling(nsN, tn, "powerlaw")
    ok_n = -2.5 <= fit_n.exponent <= -1.5

    xc = np.array([0.2, 0.35, 0.5, 0.7, 1.0])
    with ThreadPoolExecutor(POOL) as ex:
        tc = np.array(list(ex.map(
            lambda a: _max_transmission_over_delta(a[0], float(a[1] * math.sqrt(a[0])))[0],
            [(n, x) for n in ns for x in xc]))).reshape(len(ns), len(xc))
    spread = float((np.abs(tc - tc.mean(axis=0)).max(axis=0) / tc.mean(axis=0)).max())
    ok_c = spread < 0.10
    report("scaling laws",
           ok_g and ok_n and ok_c,
           f"g-exponent {pooled.exponent:.2f} in [3.5,4.5], "
           f"N-exponent {fit_n.exponent:.2f} in [-2.5,-1.5], "
           f"collapse spread {spread:.3f} < 0.10")


def test_criterion_fig1_headline():
    jp = 10.0
    spec = ChainSpec(M=50, N=50, omega=69.0, Jprime=jp, g=10.0)
    ts = timescales(WP, spec)
    tval = _packet_T(50, 10.0, 69.0, jp)
    report("ultra-fast headline shot",
           tval > 0.5 and ts.t_s == 30.0 and ts.t_l == 55.0 and ts.t_s < ts.t_l,
           f"T(t_s)={tval:.3f} > 0.5 with t_s=30/J << t_l=55/J")


def test_criterion_disorder_dichotomy():
    t0 = time.time()
    ns = (25, 50, 100, 200, 400)
    seeds = range(1, 51)

    def one(n, g, seed):
        jp = impedance_jprime(n, 5.0, 4.0)
        d = g * math.sqrt(n) - 1.0
        dis = DisorderSpec(kind="tunneling", deltaJ=0.2, seed=seed)
        spec = ChainSpec(M=50, N=n, omega=d, Jprime=jp, g=g, disorder=dis)
        h = build_hamiltonian(spec)
        psi0 = initial_wave_packet(WP, spec)
        tsc = timescales(WP, spec)
        prop = SpectralPropagator(h)
        return (transmission_at(prop(psi0, tsc.t_s), spec),
                transmission_at(prop(psi0, tsc.t_l), spec))

    with ThreadPoolExecutor(POOL) as ex:
        res = np.array(list(ex.map(lambda a: one(*a),
                                   [(n, g, s) for g in (0.0, 0.2)
                                    for n in ns for s in seeds])))
    res = res.reshape(2, len(ns), len(list(seeds)), 2)
    tl_g0 = res[0, :, :, 1].mean(axis=1)
    ts_g2 = res[1, :, :, 0].mean(axis=1)

    f0 = fit_scaling(ns, tl_g0, "exponential")
    ok_exp = f0.exponent < 0 and f0.r_squared > 0.9
    # power law in the cavity-mediated regime: N=25 is excluded because the
    # free light cone ((delta_x+N)/v_g = 22.5/J) beats t_s = 30/J there
    f2 = fit_scaling(ns[1:], ts_g2[1:], "powerlaw")
    ok_pl = -2.5 <= f2.exponent <= -1.5
    ratio = ts_g2[-1] / tl_g0[-1]
    ok_r = ratio > 1e2
    elapsed = time.time() - t0
    report("disorder dichotomy",
           ok_exp and ok_pl and ok_r and elapsed < 1800,
           f"g=0 rate {f0.exponent:.3f} (R2={f0.r_squared:.3f}), "
           f"g=0.2 exponent {f2.exponent:.2f}, ratio(N=400) {ratio:.1e}, "
           f"{elapsed:.0f}s (50 seeds)")


def test_criterion_steady_state_enhancement():
    i02, rates = _steady_point(50, 0.2, 0.5, 1.0, 0.2, 1)
    i00, _ = _steady_point(50, 0.0, 0.5, 0.0, 0.2, 1)
    ok_ratio = i02 / i00 > 10.0

    ns = (10, 15, 20, 30, 40, 60, 80, 100, 120, 150)
    with ThreadPoolExecutor(POOL) as ex:
        cur = list(ex.map(lambda n: _steady_point(n, 0.2, 0.5, 1.0, 0.2, 1)[0], ns))
    fit = fit_scaling(ns, cur, "powerlaw")
    ok_exp = -2.5 <= fit.exponent <= -1.5

    gs = np.geomspace(0.02, 2.0, 13)
    stars = {}
    for kap in (0.0, 10.0):
        with ThreadPoolExecutor(POOL) as ex:
            vals = list(ex.map(lambda g: _steady_point(50, float(g), 0.5, kap, 0.2, 1)[0], gs))
        stars[kap] = crossover_locator(gs, vals)
    ok_shift = stars[10.0] > stars[0.0]
    report("steady-state enhancement",
           ok_ratio and ok_exp and ok_shift,
           f"I(g=0.2)/I(g=0)={i02 / i00:.1f} > 10, N-exponent {fit.exponent:.2f}, "
           f"g* {stars[0.0]:.3f} -> {stars[10.0]:.3f} as kappa 0 -> 10")


def test_criterion_oracle_equivalences():
    # steady state against long-time integration
    dists = []
    for n in (6, 8):
        spec = ChainSpec(M=0, N=n, g=0.2,
                         disorder=DisorderSpec(kind="tunneling", deltaJ=0.2, seed=4))
        rates = DissipationRates(kappa=1.0, gamma_P=0.5, gamma_out=2.0,
                                 gamma_sp=0.04, gamma_deph=0.9)
        lv = chain_liouvillian(spec, rates)
        ss = steady_state(lv)
        ti = time_integrate(lv, vacuum_state(lv.dim), 300.0)
        dists.append(0.5 * np.abs(np.linalg.eigvalsh(ss - ti)).sum())
    ok_ss = max(dists) < 1e-6

    p = ScatterParams(N=200, J=1.0, g=0.7, omega0=0.1)
    obc_err = float(np.abs(obc_eigenvalues(p) - obc_eigenvalues_direct(p)).max())
    ok_obc = obc_err < 1e-9

    rng = np.random.default_rng(123)
    worst = 0.0
    for _ in range(1000):
        pr = ScatterParams(
            N=int(rng.integers(2, 50)), Jprime=float(rng.uniform(0.1, 5)),
            g=float(rng.uniform(0, 3)), omega0=float(rng.uniform(-1, 1)),
            omega=float(rng.uniform(-6, 6)), q=float(rng.uniform(0.2, np.pi - 0.2)))
        _, t, r = transmission_exact(pr)
        worst = max(worst, abs(abs(t) ** 2 + abs(r) ** 2 - 1.0))
    ok_uni = worst < 1e-12

    resid = 0.0
    for g in (0.0, 0.1, 0.2):
        for kap in (0.0, 1.0, 10.0):
            for gp in (0.1, 0.5, 2.0):
                spec = ChainSpec(M=0, N=50, g=g,
                                 disorder=DisorderSpec(kind="tunneling", deltaJ=0.2, seed=1))
                rates = DissipationRates(kappa=kap, gamma_P=gp, gamma_out=2.0,
                                         gamma_sp=0.04, gamma_deph=0.9)
                lv = chain_liouvillian(spec, rates)
                aud = continuity_audit(lv, steady_state(lv))
                resid = max(resid, aud["residual"])
    ok_cont = resid < 1e-9
    report("oracle equivalences",
           ok_ss and ok_obc and ok_uni and ok_cont,
           f"steady<->integration {max(dists):.1e}, secular roots {obc_err:.1e}, "
           f"unitarity {worst:.1e}, continuity {resid:.1e}")


def test_criterion_all_to_all_peak():
    N, jinf = 100, 1.0
    jp = impedance_jprime(N, 5.0, 2.5)
    grid = np.linspace(96.0, 104.0, 49)
    hop = AllToAll(jinf=jinf)
    with ThreadPoolExecutor(POOL) as ex:
        vals = np.array(list(ex.map(
            lambda d: _packet_T(N, 0.0, d, jp, hopping=hop), grid)))
    pk = peak_characterize(grid, vals)
    ok = (abs(pk["position"] - N * jinf) < pk["fwhm"]
          and 0.95 <= pk["height"] <= 1.05)
    report("all-to-all transmission peak", ok,
           f"peak at {pk['position']:.2f} (target {N * jinf}), "
           f"T={pk['height']:.3f}, width {pk['fwhm']:.2f}")


def test_criterion_dipolar_robustness():
    ns = (25, 50, 100, 200)
    seeds = range(1, 51)

    def one(n, g, max_range, seed):
        d = g * math.sqrt(n) - 1.0
        spec = ChainSpec(M=50, N=int(n), omega=d, g=g,
                         hopping=DipolarLongRange(jbar=-1.0, max_range=max_range),
                         disorder=DisorderSpec(kind="positional", sigma_frac=0.05,
                                               seed=seed))
        pos = np.arange(spec.ntot, dtype=float)
        lo, hi = spec.M, spec.M + spec.N
        pos[lo:hi] = sample_positions(spec)[lo:hi]
        h = build_hamiltonian(spec, positions=pos)
        psi0 = initial_wave_packet(WP, spec)
        tsc = timescales(WP, spec)
        return transmission_at(SpectralPropagator(h)(psi0, tsc.t_l), spec)

    means = {}
    for name, g, mr in (("nn", 0.0, 1), ("lr", 0.0, None), ("cavity", 0.2, None)):
        with ThreadPoolExecutor(POOL) as ex:
            vals = np.array(list(ex.map(lambda a: one(*a),
                                        [(n, g, mr, s) for n in ns for s in seeds])))
        means[name] = vals.reshape(len(ns), -1).mean(axis=1)
    ok_order = bool(np.all(means["lr"] >= means["nn"]))
    verdicts = {}
    for name in means:
        fe = fit_scaling(ns, means[name], "exponential")
        fp = fit_scaling(ns, means[name], "powerlaw")
        verdicts[name] = fp.r_squared > fe.r_squared
    ok_shape = verdicts["cavity"] and not verdicts["nn"] and not verdicts["lr"]
    report("dipolar robustness",
           ok_order and ok_shape,
           f"LR/NN ratios {np.round(means['lr'] / means['nn'], 2)}, "
           f"power-law-preferred: {verdicts}")
