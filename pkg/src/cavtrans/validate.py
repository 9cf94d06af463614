"""Fast self-check battery: model invariants against independent oracles.

Each check prints one PASS/FAIL line; run_all returns False if anything
failed.  Intended for the `cavtrans validate` subcommand (seconds, not the
full test suite).
"""

from __future__ import annotations

import numpy as np

from .model import ChainSpec, DisorderSpec, build_hamiltonian
from .dynamics import (WavePacketSpec, evolve, initial_wave_packet,
                       timescales, transmission_at)
from .scattering import (ScatterParams, obc_eigenvalues,
                         obc_eigenvalues_direct, transmission_exact,
                         transmission_lorentzian)
from .lindblad import (DissipationRates, chain_liouvillian, continuity_audit,
                       current_out, steady_state, time_integrate, vacuum_state)

__all__ = ["run_all"]


def _hermiticity() -> tuple[bool, str]:
    worst = 0.0
    for spec in (
        ChainSpec(M=5, N=8, omega=3.0, Jprime=2.0, g=1.3),
        ChainSpec(M=0, N=12, g=0.4,
                  disorder=DisorderSpec(kind="tunneling", deltaJ=0.3, seed=7)),
    ):
        h = build_hamiltonian(spec)
        worst = max(worst, float(np.abs(h - h.conj().T).max()))
    return worst < 1e-12, f"max asymmetry {worst:.1e}"


def _g0_decoupling() -> tuple[bool, str]:
    spec = ChainSpec(M=3, N=6, omega=1.5, Jprime=0.8, g=0.0)
    h = build_hamiltonian(spec)
    bare = h[:spec.ntot, :spec.ntot]
    full = np.sort(np.linalg.eigvalsh(h))
    # drop the decoupled photon line at omega_c, compare the rest
    full = np.delete(full, np.argmin(np.abs(full - spec.omega0)))
    err = np.abs(full - np.sort(np.linalg.eigvalsh(bare))).max()
    return err < 1e-10, f"site-block spectrum deviation {err:.1e}"


def _pbc_dispersion() -> tuple[bool, str]:
    N = 16
    spec = ChainSpec(M=0, N=N, g=0.0)
    h = build_hamiltonian(spec, pbc=True)[:N, :N]
    expect = np.sort(-2.0 * np.cos(2 * np.pi * np.arange(N) / N))
    err = np.abs(np.sort(np.linalg.eigvalsh(h)) - expect).max()
    return err < 1e-10, f"dispersion deviation {err:.1e}"


def _unitarity() -> tuple[bool, str]:
    rng = np.random.default_rng(0)
    worst = 0.0
    for _ in range(200):
        p = ScatterParams(N=int(rng.integers(2, 40)), Jprime=rng.uniform(0.2, 5),
                          g=rng.uniform(0, 3), omega0=rng.uniform(-1, 1),
                          omega=rng.uniform(-5, 5), q=rng.uniform(0.2, np.pi - 0.2))
        _, t, r = transmission_exact(p)
        worst = max(worst, abs(abs(t) ** 2 + abs(r) ** 2 - 1.0))
    return worst < 1e-12, f"max |t|^2+|r|^2-1 = {worst:.1e}"


def _obc_vs_diag() -> tuple[bool, str]:
    p = ScatterParams(N=60, g=0.8, omega0=0.2)
    err = float(np.abs(obc_eigenvalues(p) - obc_eigenvalues_direct(p)).max())
    return err < 1e-9, f"root deviation {err:.1e}"


def _lorentzian_near_peak() -> tuple[bool, str]:
    N, g = 100, 50.0
    from .scattering import impedance_jprime
    jp = impedance_jprime(N, 5.0, 4.0)
    devs = []
    for d in np.linspace(g * np.sqrt(N) - 1 - 0.3, g * np.sqrt(N) - 1 + 0.3, 11):
        p = ScatterParams(N=N, Jprime=jp, g=g, omega=float(d))
        te = transmission_exact(p)[0]
        devs.append(abs(te - transmission_lorentzian(p, "u")) / te)
    dev = max(devs)
    return dev < 0.01, f"closed form vs Lorentzian near peak, relative {dev:.1e}"


def _norm_and_lightcone() -> tuple[bool, str]:
    spec = ChainSpec(M=60, N=100, omega=0.0, g=0.0)
    wp = WavePacketSpec(q0=np.pi / 2, delta=3.0, delta_x=30)
    psi0 = initial_wave_packet(wp, spec)
    h = build_hamiltonian(spec)
    ts = timescales(wp, spec)
    psi = evolve(h, psi0, ts.t_s)
    drift = abs(np.linalg.norm(psi) - 1.0)
    leak = transmission_at(psi, spec)
    return drift < 1e-8 and leak < 1e-6, f"norm drift {drift:.1e}, pre-light-cone T {leak:.1e}"


def _steady_oracle() -> tuple[bool, str]:
    spec = ChainSpec(M=0, N=4, g=0.3,
                     disorder=DisorderSpec(kind="tunneling", deltaJ=0.2, seed=2))
    rates = DissipationRates(kappa=0.5, gamma_sp=0.04, gamma_deph=0.9,
                             gamma_P=0.5, gamma_out=2.0)
    lv = chain_liouvillian(spec, rates)
    ss = steady_state(lv)
    ti = time_integrate(lv, vacuum_state(lv.dim), 300.0)
    dist = 0.5 * np.abs(np.linalg.eigvalsh(ss - ti)).sum()
    aud = continuity_audit(lv, ss)
    ok = dist < 1e-6 and aud["residual"] < 1e-9 and current_out(ss, rates, lv.n_sites) > 0
    return ok, f"trace distance {dist:.1e}, continuity residual {aud['residual']:.1e}"


CHECKS = [
    ("hermiticity", _hermiticity),
    ("g=0 cavity decoupling", _g0_decoupling),
    ("periodic chain dispersion", _pbc_dispersion),
    ("scattering unitarity", _unitarity),
    ("secular roots vs diagonalization", _obc_vs_diag),
    ("Lorentzian peak limit", _lorentzian_near_peak),
    ("norm conservation and light cone", _norm_and_lightcone),
    ("steady state vs integration + continuity", _steady_oracle),
]


def run_all(out=print) -> bool:
    ok = True
    for name, fn in CHECKS:
        try:
            passed, detail = fn()
        except Exception as exc:  # a crashed check is a failed check
            passed, detail = False, f"raised {type(exc).__name__}: {exc}"
        ok &= passed
        out(f"[{'PASS' if passed else 'FAIL'}] {name}: {detail}")
    return ok
