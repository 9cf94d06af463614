#!/usr/bin/env python3
"""Transmission spectrum against the lead detuning, numerics vs theory.

Scans T at the ultra-short time over detunings around the upper polariton
line (N = 100, g = 50 J, impedance-matched boundary bonds) and overlays the
packet-averaged stationary theory and the periodic-boundary closed form.
"""

import numpy as np

from cavtrans import (ChainSpec, ScatterParams, WavePacketSpec,
                      build_hamiltonian, evolve, impedance_jprime,
                      initial_wave_packet, packet_averaged_transmission,
                      timescales, transmission_at)

N, g, delta_pkt = 100, 50.0, 5.0
jp = impedance_jprime(N, delta_pkt, 4.0)
wp = WavePacketSpec(q0=np.pi / 2, delta=delta_pkt, delta_x=20)
center = g * np.sqrt(N) - 1.0
w = jp**2 / (2 * N)
print(f"J' = 4 Jtilde_N = {jp:.3f} J, peak width w = {w:.3f} J")
print(f"upper polariton line at Delta = {center} J")
print()
print("  Delta     T_ts(num)   theory     pbc form")

grid = np.linspace(center - 5, center + 5, 41)
rows = []
for d in grid:
    spec = ChainSpec(M=50, N=N, omega=float(d), Jprime=jp, g=g)
    h = build_hamiltonian(spec)
    psi0 = initial_wave_packet(wp, spec)
    ts = timescales(wp, spec)
    tnum = transmission_at(evolve(h, psi0, ts.t_s), spec)
    p = ScatterParams(N=N, Jprime=jp, g=g, omega=float(d), q=np.pi / 2)
    tth = packet_averaged_transmission(p, delta_pkt)
    tpbc = packet_averaged_transmission(p, delta_pkt, theory="pbc")
    rows.append((d, tnum, tth, tpbc))

for d, tnum, tth, tpbc in rows[::2]:
    print(f"  {d:8.2f}  {tnum:8.4f}   {tth:8.4f}   {tpbc:8.4f}")

devs = [abs(tn - tt) for _, tn, tt, _ in rows]
print(f"\nmax |numeric - stationary theory| = {max(devs):.2e}")
print("the pbc closed form sits a fraction of w higher: its periodic segment")
print("spectrum misses the open-boundary contact shift")

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    pass
else:
    arr = np.array(rows)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(arr[:, 0], arr[:, 1], "o", ms=4, label="wave packet, $T_{t_s}$")
    ax.plot(arr[:, 0], arr[:, 2], "-", label="stationary theory (packet avg)")
    ax.plot(arr[:, 0], arr[:, 3], "--", label="periodic-boundary closed form")
    ax.set_xlabel(r"$\Delta/J$")
    ax.set_ylabel("T")
    ax.legend()
    fig.tight_layout()
    fig.savefig("transmission_spectrum.png", dpi=150)
    print("saved transmission_spectrum.png")
