"""Command-line entry point.

Subcommands: transmit (one wave-packet run), spectrum (T vs Delta sweep),
analytic (closed-form quantities), steady (one steady-state solve),
scenario <id> (figure-scale sweeps), validate (invariant battery).

Exit codes: 0 success, 1 validation failure, 2 usage/config error.  All
error output goes to stderr prefixed "ERROR <code>:".  Nothing is written
outside --out.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .model import ChainSpec, DisorderSpec, build_hamiltonian
from .dynamics import (SpectralPropagator, WavePacketSpec, cavity_occupation,
                       in_cavity_weight, initial_wave_packet, timescales,
                       transmission_at)
from .scattering import (ScatterParams, beta_pbc, fwhm, impedance_jprime,
                         packet_averaged_transmission, polariton_energies,
                         transmission_exact, transmission_lorentzian,
                         transmission_stationary)
from .lindblad import (DissipationRates, chain_liouvillian, continuity_audit,
                       current_out, steady_state)
from .experiments import CSV_COLUMNS, Scenario, run_scenario
from . import validate as validate_mod

__all__ = ["main", "CONFIG_SCHEMA"]

# key -> (type, default); energies/rates in units of J, times in 1/J
CONFIG_SCHEMA: dict[str, tuple[type, object]] = {
    "N": (int, 50),
    "M": (int, None),           # default: max(50, delta_x + 5 delta)
    "omega0": (float, 0.0),
    "Delta": (float, None),     # default: g sqrt(N) - J
    "J": (float, 1.0),
    "Jprime": (float, None),    # default: Jprime_factor * impedance value
    "Jprime_factor": (float, 4.0),
    "g": (float, 0.0),
    "q0": (float, math.pi / 2),
    "q": (float, math.pi / 2),
    "delta": (float, 5.0),
    "delta_x": (int, 20),
    "deltaJ": (float, 0.0),
    "sigma_frac": (float, 0.0),
    "kappa": (float, 0.0),
    "gamma_P": (float, 0.5),
    "gamma_out": (float, 2.0),
    "gamma_sp": (float, 0.0),
    "gamma_deph": (float, 0.0),
    "dt": (float, 0.5),
    "t_max": (float, None),
    "Delta_min": (float, None),
    "Delta_max": (float, None),
    "Delta_points": (int, 41),
    "window": (float, None),    # report max T over [0.8 t_s, 1.2 t_s] too
}


class UsageError(Exception):
    pass


def _coerce(key: str, raw, schema) -> object:
    typ = schema[key][0]
    try:
        if typ is int:
            return int(raw)
        if typ is float:
            return float(raw)
    except (TypeError, ValueError):
        raise UsageError(f"value {raw!r} for key {key!r} is not a valid {typ.__name__}")
    return raw


def _load_config(args, schema=CONFIG_SCHEMA) -> dict:
    cfg = {k: v for k, (_, v) in schema.items()}
    if args.config:
        try:
            loaded = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}")
        if not isinstance(loaded, dict):
            raise UsageError("config must be a JSON object")
        for k, v in loaded.items():
            if k not in schema:
                raise UsageError(f"unknown config key {k!r}")
            cfg[k] = _coerce(k, v, schema)
    for item in args.set or []:
        if "=" not in item:
            raise UsageError(f"--set needs key=value, got {item!r}")
        k, raw = item.split("=", 1)
        if k not in schema:
            raise UsageError(f"unknown config key {k!r}")
        cfg[k] = _coerce(k, raw, schema)
    return cfg


def _resolve_chain(cfg, seed: int) -> tuple[ChainSpec, WavePacketSpec, dict]:
    notes = {}
    n, g = cfg["N"], cfg["g"]
    delta = cfg["Delta"]
    if delta is None:
        delta = g * math.sqrt(n) - cfg["J"]
        notes["Delta"] = f"defaulted to g*sqrt(N)-J = {delta!r}"
    jp = cfg["Jprime"]
    if jp is None:
        jp = impedance_jprime(n, cfg["delta"], cfg["Jprime_factor"], cfg["J"])
        notes["Jprime"] = f"impedance-matched, factor {cfg['Jprime_factor']} -> {jp!r}"
    m = cfg["M"]
    if m is None:
        m = max(50, int(math.ceil(cfg["delta_x"] + 5 * cfg["delta"])))
        notes["M"] = f"defaulted to max(50, delta_x+5*delta) = {m}"
    if cfg["deltaJ"] > 0:
        dis = DisorderSpec(kind="tunneling", deltaJ=cfg["deltaJ"], seed=seed)
    elif cfg["sigma_frac"] > 0:
        dis = DisorderSpec(kind="positional", sigma_frac=cfg["sigma_frac"], seed=seed)
    else:
        dis = DisorderSpec(seed=seed)
    spec = ChainSpec(M=m, N=n, omega0=cfg["omega0"], omega=cfg["omega0"] + delta,
                     J=cfg["J"], Jprime=jp, g=g, disorder=dis)
    wp = WavePacketSpec(q0=cfg["q0"], delta=cfg["delta"], delta_x=cfg["delta_x"])
    return spec, wp, notes


def _write_rows(path: Path, rows) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(",".join(CSV_COLUMNS) + "\n")
        for r in rows:
            fh.write(",".join(r) + "\n")


def _meta(path: Path, payload: dict) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, default=float)
        fh.write("\n")


def _fmt(x):
    return repr(float(x))


def _cmd_transmit(args) -> int:
    cfg = _load_config(args)
    spec, wp, notes = _resolve_chain(cfg, args.seed)
    for key, msg in notes.items():
        print(f"# {key} {msg}")
    h = build_hamiltonian(spec)
    psi0 = initial_wave_packet(wp, spec)
    ts = timescales(wp, spec)
    prop = SpectralPropagator(h)
    tmax = cfg["t_max"] if cfg["t_max"] is not None else 1.3 * ts.t_l
    times = np.arange(0.0, tmax + cfg["dt"] / 2, cfg["dt"])
    pt = (spec.N, spec.M, spec.g, spec.Jprime, spec.delta)
    rows = []
    from .experiments import _row, _NO_RATES  # shared row assembly
    for t in times:
        psi = prop(psi0, t)
        rows.append(_row("transmit", args.seed, pt, _NO_RATES, cfg["deltaJ"],
                         "transmission", t, transmission_at(psi, spec)))
        rows.append(_row("transmit", args.seed, pt, _NO_RATES, cfg["deltaJ"],
                         "cavity_occupation", t, cavity_occupation(psi)))
        rows.append(_row("transmit", args.seed, pt, _NO_RATES, cfg["deltaJ"],
                         "in_cavity", t, in_cavity_weight(psi, spec)))
    t_s_val = transmission_at(prop(psi0, ts.t_s), spec)
    t_l_val = transmission_at(prop(psi0, ts.t_l), spec)
    rows.append(_row("transmit", args.seed, pt, _NO_RATES, cfg["deltaJ"], "T_ts", ts.t_s, t_s_val))
    rows.append(_row("transmit", args.seed, pt, _NO_RATES, cfg["deltaJ"], "T_tl", ts.t_l, t_l_val))
    if cfg["window"] is not None:
        wts = [transmission_at(prop(psi0, t), spec)
               for t in np.linspace(0.8 * ts.t_s, 1.2 * ts.t_s, 17)]
        rows.append(_row("transmit", args.seed, pt, _NO_RATES, cfg["deltaJ"],
                         "T_ts_windowed_max", ts.t_s, max(wts)))
        print(f"T_ts_windowed_max={max(wts)!r}  (max over [0.8, 1.2] t_s)")
    out = Path(args.out)
    _write_rows(out / "transmit.csv", rows)
    _meta(out / "transmit.meta.json", {
        "command": "transmit", "seed": args.seed, "config": cfg,
        "resolved": {"M": spec.M, "Delta": spec.delta, "Jprime": spec.Jprime},
        "notes": notes, "version": __version__,
    })
    print(f"t_s={ts.t_s!r} t_l={ts.t_l!r}")
    print(f"T_ts={t_s_val!r}")
    print(f"T_tl={t_l_val!r}")
    return 0


def _cmd_spectrum(args) -> int:
    cfg = _load_config(args)
    spec0, wp, notes = _resolve_chain(cfg, args.seed)
    center = spec0.delta
    w = fwhm(ScatterParams(N=spec0.N, J=spec0.J, Jprime=spec0.Jprime,
                           g=spec0.g, omega=spec0.omega, q=cfg["q"]))
    lo = cfg["Delta_min"] if cfg["Delta_min"] is not None else center - max(6 * w, 4.0)
    hi = cfg["Delta_max"] if cfg["Delta_max"] is not None else center + max(6 * w, 4.0)
    deltas = np.linspace(lo, hi, cfg["Delta_points"])
    from .experiments import _row, _NO_RATES
    rows = []
    best = (-1.0, None)
    for d in deltas:
        spec = ChainSpec(M=spec0.M, N=spec0.N, omega0=spec0.omega0,
                         omega=spec0.omega0 + float(d), J=spec0.J,
                         Jprime=spec0.Jprime, g=spec0.g, disorder=spec0.disorder)
        h = build_hamiltonian(spec)
        psi0 = initial_wave_packet(wp, spec)
        ts = timescales(wp, spec)
        prop = SpectralPropagator(h)
        tval = transmission_at(prop(psi0, ts.t_s), spec)
        lval = transmission_at(prop(psi0, ts.t_l), spec)
        p = ScatterParams(N=spec.N, J=spec.J, Jprime=spec.Jprime, g=spec.g,
                          omega0=spec.omega0, omega=spec.omega, q=cfg["q"])
        pt = (spec.N, spec.M, spec.g, spec.Jprime, d)
        rows.append(_row("spectrum", args.seed, pt, _NO_RATES, cfg["deltaJ"], "T_ts", ts.t_s, tval))
        rows.append(_row("spectrum", args.seed, pt, _NO_RATES, cfg["deltaJ"], "T_tl", ts.t_l, lval))
        rows.append(_row("spectrum", args.seed, pt, _NO_RATES, cfg["deltaJ"], "analytic_T", None,
                         packet_averaged_transmission(p, cfg["delta"])))
        if tval > best[0]:
            best = (tval, float(d))
    out = Path(args.out)
    _write_rows(out / "spectrum.csv", rows)
    _meta(out / "spectrum.meta.json", {
        "command": "spectrum", "seed": args.seed, "config": cfg, "notes": notes,
        "grid": {"min": float(lo), "max": float(hi), "points": int(cfg["Delta_points"])},
        "version": __version__,
    })
    print(f"max_T_ts={best[0]!r} at Delta={best[1]!r}")
    return 0


def _cmd_analytic(args) -> int:
    cfg = _load_config(args)
    n, g = cfg["N"], cfg["g"]
    jp = cfg["Jprime"]
    if jp is None:
        jp = impedance_jprime(n, cfg["delta"], cfg["Jprime_factor"], cfg["J"])
    delta = cfg["Delta"] if cfg["Delta"] is not None else g * math.sqrt(n) - cfg["J"]
    p = ScatterParams(N=n, J=cfg["J"], Jprime=jp, g=g, omega0=cfg["omega0"],
                      omega=cfg["omega0"] + delta, q=cfg["q"])
    spect = polariton_energies(p)
    print(f"collective_coupling={g * math.sqrt(n)!r}")
    print(f"peak_upper={spect.omega_u!r}")
    print(f"peak_lower={spect.omega_d!r}")
    print("# peak convention: omega0 - J +- g sqrt(N) (segment value)")
    print(f"peak_upper_bare={p.omega0 + g * math.sqrt(n)!r}")
    print(f"peak_lower_bare={p.omega0 - g * math.sqrt(n)!r}")
    print(f"fwhm={fwhm(p)!r}")
    print(f"jprime_impedance_unit={impedance_jprime(n, cfg['delta'], 1.0, cfg['J'])!r}")
    try:
        b = beta_pbc(p)
        print(f"beta={b!r}")
    except ValueError as exc:
        print(f"beta=inf ({exc})")
    T, tq, rq = transmission_exact(p)
    print(f"T_exact={T!r}  |t|^2={abs(tq)**2!r}  |r|^2={abs(rq)**2!r}")
    print(f"T_lorentzian_u={transmission_lorentzian(p, 'u')!r}")
    print(f"T_stationary={transmission_stationary(p)!r}")
    return 0


def _cmd_steady(args) -> int:
    cfg = _load_config(args)
    rates = DissipationRates(kappa=cfg["kappa"], gamma_sp=cfg["gamma_sp"],
                             gamma_deph=cfg["gamma_deph"], gamma_P=cfg["gamma_P"],
                             gamma_out=cfg["gamma_out"])
    dis = DisorderSpec(kind="tunneling", deltaJ=cfg["deltaJ"], seed=args.seed) \
        if cfg["deltaJ"] > 0 else DisorderSpec(seed=args.seed)
    spec = ChainSpec(M=0, N=cfg["N"], omega0=cfg["omega0"], omega=cfg["omega0"],
                     J=cfg["J"], g=cfg["g"], disorder=dis)
    lv = chain_liouvillian(spec, rates)
    rho = steady_state(lv, check_unique=True)
    iout = current_out(rho, rates, lv.n_sites)
    aud = continuity_audit(lv, rho)
    from .experiments import _row
    pt = (spec.N, 0, spec.g, 0.0, 0.0)
    rt = (cfg["kappa"], cfg["gamma_P"], cfg["gamma_out"], cfg["gamma_sp"], cfg["gamma_deph"])
    rows = [_row("steady", args.seed, pt, rt, cfg["deltaJ"], "I_out", None, iout)]
    out = Path(args.out)
    _write_rows(out / "steady.csv", rows)
    _meta(out / "steady.meta.json", {
        "command": "steady", "seed": args.seed, "config": cfg,
        "continuity_residual": aud["residual"], "version": __version__,
    })
    print(f"I_out={iout!r}")
    print(f"continuity_residual={aud['residual']!r}")
    return 0


def _cmd_scenario(args) -> int:
    overrides = {}
    if args.config:
        try:
            loaded = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}")
        overrides.update(loaded)
    for item in args.set or []:
        if "=" not in item:
            raise UsageError(f"--set needs key=value, got {item!r}")
        k, raw = item.split("=", 1)
        try:
            overrides[k] = json.loads(raw)
        except json.JSONDecodeError:
            overrides[k] = raw
    seeds: tuple[int, ...] = ()
    if args.seed is not None and "seeds" not in overrides:
        overrides.setdefault("base_seed", args.seed)
    sc = Scenario(id=args.id, overrides=overrides, seeds=seeds,
                  out_dir=Path(args.out), deep=args.deep, threads=args.threads)
    try:
        result = run_scenario(sc)
    except ValueError as exc:
        raise UsageError(str(exc))
    print(f"wrote {result.csv_path} ({len(result.rows)} rows) and {result.meta_path}")
    return 0


def _cmd_validate(args) -> int:
    ok = validate_mod.run_all()
    return 0 if ok else 1


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file (strict keys)")
    common.add_argument("--seed", type=int, default=1, help="base RNG seed")
    common.add_argument("--out", default="out", help="output directory")
    common.add_argument("--deep", action="store_true", help="full-scale grids")
    common.add_argument("--threads", type=int, default=None, help="worker pool size")
    common.add_argument("--set", action="append", metavar="KEY=VALUE",
                        help="override one config key (repeatable)")

    ap = argparse.ArgumentParser(prog="cavtrans",
                                 description="cavity-coupled exciton chain toolkit")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("transmit", parents=[common],
                   help="single wave-packet run, trajectory CSV").set_defaults(fn=_cmd_transmit)
    sub.add_parser("spectrum", parents=[common],
                   help="transmission against detuning sweep").set_defaults(fn=_cmd_spectrum)
    sub.add_parser("analytic", parents=[common],
                   help="closed-form peaks, widths, amplitudes").set_defaults(fn=_cmd_analytic)
    sub.add_parser("steady", parents=[common],
                   help="one steady-state solve, exciton current").set_defaults(fn=_cmd_steady)
    scn = sub.add_parser("scenario", parents=[common], help="run a figure scenario")
    scn.add_argument("id", help="scenario id, e.g. fig3b")
    scn.set_defaults(fn=_cmd_scenario)
    sub.add_parser("validate", parents=[common],
                   help="run the invariant self-check battery").set_defaults(fn=_cmd_validate)
    return ap


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse prints its own message; normalize the exit code
        return 0 if exc.code == 0 else 2
    try:
        return args.fn(args)
    except UsageError as exc:
        print(f"ERROR 2: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:
        print(f"ERROR 1: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
