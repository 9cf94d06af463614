import numpy as np
import pytest

from cavtrans.model import ChainSpec, DisorderSpec, build_hamiltonian
from cavtrans.lindblad import (
    DegenerateSteadyStateError, DissipationRates, build_liouvillian,
    chain_liouvillian, continuity_audit, current_out, steady_state,
    time_integrate, vacuum_state,
)

FIG3 = dict(gamma_sp=0.04, gamma_deph=0.9, gamma_out=2.0)


def _random_density(dim, rng):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = a @ a.conj().T
    return rho / np.trace(rho)


def test_rates_must_be_nonnegative():
    with pytest.raises(ValueError):
        DissipationRates(kappa=-0.1)
    with pytest.raises(ValueError):
        DissipationRates(gamma_P=-1.0)


def test_generator_is_trace_free():
    spec = ChainSpec(M=0, N=4, g=0.3,
                     disorder=DisorderSpec(kind="tunneling", deltaJ=0.2, seed=1))
    lv = chain_liouvillian(spec, DissipationRates(kappa=0.7, gamma_P=0.5,
                                                  **FIG3))
    rng = np.random.default_rng(0)
    for _ in range(100):
        rho = _random_density(lv.dim, rng)
        assert abs(np.trace(lv.apply(rho))) < 1e-12
    # equivalently: the trace functional is a left null vector
    diag_rows = np.arange(lv.dim) * (lv.dim + 1)
    left = np.asarray(lv.matrix.todense())[diag_rows, :].sum(axis=0)
    assert np.abs(left).max() < 1e-12


def test_unitary_generator_preserves_purity():
    spec = ChainSpec(M=0, N=3, g=0.4)
    lv = chain_liouvillian(spec, DissipationRates(kappa=1e-12))
    psi = np.zeros(lv.dim, dtype=complex)
    psi[1] = 1 / np.sqrt(2)
    psi[2] = 1 / np.sqrt(2)
    rho0 = np.outer(psi, psi.conj())
    rho = time_integrate(lv, rho0, 5.0)
    assert abs(np.trace(rho @ rho).real - 1.0) < 1e-8
    assert abs(np.trace(rho).real - 1.0) < 1e-9


def test_single_emitter_decay_rate_convention():
    # L = sqrt(gamma/2) sigma- gives population exp(-gamma t)
    spec = ChainSpec(M=0, N=1, g=0.0)
    gamma = 0.8
    lv = chain_liouvillian(spec, DissipationRates(gamma_sp=gamma))
    rho0 = np.zeros((2, 2), dtype=complex)
    rho0[1, 1] = 1.0
    for t in (0.5, 2.0):
        rho = time_integrate(lv, rho0, t)
        assert rho[1, 1].real == pytest.approx(np.exp(-gamma * t), abs=1e-8)
        assert abs(np.trace(rho).real - 1.0) < 1e-9


def test_time_integrate_t0_and_trace_drift():
    spec = ChainSpec(M=0, N=3, g=0.2)
    lv = chain_liouvillian(spec, DissipationRates(kappa=0.3, gamma_P=0.4,
                                                  **FIG3))
    rho0 = vacuum_state(lv.dim)
    assert np.array_equal(time_integrate(lv, rho0, 0.0), rho0)
    rho = time_integrate(lv, rho0, 50.0)
    assert abs(np.trace(rho).real - 1.0) < 1e-9


def test_relaxation_to_vacuum():
    spec = ChainSpec(M=0, N=2, g=0.0)
    lv = chain_liouvillian(spec, DissipationRates(gamma_sp=0.5))
    rho0 = np.zeros((3, 3), dtype=complex)
    rho0[1, 1] = 1.0
    rho = time_integrate(lv, rho0, 60.0)
    assert rho[0, 0].real == pytest.approx(1.0, abs=1e-8)


def test_steady_state_without_pump_is_vacuum():
    spec = ChainSpec(M=0, N=3, g=0.2)
    lv = chain_liouvillian(spec, DissipationRates(kappa=0.5, gamma_sp=0.1,
                                                  gamma_out=1.0))
    rho = steady_state(lv, check_unique=True)
    expect = vacuum_state(lv.dim)
    assert np.abs(rho - expect).max() < 1e-10


def test_two_state_rate_equation():
    spec = ChainSpec(M=0, N=1, g=0.0)
    rates = DissipationRates(gamma_P=0.7, gamma_out=1.9)
    lv = chain_liouvillian(spec, rates)
    rho = steady_state(lv, check_unique=True)
    p = 0.7 / (0.7 + 1.9)
    assert rho[1, 1].real == pytest.approx(p, abs=1e-10)
    assert current_out(rho, rates, lv.n_sites) == pytest.approx(1.9 * p, abs=1e-10)


def test_current_out_basis_cases():
    rates = DissipationRates(gamma_out=2.0)
    rho = vacuum_state(6)
    assert current_out(rho, rates) == 0.0
    rho2 = np.zeros((6, 6), dtype=complex)
    rho2[4, 4] = 1.0  # site N for N=4 with cavity layout
    assert current_out(rho2, rates) == pytest.approx(2.0)


def test_steady_matches_time_integration():
    spec = ChainSpec(M=0, N=6, g=0.15,
                     disorder=DisorderSpec(kind="tunneling", deltaJ=0.2, seed=3))
    rates = DissipationRates(kappa=1.0, gamma_P=0.5, **FIG3)
    lv = chain_liouvillian(spec, rates)
    ss = steady_state(lv, check_unique=True)
    ti = time_integrate(lv, vacuum_state(lv.dim), 200.0)
    trace_dist = 0.5 * np.abs(np.linalg.eigvalsh(ss - ti)).sum()
    assert trace_dist < 1e-6


def test_steady_spectral_equals_direct():
    for n, g, kap in ((5, 0.3, 0.5), (8, 0.0, 0.0), (7, 0.2, 1.0)):
        spec = ChainSpec(M=0, N=n, g=g,
                         disorder=DisorderSpec(kind="tunneling", deltaJ=0.2, seed=2))
        lv = chain_liouvillian(spec, DissipationRates(kappa=kap, gamma_P=0.5, **FIG3))
        a = steady_state(lv, method="direct")
        b = steady_state(lv, method="spectral")
        assert np.abs(a - b).max() < 1e-12


def test_steady_state_properties_on_fig3_points():
    for g, kap in ((0.0, 0.0), (0.1, 0.0), (0.2, 1.0), (0.2, 10.0)):
        spec = ChainSpec(M=0, N=12, g=g,
                         disorder=DisorderSpec(kind="tunneling", deltaJ=0.2, seed=5))
        rates = DissipationRates(kappa=kap, gamma_P=0.5, **FIG3)
        lv = chain_liouvillian(spec, rates)
        rho = steady_state(lv)
        assert np.abs(rho - rho.conj().T).max() < 1e-10
        assert abs(np.trace(rho).real - 1.0) < 1e-10
        assert np.linalg.eigvalsh(rho).min() > -1e-8


def test_continuity_balance_and_dephasing_term():
    spec = ChainSpec(M=0, N=6, g=0.15,
                     disorder=DisorderSpec(kind="tunneling", deltaJ=0.2, seed=3))
    rates = DissipationRates(kappa=0.5, gamma_P=0.5, **FIG3)
    lv = chain_liouvillian(spec, rates)
    rho = steady_state(lv)
    aud = continuity_audit(lv, rho)
    assert aud["residual"] < 1e-9
    assert aud["deph"] == pytest.approx(0.0, abs=1e-14)
    assert aud["kappa"] == pytest.approx(0.0, abs=1e-14)
    assert aud["out"] < 0  # the drain channel removes population
    assert current_out(rho, rates, lv.n_sites) == pytest.approx(-aud["out"], rel=1e-9)


def test_continuity_all_zero_without_pump():
    spec = ChainSpec(M=0, N=4, g=0.1)
    lv = chain_liouvillian(spec, DissipationRates(kappa=0.2, **FIG3))
    rho = steady_state(lv)
    aud = continuity_audit(lv, rho)
    for key in ("pump", "out", "sp", "deph", "hamiltonian"):
        assert abs(aud[key]) < 1e-12


def test_degenerate_manifold_detected():
    # an undriven, undamped cavity keeps its own conserved population
    h = build_hamiltonian(ChainSpec(M=0, N=2, g=0.0))
    lv = build_liouvillian(h, DissipationRates(gamma_P=0.3, gamma_out=1.0))
    with pytest.raises(DegenerateSteadyStateError):
        steady_state(lv, check_unique=True)


def test_current_monotone_in_pump_on_grid():
    spec = ChainSpec(M=0, N=8, g=0.2,
                     disorder=DisorderSpec(kind="tunneling", deltaJ=0.2, seed=1))
    last = -1.0
    for gp in (0.05, 0.2, 0.5, 1.0, 3.0):
        rates = DissipationRates(kappa=1.0, gamma_P=gp, **FIG3)
        lv = chain_liouvillian(spec, rates)
        cur = current_out(steady_state(lv), rates, lv.n_sites)
        assert cur > last
        last = cur


def test_exponential_suppression_without_cavity():
    # log I_out falls linearly (or convexly) with N at g=0
    ns = list(range(4, 13))
    cur = []
    for n in ns:
        spec = ChainSpec(M=0, N=n, g=0.0,
                         disorder=DisorderSpec(kind="tunneling", deltaJ=0.2, seed=3))
        rates = DissipationRates(gamma_P=0.5, **FIG3)
        lv = chain_liouvillian(spec, rates)
        cur.append(current_out(steady_state(lv), rates, lv.n_sites))
    logc = np.log(cur)
    assert np.all(np.diff(logc) < 0)
    slope, intercept = np.polyfit(ns, logc, 1)
    pred = slope * np.asarray(ns) + intercept
    r2 = 1 - np.sum((logc - pred) ** 2) / np.sum((logc - logc.mean()) ** 2)
    assert slope < 0 and r2 > 0.95


def test_clean_chain_conducts():
    # no disorder, no dephasing, no emission: transport alone carries current
    spec = ChainSpec(M=0, N=10, g=0.0)
    rates = DissipationRates(gamma_P=0.5, gamma_out=2.0)
    lv = chain_liouvillian(spec, rates)
    cur = current_out(steady_state(lv), rates, lv.n_sites)
    assert cur > 1e-3


def test_kappa_needs_cavity():
    h = build_hamiltonian(ChainSpec(M=0, N=2, g=0.0))[:-1, :-1]
    with pytest.raises(ValueError, match="cavity"):
        build_liouvillian(h, DissipationRates(kappa=1.0), includes_cavity=False)


def test_steady_spectral_without_dephasing():
    # the dephasing re-injection system degenerates to the pump source alone
    spec = ChainSpec(M=0, N=6, g=0.2,
                     disorder=DisorderSpec(kind="tunneling", deltaJ=0.2, seed=9))
    lv = chain_liouvillian(spec, DissipationRates(kappa=0.5, gamma_P=0.4,
                                                  gamma_out=1.5, gamma_sp=0.05))
    a = steady_state(lv, method="direct")
    b = steady_state(lv, method="spectral")
    assert np.abs(a - b).max() < 1e-12
