import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cavtrans.model import (
    AllToAll, ChainSpec, DipolarLongRange, DisorderSpec, EffectiveCavity,
    build_hamiltonian, build_site_energies, cavity_block,
    sample_positions, sample_tunnelings,
)


def test_site_energies_homogeneous():
    spec = ChainSpec(M=0, N=3, omega0=0.0)
    assert np.array_equal(build_site_energies(spec), np.zeros(3))


def test_site_energies_leads():
    spec = ChainSpec(M=1, N=2, omega0=0.0, omega=3.5)
    assert np.array_equal(build_site_energies(spec), [3.5, 0.0, 0.0, 3.5])


def test_site_energies_fig1_layout():
    # 20-site leads detuned by 69, cavity segment at zero
    spec = ChainSpec(M=20, N=50, omega0=0.0, omega=69.0)
    e = build_site_energies(spec)
    assert np.all(e[:20] == 69.0) and np.all(e[70:] == 69.0)
    assert np.all(e[20:70] == 0.0)


def test_bonds_clean_chain():
    spec = ChainSpec(M=0, N=6)
    assert np.array_equal(sample_tunnelings(spec), np.ones(5))


def test_bonds_boundary_rule():
    spec = ChainSpec(M=2, N=3, Jprime=10.0)
    assert np.array_equal(sample_tunnelings(spec), [1.0, 10.0, 1.0, 1.0, 10.0, 1.0])


def test_bond_disorder_statistics():
    # sampler against its own declared distribution, 1e5 bonds
    spec = ChainSpec(M=0, N=100_001,
                     disorder=DisorderSpec(kind="tunneling", deltaJ=0.2, seed=11))
    bonds = sample_tunnelings(spec)
    assert abs(bonds.mean() - 1.0) < 0.01
    assert abs(bonds.std() - 0.2) < 0.01


def test_boundary_bonds_carry_no_disorder():
    spec = ChainSpec(M=3, N=4, Jprime=7.0,
                     disorder=DisorderSpec(kind="tunneling", deltaJ=0.3, seed=5))
    bonds = sample_tunnelings(spec)
    assert bonds[2] == 7.0 and bonds[6] == 7.0
    others = np.delete(bonds, [2, 6])
    assert np.all(others != 1.0)  # all disordered


def test_positions_identity_without_disorder():
    spec = ChainSpec(M=1, N=4)
    assert np.array_equal(sample_positions(spec), np.arange(6, dtype=float))


def test_position_disorder_statistics():
    spec = ChainSpec(M=0, N=100_000,
                     disorder=DisorderSpec(kind="positional", sigma_frac=0.05, seed=2))
    x = sample_positions(spec)
    dx = x - np.arange(len(x))
    assert abs(dx.std() - 0.05) < 0.001


def test_seed_determinism_bit_for_bit():
    spec = ChainSpec(M=4, N=9, Jprime=2.0,
                     disorder=DisorderSpec(kind="tunneling", deltaJ=0.25, seed=42))
    assert np.array_equal(sample_tunnelings(spec), sample_tunnelings(spec))
    h1 = build_hamiltonian(spec)
    h2 = build_hamiltonian(spec)
    assert np.array_equal(h1, h2)
    pspec = ChainSpec(M=0, N=9, disorder=DisorderSpec(kind="positional",
                                                      sigma_frac=0.1, seed=42))
    assert np.array_equal(sample_positions(pspec), sample_positions(pspec))


def test_single_spin_doublet():
    spec = ChainSpec(M=0, N=1, omega0=0.0, g=1.0, omega_c=0.0)
    assert np.allclose(np.linalg.eigvalsh(build_hamiltonian(spec)), [-1.0, 1.0])


def test_collective_splitting_j0():
    # four emitters, no hopping: doublet at +-g sqrt(N) plus threefold dark zero
    spec = ChainSpec(M=0, N=4, J=0.0, g=1.0)
    ev = np.sort(np.linalg.eigvalsh(build_hamiltonian(spec)))
    assert abs(ev[0] + 2.0) < 1e-12 and abs(ev[-1] - 2.0) < 1e-12
    assert np.all(np.abs(ev[1:4]) < 1e-12)


def test_all_to_all_dominant_eigenvalue():
    spec = ChainSpec(M=0, N=3, hopping=AllToAll(jinf=1.0))
    ev = np.linalg.eigvalsh(build_hamiltonian(spec))
    assert abs(ev.max() - 3.0) < 1e-12


def test_effective_cavity_matches_all_to_all():
    # 2 g^2 / kappa plays the role of the uniform coupling; photon row decoupled
    g, kappa = 2.0, 4.0
    s1 = ChainSpec(M=2, N=3, hopping=EffectiveCavity(g=g, kappa=kappa))
    s2 = ChainSpec(M=2, N=3, hopping=AllToAll(jinf=2 * g * g / kappa))
    h1, h2 = build_hamiltonian(s1), build_hamiltonian(s2)
    assert np.allclose(h1[:7, :7], h2[:7, :7])
    assert np.all(h1[:7, 7] == 0.0)


def test_hermiticity_every_model():
    specs = [
        ChainSpec(M=5, N=8, omega=3.0, Jprime=2.0, g=1.3),
        ChainSpec(M=0, N=12, g=0.4,
                  disorder=DisorderSpec(kind="tunneling", deltaJ=0.3, seed=7)),
        ChainSpec(M=3, N=5, hopping=DipolarLongRange(jbar=1.0),
                  disorder=DisorderSpec(kind="positional", sigma_frac=0.05, seed=1)),
        ChainSpec(M=2, N=4, hopping=AllToAll(jinf=0.7), g=0.2),
    ]
    for spec in specs:
        h = build_hamiltonian(spec)
        assert np.abs(h - h.conj().T).max() < 1e-12


def test_cavity_row_couples_only_to_segment():
    spec = ChainSpec(M=3, N=4, g=0.8)
    h = build_hamiltonian(spec)
    col = h[:10, 10]
    assert np.all(col[:3] == 0) and np.all(col[7:] == 0)
    assert np.all(col[3:7] == 0.8)


def test_g_per_site_column():
    gi = (0.1, 0.2, 0.3)
    spec = ChainSpec(M=1, N=3, g_per_site=gi)
    h = build_hamiltonian(spec)
    assert np.allclose(h[1:4, 5], gi)


def test_g0_cavity_decouples():
    spec = ChainSpec(M=3, N=6, omega=1.5, Jprime=0.8, g=0.0, omega_c=-3.0)
    h = build_hamiltonian(spec)
    full = np.sort(np.linalg.eigvalsh(h))
    full = np.delete(full, np.argmin(np.abs(full + 3.0)))
    bare = np.sort(np.linalg.eigvalsh(h[:12, :12]))
    assert np.abs(full - bare).max() < 1e-12


def test_pbc_chain_dispersion():
    N = 12
    spec = ChainSpec(M=0, N=N, g=0.0)
    h = build_hamiltonian(spec, pbc=True)[:N, :N]
    expect = np.sort(-2.0 * np.cos(2 * np.pi * np.arange(N) / N))
    assert np.abs(np.sort(np.linalg.eigvalsh(h)) - expect).max() < 1e-10


def test_excitation_sector_closure():
    # H never maps a basis vector outside the site+photon block
    spec = ChainSpec(M=2, N=3, g=0.9, Jprime=1.4)
    h = build_hamiltonian(spec)
    for k in range(spec.dim):
        v = np.zeros(spec.dim)
        v[k] = 1.0
        assert (h @ v).shape == (spec.dim,)  # block structure is the whole space
    assert h.shape == (spec.dim, spec.dim)


def test_dipolar_rejects_tunneling_disorder():
    with pytest.raises(ValueError, match="positional"):
        ChainSpec(M=1, N=3, hopping=DipolarLongRange(jbar=1.0),
                  disorder=DisorderSpec(kind="tunneling", deltaJ=0.1, seed=0))


def test_g_per_site_length_checked():
    with pytest.raises(ValueError, match="length N"):
        ChainSpec(M=0, N=3, g_per_site=(0.1, 0.2))


def test_dipolar_pair_strengths():
    spec = ChainSpec(M=0, N=4, hopping=DipolarLongRange(jbar=2.0))
    h = build_hamiltonian(spec)
    assert abs(h[0, 1] - 2.0) < 1e-12
    assert abs(h[0, 2] - 2.0 / 8.0) < 1e-12
    assert abs(h[0, 3] - 2.0 / 27.0) < 1e-12


def test_dipolar_max_range_truncation():
    spec = ChainSpec(M=0, N=5, hopping=DipolarLongRange(jbar=1.0, max_range=1))
    h = build_hamiltonian(spec)
    assert h[0, 2] == 0.0 and h[1, 4] == 0.0 and abs(h[2, 3] - 1.0) < 1e-12


def test_cavity_block_matches_inner_region():
    spec = ChainSpec(M=4, N=6, omega=2.0, Jprime=3.0, g=0.7)
    hb = cavity_block(spec)
    h = build_hamiltonian(spec)
    inner = np.ix_(list(range(4, 10)) + [14], list(range(4, 10)) + [14])
    assert np.allclose(hb, h[inner])


@settings(max_examples=25, deadline=None)
@given(m=st.integers(0, 6), n=st.integers(1, 10), g=st.floats(0, 3),
       delta=st.floats(-5, 5), seed=st.integers(0, 2**32))
def test_hermitian_and_deterministic_under_random_specs(m, n, g, delta, seed):
    spec = ChainSpec(M=m, N=n, omega=delta, g=g, Jprime=1.7,
                     disorder=DisorderSpec(kind="tunneling", deltaJ=0.15, seed=seed))
    h = build_hamiltonian(spec)
    assert np.abs(h - h.conj().T).max() < 1e-12
    assert np.array_equal(h, build_hamiltonian(spec))
