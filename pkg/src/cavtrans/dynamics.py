"""Wave-packet preparation, unitary propagation and transmission observables.

The propagator is exact spectral decomposition for moderate dimensions and a
Chebyshev polynomial expansion of exp(-iHt) with a certified coefficient
tail for large sparse systems.  Both paths target a global l2 error below
1e-8.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.special import jv

from .model import ChainSpec, hopping_sign

__all__ = [
    "WavePacketSpec",
    "Timescales",
    "initial_wave_packet",
    "timescales",
    "evolve",
    "SpectralPropagator",
    "evolve_trajectory",
    "evolve_lossy_cavity",
    "transmission_at",
    "in_cavity_weight",
    "cavity_occupation",
    "center_of_mass",
    "center_of_mass_velocity",
]

SPECTRAL_DIM_MAX = 2000


@dataclass(frozen=True)
class WavePacketSpec:
    """Gaussian exciton packet: quasi-momentum q0, real-space std delta,
    launched delta_x sites to the left of the cavity entrance (j0 = M - delta_x)."""

    q0: float = np.pi / 2
    delta: float = 5.0
    delta_x: int = 20

    def __post_init__(self):
        if not (0 < self.q0 < np.pi):
            raise ValueError("need 0 < q0 < pi")
        if self.delta <= 0:
            raise ValueError("need delta > 0")


@dataclass(frozen=True)
class Timescales:
    """t_s: entry-limited ultra-short scale; t_l: free-hopping scale."""

    t_s: float
    t_l: float


def timescales(wp: WavePacketSpec, spec: ChainSpec) -> Timescales:
    """t_s = (delta_x + 2 delta)/J and t_l = t_s + N/(2J)."""
    if spec.J <= 0:
        raise ValueError("timescales need a positive lead tunneling J")
    ts = (wp.delta_x + 2.0 * wp.delta) / spec.J
    return Timescales(t_s=ts, t_l=ts + spec.N / (2.0 * spec.J))


def initial_wave_packet(wp: WavePacketSpec, spec: ChainSpec) -> np.ndarray:
    """Normalized Gaussian packet in the left lead, moving toward the cavity.

    Site amplitudes are exp(i s q0 j) exp(-(j - j0)^2 / (4 delta^2)) with the
    phase sign s chosen so the group velocity points at the cavity for the
    active hopping convention (tight-binding -J vs dipolar +J/r^3 invert the
    band and with it the propagation direction of a fixed-phase packet).
    The cavity amplitude is zero.
    """
    j0 = spec.M - wp.delta_x
    if not (1 <= j0 <= spec.M):
        raise ValueError(f"packet center j0={j0} outside the left lead [1, {spec.M}]")
    if j0 - 5 * wp.delta < 1 or j0 + 5 * wp.delta > spec.M:
        warnings.warn(
            f"5-sigma packet tail [{j0 - 5 * wp.delta:.1f}, {j0 + 5 * wp.delta:.1f}] "
            f"leaves the left lead [1, {spec.M}]",
            stacklevel=2,
        )
    j = np.arange(1, spec.ntot + 1, dtype=float)
    sign = -hopping_sign(spec.hopping)  # +q0 phase for the -J convention
    amp = np.exp(1j * sign * wp.q0 * j) * np.exp(-((j - j0) ** 2) / (4.0 * wp.delta**2))
    psi = np.zeros(spec.dim, dtype=complex)
    psi[: spec.ntot] = amp
    return psi / np.linalg.norm(psi)


def _check_hermitian(h) -> None:
    if sp.issparse(h):
        d = abs(h - h.conj().T)
        err = d.max() if d.nnz else 0.0
    else:
        err = np.abs(h - np.conj(h.T)).max()
    if err > 1e-10:
        raise ValueError(f"Hamiltonian is not Hermitian (max asymmetry {err:.2e})")


class SpectralPropagator:
    """exp(-iHt) via one eigendecomposition, reusable across times."""

    def __init__(self, h: np.ndarray):
        _check_hermitian(h)
        self.evals, self.evecs = np.linalg.eigh(h)

    def __call__(self, psi0: np.ndarray, t: float) -> np.ndarray:
        c = self.evecs.conj().T @ psi0
        return self.evecs @ (np.exp(-1j * self.evals * t) * c)


def _chebyshev_expm(h, psi0: np.ndarray, t: float, tol: float) -> np.ndarray:
    """Chebyshev expansion of exp(-iHt) psi0 with Gershgorin spectral bounds.

    The coefficient tail is certified: the expansion order is grown until
    the trailing Bessel coefficients fall below tol * 1e-3 with a partial
    tail sum below tol / 10.
    """
    if sp.issparse(h):
        diag = h.diagonal().real
        radius = np.asarray(abs(h).sum(axis=1)).ravel() - np.abs(diag)
    else:
        diag = np.diag(h).real
        radius = np.abs(h).sum(axis=1) - np.abs(diag)
    emin = float((diag - radius).min())
    emax = float((diag + radius).max())
    a = 0.5 * (emax - emin) + 1e-12
    b = 0.5 * (emax + emin)
    x = a * abs(t)

    order = int(np.ceil(x + 60))
    while True:
        k = np.arange(order + 1)
        ck = 2.0 * jv(k, x)
        ck[0] *= 0.5
        tail = np.abs(ck[-10:])
        if tail.max() < tol * 1e-3 and tail.sum() < tol / 10.0:
            break
        order = int(order * 1.5) + 20
        if order > 10_000_000:
            raise RuntimeError("Chebyshev expansion failed to converge")

    coeff = ck * (-1j) ** k * np.exp(-1j * b * t)
    hs = (h - sp.identity(h.shape[0], format="csr") * b) / a if sp.issparse(h) \
        else (h - np.eye(h.shape[0]) * b) / a
    phi_prev = psi0.astype(complex)
    phi = hs @ phi_prev
    acc = coeff[0] * phi_prev + coeff[1] * phi
    for c in coeff[2:]:
        phi_prev, phi = phi, 2.0 * (hs @ phi) - phi_prev
        acc += c * phi
    return acc


def evolve(h, psi0: np.ndarray, t: float, *, method: str = "auto", tol: float = 1e-10) -> np.ndarray:
    """Return exp(-iHt) psi0 for Hermitian h.

    method: "auto" picks the spectral path for dim <= 2000 and the Chebyshev
    path above; "spectral" / "chebyshev" force one.
    """
    if h.shape[0] != len(psi0):
        raise ValueError("dimension mismatch between H and psi0")
    if t < 0:
        raise ValueError("need t >= 0")
    if method == "auto":
        method = "spectral" if h.shape[0] <= SPECTRAL_DIM_MAX and not sp.issparse(h) else "chebyshev"
    if method == "spectral":
        if sp.issparse(h):
            h = h.toarray()
        return SpectralPropagator(h)(psi0, t)
    if method == "chebyshev":
        _check_hermitian(h)
        if t == 0:
            return psi0.astype(complex)
        return _chebyshev_expm(h, psi0, t, tol)
    raise ValueError(f"unknown method {method!r}")


def evolve_trajectory(h, psi0: np.ndarray, times: np.ndarray, *, method: str = "auto") -> np.ndarray:
    """Snapshots exp(-iHt_k) psi0 stacked row-wise (len(times), dim)."""
    times = np.asarray(times, dtype=float)
    if h.shape[0] <= SPECTRAL_DIM_MAX and not sp.issparse(h) and method in ("auto", "spectral"):
        prop = SpectralPropagator(h)
        return np.stack([prop(psi0, t) for t in times])
    return np.stack([evolve(h, psi0, t, method=method) for t in times])


def evolve_lossy_cavity(h, kappa: float, psi0: np.ndarray, t: float) -> np.ndarray:
    """Single-excitation propagation with cavity decay at rate kappa.

    A decayed photon leaves the excitation sector for good (nothing pumps it
    back), so site/cavity amplitudes follow exactly the non-Hermitian
    generator H - i(kappa/2) |c><c| with |c> the last basis state.  The lost
    norm is the decayed population.
    """
    if kappa < 0:
        raise ValueError("need kappa >= 0")
    if kappa == 0:
        return evolve(h, psi0, t)
    from scipy.linalg import expm

    heff = np.array(h.toarray() if sp.issparse(h) else h, dtype=complex)
    heff[-1, -1] -= 0.5j * kappa
    return expm(-1j * t * heff) @ psi0


def transmission_at(psi: np.ndarray, spec: ChainSpec) -> float:
    """Population to the right of the cavity segment, sum_{j > M+N} |psi_j|^2."""
    if spec.M <= 0:
        raise ValueError("transmission needs leads (M > 0)")
    return float(np.sum(np.abs(psi[spec.M + spec.N: spec.ntot]) ** 2))


def in_cavity_weight(psi: np.ndarray, spec: ChainSpec) -> float:
    """Population still inside the cavity segment (sites M+1..M+N plus photon)."""
    seg = float(np.sum(np.abs(psi[spec.M: spec.M + spec.N]) ** 2))
    return seg + cavity_occupation(psi)


def cavity_occupation(psi: np.ndarray) -> float:
    """Photon population |psi_c|^2."""
    return float(np.abs(psi[-1]) ** 2)


def center_of_mass(psi: np.ndarray, spec: ChainSpec) -> float:
    """<j> over the site part of the state (1-based site index)."""
    j = np.arange(1, spec.ntot + 1)
    w = np.abs(psi[: spec.ntot]) ** 2
    return float(np.sum(j * w) / np.sum(w))


def center_of_mass_velocity(times: np.ndarray, states: np.ndarray, spec: ChainSpec) -> float:
    """Slope of a linear fit of the packet center of mass against time."""
    times = np.asarray(times, dtype=float)
    if len(times) < 2:
        raise ValueError("need at least two snapshots")
    com = np.array([center_of_mass(s, spec) for s in states])
    return float(np.polyfit(times, com, 1)[0])
