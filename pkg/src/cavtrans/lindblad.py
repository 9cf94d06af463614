"""Lindblad master equation on the 0+1-excitation manifold.

Basis ordering is [vacuum, site 1..N, cavity photon], dimension N+2.  Jump
operators follow the convention L = sqrt(rate/2) * op with dissipator
D(rho) = -{L^dag L, rho} + 2 L rho L^dag, i.e. a bare rate gamma produces
the standard gamma*(op rho op^dag - {op^dag op, rho}/2) form, and a single
emitter's excited population decays as exp(-gamma t).

The incoherent pump sqrt(gamma_P/2) sigma^+_1 is projected onto
|site 1><vac|: it only refills from the vacuum, the minimal truncation that
keeps the dynamics inside the manifold, preserves trace, and closes the
site-N continuity balance exactly.

Density operators are vectorized column-major; the Liouvillian is kept
sparse (CSR) and steady states come from a direct factorization of the
trace-bordered system.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import eigs, splu

__all__ = [
    "DissipationRates",
    "Liouvillian",
    "DegenerateSteadyStateError",
    "build_liouvillian",
    "chain_liouvillian",
    "embed_hamiltonian",
    "steady_state",
    "current_out",
    "continuity_audit",
    "time_integrate",
    "vacuum_state",
    "site_projector",
]


@dataclass(frozen=True)
class DissipationRates:
    """All rates in units of J: cavity decay, per-site spontaneous emission
    and dephasing, pump into site 1, drain out of site N."""

    kappa: float = 0.0
    gamma_sp: float = 0.0
    gamma_deph: float = 0.0
    gamma_P: float = 0.0
    gamma_out: float = 0.0

    def __post_init__(self):
        for name in ("kappa", "gamma_sp", "gamma_deph", "gamma_P", "gamma_out"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")


class DegenerateSteadyStateError(RuntimeError):
    """The Liouvillian null space has dimension > 1."""


def _ket_bra(dim: int, i: int, j: int, amp: float) -> sp.csr_matrix:
    return sp.csr_matrix(([amp], ([i], [j])), shape=(dim, dim))


def embed_hamiltonian(h_block) -> sp.csr_matrix:
    """Embed the single-excitation block (sites + photon) above the vacuum."""
    nb = h_block.shape[0]
    h = sp.lil_matrix((nb + 1, nb + 1), dtype=complex)
    h[1:, 1:] = h_block.toarray() if sp.issparse(h_block) else h_block
    return h.tocsr()


def _jump_operators(n_sites: int, rates: DissipationRates,
                    has_cavity: bool) -> dict[str, list[sp.csr_matrix]]:
    dim = n_sites + 1 + (1 if has_cavity else 0)
    ops: dict[str, list[sp.csr_matrix]] = {
        "kappa": [], "sp": [], "deph": [], "pump": [], "out": [],
    }
    if rates.kappa > 0:
        if not has_cavity:
            raise ValueError("kappa > 0 needs the cavity mode in the manifold")
        ops["kappa"].append(_ket_bra(dim, 0, dim - 1, np.sqrt(rates.kappa / 2.0)))
    if rates.gamma_sp > 0:
        amp = np.sqrt(rates.gamma_sp / 2.0)
        ops["sp"] = [_ket_bra(dim, 0, i, amp) for i in range(1, n_sites + 1)]
    if rates.gamma_deph > 0:
        amp = np.sqrt(rates.gamma_deph / 2.0)
        ops["deph"] = [_ket_bra(dim, i, i, amp) for i in range(1, n_sites + 1)]
    if rates.gamma_P > 0:
        ops["pump"].append(_ket_bra(dim, 1, 0, np.sqrt(rates.gamma_P / 2.0)))
    if rates.gamma_out > 0:
        ops["out"].append(_ket_bra(dim, 0, n_sites, np.sqrt(rates.gamma_out / 2.0)))
    return ops


def _dissipator_matrix(L: sp.csr_matrix) -> sp.csr_matrix:
    dim = L.shape[0]
    ident = sp.identity(dim, format="csr")
    LdL = (L.conj().T @ L).tocsr()
    return (2.0 * sp.kron(L.conj(), L, format="csr")
            - sp.kron(ident, LdL, format="csr")
            - sp.kron(LdL.T, ident, format="csr"))


def dissipator_action(L: sp.csr_matrix, rho: np.ndarray) -> np.ndarray:
    """-{L^dag L, rho} + 2 L rho L^dag, applied to a dense rho."""
    LdL = (L.conj().T @ L).toarray()
    return 2.0 * (L @ rho) @ L.conj().T.toarray() - LdL @ rho - rho @ LdL


@dataclass
class Liouvillian:
    """Sparse generator on vectorized density operators plus its pieces."""

    matrix: sp.csr_matrix
    h_full: sp.csr_matrix
    n_sites: int
    has_cavity: bool
    rates: DissipationRates
    channels: dict[str, list[sp.csr_matrix]]

    @property
    def dim(self) -> int:
        return self.n_sites + 1 + (1 if self.has_cavity else 0)

    def apply(self, rho: np.ndarray) -> np.ndarray:
        v = self.matrix @ rho.flatten(order="F")
        return v.reshape((self.dim, self.dim), order="F")


def build_liouvillian(h_block, rates: DissipationRates, *,
                      includes_cavity: bool = True) -> Liouvillian:
    """Assemble the GKSL generator from the excitation-sector Hamiltonian.

    ``h_block`` is the single-excitation Hamiltonian (the M = 0 chain
    builder output, N sites plus the photon); the vacuum is appended at
    index 0.  ``includes_cavity=False`` declares a block without the photon
    row, for the decoupled-cavity case where keeping an inert mode would
    make the steady state non-unique.
    """
    h_full = embed_hamiltonian(h_block)
    dim = h_full.shape[0]
    n_sites = dim - 1 - (1 if includes_cavity else 0)
    if n_sites < 1:
        raise ValueError("need at least one site")
    ident = sp.identity(dim, format="csr")
    mat = (-1j * (sp.kron(ident, h_full, format="csr")
                  - sp.kron(h_full.T, ident, format="csr"))).tocsr()
    channels = _jump_operators(n_sites, rates, includes_cavity)
    for ops in channels.values():
        for L in ops:
            mat = (mat + _dissipator_matrix(L)).tocsr()
    return Liouvillian(matrix=mat, h_full=h_full, n_sites=n_sites,
                       has_cavity=includes_cavity, rates=rates, channels=channels)


def chain_liouvillian(spec, rates: DissipationRates) -> Liouvillian:
    """Liouvillian of a pumped cavity chain described by a ChainSpec (M = 0).

    When the cavity neither couples (all g_i = 0) nor decays (kappa = 0) the
    photon is dropped from the manifold: an inert mode would otherwise carry
    its own conserved population and split the steady state.
    """
    from .model import build_hamiltonian

    if spec.M != 0:
        raise ValueError("the pumped configuration has no leads (M = 0)")
    h = build_hamiltonian(spec)
    coupled = bool(np.any(spec.couplings() != 0.0))
    if not coupled and rates.kappa == 0.0:
        return build_liouvillian(h[:-1, :-1], rates, includes_cavity=False)
    return build_liouvillian(h, rates, includes_cavity=True)


def vacuum_state(dim: int) -> np.ndarray:
    rho = np.zeros((dim, dim), dtype=complex)
    rho[0, 0] = 1.0
    return rho


def site_projector(lv: Liouvillian, site: int) -> sp.csr_matrix:
    """n_site = |site><site| in the manifold basis (site is 1-based)."""
    if not (1 <= site <= lv.n_sites):
        raise ValueError("site index out of range")
    return _ket_bra(lv.dim, site, site, 1.0)


def _unique_null_vector(lv: Liouvillian, tol: float) -> None:
    """Raise if more than one eigenvalue of the generator sits at zero."""
    A = lv.matrix
    scale = max(abs(A).max(), 1.0)
    n = A.shape[0]
    if n <= 1600:
        lam = np.linalg.eigvals(A.toarray())
    else:
        lam = eigs(A.tocsc(), k=4, sigma=1e-6 * scale, return_eigenvectors=False)
    near_zero = np.sum(np.abs(lam) < tol * scale)
    if near_zero > 1:
        raise DegenerateSteadyStateError(
            f"{near_zero} Liouvillian eigenvalues within {tol * scale:.1e} of zero")


def _steady_direct(lv: Liouvillian) -> np.ndarray:
    """Bordered sparse solve: first generator row replaced by the trace
    functional (the dropped row is linearly dependent on the rest)."""
    A = lv.matrix.tocoo()
    dim = lv.dim
    weight = np.abs(A.data).mean() if A.nnz else 1.0
    mask = A.row != 0
    diag_cols = np.arange(dim) * (dim + 1)
    rows = np.concatenate([A.row[mask], np.zeros(dim, dtype=A.row.dtype)])
    cols = np.concatenate([A.col[mask], diag_cols])
    data = np.concatenate([A.data[mask], np.full(dim, weight, dtype=complex)])
    bordered = sp.csc_matrix((data, (rows, cols)), shape=A.shape)
    rhs = np.zeros(A.shape[0], dtype=complex)
    rhs[0] = weight
    v = splu(bordered, permc_spec="MMD_ATA").solve(rhs)
    return v.reshape((dim, dim), order="F")


def _channel_rate_ops(lv: Liouvillian):
    """Recover (site, rate) lists from the stored jump operators."""
    decays: list[tuple[int, float]] = []   # excited-block index, rate
    dephs: list[tuple[int, float]] = []
    pump_rate = 0.0
    for name, ops in lv.channels.items():
        for L in ops:
            c = L.tocoo()
            i, j, amp = int(c.row[0]), int(c.col[0]), float(abs(c.data[0]))
            rate = 2.0 * amp * amp
            if name == "pump":
                pump_rate = rate
            elif name == "deph":
                dephs.append((i - 1, rate))
            else:  # kappa, sp, out: |vac><excited|
                decays.append((j - 1, rate))
    return decays, dephs, pump_rate


def _steady_spectral(lv: Liouvillian) -> np.ndarray:
    """Eigenbasis solve exploiting the vacuum + one-excitation structure.

    Coherences between the vacuum and the excited sector decay to zero, so
    the steady excited block obeys
        -i(H_nh rho - rho H_nh^dag) + sum_i s_i |i><i| = 0,
    with H_nh the excitation Hamiltonian minus i/2 times all outflow rates
    and the sources s_i fed by the pump and by dephasing re-injection of
    rho's own site populations.  Diagonalizing H_nh turns each rank-one
    source into a closed-form Sylvester solution; the site populations then
    satisfy a small self-consistent linear system.  Falls back to the
    sparse direct route when a non-decaying mode makes the inversion
    singular (degenerate steady manifold).
    """
    dim = lv.dim
    n1 = dim - 1
    h1 = np.asarray(lv.h_full.toarray())[1:, 1:].astype(complex)
    decays, dephs, pump_rate = _channel_rate_ops(lv)
    gamma = np.zeros(n1)
    for idx, rate in decays:
        gamma[idx] += rate
    deph_rate = np.zeros(n1)
    for idx, rate in dephs:
        deph_rate[idx] += rate
    hnh = h1 - 0.5j * np.diag(gamma + deph_rate)

    lam, vec = np.linalg.eig(hnh)
    if np.min(-lam.imag) < 1e-12:
        return _steady_direct(lv)  # an undamped mode: no unique fast solution
    pinv = np.linalg.inv(vec)
    wden = 1.0 / (1j * (lam[:, None] - np.conj(lam)[None, :]))

    if pump_rate == 0.0:
        return vacuum_state(dim)

    # response of every diagonal element to a unit source at site j
    src_idx = [0] + [i for i, r in dephs if r > 0]  # pump site plus dephasing sites
    src_idx = sorted(set(src_idx))
    kmat = np.empty((n1, len(src_idx)), dtype=complex)
    for col, j in enumerate(src_idx):
        c = vec * pinv[:, j][None, :]
        kmat[:, col] = np.einsum("ia,ia->i", c @ wden, np.conj(c))
    kmat = kmat.real

    # self-consistency of the dephasing-fed site populations (rho_vv = 1)
    nsrc = len(src_idx)
    gd = np.array([deph_rate[j] for j in src_idx])
    ksub = kmat[src_idx, :]
    b = pump_rate * ksub[:, src_idx.index(0)]
    d = np.linalg.solve(np.eye(nsrc) - ksub * gd[None, :], b)

    s = gd * d
    s[src_idx.index(0)] += pump_rate
    ymat = (pinv[:, src_idx] * s[None, :]) @ pinv[:, src_idx].conj().T
    rho_ee = vec @ (ymat * wden) @ vec.conj().T

    rho = np.zeros((dim, dim), dtype=complex)
    rho[0, 0] = 1.0
    rho[1:, 1:] = rho_ee
    return rho


def steady_state(lv: Liouvillian, *, check_unique: bool = False,
                 unique_tol: float = 1e-9, method: str = "auto") -> np.ndarray:
    """Normalized density operator with L(rho) = 0.

    method: "direct" solves the trace-bordered sparse system by LU;
    "spectral" uses the sector-structure solver (_steady_spectral), much
    faster for large N; "auto" picks spectral above dim 24.  Either way the
    result is hermitized, trace-normalized and verified against the full
    sparse generator to ||L(rho)||/||rho|| < 1e-10 (so the two routes cannot
    silently disagree).  ``check_unique=True`` additionally inspects the
    low-lying spectrum and raises DegenerateSteadyStateError for a
    multi-dimensional steady manifold (slow for large N; off by default in
    sweeps where uniqueness is physically guaranteed).
    """
    if check_unique:
        _unique_null_vector(lv, unique_tol)
    if method == "auto":
        method = "spectral" if lv.dim > 24 else "direct"
    if method == "spectral":
        rho = _steady_spectral(lv)
    elif method == "direct":
        rho = _steady_direct(lv)
    else:
        raise ValueError(f"unknown method {method!r}")
    rho = 0.5 * (rho + rho.conj().T)
    rho /= np.trace(rho).real
    resid = np.linalg.norm(lv.matrix @ rho.flatten(order="F")) / np.linalg.norm(rho)
    if resid > 1e-10:
        if method == "spectral":  # ill-conditioned eigenbasis: one retry
            return steady_state(lv, method="direct")
        raise RuntimeError(f"steady-state residual {resid:.2e} exceeds 1e-10")
    return rho


def current_out(rho: np.ndarray, rates: DissipationRates,
                n_sites: int | None = None) -> float:
    """Drain-site exciton current gamma_out <n_N> (reported as a magnitude;
    the trace form tr[n_N D_out(rho)] is its negative).

    ``n_sites`` defaults to dim - 2, the cavity-included layout; pass it
    explicitly (e.g. lv.n_sites) for a photon-free manifold.
    """
    n = rho.shape[0] - 2 if n_sites is None else n_sites
    return float(rates.gamma_out * rho[n, n].real)


def continuity_audit(lv: Liouvillian, rho: np.ndarray) -> dict[str, float]:
    """Per-channel contributions to d<n_N>/dt plus their sum and residual.

    Keys: 'pump', 'out', 'sp', 'deph', 'kappa', 'hamiltonian', 'sum',
    'residual' (sum over the largest magnitude).  In a steady state the sum
    vanishes; the dephasing and cavity-decay terms vanish identically
    because n_N commutes with every site projector and is dark to the
    photon channel.
    """
    n_op = site_projector(lv, lv.n_sites).toarray()
    terms: dict[str, float] = {}
    for name, ops in lv.channels.items():
        val = 0.0
        for L in ops:
            val += float(np.trace(n_op @ dissipator_action(L, rho)).real)
        terms[name] = val
    h = lv.h_full.toarray()
    comm = h @ rho - rho @ h
    terms["hamiltonian"] = float((-1j * np.trace(n_op @ comm)).real)
    total = sum(terms.values())
    biggest = max((abs(v) for v in terms.values()), default=0.0)
    terms["sum"] = total
    terms["residual"] = abs(total) / biggest if biggest > 0 else 0.0
    return terms


def time_integrate(lv: Liouvillian, rho0: np.ndarray, t: float, *,
                   rtol: float = 1e-10, atol: float = 1e-12) -> np.ndarray:
    """Integrate rho' = L(rho) to time t (adaptive explicit Runge-Kutta).

    Serves as the independent oracle for steady_state; trace drift stays
    below 1e-9 at the default tolerances.
    """
    from scipy.integrate import solve_ivp

    if t < 0:
        raise ValueError("need t >= 0")
    if t == 0:
        return rho0.astype(complex)
    y0 = rho0.astype(complex).flatten(order="F")
    sol = solve_ivp(lambda _, y: lv.matrix @ y, (0.0, t), y0,
                    method="RK45", rtol=rtol, atol=atol)
    if not sol.success:
        raise RuntimeError(f"time integration failed: {sol.message}")
    return sol.y[:, -1].reshape((lv.dim, lv.dim), order="F")
