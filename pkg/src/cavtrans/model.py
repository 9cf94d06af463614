"""Chain + cavity model construction in the single-excitation sector.

Conventions used throughout the package:

* energies are in units of the reference tunneling J (J = 1 by default),
  times in 1/J, hbar = 1;
* a chain of ``ntot = 2*M + N`` two-level sites, with the N central sites
  coupled to one cavity mode.  Basis ordering of every Hamiltonian is
  ``[site 0, ..., site ntot-1, cavity]`` (0-based), i.e. the photon
  amplitude is the last component;
* site energies are ``omega`` on the two leads and ``omega0`` on the
  cavity-coupled segment; the detuning is ``delta = omega - omega0``;
* nearest-neighbour bonds enter with amplitude ``-J_k`` (bond k couples
  sites k and k+1); dipolar long-range hopping enters with amplitude
  ``+jbar/r^3``, the sign convention of the dipole form.  The sign in use
  is reported by :func:`hopping_sign`.

All builders are pure functions of (spec, seed) and return freshly
allocated arrays, so they are safe to call concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import numpy as np

__all__ = [
    "NearestNeighbor",
    "DipolarLongRange",
    "AllToAll",
    "EffectiveCavity",
    "DisorderSpec",
    "ChainSpec",
    "build_site_energies",
    "sample_tunnelings",
    "sample_positions",
    "build_hamiltonian",
    "cavity_block",
    "hopping_sign",
]

# disjoint RNG streams so tunneling and position draws never alias
_TUNNELING_STREAM = 1
_POSITION_STREAM = 2

HERMITICITY_TOL = 1e-12


@dataclass(frozen=True)
class NearestNeighbor:
    """Tight-binding bonds -J_k between neighbouring sites."""


@dataclass(frozen=True)
class DipolarLongRange:
    """Dipolar hopping +jbar/|x_i - x_j|^3 between pairs of sites.

    ``max_range=1`` keeps only nearest-neighbour pairs (the truncated
    comparison model); ``None`` keeps every pair.
    """

    jbar: float = 1.0
    max_range: int | None = None


@dataclass(frozen=True)
class AllToAll:
    """Uniform coupling jinf between every pair of cavity-segment sites.

    Replaces both the intra-segment tight-binding bonds and the cavity
    coupling: the segment block becomes jinf * (all-ones matrix), whose
    dominant eigenvalue is N*jinf.  The diagonal is included because the
    number terms of the underlying spin-exchange sum survive in the
    single-excitation sector.
    """

    jinf: float = 1.0


@dataclass(frozen=True)
class EffectiveCavity:
    """All-to-all hopping 2 g^2 / kappa from adiabatic cavity elimination.

    The photon row is left decoupled: the mode has been integrated out.
    """

    g: float = 1.0
    kappa: float = 1.0


HoppingModel = NearestNeighbor | DipolarLongRange | AllToAll | EffectiveCavity


@dataclass(frozen=True)
class DisorderSpec:
    """Disorder realization recipe.

    kind: "none", "tunneling" (Gaussian delta J on every bond) or
    "positional" (Gaussian site displacement, lattice-constant units).
    Identical (kind, parameters, seed) always reproduces the same draw.
    """

    kind: str = "none"
    deltaJ: float = 0.0
    sigma_frac: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ("none", "tunneling", "positional"):
            raise ValueError(f"unknown disorder kind {self.kind!r}")
        if self.deltaJ < 0 or self.sigma_frac < 0:
            raise ValueError("disorder strengths must be >= 0")


@dataclass(frozen=True)
class ChainSpec:
    """Geometry and couplings of one chain + cavity instance.

    M           sites in each lead (M = 0 is the pumped, lead-free layout)
    N           cavity-coupled sites
    omega0      level spacing on the cavity segment
    omega       level spacing on the leads (delta = omega - omega0)
    J           reference tunneling, the global energy unit (default 1)
    Jprime      entrance/exit bond value (bonds M-1 and M+N-1, 0-based)
    g           uniform cavity coupling; g_per_site overrides it per site
    omega_c     cavity mode energy (defaults to omega0, the resonant choice)
    """

    M: int = 0
    N: int = 1
    omega0: float = 0.0
    omega: float = 0.0
    J: float = 1.0
    Jprime: float = 1.0
    g: float = 0.0
    g_per_site: tuple[float, ...] | None = None
    omega_c: float | None = None
    hopping: HoppingModel = field(default_factory=NearestNeighbor)
    disorder: DisorderSpec = field(default_factory=DisorderSpec)

    def __post_init__(self):
        if self.N < 1 or self.M < 0:
            raise ValueError("need N >= 1 and M >= 0")
        if self.g_per_site is not None:
            object.__setattr__(self, "g_per_site", tuple(float(x) for x in self.g_per_site))
            if len(self.g_per_site) != self.N:
                raise ValueError("g_per_site must have length N")
        if isinstance(self.hopping, DipolarLongRange) and self.disorder.kind == "tunneling":
            raise ValueError("tunneling disorder is specific to the nearest-neighbor model; "
                             "use positional disorder with dipolar hopping")

    @property
    def ntot(self) -> int:
        return 2 * self.M + self.N

    @property
    def dim(self) -> int:
        """Single-excitation Hilbert-space dimension (sites + photon)."""
        return self.ntot + 1

    @property
    def delta(self) -> float:
        return self.omega - self.omega0

    def couplings(self) -> np.ndarray:
        """Per-site cavity couplings g_i (length N)."""
        if self.g_per_site is not None:
            return np.asarray(self.g_per_site, dtype=float)
        return np.full(self.N, float(self.g))


def hopping_sign(model: HoppingModel) -> int:
    """Sign of the nearest-neighbour off-diagonal amplitude.

    -1 for tight-binding bonds (they enter as -J_k) and for dipolar hopping
    with negative jbar; +1 for the dipole form with positive jbar.  The
    wave-packet launcher uses this to aim the packet at the cavity, since
    flipping the sign inverts the band and with it the group velocity of a
    fixed-phase packet.
    """
    if isinstance(model, DipolarLongRange):
        return +1 if model.jbar >= 0 else -1
    return -1


def _rng(stream: int, seed: int) -> np.random.Generator:
    return np.random.default_rng([stream, seed & 0xFFFFFFFFFFFFFFFF])


def build_site_energies(spec: ChainSpec) -> np.ndarray:
    """On-site energies: omega on the leads, omega0 on the N central sites."""
    e = np.full(spec.ntot, float(spec.omega))
    e[spec.M:spec.M + spec.N] = spec.omega0
    return e


def sample_tunnelings(spec: ChainSpec) -> np.ndarray:
    """Bond values J_k (length ntot-1), bond k coupling sites k and k+1.

    Every bond is J + Gaussian(0, deltaJ); negative draws are kept so the
    distribution stays exactly normal.  When leads are present the two
    bonds touching the cavity segment carry Jprime with no disorder.
    """
    if not isinstance(spec.hopping, (NearestNeighbor, AllToAll, EffectiveCavity)):
        raise ValueError("bond sampling applies to nearest-neighbor style lead models")
    nb = spec.ntot - 1
    bonds = np.full(nb, float(spec.J))
    if spec.disorder.kind == "tunneling" and spec.disorder.deltaJ > 0:
        rng = _rng(_TUNNELING_STREAM, spec.disorder.seed)
        bonds += rng.normal(0.0, spec.disorder.deltaJ, size=nb)
    if spec.M > 0:
        bonds[spec.M - 1] = spec.Jprime
        bonds[spec.M + spec.N - 1] = spec.Jprime
    return bonds


def sample_positions(spec: ChainSpec) -> np.ndarray:
    """Site positions x_i = i + Gaussian(0, sigma_frac), lattice-constant units."""
    x = np.arange(spec.ntot, dtype=float)
    if spec.disorder.kind == "positional" and spec.disorder.sigma_frac > 0:
        rng = _rng(_POSITION_STREAM, spec.disorder.seed)
        x += rng.normal(0.0, spec.disorder.sigma_frac, size=spec.ntot)
    return x


def _dipolar_block(x: np.ndarray, jbar: float, max_range: int | None) -> np.ndarray:
    n = len(x)
    dx = x[:, None] - x[None, :]
    np.fill_diagonal(dx, 1.0)
    h = jbar / np.abs(dx) ** 3
    np.fill_diagonal(h, 0.0)
    if max_range is not None:
        idx = np.arange(n)
        far = np.abs(idx[:, None] - idx[None, :]) > max_range
        h[far] = 0.0
    return h


def build_hamiltonian(
    spec: ChainSpec,
    *,
    tunnelings: np.ndarray | None = None,
    positions: np.ndarray | None = None,
    pbc: bool = False,
    sparse: bool = False,
):
    """Single-excitation Hamiltonian on the basis [sites..., cavity].

    Precomputed ``tunnelings``/``positions`` arrays may be passed to reuse a
    disorder realization (or to impose custom bond patterns); otherwise they
    are sampled from the spec.  ``pbc=True`` adds the wrap-around bond -J
    (homogeneous, for analytic validation only).  ``sparse=True`` returns a
    CSR matrix, intended for large nearest-neighbor systems.
    """
    nt, dim = spec.ntot, spec.dim
    lo, hi = spec.M, spec.M + spec.N  # cavity segment, half-open
    h = np.zeros((dim, dim), dtype=complex)
    h[np.arange(nt), np.arange(nt)] = build_site_energies(spec)

    hop = spec.hopping
    if isinstance(hop, DipolarLongRange):
        if positions is None:
            positions = sample_positions(spec)
        h[:nt, :nt] += _dipolar_block(np.asarray(positions, float), hop.jbar, hop.max_range)
        if pbc:
            raise ValueError("pbc is only meaningful for the nearest-neighbor model")
    else:
        if tunnelings is None:
            tunnelings = sample_tunnelings(spec)
        bonds = np.asarray(tunnelings, float)
        if len(bonds) != nt - 1:
            raise ValueError(f"expected {nt - 1} bonds, got {len(bonds)}")
        if not isinstance(hop, NearestNeighbor):
            # collective block replaces the intra-segment bonds
            bonds = bonds.copy()
            bonds[lo:hi - 1] = 0.0
        k = np.arange(nt - 1)
        h[k, k + 1] = -bonds
        h[k + 1, k] = -bonds
        if pbc and nt > 2:
            h[nt - 1, 0] += -spec.J
            h[0, nt - 1] += -spec.J

    if isinstance(hop, (AllToAll, EffectiveCavity)):
        jeff = hop.jinf if isinstance(hop, AllToAll) else 2.0 * hop.g**2 / hop.kappa
        h[lo:hi, lo:hi] += jeff

    # cavity row/column: couples only to the central segment
    h[nt, nt] = spec.omega0 if spec.omega_c is None else spec.omega_c
    if not isinstance(hop, EffectiveCavity):
        gi = spec.couplings()
        h[lo:hi, nt] = gi
        h[nt, lo:hi] = gi

    if sparse:
        from scipy.sparse import csr_matrix

        return csr_matrix(h)
    return h


def cavity_block(spec: ChainSpec, **kwargs) -> np.ndarray:
    """Hamiltonian of the N cavity-coupled sites plus the photon (dim N+1).

    Convenience wrapper equal to the M = 0 version of the spec; this is the
    block whose eigenvalues the polariton/dark-mode theory describes.
    """
    inner = ChainSpec(
        M=0, N=spec.N, omega0=spec.omega0, omega=spec.omega, J=spec.J,
        Jprime=spec.Jprime, g=spec.g, g_per_site=spec.g_per_site,
        omega_c=spec.omega_c, hopping=spec.hopping, disorder=spec.disorder,
    )
    return build_hamiltonian(inner, **kwargs)
