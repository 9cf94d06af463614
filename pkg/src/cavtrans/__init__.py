"""Exciton transport in a cavity-coupled chain, single-excitation sector.

Units: the reference tunneling J is the energy unit (J = hbar = 1), times
are in 1/J.  See model.py for basis conventions.
"""

__version__ = "0.1.0"

from .model import (  # noqa: F401
    AllToAll, ChainSpec, DipolarLongRange, DisorderSpec, EffectiveCavity,
    NearestNeighbor, build_hamiltonian, build_site_energies, cavity_block,
    sample_positions, sample_tunnelings,
)
from .dynamics import (  # noqa: F401
    SpectralPropagator, Timescales, WavePacketSpec, cavity_occupation,
    center_of_mass_velocity, evolve, evolve_lossy_cavity, evolve_trajectory,
    initial_wave_packet, timescales, transmission_at,
)
from .scattering import (  # noqa: F401
    PolaritonSpectrum, ScatterParams, beta_pbc, fwhm, impedance_jprime,
    obc_eigenvalues, packet_averaged_transmission, polariton_energies,
    transmission_exact, transmission_lorentzian, transmission_stationary,
)
from .lindblad import (  # noqa: F401
    DissipationRates, Liouvillian, build_liouvillian, chain_liouvillian,
    continuity_audit, current_out, steady_state, time_integrate,
)
from .experiments import (  # noqa: F401
    Scenario, crossover_locator, fit_scaling, peak_characterize, run_scenario,
)
