"""nhssh: non-Hermitian SSH lattices under time-dependent magnetic flux.

Complex (partially topological) Zak phases, biorthogonal band machinery,
flux-driven Bloch oscillations of Gaussian wavepackets, and the
perfect-transmission / partial-confinement interferometer dichotomy.
"""

__version__ = "0.1.0"

from .bloch import (
    BiorthEigenpair,
    BlochField,
    PolarDecomposition,
    RealityReport,
    SshModel,
    build_field,
    dispersion,
    eigenpair,
    group_velocity,
    polar_decompose,
    spectrum_reality,
)
from .dynamics import (
    EvolutionResult,
    FluxProtocol,
    PhaseLedger,
    WavepacketSpec,
    band_project,
    band_weights,
    center_of_mass,
    dirac_norm,
    evolve,
    fidelity,
    make_band_gwp,
    make_gwp,
    predict_trajectory,
    ramp_phase_ledger,
    ring_ramp,
)
from .errors import (
    ConfigError,
    ExceptionalPointError,
    NhsshError,
    NonConvergenceError,
    PacketNotInRingError,
    ParseError,
    ProtocolTimingError,
    SpectrumNotRealError,
    StepTooLargeError,
    TailsTruncatedWarning,
    ValidationError,
    ZeroNormError,
)
from .lattice import (
    FluxedHamiltonian,
    NetworkSpec,
    SshRingSpec,
    assemble_virtual,
    build_network,
    build_ssh_ring,
    export_triplets,
    max_imaginary_energy,
    network_hamiltonian,
    ring_hamiltonian,
    virtual_basis_map,
    virtual_couplings,
    virtual_decompose,
)
from .scatter import (
    ScatterReport,
    ScatterScenario,
    arrival_time,
    confinement_prediction,
    run_scenario,
    split_check,
    virtual_arm_weights,
)
from .zak import (
    AdiabaticPhase,
    ZakResult,
    adiabatic_phase,
    amplification_exponent,
    zak_closed_form,
    zak_quadrature,
    zak_wilson_loop,
)
