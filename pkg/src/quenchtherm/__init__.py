"""Strong-coupling quantum thermodynamics of sudden quenches."""

from .errors import (
    BadFactorCount,
    DimensionMismatch,
    DomainError,
    InvalidSpec,
    NotHermitian,
    NotPositiveDefinite,
    QuenchThermError,
    StepTooLarge,
    SupportMismatch,
)
from .operators import (
    DensityMatrix,
    Operator,
    SpectralDecomposition,
    func_of_hermitian,
    hermitian_eig,
    identity,
    partial_trace,
    pauli,
    tensor_product,
)
from .thermo import (
    GibbsEnsemble,
    MeanForceBundle,
    effective_energy_operator,
    embed_reservoir,
    embed_system,
    free_energies,
    gibbs,
    internal_energy_diff,
    internal_energy_estar,
    internal_energy_hstar,
    log_partition,
    mean_force_bundle,
    mean_force_hamiltonian,
    thermal_entropy,
)
from .quench import (
    EQUILIBRATED,
    GENERAL_QUENCH,
    INTERACTION_QUENCH,
    SYSTEM_QUENCH,
    UNITARY,
    QuenchSpec,
    SecondLawAudit,
    ThermoLedger,
    evolve_unitary,
    relative_entropy,
    run_quench,
    second_law_audit,
)
from .twospin import (
    ClosedFormStatics,
    OracleLedger,
    TwoSpinParams,
    build_lgt_hamiltonian,
    closed_form_statics,
    interaction_quench_ledger,
    reservoir_hamiltonian,
    system_quench_ledger,
    two_spin_hamiltonian,
)

__version__ = "0.1.0"
