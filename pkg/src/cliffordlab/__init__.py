"""Monte Carlo laboratory for T-doped random brick-wall Clifford circuits.

Two complexity diagnostics of the random circuit ensemble are reproduced as
seeded experiments with exact small-register oracles: the periodic-orbit /
eigenphase statistics of the Clifford conjugation action, and the generation
of magic quantified by the stabilizer 2-Renyi entropy.
"""

from .errors import (
    CapacityError,
    CliffordLabError,
    ConfigError,
    ContractViolation,
    DimensionError,
    NumericalError,
    ResourceCapError,
)
from .pauli import PauliString, SignedPauli, commutes, expectation, from_label, multiply
from .tableau import (
    Circuit,
    CliffordTableau,
    TWO_QUBIT_CLIFFORD_COUNT,
    build_brickwall,
    circuit_clifford_part,
    circuit_from_json,
    circuit_to_json,
    compose,
    conjugate,
    default_depth,
    identity_tableau,
    random_two_qubit_clifford,
    two_qubit_clifford_from_index,
)
from .orbits import (
    OrbitCensus,
    OrbitEnsemble,
    decompose_orbits,
    integrated_probability,
    max_orbit_length,
    orbit_eigenphases,
)
from .spectra import (
    CorrelationHistogram,
    SpacingHistogram,
    chi_cue,
    circuit_to_matrix,
    correlation_function,
    degeneracy_fraction,
    eigenphases,
    haar_unitary,
    level_spacing,
    peak_weight,
    spacings,
    tableau_to_matrix,
)
from .magic import (
    MAGIC_QUANTUM,
    MAX_MAGIC_1Q,
    MagicDistribution,
    bloch_magic_map,
    haar_magic_baseline,
    max_magic_search,
    non_stabilizing_power_mc,
    sample_magic_distribution,
    sre,
    sre_upper_bound,
)
from .harness import RunConfig, RunManifest, run, validate, verify_manifest

__version__ = "0.1.0"
