"""Optimal deterministic port-based teleportation via the teleportation matrix.

The best achievable fidelity of the deterministic protocol, with both the
measurement and the resource state optimised, equals the spectral radius of
an integer matrix over Young diagrams divided by d^2.  This package builds
that matrix, finds its spectral radius (closed forms where available, a
convergent power iteration otherwise), emits the optimal measurement and
resource-state coefficients, and cross-checks every formula against a dense
brute-force operator oracle at small sizes.
"""

__version__ = "0.1.0"

from .characters import (
    CharacterMatrix,
    CycleType,
    character,
    character_matrix,
    class_size,
    cycle_types,
    induced_character,
)
from .diagrams import (
    EMPTY_DIAGRAM,
    DiagramBasis,
    YoungDiagram,
    add_box,
    box_move_related,
    enumerate_diagrams,
    irrep_dim,
    multiplicity,
    remove_box,
)
from .protocol import (
    FidelityReport,
    OptimalSolution,
    ProtocolEigen,
    general_povm_fidelity,
    lower_bound_fidelity,
    optimal_fidelity,
    optimal_solution,
    protocol_eigenvalues,
    sqrt_measurement_fidelity,
    sweep,
)
from .spectral import (
    PowerIterationError,
    SpectralResult,
    closed_form_d2,
    closed_form_full,
    jacobi_eigh,
    power_iteration,
    spectrum_via_characters,
)
from .telemat import (
    LabeledIntMatrix,
    StructureReport,
    gram_G,
    gram_H,
    incidence_matrix,
    recursion_defect,
    structure_report,
    teleportation_matrix,
)
