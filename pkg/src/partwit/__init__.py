"""Symmetric entanglement witnesses from partition-label measurements.

Young projectors on (C^d)^(x n), exact and numeric minimum expectation values
over separability structures, matrix-immanant inequalities, the four-ququart
FPPT polytope, and a desk-scale simulator of the projective partition-label
measurement pipeline.
"""

from .partitions import (
    Partition,
    addable_corners,
    character,
    class_size,
    cycle_type,
    enumerate_partitions,
    hook_dimension,
    interlacings,
    removable_corners,
    weyl_dimension,
)
from .tensorops import (
    ProjectorSet,
    all_projectors,
    compress_first_site,
    compressed_projector,
    eigenvalues,
    min_eigenvalue,
    partial_transpose,
    permutation_operator,
    young_projector,
)
from .witness import (
    AlphaResult,
    Witness,
    alpha_semisep,
    alpha_semisep_closed,
    alpha_semisep_numeric,
    alpha_tripartite_bisep,
    alpha_tripartite_fullsep,
    detect_inseparability,
    even_qubit_witness,
    hook_family_witness,
    projected_spectrum,
    separability_partition,
    two_row_qubit_witness,
    wigner_weight,
    witness_operator,
)
from .immanants import (
    bridge_identity_check,
    gram_vectors,
    immanant,
    immanant_vector,
    inequality_suite,
    inequality_to_witness,
    witness_to_inequality,
)
from .seplab import (
    ClassificationLabel,
    ProductState,
    classify_tripartite,
    classify_werner_family,
    decomposability_identity_check,
    epsilon_certify,
    extreme_point_search,
    fppt_check,
    seesaw_minimize,
    seven_qubit_consistency,
    symmetric_state,
    verify_polytope_tables,
)
from .sampling import (
    EstimateReport,
    SchurDistribution,
    ShotRecord,
    estimate_and_decide,
    pipeline,
    sample,
    schur_probabilities,
)

__version__ = "0.1.0"
