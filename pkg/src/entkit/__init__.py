"""Entanglement measures, unit calculus, LOCC protocols, and CZ-cost bounds."""

__version__ = "0.1.0"

from ._kernels import NUMBA_ENABLED
from .states import (
    Cut,
    DensityMatrix,
    PureState,
    SchmidtDecomposition,
    ValidationError,
    apply_unitary,
    bell_state,
    fidelity,
    ghz_state,
    named_state,
    partial_trace,
    random_mixed_state,
    random_pure_state,
    reduced_density,
    schmidt_decompose,
    schmidt_rank,
    tensor_product,
    von_neumann_entropy,
    werner_state,
)
from .measures import (
    Decomposition,
    DistillableBounds,
    MeasureValue,
    RoofOptions,
    RoofResult,
    binary_entropy,
    concurrence,
    convex_roof_eof,
    distillable_bounds,
    eof_from_concurrence,
    eof_two_qubit,
    pure_state_entanglement,
)
from .units import (
    Interval,
    MeasureRecord,
    RatioCertificate,
    SigmaUnitBounds,
    formation_ratio_certificate,
    ratio_certificate,
    ratio_certificates,
    sigma_distillable_bounds,
    sigma_formation_bounds,
    sigma_unit_bounds,
    special_values,
)
from .locc import (
    ChannelMatrix,
    ProtocolTranscript,
    ResourceTotals,
    channel_from_apply,
    channel_process_fidelity,
    nonlocal_cz,
    nonlocal_cz_branches,
    nonlocal_cz_channel,
    reduction_demo,
    teleport,
    teleport_branches,
    teleport_channel,
)
from .gatecost import (
    Circuit,
    CZBoundReport,
    CZGate,
    LocalGate,
    SearchOptions,
    SynthesisError,
    cz_bound_report,
    cz_lower_bound,
    cz_upper_bound,
    exact_min_cz_search,
)
from .graphfn import (
    ClassicalDistribution,
    GraphFunctionState,
    build_graph_function_state,
    classical_distribution,
    graph_state_entanglement_profile,
    hamiltonian_cycle_oracle,
)
