"""Dimension-dependent linear-entropy inequalities for bipartite quantum states."""

from .bloch import (
    BlochVector,
    CorrelationTensor,
    OperatorBasis,
    adapted_basis,
    bloch_vector,
    check_operator_bound,
    correlation_tensor,
    gellmann_basis,
)
from .bounds import (
    BoundReport,
    DimPair,
    audenaert_bound,
    branch_tag,
    classic_bounds,
    dssa_g,
    dssa_region,
    dssa_restriction_r,
    evaluate_all,
    gamma_curve,
    inverted_lower_f,
    isa_h,
    purity_f,
    renyi_f,
    sharp_bound,
    sharp_f,
    sisa_bound,
)
from .errors import (
    LinentropyError,
    NumericalError,
    ParameterError,
    StructureError,
    ValidationError,
)
from .extremal import boundary_state_for, dssa_family, isa_family, mix_with_maximally_mixed
from .states import (
    DensityMatrix,
    Tolerances,
    bell_state,
    linear_entropy,
    load_state,
    marginal_entropies,
    maximally_mixed,
    partial_trace,
    purify,
    purity,
    renyi2_entropy,
    save_state,
    schmidt_decompose,
    tensor_product,
    validate_density,
)
from .verify import SamplerConfig, identity_suite, run_campaign, sample_hs_state

__version__ = "0.1.0"
