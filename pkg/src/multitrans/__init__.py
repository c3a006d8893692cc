"""Multi-dimensional multi-transversals, mixed orthogonal arrays and M-part Sperner multi-families."""

from .core import (
    ConstructionError,
    ConversionError,
    Dimensions,
    MultiTransversal,
    MultitransError,
    ParamSet,
    PreconditionError,
    ProfileMatrix,
    RangeError,
    ScaleError,
    enumerate_pi,
    weight,
)
from .transversal import (
    Moa,
    check_transversal,
    from_moa,
    fullness,
    konstant_holds,
    moa_strength,
    to_moa,
)
from .construct import (
    FracWindow,
    construct_full,
    engel_count,
    fractional_construction,
    gencond_check,
    interval_union_construction,
    linear_combination,
    oarray_recipe,
    tensor_product,
    window_count,
)
from .sperner import (
    GroundSet,
    SetFamily,
    blym_report,
    check_sperner,
    enumerate_sperner_families,
    is_homogeneous,
    profile_matrix,
    realize_homogeneous,
)
from .hull import (
    GammaConstraint,
    GammaRow,
    ProductPermutation,
    convex_decomposition,
    enumerate_transversals,
    extreme_points,
    initial_family,
    is_lem,
    s_matrix,
    simplicity_gamma,
    t_matrix,
)
from .optimize import (
    genhom_check,
    max_size_k_eq_M,
    max_size_k_eq_M_minus_1,
    max_weight_transversal,
    rearrangement_max,
)

__version__ = "0.1.0"
