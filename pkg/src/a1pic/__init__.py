"""Stable module computations over the R-motivic subalgebra A(1)^R."""

from .coeff import AlgebraLevel, BiDegree, GradedMatrix, Monomial
from .algebra import load_algebra, validate_algebra
from .margolis import F2Module, MargolisOperator, brute_force_free, check_d8_presentation, margolis_homology
from .modcat import (
    FgModule,
    ModuleMap,
    base_change,
    cokernel,
    direct_sum,
    dual,
    kernel,
    parse_module,
    serialize_module,
    shift,
    standard,
    tensor,
    validate_module,
)
from .stable import (
    PicardCoordinate,
    eval_map,
    is_free,
    is_invertible,
    loop,
    margolis_signature,
    picard_classify,
    projective_cover,
    stably_equivalent,
)

__version__ = "0.1.0"
