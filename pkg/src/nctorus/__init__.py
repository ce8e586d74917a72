"""Quantum tori at roots of unity: exact cocycle calculus, q-Weyl algebras,
finite-lattice duality, and a discrete Fourier-Mukai transform."""

__version__ = "0.1.0"

from .cocycle import (
    BilinearCocycle,
    BoundedCochain,
    CochainTable,
    ExponentWindow,
    Phase,
    WindowError,
    bounding_cochain,
    check_cocycle,
    coboundary,
    eval_cocycle,
    normal_order_representative,
)
from .equivariant import (
    EquivariantObject,
    GroupCocycleTable,
    GSet,
    LinearizationReport,
    TwistedAlgebra,
    check_linearization,
    forget,
    free,
    from_module,
    hom_dim,
    hom_space,
    retwist,
    to_module,
    twisted_algebra,
)
from .exprs import (
    ParseError,
    parse_laurent,
    parse_word,
    render_laurent,
    render_word_poly,
    word_side,
    word_to_poly,
)
from .finitefm import (
    BRepresentation,
    DeformedKernel,
    ModuleOnXLambda,
    TorusModel,
    character_projector,
    character_twist,
    check_fm_ab_equivariance,
    dft_matrix,
    dual_side_product,
    fm_ab,
    fm_ab_equivariance_iso,
    fm_ab_inverse,
    fm_ab_phase_table,
    fm_lambda,
    fm_lambda_inverse,
    fourier_component,
    free_sheaf,
    module_hom_dim,
    module_hom_space,
    random_sheaf,
    star_on_points,
    translate_graded,
    verify_factorization,
)
from .lattice import (
    DualPairData,
    FiniteAbelianGroup,
    GroupBilinearTable,
    QuotientPresentation,
    SublatticeBasis,
    SubgroupPresentation,
    compute_H_hat,
    compute_K_hat,
    descend_cocycle,
    lambda_sharp,
    smith_normal_form,
    subgroup_presentation,
)
from .laurent import (
    LaurentPoly,
    coboundary_transform,
    majorant_norm,
    max_coeff_diff,
    star_mul,
    translate,
)
from .qweyl import (
    Coeff,
    PeriodMatrix,
    PModuleElement,
    QPolynomial,
    gamma_action,
    max_value_diff,
    mul_crossed,
    mul_W,
    pmodule_act_gamma,
    pmodule_act_gammahat,
    pmodule_max_diff,
)
from .verify import PropertyResult, run_battery

__all__ = [
    "BilinearCocycle",
    "BoundedCochain",
    "BRepresentation",
    "Coeff",
    "CochainTable",
    "DeformedKernel",
    "DualPairData",
    "EquivariantObject",
    "ExponentWindow",
    "FiniteAbelianGroup",
    "GroupBilinearTable",
    "GroupCocycleTable",
    "GSet",
    "LaurentPoly",
    "LinearizationReport",
    "ModuleOnXLambda",
    "ParseError",
    "PeriodMatrix",
    "Phase",
    "PModuleElement",
    "PropertyResult",
    "QPolynomial",
    "QuotientPresentation",
    "SublatticeBasis",
    "SubgroupPresentation",
    "TorusModel",
    "TwistedAlgebra",
    "WindowError",
    "bounding_cochain",
    "character_projector",
    "character_twist",
    "check_cocycle",
    "check_fm_ab_equivariance",
    "check_linearization",
    "coboundary",
    "coboundary_transform",
    "compute_H_hat",
    "compute_K_hat",
    "descend_cocycle",
    "dft_matrix",
    "dual_side_product",
    "eval_cocycle",
    "fm_ab",
    "fm_ab_equivariance_iso",
    "fm_ab_inverse",
    "fm_ab_phase_table",
    "fm_lambda",
    "fm_lambda_inverse",
    "forget",
    "fourier_component",
    "free",
    "free_sheaf",
    "from_module",
    "gamma_action",
    "hom_dim",
    "hom_space",
    "lambda_sharp",
    "majorant_norm",
    "max_coeff_diff",
    "max_value_diff",
    "module_hom_dim",
    "module_hom_space",
    "mul_crossed",
    "mul_W",
    "normal_order_representative",
    "parse_laurent",
    "parse_word",
    "pmodule_act_gamma",
    "pmodule_act_gammahat",
    "pmodule_max_diff",
    "random_sheaf",
    "render_laurent",
    "render_word_poly",
    "retwist",
    "run_battery",
    "smith_normal_form",
    "star_mul",
    "star_on_points",
    "subgroup_presentation",
    "to_module",
    "translate",
    "translate_graded",
    "twisted_algebra",
    "verify_factorization",
    "word_side",
    "word_to_poly",
]
