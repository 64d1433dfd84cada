"""deltacomb: the convolution algebra of point-mass distributions.

Finite sums of Dirac masses and their derivatives form a commutative ring
under convolution.  This package implements that ring with exact-rational
and float scalars, the Laurent-polynomial picture of grid combs, a
constructive two-stage approximation of arbitrary pairs by unimodular
(Bezout-solvable) pairs, mollified sampling with convergence diagnostics,
and transform-side growth certificates — all behind a small HTTP service
and a CLI.
"""

from .errors import (
    InputError,
    ModeMismatchError,
    NotCoprimeError,
    NumericalError,
    OrderCapError,
    ParseError,
    PerturbationBudgetError,
    RootConvergenceError,
    SupportError,
)
from .scalars import MODE_EXACT, MODE_FLOAT, ExactComplex
from .distributions import (
    DiracComb,
    Distribution,
    NotInvertible,
    PointTerm,
    add,
    canonicalize,
    comb_from_distribution,
    comb_make,
    comb_to_distribution,
    convolve,
    dirac,
    distributions_close,
    identity_distribution,
    invert,
    max_order,
    pair,
    scale,
    support_hull,
    weak_distance,
    zero_distribution,
)
from .laurent import (
    LaurentPoly,
    comb_to_centered_poly,
    lp_add,
    lp_eval,
    lp_from_coeffs,
    lp_make,
    lp_mul,
    lp_one,
    lp_shift,
    lp_sub,
    lp_zero,
    phi,
    phi_inverse,
)
from .bezout import (
    RESIDUAL_GATE,
    PerturbationBudget,
    UnimodularQuadruple,
    bezout_cofactors,
    bezout_residual,
    perturb_to_coprime,
    unimodular_approx_pair,
)
from .bump import BumpSpec, bump_eval, bump_spec
from .testfuncs import TestFunction, default_battery
from .mollify import (
    MollifiedFunction,
    comb_sequence,
    default_schedule,
    min_mollifier_index,
    mollify,
    riemann_comb,
)
from .transform import (
    GridSpec,
    PWCertificate,
    coprime_certificate_grid,
    fl_eval,
    min_modulus_grid,
    pw_constants,
    refine_min_modulus,
    validate_certificate,
)
from .pipeline import (
    PipelineConfig,
    RunResult,
    run_approx,
    run_invert,
    run_sample,
    run_transform,
    run_verify,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # errors
    "InputError",
    "ModeMismatchError",
    "NotCoprimeError",
    "NumericalError",
    "OrderCapError",
    "ParseError",
    "PerturbationBudgetError",
    "RootConvergenceError",
    "SupportError",
    # scalars
    "MODE_EXACT",
    "MODE_FLOAT",
    "ExactComplex",
    # distributions
    "DiracComb",
    "Distribution",
    "NotInvertible",
    "PointTerm",
    "add",
    "canonicalize",
    "comb_from_distribution",
    "comb_make",
    "comb_to_distribution",
    "convolve",
    "dirac",
    "distributions_close",
    "identity_distribution",
    "invert",
    "max_order",
    "pair",
    "scale",
    "support_hull",
    "weak_distance",
    "zero_distribution",
    # laurent
    "LaurentPoly",
    "comb_to_centered_poly",
    "lp_add",
    "lp_eval",
    "lp_from_coeffs",
    "lp_make",
    "lp_mul",
    "lp_one",
    "lp_shift",
    "lp_sub",
    "lp_zero",
    "phi",
    "phi_inverse",
    # bezout
    "RESIDUAL_GATE",
    "PerturbationBudget",
    "UnimodularQuadruple",
    "bezout_cofactors",
    "bezout_residual",
    "perturb_to_coprime",
    "unimodular_approx_pair",
    # bump / test functions / mollify
    "BumpSpec",
    "bump_eval",
    "bump_spec",
    "TestFunction",
    "default_battery",
    "MollifiedFunction",
    "comb_sequence",
    "default_schedule",
    "min_mollifier_index",
    "mollify",
    "riemann_comb",
    # transform
    "GridSpec",
    "PWCertificate",
    "coprime_certificate_grid",
    "fl_eval",
    "min_modulus_grid",
    "pw_constants",
    "refine_min_modulus",
    "validate_certificate",
    # pipeline
    "PipelineConfig",
    "RunResult",
    "run_approx",
    "run_invert",
    "run_sample",
    "run_transform",
    "run_verify",
]
