"""posreal: nonnegative state-space realizations of rational transfer functions.

The pipeline expands a strictly proper transfer function into partial
fractions, normalizes the dominant pole to 1/(z - 1), shifts impulse values
off the front until the remaining coefficients fit inside the unit dominant
residue, assembles elementary nonnegative blocks, and lifts the collected
prefix back on.  Every output is re-verified against the input by an
independent Markov-parameter comparison.
"""

from .blocks import (
    Block,
    BudgetPlan,
    Realization,
    assemble,
    budget,
    complex_pair_block,
    dominant_remainder_block,
    pair_share_floor,
    per_pole_total,
    positive_pole_block,
    prefix_lift,
    real_pole_block,
)
from .bounds import (
    BoundsReport,
    RootBoundInput,
    bounds_report,
    cone_order_bound,
    exp_poly_root_bound,
    positivity_horizon,
    quadratic_order_bound,
    zero_pattern,
)
from .check import ConeCertificate, VerificationReport, cone_check, markov_check
from .errors import *  # noqa: F401,F403
from .geometry import (
    PairBucket,
    PoleClassification,
    classify,
    in_polygon,
    minimal_polygon_index,
)
from .realizer import (
    AlgorithmTrace,
    BlockSummary,
    IterationCapExceeded,
    NoPositiveRealization,
    Outcome,
    Realized,
    Unsupported,
    realize,
    realize_with_base,
)
from .tf import (
    ImpulsePrefix,
    PartialFraction,
    PoleTerm,
    Polynomial,
    TransferFunction,
    build_partial_fraction,
    companion_roots,
    denormalize,
    expand,
    from_coefficients,
    impulse_response,
    iteration_estimate,
    leading_impulse,
    normalize,
    recombine,
    shift_once,
)

__version__ = "0.1.0"
