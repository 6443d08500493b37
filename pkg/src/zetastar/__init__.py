"""Multiple zeta-star values of infinite length and the map Z* on (0, 1]."""

from .analysis import (
    DerivativeReport,
    Side,
    ZPoint,
    derivative_nondyadic,
    difference_quotient,
    divergence_ratio,
    graph_samples,
    invert_zstar,
    left_derivative,
    right_derivative,
    zstar,
    zstar_via_index,
)
from .closed_form import (
    ClosedForm,
    complex_gamma,
    const_index_closed,
    hoffman_like_closed,
    roots_of_unity,
    staircase_closed,
    tail2_reduction,
    two_n_one_closed,
)
from .errors import (
    DomainError,
    HypothesisUnmet,
    Inadmissible,
    NonCanonicalInput,
    NotConverged,
    Pole,
    ZeroValue,
    ZetaStarError,
)
from .index import (
    DigitStream,
    Dyadic,
    Index,
    Order,
    canonicalize_digits,
    index_from_digits,
    lex_compare,
    parse_index,
    parse_point,
    point_from_index,
)
from .series import (
    ChainSpec,
    Evaluation,
    TruncationParams,
    bound_chain_sum,
    chain_sum,
    eval_finite,
    eval_periodic,
    eval_tail_l,
    evaluate_index,
    riemann_zeta,
)

__version__ = "0.1.0"
