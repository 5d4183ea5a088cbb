"""Box correlation statistics, discrepancy and gap structure of sequences mod 1."""

__version__ = "0.1.0"

from .correlations import (
    CorrelationQuery,
    CorrelationResult,
    TestFunction,
    chain_count_naive,
    count_box_tuples,
    count_box_tuples_naive,
    f_count,
    functional_stat,
    r_stat,
    sweep,
)
from .discrepancy import DiscrepancyResult, star_discrepancy
from .errors import BoxCorrError, DomainError, ParseError, SizeError
from .gaps import GapProfile, GapTrajectory, classify_gap_trajectories, distinct_gap_count, gap_profile
from .integral import (
    GHQuery,
    corner_alternating_sum,
    g_beta,
    gh_integral_closed,
    gh_integral_quadrature,
    gh_integral_terms,
    h_beta,
    hinge_sum,
    inclusion_exclusion_expand,
    phi,
)
from .sequences import PointSet, SequenceSpec, generate, load
from .torus import UnitPoint, arc_overlap, frac, signed_nearest, torus_dist
from .verify import ExperimentReport, check_box_convergence, check_gh_limit, check_non_convergence
