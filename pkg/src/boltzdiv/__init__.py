"""Boltzmann fair division.

Cake units are handed to players with probability proportional to
``exp(beta * contribution)`` (weighted by flavor preference for a flavored
cake); ``beta`` is chosen to maximize the players' total saturating utility.
"""

from .baselines import (
    ComparisonReport,
    comparison_report,
    deficiency,
    egalitarian_allocation,
    proportional_allocation,
)
from .division import (
    allocate,
    flavor_probabilities,
    heterogeneous_allocation,
    homogeneous_allocation,
    homogeneous_probabilities,
    sample_allocation,
)
from .errors import DivisionError, ValidationError, Violation
from .io import dump_problem, load_problem, parse_problem, problem_to_dict
from .model import (
    Allocation,
    DivisionProblem,
    FlavorLayout,
    Player,
    PreferenceMatrix,
    make_problem,
    validate_problem,
)
from .optimize import (
    Optimum,
    SearchConfig,
    SmallBetaReport,
    UtilityCurve,
    default_beta_max,
    optimize_beta,
    small_beta_diagnostic,
    utility_curve,
    verify_extremum,
)
from .utility import UtilityParams, marginal_utility, total_utility, utility

__version__ = "0.1.0"
