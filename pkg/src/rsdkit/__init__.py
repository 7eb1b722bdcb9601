"""Exact tools for random (serial) dictatorship and SD efficiency/strategyproofness."""

from .analysis import (
    EfficiencyVerdict,
    ManipulationWitness,
    SymmetryVerdict,
    brute_force_dominator,
    check_anonymity_neutrality,
    check_ex_post,
    check_sd_efficiency,
    check_strong_sd_sp,
    exhaust_strategyproofness,
    find_sd_manipulation,
)
from .exactlp import LinearProgram, LpOutcome, LpStatus, solve
from .lotteries import Lottery, SdVerdict, parse_lottery, sd_compare, support, uniform, upper_contour_mass
from .preferences import (
    Permutation,
    PreferenceRelation,
    Profile,
    enumerate_weak_orders,
    is_strict,
    max_set,
    pareto_dominates,
    parse_profile,
    parse_relation,
    permute_agents,
    permute_alternatives,
    unique_top,
)
from .schemes import RD, RSD, AgentWithoutUniqueTop, SocialDecisionScheme, get_scheme, rd, rsd, rsd_restricted
from .theorem import (
    Property,
    ViolationReport,
    check_rd_extension,
    lift_profile,
    load_fixture,
    proof_profiles,
    replay,
    step_assertions,
)

__version__ = "0.1.0"
