"""Rank-maximal matchings, single-applicant manipulation strategies and brute-force oracles."""
from . import engine, kernels, oracle
from .engine import (
    Comparison,
    Label,
    Matching,
    RmmResult,
    Signature,
    classify_edges,
    critical_rank,
    critical_ranks_all,
    edge_in_every_rmm,
    edge_in_some_rmm,
    eou_decompose,
    f_posts,
    max_matching_augment,
    rank_maximal,
    signature_cmp,
    unreachable_phase,
)
from .instance import (
    Instance,
    InstanceError,
    ParseError,
    StrictFullList,
    generate_random,
    parse_instance,
    remove_applicant,
    replace_preferences,
    serialize_instance,
)
from .oracle import enumerate_rmm, exhaustive_min_max, oracle_critical_rank, oracle_edge_class
from .strategies import (
    Kind,
    Mode,
    NoGuarantee,
    StrategyError,
    StrategyOutcome,
    best_nonfirst,
    construct_Hp,
    improve_best,
    min_max,
    run_strategy,
    verify_guarantee,
)

BACKEND = kernels.BACKEND

__version__ = "0.1.0"


def clear_caches() -> None:
    """Drop memoised phase runs and enumerations (useful before timing)."""
    engine._cached_phases.cache_clear()
    oracle._enumerate.cache_clear()
