"""One-time polynomial MAC over a prime field, with exact forgery-advantage
enumeration, key-skew distribution machinery, and security-bound checks."""

from .attack import (
    ADAPTIVE,
    OBLIVIOUS,
    AdvantageEstimate,
    AdversaryStrategy,
    EnumerationBudgetError,
    GameTranscript,
    KeyConstraintSet,
    consistent_keys,
    exact_advantage_adaptive,
    exact_advantage_oblivious,
    forgery_win_prob,
    monte_carlo_advantage,
    play_game,
    wilson_interval,
)
from .bounds import (
    AdvantageBound,
    bound_general,
    bound_mu,
    bound_simplified,
    bound_uniform,
)
from .distributions import (
    DistanceValue,
    Distribution,
    SupportPartition,
    UnachievableDeltaError,
    as_distance,
    extremal_distribution,
    iter_grid_distributions,
    max_top_mass,
    max_top_mass_bruteforce,
    max_top_mass_table,
    point_mass,
    pool_deficit,
    pool_surplus,
    sample,
    sort_by_mass,
    stat_distance,
    support_partition,
    to_extremal_form,
    uniform,
)
from .field import FieldElement, PrimeField, is_prime
from .mac import (
    KeyPair,
    MacParams,
    Message,
    Tag,
    VerifyResult,
    iter_messages,
    polynomial_hash,
    sign,
    verify,
)
from .report import (
    AdvantageReport,
    ExperimentConfig,
    parse_distribution_spec,
    run_experiment,
)

__version__ = "0.1.0"
