"""Online ridge and forward regression, their regret bounds, and linear bandits built on them."""
from .bandits import OFUL, AGENTS, DLinUCB, OFULForward, make_agent, pseudo_regret_step
from .bounds import (
    BoundParams,
    adversarial_bound,
    beta_forward,
    beta_ridge,
    dlinucb_beta,
    dlinucb_regret_bound,
    explicit_bound_forward,
    explicit_bound_ridge,
    feature_budget,
    oful_regret_bound,
    regret_bound_forward,
    regret_bound_ridge,
    tail_bound,
)
from .design import DesignState, SingularDesignError, new_design, rank_one_update
from .environments import (
    BanditEnvSpec,
    BanditStream,
    RegressionEnvSpec,
    RegressionStream,
    derive_replicate_seed,
)
from .harness import ExperimentConfig, aggregate, bounds_table, emit_csv, load_config, load_preset, run_experiment
from .regressors import OnlineForward, OnlineRidge, UnregularizedForward, batch_ols, make_regressor

__version__ = "0.1.0"
