"""Rate modeling and optimization for multiplexed quantum-memory repeater chains.

Analytic model of entanglement-distribution rates over repeater chains built
from multimode quantum memories, with a round-level Monte Carlo engine as an
independent cross-check, a node-count optimizer for the per-node ebit rate,
and a deterministic CSV/JSON sweep CLI.
"""

from .chain import (
    ARCHITECTURES,
    ChainPlan,
    RangeLimits,
    chain_time,
    expected_max_rounds,
    f_waiting,
    mean_entanglement,
    p_enc_chain,
    p_enc_stage,
    p_eng_chain,
    range_limits,
    spdc_time,
)
from .link import (
    LinkBudget,
    g2_from_noise,
    link_budget,
    p_eng,
    p_single,
    transmission,
    visibility_at,
    visibility_from_g2,
)
from .modes import (
    ModeSpace,
    gamma_from_temperature,
    mode_count,
    mode_measure,
    round_to_one_digit,
    tau_of_k,
    weighted_average,
)
from .montecarlo import (
    ChainMcResult,
    McConfig,
    McEstimate,
    SimulationBudgetError,
    StorageSummary,
    mc_chain_time,
    mc_expected_max_rounds,
    mc_semihier_storage,
)
from .params import (
    ConfigError,
    ModeSpaceParams,
    NoiseParams,
    ParameterBundle,
    PhysicalConstants,
    PlatformParams,
    SpdcParams,
    builtin_platforms,
    default_bundle,
    dump_config,
    load_config,
    parse_config,
)
from .sweep import SweepRecord, optimize_nodes, q_of, record_from_plan, sweep
from .werner import average_ef, concurrence, ef_of_mode, entanglement_of_formation

__version__ = "0.1.0"

__all__ = [
    "ARCHITECTURES",
    "ChainMcResult",
    "ChainPlan",
    "ConfigError",
    "LinkBudget",
    "McConfig",
    "McEstimate",
    "ModeSpace",
    "ModeSpaceParams",
    "NoiseParams",
    "ParameterBundle",
    "PhysicalConstants",
    "PlatformParams",
    "RangeLimits",
    "SimulationBudgetError",
    "SpdcParams",
    "StorageSummary",
    "SweepRecord",
    "average_ef",
    "builtin_platforms",
    "chain_time",
    "concurrence",
    "default_bundle",
    "dump_config",
    "ef_of_mode",
    "entanglement_of_formation",
    "expected_max_rounds",
    "f_waiting",
    "g2_from_noise",
    "gamma_from_temperature",
    "link_budget",
    "load_config",
    "mc_chain_time",
    "mc_expected_max_rounds",
    "mc_semihier_storage",
    "mean_entanglement",
    "mode_count",
    "mode_measure",
    "optimize_nodes",
    "p_enc_chain",
    "p_enc_stage",
    "p_eng",
    "p_eng_chain",
    "p_single",
    "parse_config",
    "q_of",
    "range_limits",
    "record_from_plan",
    "round_to_one_digit",
    "spdc_time",
    "sweep",
    "tau_of_k",
    "transmission",
    "visibility_at",
    "visibility_from_g2",
    "weighted_average",
]
