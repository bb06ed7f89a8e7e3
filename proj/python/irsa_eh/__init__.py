"""Energy-harvesting irregular-repetition random access.

Frame simulator, battery-chain analysis, closed-form age/loss formulas, and
a degree-table optimizer, all backed by the C++ core. The compiled module
carries the full surface; this package re-exports it and adds small
conveniences.
"""

import json as _json

from ._core import (  # noqa: F401
    UNLIMITED_CAPACITY,
    AoiInputs,
    BatteryChain,
    ConfigError,
    DecodeResult,
    DegreeDistribution,
    DeviceRecord,
    FrameTrace,
    NelderMeadOptions,
    Objective,
    OptimizationProblem,
    OptimizationResult,
    Scheme,
    SimulationReport,
    SystemConfig,
    activation_prob,
    aoi_violation_prob,
    average_aoi,
    average_degree_distribution,
    avp_standard_error,
    battery_chain,
    channel_load,
    empirical_aoi_mean,
    empirical_avp,
    empirical_battery_distribution,
    empirical_throughput,
    estimate_plr,
    first_energy_pmf,
    last_replica_cdf,
    objective_from_name,
    objective_name,
    optimize_degree_distribution,
    plr_lower_bound,
    plr_standard_error,
    run_simulation,
    scheme_from_name,
    scheme_name,
    sic_conventional,
    sic_genie,
    sic_identify,
    steady_state,
    throughput,
    validate_avoid_mask,
    validate_config,
    validate_distribution,
)

__version__ = "1.0.0"


def report_to_dict(report):
    """Every counter and derived estimate of a SimulationReport, as a dict."""
    return _json.loads(report.to_json())
