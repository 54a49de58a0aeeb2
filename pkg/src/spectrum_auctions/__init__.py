"""Truthful auctions for time-flexible, heterogeneous spectrum allocation.

Two mechanisms over the same market model: an exact branch-and-bound
welfare maximizer with pivot payments, and a polynomial-time greedy
allocator with preemption and critical-value payments.  Supporting
modules provide brute-force oracles, outcome metrics, and a simulation
harness with occupancy grids and synthetic request workloads.
"""

from .market import (
    AuctionConfig,
    AuctionOutcome,
    Channel,
    InfeasibleCommitError,
    Job,
    LocalMarket,
    SegmentedTimeline,
    Slot,
    SpectrumAuctionError,
    build_timelines,
    commit_allocation,
    fits_in_residual,
    partition_markets,
    segment_timeline,
    set_feasible,
)
from .metrics import MetricsReport, UndefinedRatioError, revenue_ratio, social_efficiency, utilization_ratio
from .oracle import OracleCapError, OracleResult, contiguous_optimal, enumerate_optimal, scan_critical_value
from .pvg import PvgState, PvgStats, critical_value, pvg_allocate, pvg_payments, rho_bound, run_pvg
from .vcg import SolverSizeError, VcgSolution, filter_reserve, run_vcg, solve_optimal, vcg_payments
from .workload import (
    OccupancyFormatError,
    OccupancyGrid,
    WorkloadSpec,
    generate_requests,
    load_occupancy,
    load_requests,
    save_occupancy,
    save_requests,
    synthesize_occupancy,
)

__all__ = [
    "AuctionConfig", "AuctionOutcome", "Channel", "Job", "LocalMarket",
    "SegmentedTimeline", "Slot", "SpectrumAuctionError", "InfeasibleCommitError",
    "build_timelines", "commit_allocation", "fits_in_residual",
    "partition_markets", "segment_timeline", "set_feasible",
    "MetricsReport", "UndefinedRatioError", "revenue_ratio",
    "social_efficiency", "utilization_ratio",
    "OracleCapError", "OracleResult", "contiguous_optimal",
    "enumerate_optimal", "scan_critical_value",
    "PvgState", "PvgStats", "critical_value", "pvg_allocate", "pvg_payments",
    "rho_bound", "run_pvg",
    "SolverSizeError", "VcgSolution", "filter_reserve", "run_vcg",
    "solve_optimal", "vcg_payments",
    "OccupancyFormatError", "OccupancyGrid", "WorkloadSpec",
    "generate_requests", "load_occupancy", "load_requests",
    "save_occupancy", "save_requests", "synthesize_occupancy",
]
