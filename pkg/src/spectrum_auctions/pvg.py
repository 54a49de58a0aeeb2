"""Polynomial-time greedy auction with preemption and critical-value pricing.

Jobs are processed by descending per-second bid value.  A job is accepted
outright into the first channel with enough residual window capacity
(case 1).  Otherwise, per channel, the cheapest currently-allocated jobs
overlapping its window are tentatively removed one by one until it would
fit; if the newcomer's bid exceeds ``beta`` times the total value of that
minimal eviction prefix, the prefix is preempted and the newcomer commits
(case 2), after which earlier-ranked unplaced jobs are re-admitted into
the freed channel wherever they now fit without further eviction
(case 3).  Jobs failing everywhere are rejected.

The allocation is bid monotone, so each winner is charged the smallest
grid bid at which it still wins, found by binary search over the bid grid
between its reserve floor and its reported value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from .market import (
    AuctionConfig,
    AuctionOutcome,
    Job,
    LocalMarket,
    SegmentedTimeline,
    build_timelines,
    commit_allocation,
    fits_in_residual,
    release_allocation,
)


@dataclass
class PvgStats:
    """Work counters for complexity checks; purely observational."""

    fit_checks: int = 0
    commits: int = 0
    preemptions: int = 0
    readmissions: int = 0
    allocate_runs: int = 0


@dataclass
class PvgState:
    """Live view of the allocator handed to ``on_step`` observers.

    ``order`` is the processing order (per-second value descending, ties
    by ascending id) over reserve-eligible jobs.  ``committed`` maps each
    channel to its per-slot used seconds.  Observers must not mutate.
    """

    order: list[Job]
    timelines: dict[int, SegmentedTimeline]
    assignment: dict[int, int] = field(default_factory=dict)
    allocations: dict[int, list[int]] = field(default_factory=dict)
    committed: dict[int, list[int]] = field(default_factory=dict)


def eligible_order(jobs: list[Job], eta_s: float) -> list[Job]:
    """Reserve-eligible jobs in processing order."""
    keep = [j for j in jobs if j.bid_value >= eta_s * j.duration]
    return sorted(keep, key=lambda j: (-j.unit_value, j.id))


def _eviction_prefix(job: Job, cid: int, state: PvgState,
                     stats: PvgStats | None) -> list[Job] | None:
    """Minimal cheapest-first prefix of overlapping jobs freeing room for ``job``.

    Candidates are the jobs allocated in this channel with any seconds
    inside ``job``'s window, ordered by per-second value ascending (ties:
    descending id).  Removals are simulated cumulatively; the first point
    at which the job fits defines the prefix.  None when even removing
    every candidate does not help.
    """
    timeline = state.timelines[cid]
    first, last = timeline.window_range(job)
    by_id = {j.id: j for j in state.order}
    candidates = []
    for jid, assigned_cid in state.assignment.items():
        if assigned_cid != cid:
            continue
        amounts = state.allocations[jid]
        if any(amounts[l] for l in range(first, last + 1)):
            candidates.append(by_id[jid])
    candidates.sort(key=lambda j: (j.unit_value, -j.id))

    sim = list(state.committed[cid])
    prefix: list[Job] = []
    for cand in candidates:
        for l, a in enumerate(state.allocations[cand.id]):
            sim[l] -= a
        prefix.append(cand)
        if stats is not None:
            stats.fit_checks += 1
        if fits_in_residual(job, timeline, sim):
            return prefix
    return None


def pvg_allocate(market: LocalMarket, config: AuctionConfig,
                 stats: PvgStats | None = None,
                 on_step=None) -> AuctionOutcome:
    """Run the greedy allocation; payments are left unset.

    Deterministic in (market, config): all orderings carry explicit id
    tie-breaks.  ``on_step(state, job)`` fires after each processed job.
    """
    if stats is not None:
        stats.allocate_runs += 1
    timelines = build_timelines(market)
    order = eligible_order(list(market.jobs), config.eta_s)
    state = PvgState(
        order=order,
        timelines=timelines,
        committed={c.id: timelines[c.id].empty_usage() for c in market.channels},
    )
    channel_ids = [c.id for c in market.channels]

    def fits(job: Job, cid: int) -> bool:
        if stats is not None:
            stats.fit_checks += 1
        return fits_in_residual(job, timelines[cid], state.committed[cid])

    def accept(job: Job, cid: int) -> None:
        state.allocations[job.id] = commit_allocation(job, timelines[cid], state.committed[cid])
        state.assignment[job.id] = cid
        if stats is not None:
            stats.commits += 1

    for idx, job in enumerate(order):
        placed = False
        for cid in channel_ids:  # case 1: conflict-free acceptance
            if fits(job, cid):
                accept(job, cid)
                placed = True
                break
        if not placed:
            for cid in channel_ids:  # case 2: try to preempt cheaper overlap
                prefix = _eviction_prefix(job, cid, state, stats)
                if prefix is None:
                    continue
                if job.bid_value > config.beta * sum(p.bid_value for p in prefix):
                    for victim in prefix:
                        release_allocation(timelines[cid], state.committed[cid],
                                           state.allocations.pop(victim.id))
                        del state.assignment[victim.id]
                        if stats is not None:
                            stats.preemptions += 1
                    accept(job, cid)
                    # case 3: readmission into this channel only
                    for earlier in order[:idx]:
                        if earlier.id in state.assignment:
                            continue
                        if fits(earlier, cid):
                            accept(earlier, cid)
                            if stats is not None:
                                stats.readmissions += 1
                    placed = True
                    break
        if on_step is not None:
            on_step(state, job)

    return AuctionOutcome(
        assignment=dict(state.assignment),
        allocations={k: list(v) for k, v in state.allocations.items()},
        payments={},
        timelines=timelines,
    )


def bid_grid_size(floor: float, top: float, xi: float) -> int:
    """Smallest n with floor + n*xi >= top; grid points are k*xi offsets."""
    if top <= floor:
        return 0
    n = int(math.ceil((top - floor) / xi))
    while n > 0 and floor + (n - 1) * xi >= top:
        n -= 1
    while floor + n * xi < top:
        n += 1
    return n


def bid_grid_point(floor: float, top: float, xi: float, k: int, n: int) -> float:
    """k-th candidate bid: grid offsets below ``top``, then ``top`` itself."""
    return floor + k * xi if k < n else top


def _wins_at_bid(market: LocalMarket, config: AuctionConfig, job: Job, bid: float,
                 stats: PvgStats | None = None) -> bool:
    deviated = LocalMarket(
        region=market.region,
        band_type=market.band_type,
        jobs=tuple(replace(j, bid_value=bid) if j.id == job.id else j for j in market.jobs),
        channels=market.channels,
    )
    outcome = pvg_allocate(deviated, config, stats=stats)
    return job.id in outcome.assignment


def critical_value(market: LocalMarket, config: AuctionConfig, job: Job,
                   top: float | None = None, stats: PvgStats | None = None) -> float:
    """Least grid bid at which ``job`` still wins, by binary search.

    The candidate bids are ``eta_s * duration + k * xi`` for k = 0, 1, ...
    strictly below ``top`` (the reported value by default), plus ``top``.
    Bid monotonicity makes the win predicate a threshold over them.
    """
    floor = config.eta_s * job.duration
    if top is None:
        top = job.bid_value
    n = bid_grid_size(floor, top, config.xi)
    lo, hi = 0, n  # candidate n == top wins by assumption
    while lo < hi:
        mid = (lo + hi) // 2
        if _wins_at_bid(market, config, job, bid_grid_point(floor, top, config.xi, mid, n),
                        stats=stats):
            hi = mid
        else:
            lo = mid + 1
    return bid_grid_point(floor, top, config.xi, lo, n)


def pvg_payments(market: LocalMarket, config: AuctionConfig,
                 stats: PvgStats | None = None) -> dict[int, float]:
    """Critical-value payments for the truthful-run winners; losers pay 0."""
    base = pvg_allocate(market, config, stats=stats)
    payments = {j.id: 0.0 for j in market.jobs}
    for jid in sorted(base.assignment):
        payments[jid] = critical_value(market, config, market.job_by_id(jid), stats=stats)
    return payments


def run_pvg(market: LocalMarket, config: AuctionConfig,
            stats: PvgStats | None = None) -> AuctionOutcome:
    """Allocate, price, and package the greedy mechanism's outcome."""
    outcome = pvg_allocate(market, config, stats=stats)
    payments = {j.id: 0.0 for j in market.jobs}
    for jid in sorted(outcome.assignment):
        payments[jid] = critical_value(market, config, market.job_by_id(jid), stats=stats)
    outcome.payments = payments
    return outcome


def rho_bound(beta: float) -> float:
    """Worst-case efficiency-loss factor 2(beta+1)/(1 - 1/beta).

    Minimized at beta = 1 + sqrt(2), where it equals 6 + 4*sqrt(2).
    """
    if beta <= 1.0:
        raise ValueError("rho_bound requires beta > 1; the bound diverges at 1")
    return 2.0 * (beta + 1.0) / (1.0 - 1.0 / beta)
