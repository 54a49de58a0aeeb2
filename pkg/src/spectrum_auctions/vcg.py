"""Exact winner determination and pivot payments for one local market.

Winner determination maximizes the sum of accepted bids subject to the
reserve, single-channel-per-job, and slot-capacity constraints.  The
search is a hand-rolled depth-first branch and bound: each job is either
rejected or assigned to one channel, every partial assignment keeps each
channel's job set jointly feasible, and two upper bounds prune the tree
(plain remaining-value sum, and a fractional relaxation that fills the
remaining free seconds with the best per-second rates first).

Payments follow the pivot rule: a winner pays the welfare the others
lose by its presence, floored at the reserve for its requested time.
"""

from __future__ import annotations

import bisect
import os
from dataclasses import dataclass

from .market import (
    AuctionConfig,
    AuctionOutcome,
    Job,
    LocalMarket,
    SegmentedTimeline,
    SpectrumAuctionError,
    build_timelines,
    fits_in_residual,
    set_feasible,
    window_flow_allocation,
)

DEFAULT_MAX_JOBS = 18
MAX_JOBS_ENV = "SPECTRUM_VCG_MAX_JOBS"


class SolverSizeError(SpectrumAuctionError):
    """The instance exceeds the configured exact-solver job cap."""


@dataclass(frozen=True)
class VcgSolution:
    """An exact optimum: total welfare plus the realizing assignment."""

    welfare: float
    assignment: dict[int, int]
    allocations: dict[int, list[int]]
    timelines: dict[int, SegmentedTimeline]


def filter_reserve(jobs: list[Job], eta_s: float) -> list[Job]:
    """Keep exactly the jobs whose bid covers the reserve for their time."""
    return [j for j in jobs if j.bid_value >= eta_s * j.duration]


def _job_cap(max_jobs: int | None) -> int:
    if max_jobs is not None:
        return max_jobs
    return int(os.environ.get(MAX_JOBS_ENV, DEFAULT_MAX_JOBS))


class _Search:
    """DFS state for the branch and bound.

    Jobs are indexed by their position in the branching order (best rate
    first); each channel's tentative job set is an index bitmask, which
    keeps the feasibility memo keys cheap to hash.
    """

    # Bounds are compared with a hair of slack: an exactly-tight float
    # bound may land one ulp under the incumbent and must not prune the
    # branch that realizes it.  Admitting dust-level-worse branches is
    # harmless for exactness.
    PRUNE_EPS = 1e-9

    def __init__(self, order: list[Job], channels: list[int],
                 timelines: dict[int, SegmentedTimeline],
                 candidates: dict[int, list[int]]):
        self.order = order
        self.channels = channels
        self.timelines = timelines
        self.candidates = [candidates[j.id] for j in order]
        self.masks: dict[int, int] = {c: 0 for c in channels}
        self.assignment: dict[int, int] = {}
        self.feas_memo: dict[tuple[int, int], bool] = {}
        n = len(order)
        self.suffix_value = [0.0] * (n + 1)
        for i in range(n - 1, -1, -1):
            self.suffix_value[i] = self.suffix_value[i + 1] + order[i].bid_value
        # Prefix arrays over each depth's suffix sorted by rate descending:
        # the fractional bound fills a seconds budget with the best rates,
        # so it reduces to a bisect over cumulative durations.
        self.frac_dur: list[list[int]] = []
        self.frac_val: list[list[float]] = []
        self.frac_rate: list[list[float]] = []
        for i in range(n + 1):
            rates = sorted(((j.unit_value, j.duration) for j in order[i:]), reverse=True)
            cum_d, cum_v = [0], [0.0]
            for rate, dur in rates:
                cum_d.append(cum_d[-1] + dur)
                cum_v.append(cum_v[-1] + rate * dur)
            self.frac_dur.append(cum_d)
            self.frac_val.append(cum_v)
            self.frac_rate.append([r for r, _ in rates])
        self.total_capacity = sum(tl.free_seconds for tl in timelines.values())
        self.value_by_id = {j.id: j.bid_value for j in order}
        self.best_welfare = -1.0
        self.best_key: tuple | None = None
        self.best_assignment: dict[int, int] | None = None

    def _canonical_welfare(self, winner_ids) -> float:
        # id-ordered sum: equal winner sets always give bitwise-equal
        # welfare, no matter the order the search accepted them in
        return sum((self.value_by_id[w] for w in sorted(winner_ids)), 0.0)

    def channel_feasible(self, cid: int, mask: int) -> bool:
        key = (cid, mask)
        hit = self.feas_memo.get(key)
        if hit is None:
            members = [self.order[i] for i in _bits(mask)]
            hit = set_feasible(members, self.timelines[cid])
            self.feas_memo[key] = hit
        return hit

    def fractional_bound(self, depth: int, used_seconds: int) -> float:
        budget = self.total_capacity - used_seconds
        if budget <= 0:
            return 0.0
        cum_d = self.frac_dur[depth]
        k = bisect.bisect_right(cum_d, budget) - 1
        bound = self.frac_val[depth][k]
        if k < len(self.frac_rate[depth]):
            bound += self.frac_rate[depth][k] * (budget - cum_d[k])
        return bound

    def greedy_incumbent(self) -> float:
        """Feasible warm-start welfare: greedy passes in two orderings.

        Tries best-rate-first and best-value-first, assigning each job to
        the first channel that stays feasible; the larger total primes
        the pruning cutoff.
        """
        best = 0.0
        by_rate = range(len(self.order))
        by_value = sorted(by_rate, key=lambda i: (-self.order[i].bid_value, self.order[i].id))
        for ordering in (by_rate, by_value):
            masks = {c: 0 for c in self.channels}
            accepted = []
            for idx in ordering:
                for cid in self.candidates[idx]:
                    trial = masks[cid] | (1 << idx)
                    if self.channel_feasible(cid, trial):
                        masks[cid] = trial
                        accepted.append(self.order[idx].id)
                        break
            best = max(best, self._canonical_welfare(accepted))
        return best

    def run(self) -> tuple[float, dict[int, int]]:
        # The incumbent's own leaf survives the slack pruning, so a best
        # assignment is always recovered.
        self.best_welfare = self.greedy_incumbent()
        self._dfs(0, 0.0, 0)
        assert self.best_assignment is not None
        return self.best_welfare, self.best_assignment

    def _dfs(self, depth: int, value: float, used_seconds: int) -> None:
        remaining = self.suffix_value[depth]
        cutoff = self.best_welfare - self.PRUNE_EPS
        if value + remaining < cutoff:
            return
        if remaining > 0 and value + self.fractional_bound(depth, used_seconds) < cutoff:
            return
        if depth == len(self.order):
            self._offer_leaf()
            return
        job = self.order[depth]
        bit = 1 << depth
        for cid in self.candidates[depth]:
            trial = self.masks[cid] | bit
            if not self.channel_feasible(cid, trial):
                continue
            self.masks[cid] = trial
            self.assignment[job.id] = cid
            self._dfs(depth + 1, value + job.bid_value, used_seconds + job.duration)
            del self.assignment[job.id]
            self.masks[cid] &= ~bit
        self._dfs(depth + 1, value, used_seconds)

    def _offer_leaf(self) -> None:
        winners = tuple(sorted(self.assignment))
        canon = self._canonical_welfare(winners)
        if canon < self.best_welfare:
            return
        key = (winners, tuple(self.assignment[w] for w in winners))
        if canon > self.best_welfare or self.best_key is None or key < self.best_key:
            self.best_welfare = canon
            self.best_key = key
            self.best_assignment = dict(self.assignment)


def _bits(mask: int):
    idx = 0
    while mask:
        if mask & 1:
            yield idx
        mask >>= 1
        idx += 1


def solve_optimal(market: LocalMarket, eta_s: float, max_jobs: int | None = None) -> VcgSolution:
    """Exact welfare-maximizing assignment for one local market.

    Welfare ties are broken toward the lexicographically smallest winner
    id set, then the smallest channel ids, so payments are reproducible.
    Worst case is exponential; the job cap (``max_jobs`` argument, else the
    ``SPECTRUM_VCG_MAX_JOBS`` environment variable, else 18) guards it.
    """
    jobs = filter_reserve(list(market.jobs), eta_s)
    cap = _job_cap(max_jobs)
    if len(jobs) > cap:
        raise SolverSizeError(
            f"{len(jobs)} jobs exceed the exact-solver cap of {cap}; "
            f"raise {MAX_JOBS_ENV} or pass max_jobs to override"
        )
    timelines = build_timelines(market)
    if not jobs or not market.channels:
        return VcgSolution(0.0, {}, {}, timelines)

    order = sorted(jobs, key=lambda j: (-j.unit_value, j.id))
    channel_ids = [c.id for c in market.channels]
    empty = {cid: timelines[cid].empty_usage() for cid in channel_ids}
    candidates = {
        j.id: [cid for cid in channel_ids if fits_in_residual(j, timelines[cid], empty[cid])]
        for j in order
    }
    search = _Search(order, channel_ids, timelines, candidates)
    welfare, assignment = search.run()
    by_id = {j.id: j for j in jobs}

    allocations: dict[int, list[int]] = {}
    for cid in channel_ids:
        members = [by_id[jid] for jid in sorted(assignment) if assignment[jid] == cid]
        if not members:
            continue
        flows = window_flow_allocation(members, timelines[cid])
        assert flows is not None, "search accepted an infeasible channel set"
        allocations.update(flows)
    return VcgSolution(welfare, assignment, allocations, timelines)


def vcg_payments(market: LocalMarket, solution: VcgSolution, eta_s: float,
                 max_jobs: int | None = None) -> dict[int, float]:
    """Pivot payments for the given optimum; losers pay zero.

    Each winner's price is the optimum of the market without it minus
    what the others get at the actual optimum, floored at the reserve.
    """
    payments = {j.id: 0.0 for j in market.jobs}
    for jid in sorted(solution.assignment):
        job = market.job_by_id(jid)
        others = LocalMarket(
            region=market.region,
            band_type=market.band_type,
            jobs=tuple(j for j in market.jobs if j.id != jid),
            channels=market.channels,
        )
        welfare_without = solve_optimal(others, eta_s, max_jobs=max_jobs).welfare
        pivot = welfare_without - (solution.welfare - job.bid_value)
        payments[jid] = max(pivot, eta_s * job.duration)
    return payments


def run_vcg(market: LocalMarket, config: AuctionConfig,
            max_jobs: int | None = None) -> AuctionOutcome:
    """Solve, price, and package the exact mechanism's outcome."""
    solution = solve_optimal(market, config.eta_s, max_jobs=max_jobs)
    payments = vcg_payments(market, solution, config.eta_s, max_jobs=max_jobs)
    return AuctionOutcome(
        assignment=dict(solution.assignment),
        allocations={k: list(v) for k, v in solution.allocations.items()},
        payments=payments,
        timelines=solution.timelines,
    )
