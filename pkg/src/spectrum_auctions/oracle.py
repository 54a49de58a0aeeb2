"""Brute-force references used to validate the mechanisms.

Everything here recomputes from first principles instead of reusing the
solver machinery: time is re-segmented directly from interval arithmetic
and feasibility uses a from-scratch breadth-first augmenting-path flow,
so agreement with the production code is a genuine two-implementation
cross-check.  Exhaustive enumeration is capped at 12 jobs / 3 channels.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .market import AuctionConfig, Channel, Job, LocalMarket, SpectrumAuctionError
from .pvg import bid_grid_point, bid_grid_size, _wins_at_bid


class OracleCapError(SpectrumAuctionError):
    """The instance is too large for exhaustive enumeration."""


MAX_ORACLE_JOBS = 12
MAX_ORACLE_CHANNELS = 3


@dataclass(frozen=True)
class OracleResult:
    best_welfare: float
    best_winner_sets: list[frozenset[int]]


def _check_cap(market: LocalMarket) -> None:
    if len(market.jobs) > MAX_ORACLE_JOBS or len(market.channels) > MAX_ORACLE_CHANNELS:
        raise OracleCapError(
            f"oracle caps at {MAX_ORACLE_JOBS} jobs / {MAX_ORACLE_CHANNELS} channels, "
            f"got {len(market.jobs)} / {len(market.channels)}"
        )


def _atoms(channel: Channel, jobs: list[Job]) -> list[tuple[int, int, int]]:
    """(start, end, free_seconds) pieces cut at all endpoints, from scratch."""
    points = set()
    for j in jobs:
        points.add(j.arrival)
        points.add(j.deadline)
    for s, e in channel.free_intervals:
        points.add(s)
        points.add(e)
    cuts = sorted(points)
    atoms = []
    for s, e in zip(cuts, cuts[1:]):
        free = 0
        for fs, fe in channel.free_intervals:
            lo, hi = max(s, fs), min(e, fe)
            if hi > lo:
                free += hi - lo
        atoms.append((s, e, free))
    return atoms


def _bfs_max_flow(capacity: list[list[int]], source: int, sink: int) -> int:
    """Plain Edmonds-Karp on an adjacency-matrix residual graph."""
    n = len(capacity)
    residual = [row[:] for row in capacity]
    total = 0
    while True:
        parent = [-1] * n
        parent[source] = source
        queue = deque([source])
        while queue and parent[sink] == -1:
            u = queue.popleft()
            for v in range(n):
                if parent[v] == -1 and residual[u][v] > 0:
                    parent[v] = u
                    queue.append(v)
        if parent[sink] == -1:
            return total
        bottleneck = None
        v = sink
        while v != source:
            u = parent[v]
            r = residual[u][v]
            bottleneck = r if bottleneck is None or r < bottleneck else bottleneck
            v = u
        v = sink
        while v != source:
            u = parent[v]
            residual[u][v] -= bottleneck
            residual[v][u] += bottleneck
            v = u
        total += bottleneck


def _channel_set_feasible(channel: Channel, jobs: list[Job]) -> bool:
    """All demands routable into the channel's free time, by augmenting paths."""
    if not jobs:
        return True
    atoms = _atoms(channel, jobs)
    n_jobs = len(jobs)
    n = 1 + n_jobs + len(atoms) + 1
    source, sink = 0, n - 1
    cap = [[0] * n for _ in range(n)]
    demand = 0
    for i, j in enumerate(jobs):
        cap[source][1 + i] = j.duration
        demand += j.duration
        for k, (s, e, free) in enumerate(atoms):
            if free > 0 and j.arrival <= s and e <= j.deadline:
                cap[1 + i][1 + n_jobs + k] = free
    for k, (_, _, free) in enumerate(atoms):
        cap[1 + n_jobs + k][sink] = free
    return _bfs_max_flow(cap, source, sink) == demand


def enumerate_optimal(market: LocalMarket, eta_s: float) -> OracleResult:
    """All winner subsets x channel assignments, keeping the best welfare.

    Feasibility of each channel's job set is decided with the local
    augmenting-path flow; assignments sharing an infeasible channel set
    are skipped (adding jobs never restores feasibility).
    """
    _check_cap(market)
    jobs = [j for j in market.jobs if j.bid_value >= eta_s * j.duration]
    channels = list(market.channels)
    best_welfare = 0.0
    best_sets: set[frozenset[int]] = {frozenset()}
    if not channels:
        return OracleResult(0.0, [frozenset()])

    feas_memo: dict[tuple[int, frozenset[int]], bool] = {}
    by_id = {j.id: j for j in jobs}

    def feasible(ci: int, ids: frozenset[int]) -> bool:
        hit = feas_memo.get((ci, ids))
        if hit is None:
            hit = _channel_set_feasible(channels[ci], [by_id[i] for i in sorted(ids)])
            feas_memo[(ci, ids)] = hit
        return hit

    sets: list[set[int]] = [set() for _ in channels]

    def walk(i: int) -> None:
        nonlocal best_welfare, best_sets
        if i == len(jobs):
            winners = frozenset(jid for s in sets for jid in s)
            # canonical id-ordered sum, so equal sets give bitwise-equal welfare
            welfare = sum((by_id[jid].bid_value for jid in sorted(winners)), 0.0)
            if welfare > best_welfare:
                best_welfare = welfare
                best_sets = {winners}
            elif welfare == best_welfare:
                best_sets.add(winners)
            return
        job = jobs[i]
        for ci in range(len(channels)):
            trial = frozenset(sets[ci] | {job.id})
            if feasible(ci, trial):
                sets[ci].add(job.id)
                walk(i + 1)
                sets[ci].remove(job.id)
        walk(i + 1)

    walk(0)
    return OracleResult(best_welfare, sorted(best_sets, key=sorted))


def _earliest_contiguous(job: Job, channel: Channel, not_before: int) -> int | None:
    """Earliest start of a whole block inside one free interval and the window."""
    for fs, fe in channel.free_intervals:
        start = max(job.arrival, not_before, fs)
        if start + job.duration <= min(fe, job.deadline):
            return start
    return None


def _contiguous_feasible(channel: Channel, jobs: list[Job]) -> bool:
    """Can all jobs get disjoint whole blocks?  Tries every time ordering.

    For a fixed left-to-right ordering, packing each block at its earliest
    admissible start dominates any other placement, so trying all
    orderings is exact.
    """
    def place(remaining: list[Job], cursor: int) -> bool:
        if not remaining:
            return True
        for idx, job in enumerate(remaining):
            start = _earliest_contiguous(job, channel, cursor)
            if start is None:
                continue
            rest = remaining[:idx] + remaining[idx + 1:]
            if place(rest, start + job.duration):
                return True
        return False

    return place(jobs, 0)


def contiguous_optimal(market: LocalMarket) -> float:
    """Best welfare when every winner must get one unbroken block of time."""
    _check_cap(market)
    jobs = list(market.jobs)
    channels = list(market.channels)
    if not channels:
        return 0.0
    best = 0.0
    memo: dict[tuple[int, frozenset[int]], bool] = {}
    by_id = {j.id: j for j in jobs}

    def feasible(ci: int, ids: frozenset[int]) -> bool:
        hit = memo.get((ci, ids))
        if hit is None:
            hit = _contiguous_feasible(channels[ci], [by_id[i] for i in sorted(ids)])
            memo[(ci, ids)] = hit
        return hit

    sets: list[set[int]] = [set() for _ in channels]

    def walk(i: int, welfare: float) -> None:
        nonlocal best
        if i == len(jobs):
            best = max(best, welfare)
            return
        job = jobs[i]
        for ci in range(len(channels)):
            trial = frozenset(sets[ci] | {job.id})
            if feasible(ci, trial):
                sets[ci].add(job.id)
                walk(i + 1, welfare + job.bid_value)
                sets[ci].remove(job.id)
        walk(i + 1, welfare)

    walk(0, 0.0)
    return best


def scan_critical_value(market: LocalMarket, config: AuctionConfig, job_id: int) -> float:
    """Least winning grid bid by plain linear scan from the reserve floor up.

    Validates the mechanism's binary search: candidates are the same
    ``eta_s * duration + k * xi`` offsets capped by the reported value.
    The job must win at its truthful bid.
    """
    job = market.job_by_id(job_id)
    floor = config.eta_s * job.duration
    top = job.bid_value
    n = bid_grid_size(floor, top, config.xi)
    for k in range(n + 1):
        bid = bid_grid_point(floor, top, config.xi, k, n)
        if _wins_at_bid(market, config, job, bid):
            return bid
    raise SpectrumAuctionError(f"job {job_id} does not win even at its truthful bid")
