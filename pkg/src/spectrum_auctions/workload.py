"""Occupancy-grid ingestion/synthesis and request-workload generation.

The occupancy CSV format is one header row ``slot_seconds,<int>`` followed
by one row per channel of comma-separated 0/1 cells (0 = free, 1 =
occupied by the primary user), all rows the same length.  Requests come
in two flavors: uniformly spread over the day (set 1), or with a
configurable fraction squeezed into a hot evening window and the rest
kept out of it (set 2).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .market import Channel, Job, SpectrumAuctionError

DAY_SECONDS = 86_400
DEFAULT_SLOT_SECONDS = 75


class OccupancyFormatError(SpectrumAuctionError):
    """Malformed occupancy CSV; the message carries the offending line."""


@dataclass(frozen=True)
class OccupancyGrid:
    """Rectangular 0/1 occupancy: one row per channel, one cell per slot."""

    slot_seconds: int
    occupancy: np.ndarray  # shape (channels, slots), dtype uint8

    def __post_init__(self) -> None:
        if self.slot_seconds <= 0:
            raise ValueError("slot_seconds must be positive")
        arr = np.asarray(self.occupancy, dtype=np.uint8)
        if arr.ndim != 2:
            raise ValueError("occupancy must be 2-dimensional")
        object.__setattr__(self, "occupancy", arr)

    @property
    def n_channels(self) -> int:
        return int(self.occupancy.shape[0])

    @property
    def horizon_slots(self) -> int:
        return int(self.occupancy.shape[1])

    @property
    def horizon_seconds(self) -> int:
        return self.horizon_slots * self.slot_seconds

    def day_slice(self, day: int) -> "OccupancyGrid":
        """Extract one 24 h window as its own grid."""
        per_day = DAY_SECONDS // self.slot_seconds
        start = day * per_day
        if start + per_day > self.horizon_slots:
            raise ValueError(f"day {day} out of range for a {self.horizon_slots}-slot grid")
        return OccupancyGrid(self.slot_seconds, self.occupancy[:, start:start + per_day].copy())

    def to_channels(self, region: str, band_type: str) -> list[Channel]:
        """Free runs of each row become a channel's free intervals."""
        channels = []
        for row_idx in range(self.n_channels):
            row = self.occupancy[row_idx]
            intervals: list[tuple[int, int]] = []
            start = None
            for slot, cell in enumerate(row):
                if cell == 0 and start is None:
                    start = slot
                elif cell == 1 and start is not None:
                    intervals.append((start * self.slot_seconds, slot * self.slot_seconds))
                    start = None
            if start is not None:
                intervals.append((start * self.slot_seconds, len(row) * self.slot_seconds))
            channels.append(Channel(
                id=row_idx + 1, region=region, band_type=band_type,
                free_intervals=tuple(intervals),
            ))
        return channels


def load_occupancy(path: str) -> OccupancyGrid:
    """Parse an occupancy CSV, reporting the line number of any defect."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise OccupancyFormatError("line 1: empty file") from None
        if len(header) != 2 or header[0] != "slot_seconds":
            raise OccupancyFormatError("line 1: expected header 'slot_seconds,<int>'")
        try:
            slot_seconds = int(header[1])
        except ValueError:
            raise OccupancyFormatError(f"line 1: slot_seconds {header[1]!r} is not an integer") from None
        if slot_seconds <= 0:
            raise OccupancyFormatError("line 1: slot_seconds must be positive")

        rows: list[list[int]] = []
        width = None
        for lineno, cells in enumerate(reader, start=2):
            if not cells:
                continue
            if width is None:
                width = len(cells)
            elif len(cells) != width:
                raise OccupancyFormatError(
                    f"line {lineno}: row has {len(cells)} cells, expected {width}"
                )
            parsed = []
            for cell in cells:
                if cell not in ("0", "1"):
                    raise OccupancyFormatError(f"line {lineno}: cell {cell!r} is not 0 or 1")
                parsed.append(int(cell))
            rows.append(parsed)
        if not rows:
            raise OccupancyFormatError("line 2: no channel rows")
    return OccupancyGrid(slot_seconds, np.array(rows, dtype=np.uint8))


def save_occupancy(grid: OccupancyGrid, path: str) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["slot_seconds", grid.slot_seconds])
        for row in grid.occupancy:
            writer.writerow([int(c) for c in row])


def synthesize_occupancy(channels: int, days: int, duty_cycle: float, seed: int,
                         slot_seconds: int = DEFAULT_SLOT_SECONDS) -> OccupancyGrid:
    """Random daily occupancy pattern per channel, repeated across days.

    Each channel gets occupied runs totaling exactly
    ``round(duty_cycle * slots_per_day)`` slots, split into a few random
    bursts separated by free gaps; the same daily pattern repeats every
    day, mimicking primary users with stable daily habits.
    """
    if not 0.0 <= duty_cycle <= 1.0:
        raise ValueError("duty_cycle must lie in [0, 1]")
    per_day = DAY_SECONDS // slot_seconds
    rng = np.random.default_rng(seed)
    day_rows = []
    for _ in range(channels):
        busy = int(round(duty_cycle * per_day))
        row = np.zeros(per_day, dtype=np.uint8)
        if busy >= per_day:
            row[:] = 1
        elif busy > 0:
            free_total = per_day - busy
            # interior gaps use one free slot each, bounding the run count
            n_runs_max = min(busy, 6, free_total + 1)
            n_runs = int(rng.integers(1, n_runs_max + 1))
            run_lengths = _random_composition(rng, busy, n_runs, minimum=1)
            gaps = _random_composition(rng, free_total - (n_runs - 1), n_runs + 1, minimum=0)
            pos = 0
            for k, run in enumerate(run_lengths):
                pos += gaps[k] + (1 if k > 0 else 0)
                row[pos:pos + run] = 1
                pos += run
        day_rows.append(row)
    pattern = np.stack(day_rows)
    return OccupancyGrid(slot_seconds, np.tile(pattern, (1, days)))


def _random_composition(rng: np.random.Generator, total: int, parts: int, minimum: int) -> list[int]:
    """Split ``total`` into ``parts`` ordered pieces, each >= minimum."""
    spare = total - minimum * parts
    if spare < 0:
        raise ValueError("total too small for the requested parts")
    if parts == 1:
        return [total]
    cuts = np.sort(rng.integers(0, spare + 1, size=parts - 1))
    pieces = np.diff(np.concatenate(([0], cuts, [spare])))
    return [int(p) + minimum for p in pieces]


@dataclass(frozen=True)
class WorkloadSpec:
    """Parameters of one synthetic request batch.

    Durations and window lengths are drawn uniformly (integer seconds)
    from their ranges; bids are per-hour rates drawn from
    ``value_rate_range`` times the duration in hours.  For set 2, a
    ``hot_fraction`` share of requests gets windows intersecting
    ``hot_window`` and the rest are kept entirely outside it.
    """

    n_requests: int
    set_kind: int = 1
    hot_fraction: float = 0.8
    hot_window: tuple[int, int] = (68_400, 79_200)  # 19:00-22:00
    duration_range: tuple[int, int] = (1_800, 7_200)  # 0.5-2 h
    window_range: tuple[int, int] = (7_200, 14_400)  # 2-4 h
    value_rate_range: tuple[float, float] = (1.0, 10.0)  # currency per hour
    horizon: int = DAY_SECONDS
    seed: int = 0
    region: str = "r1"
    band_type: str = "tv"
    id_offset: int = 0

    def __post_init__(self) -> None:
        if self.n_requests < 0:
            raise ValueError("n_requests must be >= 0")
        if self.set_kind not in (1, 2):
            raise ValueError("set_kind must be 1 or 2")
        if not 0.0 < self.hot_fraction <= 1.0:
            raise ValueError("hot_fraction must lie in (0, 1]")
        hs, he = self.hot_window
        if not 0 <= hs < he <= self.horizon:
            raise ValueError("hot_window must be a nonempty range inside the horizon")
        if self.window_range[1] > self.horizon:
            raise ValueError("windows cannot exceed the horizon")


def generate_requests(spec: WorkloadSpec) -> list[Job]:
    """Draw one deterministic batch of jobs for the given spec."""
    rng = np.random.default_rng(spec.seed)
    t_lo, t_hi = spec.duration_range
    w_lo, w_hi = spec.window_range
    hs, he = spec.hot_window
    jobs = []
    for i in range(spec.n_requests):
        window = int(rng.integers(w_lo, w_hi + 1))
        duration = int(rng.integers(t_lo, t_hi + 1))
        while duration > window:
            duration = int(rng.integers(t_lo, t_hi + 1))
        if spec.set_kind == 2 and rng.random() < spec.hot_fraction:
            arrival = _arrival_hitting(rng, window, hs, he, spec.horizon)
        elif spec.set_kind == 2:
            arrival = _arrival_missing(rng, window, hs, he, spec.horizon)
        else:
            arrival = int(rng.integers(0, spec.horizon - window + 1))
        rate = float(rng.uniform(*spec.value_rate_range))
        jobs.append(Job(
            id=spec.id_offset + i + 1,
            region=spec.region,
            band_type=spec.band_type,
            bid_value=rate * duration / 3600.0,
            arrival=arrival,
            deadline=arrival + window,
            duration=duration,
        ))
    return jobs


def _arrival_hitting(rng: np.random.Generator, window: int, hs: int, he: int,
                     horizon: int) -> int:
    """Uniform arrival whose [a, a+window) intersects the hot range."""
    lo = max(0, hs - window + 1)
    hi = min(he - 1, horizon - window)
    if hi < lo:
        raise ValueError("hot window admits no feasible arrivals")
    return int(rng.integers(lo, hi + 1))


def _arrival_missing(rng: np.random.Generator, window: int, hs: int, he: int,
                     horizon: int) -> int:
    """Uniform arrival whose window stays fully clear of the hot range."""
    left = hs - window - 0 + 1  # arrivals in [0, hs - window]
    right = horizon - window - he + 1  # arrivals in [he, horizon - window]
    left = max(0, left)
    right = max(0, right)
    if left + right == 0:
        raise ValueError("no room outside the hot window for this window length")
    pick = int(rng.integers(0, left + right))
    return pick if pick < left else he + (pick - left)


REQUEST_COLUMNS = ["id", "region", "band_type", "bid_value", "arrival", "deadline", "duration"]


def save_requests(jobs: list[Job], path: str) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(REQUEST_COLUMNS)
        for j in jobs:
            writer.writerow([j.id, j.region, j.band_type, repr(j.bid_value),
                             j.arrival, j.deadline, j.duration])


def load_requests(path: str) -> list[Job]:
    jobs = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != REQUEST_COLUMNS:
            raise SpectrumAuctionError(f"unexpected request CSV header in {path}")
        for row in reader:
            jobs.append(Job(
                id=int(row["id"]),
                region=row["region"],
                band_type=row["band_type"],
                bid_value=float(row["bid_value"]),
                arrival=int(row["arrival"]),
                deadline=int(row["deadline"]),
                duration=int(row["duration"]),
            ))
    return jobs
