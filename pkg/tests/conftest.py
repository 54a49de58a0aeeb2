"""Shared generators for randomized instance tests.

Bids are multiples of 0.25 (exact binary fractions) so welfare sums are
exact and cross-implementation equality checks are meaningful.  Times
live on a small integer grid, which caps the segmented slot count.
"""

import random

import pytest

from spectrum_auctions import Channel, Job, LocalMarket

REGION = "r1"
BAND = "tv"


def random_channel(rng: random.Random, cid: int, grid_max: int = 8) -> Channel:
    """1-3 disjoint free intervals with endpoints on the integer grid."""
    n_points = rng.randint(2, min(6, grid_max + 1))
    points = sorted(rng.sample(range(grid_max + 1), n_points))
    intervals = [(points[i], points[i + 1]) for i in range(0, len(points) - 1, 2)]
    if not intervals:
        intervals = [(0, grid_max)]
    return Channel(id=cid, region=REGION, band_type=BAND, free_intervals=tuple(intervals))


def random_job(rng: random.Random, jid: int, grid_max: int = 8) -> Job:
    arrival = rng.randint(0, grid_max - 1)
    deadline = rng.randint(arrival + 1, grid_max)
    duration = rng.randint(1, deadline - arrival)
    bid = rng.randint(1, 48) * 0.25
    return Job(id=jid, region=REGION, band_type=BAND, bid_value=bid,
               arrival=arrival, deadline=deadline, duration=duration)


def random_market(rng: random.Random, max_jobs: int = 8, max_channels: int = 2,
                  grid_max: int = 8) -> LocalMarket:
    channels = tuple(random_channel(rng, cid + 1, grid_max)
                     for cid in range(rng.randint(1, max_channels)))
    jobs = tuple(random_job(rng, jid + 1, grid_max)
                 for jid in range(rng.randint(1, max_jobs)))
    return LocalMarket(region=REGION, band_type=BAND, jobs=jobs, channels=channels)


def random_reserve(rng: random.Random) -> float:
    # dyadic per-second reserves keep v >= eta_s * t comparisons exact
    return rng.choice([0.0, 0.0, 0.25, 0.5, 1.0])


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240817)
