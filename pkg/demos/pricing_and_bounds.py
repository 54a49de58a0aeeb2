"""Payments side by side, plus the greedy mechanism's worst-case bound.

A contested two-channel market is priced by both mechanisms: pivot
payments (welfare externality) versus critical values (least winning
bid, found by binary search on the bid grid and verified against the
linear scan).  Then the worst-case efficiency-loss factor
2(beta+1)/(1 - 1/beta) is tabulated: it bottoms out at beta = 1+sqrt(2)
with value 6+4*sqrt(2) ~ 11.66.
"""

import math

from spectrum_auctions import (
    AuctionConfig,
    Channel,
    Job,
    LocalMarket,
    rho_bound,
    run_pvg,
    run_vcg,
)
from spectrum_auctions.oracle import scan_critical_value

H = 3600


def mk_job(jid, v, a, d, t):
    return Job(id=jid, region="r1", band_type="tv", bid_value=v,
               arrival=a, deadline=d, duration=t)


channels = (
    Channel(id=1, region="r1", band_type="tv", free_intervals=((0, 3 * H),)),
    Channel(id=2, region="r1", band_type="tv", free_intervals=((H, 4 * H),)),
)
jobs = (
    mk_job(1, 9.0, 0, 3 * H, 2 * H),
    mk_job(2, 7.0, 0, 2 * H, 2 * H),
    mk_job(3, 6.5, H, 4 * H, 3 * H),
    mk_job(4, 3.0, 2 * H, 4 * H, 2 * H),
    mk_job(5, 2.0, 0, 4 * H, H),
)
market = LocalMarket(region="r1", band_type="tv", jobs=jobs, channels=channels)
config = AuctionConfig(eta_s=0.0002, xi=0.01)  # small reserve per second

vcg_out = run_vcg(market, config)
pvg_out = run_pvg(market, config)

print("job   bid    pivot-price            critical-price")
for j in jobs:
    def cell(out):
        if j.id not in out.assignment:
            return "   lost      "
        return f"wins, pays {out.payments[j.id]:5.2f}"
    print(f"  {j.id}  {j.bid_value:5.2f}   {cell(vcg_out)}   {cell(pvg_out)}")

for jid in sorted(pvg_out.assignment):
    assert pvg_out.payments[jid] == scan_critical_value(market, config, jid)
print("(critical prices re-verified by exhaustive bid scan)")

print("\nworst-case efficiency-loss factor by preemption threshold beta:")
beta_star = 1 + math.sqrt(2)
for beta in (1.2, 1.5, 2.0, beta_star, 3.0, 4.0, 6.0):
    marker = "  <- minimum" if beta == beta_star else ""
    print(f"  beta = {beta:5.3f}   bound = {rho_bound(beta):7.3f}{marker}")
