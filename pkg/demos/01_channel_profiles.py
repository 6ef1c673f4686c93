"""
Rate tiers across carrier frequencies
=====================================

How one physical rate ladder stretches or shrinks with the carrier.
Lower bands reach further at the same rates; higher bands trade reach
for the wider channels they can carry.
"""
import numpy as np

from fairband import Channel, RadioModel, channel_profile, link_rate

model = RadioModel()
print(f"base interference range: {model.base_interference_range():.1f} m\n")

bands = [
    Channel("ch-600", 600.0, 6.0),
    Channel("ch-2400", 2400.0, 22.0),
    Channel("ch-4000", 4000.0, 44.0),
    Channel("ch-16000", 16000.0, 50.0),
]

for ch in bands:
    prof = channel_profile(ch, model)
    tiers = ", ".join(
        f"{t.rate_mbps:.1f} Mb/s up to {t.range_m:.1f} m" for t in prof.tiers
    )
    print(f"{ch.id} ({ch.bandwidth_mhz:.0f} MHz wide)")
    print(f"  tiers: {tiers}")
    print(f"  interferes out to {prof.interference_range_m:.1f} m\n")

# a link's rate is a step function of distance
prof = channel_profile(bands[2], model)
for d in np.arange(0.0, 130.0, 20.0):
    r = link_rate((d, 0.0), (0.0, 0.0), prof)
    print(f"rate on {prof.channel_id} at {d:5.1f} m: {r:5.1f} Mb/s")
