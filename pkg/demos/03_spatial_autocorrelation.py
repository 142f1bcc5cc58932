"""Is access clustered in space? Global and local Moran statistics.

Two synthetic landscapes with the same values in different arrangements:
one spatially shuffled, one with a depressed corner. The global statistic
tells them apart; the local one points at the cold spot.
"""

import numpy as np

from accesskit import build_weights, lisa, morans_i

rng = np.random.default_rng(7)

# a 10x10 grid of tracts, planar coordinates in meters
side = 10
xy = np.array([(1000.0 * i, 1000.0 * j) for j in range(side) for i in range(side)])
weights = build_weights(xy, k=4, coord_kind="planar")

base = rng.uniform(2.0, 4.0, size=side * side)

# landscape A: values placed at random
scattered = rng.permutation(base)

# landscape B: same values, but the southwest quarter gets the lowest ones
clustered = np.empty_like(base)
order = np.argsort(base)
sw = [j * side + i for j in range(side // 2) for i in range(side // 2)]
rest = [k for k in range(side * side) if k not in sw]
clustered[sw] = base[order[: len(sw)]]
clustered[rest] = base[order[len(sw):]]

for name, values in (("scattered", scattered), ("cold corner", clustered)):
    result = morans_i(values, weights, n_permutations=999, seed=42)
    print(f"{name:>12}: I = {result.i:+.3f}  (expected {result.expected_i:+.3f} "
          f"under no pattern, pseudo p = {result.p_value:.3f})")

# --- where is the cluster? ---------------------------------------------------

local = lisa(clustered, weights, n_permutations=999, seed=42)
significant = [
    (i, q) for i, (q, p) in enumerate(zip(local.quadrant, local.p_value))
    if p <= 0.05
]
counts = {}
for _, q in significant:
    counts[q] = counts.get(q, 0) + 1
print(f"\nlocal statistics flag {len(significant)} of {side * side} tracts "
      f"at p <= 0.05: {counts}")
print("map of significant quadrants (. = not significant):")
for j in reversed(range(side)):
    row = ""
    for i in range(side):
        k = j * side + i
        row += (local.quadrant[k][0] if local.p_value[k] <= 0.05 else ".") + " "
    print("  " + row)
print("L = low-value cluster member, H = high-value; the cold corner shows up")
