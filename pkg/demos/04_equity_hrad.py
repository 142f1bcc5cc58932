"""Resource agglomeration: which districts hold more than their share?

The agglomeration degree compares each district's resource density to the
study area's. Adding the population analog separates "dense because
people live there" from plain over-concentration, and a weighted Gini
summarizes the whole distribution in one number.
"""

from accesskit import Region, gini, hrad, hrad_vs_population

districts = [
    #       id          km^2   beds   residents
    Region("old_town",   35.0,  900.0, 210_000),
    Region("riverside",  80.0,  650.0, 340_000),
    Region("hills",     220.0,  180.0,  90_000),
    Region("new_east",  140.0,  420.0, 400_000),
    Region("farmland",  525.0,  150.0,  60_000),
]

result = hrad(districts)
print(f"{'district':<10}{'hrad':>8}  class")
for rec in result.records:
    print(f"{rec.region_id:<10}{rec.hrad:>8.2f}  {rec.classification}")

print("\nsanity: the area-weighted mean agglomeration is exactly 1")
total_area = sum(r.area_km2 for r in districts)
print("  ", sum(r.area_km2 / total_area * rec.hrad
                for r, rec in zip(districts, result.records)))

# --- does resource concentration follow people? ------------------------------

print(f"\n{'district':<10}{'hrad':>8}{'pad':>8}{'hrad/pad':>10}")
for rec in hrad_vs_population(districts).records:
    ratio = f"{rec.hrad_over_pad:>10.2f}" if rec.hrad_over_pad else "       n/a"
    print(f"{rec.region_id:<10}{rec.hrad:>8.2f}{rec.pad:>8.2f}{ratio}")
print("ratio >= 1: resources keep pace with where residents concentrate")

# --- one-number summaries -----------------------------------------------------

beds = [r.resource for r in districts]
people = [r.population for r in districts]
print(f"\nGini of beds across districts:            {gini(beds):.3f}")
print(f"Gini of beds weighted by residents:       {gini(beds, people):.3f}")
print(f"Gini of beds per resident (pop-weighted): "
      f"{gini([b / p for b, p in zip(beds, people)], people):.3f}")
