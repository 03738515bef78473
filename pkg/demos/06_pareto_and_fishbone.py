"""Root-cause view: Pareto table of dissatisfaction plus the fishbone tree.

Every negative-gap item contributes |gap| x dimension importance; sorted
and accumulated, a handful of items carries most of the dissatisfaction
(the vital few).  The fishbone tree organizes the analyst's causes and,
where branches are annotated with item ids, sums their contributions.
"""

from satmetric import dissatisfaction_contributions, item_gaps, pareto
from satmetric.rootcause import branch_magnitudes
from satmetric.xyz import (
    expectation_descriptives,
    load_xyz_fishbone,
    perception_descriptives,
    xyz_instrument,
    xyz_weights,
)

instrument = xyz_instrument()
weights = xyz_weights()
gaps = item_gaps(expectation_descriptives(), perception_descriptives())
contributions = dissatisfaction_contributions(gaps, weights, instrument)
table = pareto(contributions, threshold_pct=80.0)

print(f"{'rank':4s} {'item':4s} {'magnitude':>10s} {'cum':>10s} {'cum %':>8s}  label")
for row in table.rows:
    marker = " <- vital-few cutoff" if row.rank == table.vital_few_cutoff else ""
    print(f"{row.rank:4d} {row.item_id:4d} {row.magnitude:10.4f} {row.cumulative:10.4f} "
          f"{row.cumulative_pct:8.3f}  {row.label}{marker}")

print(f"\nthe first {table.vital_few_cutoff} of {len(table.rows)} items reach "
      f"{table.threshold_pct:.0f}% of total dissatisfaction")

tree = load_xyz_fishbone()
print(f"\neffect: {tree.effect}")
sums = branch_magnitudes(tree, contributions)
for branch in tree.branches:
    print(f"  {branch.name}  (sum {sums[branch.name]:.3f})")
    for cause in branch.causes:
        print(f"    - {cause.text}")
        for child in cause.children:
            print(f"        - {child.text}")
