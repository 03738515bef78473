"""Gap analysis on the bundled XYZ case study.

Expectation and perception means are compared item by item (gap =
perception - expectation), averaged per dimension, and weighted by the
customers' 100-point importance allocation.  The weighted dimension
scores sum to the headline satisfaction score, about -25 for this shop.
"""

from satmetric import classify_satisfaction, compute_gap_report
from satmetric.xyz import (
    expectation_descriptives,
    perception_descriptives,
    xyz_instrument,
    xyz_weights,
)

instrument = xyz_instrument()
weights = xyz_weights()
report = compute_gap_report(expectation_descriptives(), perception_descriptives(),
                            weights, instrument)

print(f"{'item':4s} {'expectation':>12s} {'perception':>12s} {'gap':>12s}  verdict")
for gap in report.item_gaps:
    print(f"{gap.item_id:4d} {gap.expectation_mean:12.6f} {gap.perception_mean:12.6f} "
          f"{gap.gap:12.6f}  {classify_satisfaction(gap.gap).value}")

print(f"\n{'dimension':15s} {'importance':>11s} {'unweighted':>12s} {'weighted':>12s}")
for score in report.dimension_scores:
    print(f"{score.dimension:15s} {score.importance:11.6f} {score.unweighted:12.6f} "
          f"{score.weighted:12.6f}")

print(f"\noverall weighted sum:        {report.overall_weighted_sum:.6f}")
print(f"overall weighted mean:       {report.overall_weighted_mean:.6f}")
print(f"unweighted mean of scores:   {report.unweighted_mean_of_dimensions:.6f}")
print(f"\nrounded headline score: {round(report.overall_weighted_sum)}")
