"""Kano-aware improvement priorities for the XYZ case.

A plain gap ranking treats every shortfall alike.  The Kano categories
change that: an unmet must-be hurts twice as much as an unmet performance
item under the default multipliers, and unmet delighters cost nothing.
Compare the default table with an "everything counts equally" override.
"""

from satmetric import item_gaps, prioritize
from satmetric.kano import parse_multiplier_spec
from satmetric.xyz import (
    expectation_descriptives,
    perception_descriptives,
    xyz_instrument,
    xyz_weights,
)

instrument = xyz_instrument()
weights = xyz_weights()
gaps = item_gaps(expectation_descriptives(), perception_descriptives())


def show(title, priorities):
    print(title)
    print(f"{'rank':4s} {'item':4s} {'category':12s} {'raw':>10s} {'x':>5s} {'score':>10s}")
    for p in priorities:
        if p.priority_score == 0:
            continue
        print(f"{p.rank:4d} {p.item_id:4d} {p.category.value:12s} "
              f"{p.raw_contribution:10.4f} {p.multiplier:5.2f} {p.priority_score:10.4f}")
    print()


show("default multipliers (must_be=2, performance=1, delighter=0, indifferent=0):",
     prioritize(gaps, weights, instrument))

flat = parse_multiplier_spec("must_be=1,performance=1,delighter=1,indifferent=1")
show("flat multipliers (pure weighted dissatisfaction):",
     prioritize(gaps, weights, instrument, flat))

personal_attention = instrument.item(12)
print(f"note: item 12 ({personal_attention.prompt!r}) is a delighter; its shortfall "
      "disappears from the default ranking but reappears under flat multipliers.")
