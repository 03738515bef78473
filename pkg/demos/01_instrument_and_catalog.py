"""Browse the built-in driver catalog and assemble a survey instrument.

The catalog carries 28 satisfaction drivers for computer-service shops,
each tagged with one of the five service-quality dimensions and a Kano
category.  A study rarely fields all 28; here we select the 17 items the
bundled XYZ case study used and look at the result.
"""

from satmetric import build_instrument, master_catalog, select_items, serialize_instrument
from satmetric.xyz import ITEM_KEYS

catalog = master_catalog()
print(f"catalog: {len(catalog)} items\n")

print(f"{'key':36s} {'dimension':15s} {'kano':12s} prompt")
for item in catalog:
    print(f"{item.source_key:36s} {item.dimension:15s} {item.kano.value:12s} {item.prompt}")

# Select the case-study subset; items are renumbered 1..17 in selection order.
instrument = select_items(catalog, ITEM_KEYS)
print(f"\nselected {instrument.n_items} items; per-dimension counts:")
for dimension, count in instrument.dimension_item_counts().items():
    print(f"  {dimension:15s} {count}")

# The definition document round-trips: this is the on-disk JSON shape.
doc = serialize_instrument(instrument)
assert build_instrument(doc) == instrument
print("\nfirst item of the definition document:")
print(" ", doc["items"][0])
