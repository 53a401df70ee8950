"""Term expansion of a degeneration: splittings, dual-basis insertions,
coefficients.

Loads the shipped smooth scenario, lists its admissible splittings, expands
the term sum with coefficients l(Gamma) * |Aut|, and audits the plus/minus
symmetry.
"""

from pathlib import Path

from orbidegen.contact import ContactOrder
from orbidegen.expand import (
    enumerate_splittings,
    expand,
    gluing_bundle_report,
    gluing_degrees,
    side_swap,
    term_record,
)
from orbidegen.io import load_document

DATA = Path(__file__).resolve().parent / "data"
doc = load_document((DATA / "smooth1.json").read_text())
homology = doc.homology["line"]
basis = doc.basis["bz3"]

print("gluing degrees for contact orders (2, 3):",
      gluing_degrees([ContactOrder(2), ContactOrder(3)]))
print("gluing bundle normalization:",
      gluing_bundle_report([ContactOrder(2), ContactOrder(3)]))

for name in ("smooth_one_node", "dup_insertion"):
    scenario = doc.scenarios[name]
    matchings = enumerate_splittings(scenario, homology)
    print(f"\nscenario {name}: {len(matchings)} splitting(s)")
    for m in matchings:
        contacts = ",".join(str(c) for c in m.contacts)
        print(f"  nodes ({contacts})  plus vertices "
              f"{len(m.gamma_plus.vertices)}  minus vertices "
              f"{len(m.gamma_minus.vertices)}")
    terms = expand(scenario, basis, homology)
    print(f"  {len(terms)} term(s); first few records:")
    for t in terms[:4]:
        print(f"    {term_record(t)}")
    swapped = side_swap(side_swap(terms, basis), basis)
    print("  side_swap twice is the identity:",
          [term_record(t) for t in swapped] == [term_record(t) for t in terms])
