"""Virtual dimensions of the four moduli flavors and the splitting ledger.

The relative orbifold formula deducts degree shifts and floor brackets of the
contact orders; with trivial monodromy and integer contacts it collapses to
the smooth relative formula, and across a smooth splitting the fiber-product
dimension ledger balances to defect zero.
"""

from fractions import Fraction as F

from orbidegen.contact import ContactOrder
from orbidegen.dimension import ModuliSpec, RelTerm, splitting_ledger, virdim

absolute = ModuliSpec("absolute-smooth", n=2, genus=0, c1A=F(0))
print("absolute smooth, n=2, g=0, c1(A)=0:", virdim(absolute))

orbifold = ModuliSpec(
    "relative-orbifold", n=2, genus=0, c1A=F(3),
    shifts=(F(1, 2),),
    rel=(RelTerm(ContactOrder(3, 2), shift=F(1, 2), monodromy="h"),),
    zA=F(3, 2))
print("relative orbifold with one half-shifted insertion and contact 3/2:",
      virdim(orbifold))

smooth = ModuliSpec(
    "relative-smooth", n=2, genus=0, c1A=F(3),
    shifts=(F(0),),
    rel=(RelTerm(ContactOrder(2)),),
    zA=F(2))
print("smooth specialization (trivial shifts, integer contact):", virdim(smooth))

print("\nsplitting ledger across one smooth node:")
plus = ModuliSpec("relative-smooth", n=2, genus=0, c1A=F(3),
                  rel=(RelTerm(ContactOrder(1)),), zA=F(1))
minus = ModuliSpec("relative-smooth", n=2, genus=1, c1A=F(1),
                   rel=(RelTerm(ContactOrder(1)),), zA=F(1))
total = ModuliSpec("absolute-smooth", n=2, genus=1, c1A=plus.c1A + minus.c1A - 2)
ledger = splitting_ledger(plus, minus, (F(1),), total)
print(f"  d_plus={ledger.d_plus}  d_minus={ledger.d_minus}  "
      f"constraint={ledger.constraint_dims}  d_total={ledger.d_total}")
print(f"  defect = {ledger.defect}")
