"""
A degree eight hypersurface in weighted projective space
========================================================

The ambient space P(1,1,1,2,2,1) has a twisted sector at 1/2. After the
blow-up, restriction from the partial compactification fails to be
injective on that sector, and the kernel is spanned by one class.
"""

from fractions import Fraction

from toric_transitions.cohomology import chen_ruan, induced_map
from toric_transitions.report import preset
from toric_transitions.transition import (
    base_generators,
    blowup_presentation,
    check_conditions,
    total_space_presentations,
)

doc = preset("weighted-p11122-8")
spec = doc.transition_spec()

# sectors of the ambient space and their rings
for sector, ring in chen_ruan(doc.presentation(), base_generators(1)):
    print("sector", [str(x) for x in sector.nu], "relations", ring.describe()["relations"])

# the partial compactification and its integral sectors
hat = blowup_presentation(spec)
T, T_bar, _ = total_space_presentations(spec, hat)
res = check_conditions(T, T_bar, hat.e_index, hat.f_index)
for s in res.sectors:
    print("T_bar sector", [str(x) for x in s.nu], "relations", s.ring_bar.describe()["relations"])

# condition (1) fails on the half sector
print("condition (1):", res.c1.ok, res.c1.witness)
half = next(s for s in res.sectors if s.nu == (Fraction(1, 2), 0))
kernel = induced_map(half.ring_bar, half.ring_base, lambda v: tuple(v[:1])).kernel_on(half.uf_image)
print("kernel of restriction:", [str(c) for c in kernel.all_basis_classes()])
