"""
Scanning hypersurfaces in projective space
==========================================

For degree d hypersurfaces in P^{m-1} degenerating along a codimension k
coordinate subspace, tabulates the nef flag of the blown-up divisor and
both narrow-cohomology conditions.
"""

from toric_transitions.fan import build_fan
from toric_transitions.report import preset
from toric_transitions.transition import (
    blowup_presentation,
    check_conditions,
    support_function,
    total_space_presentations,
)

print(f"{'m':>2} {'k':>2} {'d':>2}  nef  (1)  (2)")
for m in (4, 5, 6):
    for k in range(2, m):
        for d in range(k - 1, m + 1):
            if d < 1:
                continue
            spec = preset("proj-hypersurface", m=m, k=k, d=d).transition_spec()
            hat = blowup_presentation(spec)
            X = hat.blowup(1)
            nef = support_function(build_fan(X), spec.d_tilde_coefficients()).nef
            T, T_bar, _ = total_space_presentations(spec, hat)
            res = check_conditions(T, T_bar, hat.e_index, hat.f_index)
            print(f"{m:>2} {k:>2} {d:>2}  {'yes' if nef else 'no':>3}  {'yes' if res.c1.ok else 'no':>3}  {'yes' if res.c2.ok else 'no':>3}")
