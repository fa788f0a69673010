"""
Blowing up a plane inside projective four-space
================================================

Builds the blow-up of a coordinate plane in P^4, checks crepancy of the
anticanonical divisor, and decides both narrow-cohomology conditions for
the total spaces of the associated line bundles.
"""

import warnings

from toric_transitions.fan import build_fan
from toric_transitions.report import preset
from toric_transitions.transition import (
    blowup_presentation,
    check_conditions,
    crepancy_check,
    total_space_presentations,
    verify_blowup_fan,
    wall_chart,
)

spec = preset("quintic-conifold").transition_spec()

# hat characters and the exactly chosen epsilon
hat = blowup_presentation(spec)
print("hat characters:", hat.characters)
print("epsilon:", hat.epsilon, "critical values:", hat.critical_values)

# the fan at omega_plus: two untouched cones and six new ones
fan = build_fan(hat.blowup(1))
print("maximal cones:", len(fan.maximal_cones), verify_blowup_fan(spec, hat)["counts"])

# pullback of K + D equals K + D tilde
crep = crepancy_check(spec, hat)
print("crepant:", crep.ok, "D tilde class:", crep.certificate["D_tilde"])

# total spaces and the wall between their chambers
T, T_bar, T_tilde = total_space_presentations(spec, hat)
chart = wall_chart(T_tilde.characters, hat.omega_plus, hat.omega_minus, (0, -1))
print("wall normal:", chart.e, "pairings:", chart.pairings, "constant:", chart.frak_c)

# the blow-up wall alone is discrepant and says so
with warnings.catch_warnings(record=True) as caught:
    warnings.simplefilter("always")
    wall_chart(hat.characters, hat.omega_plus, hat.omega_minus)
print("blow-up wall warning:", caught[0].message if caught else None)

# conditions (1) and (2)
res = check_conditions(T, T_bar, hat.e_index, hat.f_index)
print("condition (1):", res.c1.ok)
print("condition (2):", res.c2.ok, res.c2.witness)
