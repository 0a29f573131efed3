# Ideals, form ideals and congruence levels
