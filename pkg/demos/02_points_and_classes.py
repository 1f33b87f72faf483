"""Points of P^3(F_q) split by the value of a diagonal quadratic form.

The two four-dimensional presets differ only in the last coefficient. When
it makes the discriminant a square, the quadric carries lines and has
(q+1)^2 points; otherwise it has q^2+1 points and no lines.
"""

from polarinc import QuadraticSpace, make_field
from polarinc.projgeom import class_counts, perp_profile

for q in (3, 5, 7):
    F = make_field(q)
    for preset in ("paper-square", "paper-nonsquare"):
        space = QuadraticSpace.from_preset(F, preset)
        iso, sq, nsq = class_counts(space)
        print(f"q={q:<2} {preset:<16} diag={space.diag} points={space.num_points:<4} "
              f"isotropic={iso:<3} square={sq:<3} nonsquare={nsq}")

# every point's orthogonal hyperplane has a fixed isotropic/anisotropic split
space = QuadraticSpace.from_preset(make_field(5), "paper-square")
seen = {}
for k, P in enumerate(space.points):
    kind = "isotropic" if space.q_values[k] == 0 else "anisotropic"
    seen.setdefault(kind, set()).add(tuple(perp_profile(space, P)))
print()
for kind, profiles in seen.items():
    print(f"q=5 square preset, {kind} points: hyperplane (iso, aniso) = {sorted(profiles)}")
