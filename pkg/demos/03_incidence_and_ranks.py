"""Orthogonality incidence matrices and their ranks over GF(2).

G_II is the incidence among isotropic points and G_AA among anisotropic
points. Both turn out to be invertible mod 2 in dimension four. In
dimension three G_AA misses full rank by exactly one.
"""

import time

from polarinc import QuadraticSpace, build_bundle, make_field, rank2

print("dimension 4")
for q in (3, 5, 7, 9, 11):
    for preset in ("paper-square", "paper-nonsquare"):
        space = QuadraticSpace.from_preset(make_field(q), preset)
        start = time.perf_counter()
        b = build_bundle(space)
        r_ii, r_aa = rank2(b.G_II), rank2(b.G_AA)
        dt = time.perf_counter() - start
        print(f"  q={q:<2} {preset:<16} G_II {r_ii}/{b.G_II.rows}  G_AA {r_aa}/{b.G_AA.rows}  ({dt:.2f} s)")

print("dimension 3")
for q in (3, 5, 7, 9):
    b = build_bundle(QuadraticSpace.from_preset(make_field(q), "dim3"))
    print(f"  q={q:<2} G_II {rank2(b.G_II)}/{b.G_II.rows}  G_AA {rank2(b.G_AA)}/{b.G_AA.rows}")
