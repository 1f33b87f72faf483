"""Run the full battery of checks and show what a failure looks like.

The report lists each check with its statistics. Flipping one bit of G_AA
breaks the matrix identities, and the failing checks name the offending
row and column together with the points they index.
"""

import json

from polarinc import QuadraticSpace, build_bundle, make_field, run_all
from polarinc.incidence import IncidenceBundle

space = QuadraticSpace.from_preset(make_field(5), "paper-nonsquare")
bundle = build_bundle(space)
report = run_all(space, bundle)
print(report.to_text())

broken: IncidenceBundle = bundle.replace_G_AA(bundle.G_AA.with_flipped(0, 1))
bad = run_all(space, broken)
print("overall:", "pass" if bad.overall else "fail")
for check in bad.failed():
    print(f"{check.name}: {json.dumps(check.witness)}")
