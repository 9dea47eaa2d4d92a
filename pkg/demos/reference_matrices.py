"""Reference matrices, checked as data.

The figure-8 rows as given pair to -2 on the (m, l) block; normalization
flips l and lands on 2J.  The 10 x 10 Whitehead link matrix is only checked
under omega, since no triangulation for it is bundled.
"""

import json
from pathlib import Path

from oscbasis.curves import normalize_rows, standard_gram
from oscbasis.symplectic import HolonomyVector, incidence_to_nz, omega, omega_nz

reference_sy = [(0, -1, 1, 0), (-2, 0, 2, 0), (0, 0, -2, 0), (1, -1, 1, -1)]
rows = [HolonomyVector.from_nz(r) for r in reference_sy]
print("reference figure-8 Gram:")
for a in rows:
    print("  ", [omega(a, b) for b in rows])

log = []
fixed = normalize_rows(rows, 1, omega, log)
print("moves:", log)
print("after:", [r.nz for r in fixed])
print("Gram is 2J:", [[omega(a, b) for b in fixed] for a in fixed] == standard_gram(2))

# the reference l row disagrees in sign with the reference l incidence vector
print("l from its incidence vector:", incidence_to_nz((0, -2, -2, 0, 2, 2)), "reference:", reference_sy[1])

data = Path(__file__).resolve().parent.parent / "tests" / "data" / "whitehead_sy.json"
doc = json.loads(data.read_text())
M = dict(zip(doc["rows"], doc["matrix"]))
print("\nWhitehead link, omega on reference rows:")
for x, y in [("m0", "l0"), ("m1", "l1"), ("Gamma_inf", "C_inf"), ("Gamma_2/1", "C_2/1"),
             ("Gamma_3/1", "C_3/1"), ("Gamma_inf", "C_2/1"), ("Gamma_inf", "C_3/1"),
             ("Gamma_inf", "Gamma_2/1")]:
    print(f"  omega({x}, {y}) = {omega_nz(M[x], M[y])}")
