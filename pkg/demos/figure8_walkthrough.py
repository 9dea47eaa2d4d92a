"""Figure-eight knot complement, start to finish.

Loads the bundled two-tetrahedron gluing, builds the train track, checks the
pairing against the symplectic form on a few random curves, builds the
oscillating basis and solves the logarithmic gluing equations exactly.

    python demos/figure8_walkthrough.py [out_dir]
"""

import random
import sys
from pathlib import Path

from oscbasis import (assemble, build_basis, build_track, example_path, holonomy, kernel_basis,
                      load_triangulation, omega, pairing, solve, verify_solution)
from oscbasis.svg import end_svgs
from oscbasis.traintrack import WeightVector

T = load_triangulation(example_path("figure8"))
print(f"{T.n} tetrahedra, {len(T.edge_classes)} edges, {len(T.ends)} end(s), "
      f"genus {[e.genus for e in T.ends]}")
print("edge degrees:", [e.degree for e in T.edge_classes])

# The track has one branch per triangle corner, triangle exit and hexagon piece.
track = build_track(T)
K = kernel_basis(track)
print(f"{len(track.branches)} branches, kernel of the compatibility system has rank {len(K)}")

# Any integer combination of kernel vectors is an abstract oscillating curve.
rng = random.Random(0)


def random_curve():
    return sum((rng.randint(-2, 2) * k for k in K), WeightVector.zero(track))


for _ in range(3):
    z, w = random_curve(), random_curve()
    print("  pairing", pairing(track, z, w), "omega of holonomies",
          omega(holonomy(track, z), holonomy(track, w)))

# Basis: one boundary pair (m, l) on the torus cusp, then one dual pair (Gamma, C).
basis = build_basis(track)
for row, h in zip(basis.rows, basis.holonomies()):
    print(f"  {row.name:7s} incidence {h.incidence}  NZ {h.nz}")

system = assemble(basis)
print("SY:")
for name, r in zip(system.row_order, system.SY):
    print(f"  {name:7s} {r}")
print("Gram SY J SY^T == 2J:", system.gram_certified)

sol = solve(system)
print("Z (coefficients of i*pi):", [str(z) for z in sol.Z])
print("shapes (Z, Z', Z''):", [tuple(str(x) for x in s) for s in sol.shapes])
for r in verify_solution(sol):
    tag = "" if r.in_sy else "  (edge left out of SY)"
    print(f"  {r.name:7s} {r.kind:4s} value {r.value} target {r.target} residual {r.residual}{tag}")

if len(sys.argv) > 1:
    out = Path(sys.argv[1])
    out.mkdir(parents=True, exist_ok=True)
    for k, svg in enumerate(end_svgs(basis)):
        (out / f"end{k}.svg").write_text(svg)
    print("wrote", out)
