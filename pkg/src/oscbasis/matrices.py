"""Incidence, Neumann-Zagier and SY matrices, and the exact log-gluing solve.

Shape parameters are stored as rational coefficients of i*pi.  For
tetrahedron i the incidence columns are (a_i, b_i, c_i), matched to shapes
(Z_i, Z_i', Z_i''); the NZ columns are (Z_i, Z_i') after eliminating
Z_i'' = i*pi - Z_i - Z_i'.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction

from .curves import Basis
from .intlinalg import block_j, identity, matmul, rational_rank, transpose
from .symplectic import holonomy, omega_nz


class GramIdentityError(ValueError):
    pass


@dataclass(frozen=True)
class SymplecticSystem:
    row_order: tuple[str, ...]
    roles: tuple[str, ...]  # "m", "l", "Gamma" or "C" per row
    In: tuple[tuple[int, ...], ...]
    NZ: tuple[tuple[int, ...], ...]
    C: tuple[int, ...]  # 2 per edge row, 0 otherwise
    C_flat: tuple[int, ...]
    C_bar: tuple[int, ...]
    J: tuple[tuple[int, ...], ...]
    gram: tuple[tuple[int, ...], ...]  # SY J SY^T
    # every edge of the triangulation, including the spanning ones left out of SY
    edge_incidence: dict = field(default_factory=dict)
    spanning_edges: tuple[int, ...] = ()

    @property
    def SY(self) -> tuple[tuple[int, ...], ...]:
        return self.NZ

    @property
    def n(self) -> int:
        return len(self.NZ) // 2

    @property
    def gram_certified(self) -> bool:
        return [list(r) for r in self.gram] == matmul(identity(2 * self.n, 2), self.J)

    def dual_matrix(self) -> list[list[int]]:
        """-J SY^T J, the inverse of SY up to the factor 2."""
        J = [list(r) for r in self.J]
        M = matmul(matmul(J, transpose(self.SY)), J)
        return [[-x for x in row] for row in M]

    def in_columns(self) -> list[str]:
        return [f"{x}{i}" for i in range(self.n) for x in "abc"]

    def nz_columns(self) -> list[str]:
        return [c for i in range(self.n) for c in (f"z{i}", f"z{i}'")]


def _nz(inc: tuple[int, ...]) -> tuple[int, ...]:
    out: list = []
    for i in range(len(inc) // 3):
        a, b, c = inc[3 * i:3 * i + 3]
        out += [a - c, b - c]
    return tuple(out)


def _c_sum(inc) -> int:
    return sum(inc[2::3])


def assemble(basis: Basis) -> SymplecticSystem:
    track = basis.track
    n = track.T.n
    rows = basis.rows
    In = tuple(holonomy(track, r.weights).incidence for r in rows)
    NZ = tuple(_nz(v) for v in In)
    C = tuple(2 if r.role == "C" else 0 for r in rows)
    C_flat = tuple(c - _c_sum(v) for c, v in zip(C, In))
    C_bar = tuple(0 if r.role == "Gamma" else c for r, c in zip(rows, C_flat))
    J = block_j(n)
    gram = matmul(matmul([list(r) for r in NZ], J), transpose(NZ))
    if gram != matmul(identity(2 * n, 2), J):
        raise GramIdentityError("SY J SY^T is not 2 J")
    edges = {e: holonomy(track, c.weights).incidence for e, c in sorted(basis.edge_curves.items())}
    return SymplecticSystem(
        row_order=tuple(r.name for r in rows),
        roles=tuple(r.role for r in rows),
        In=In, NZ=NZ, C=C, C_flat=C_flat, C_bar=C_bar,
        J=tuple(tuple(r) for r in J),
        gram=tuple(tuple(r) for r in gram),
        edge_incidence=edges,
        spanning_edges=basis.context.spanning,
    )


@dataclass(frozen=True)
class ExactSolution:
    """Z = (Z_0, Z_0', Z_1, Z_1', ...) as coefficients of i*pi."""

    Z: tuple[Fraction, ...]
    system: SymplecticSystem

    @property
    def shapes(self) -> list[tuple[Fraction, Fraction, Fraction]]:
        """(Z, Z', Z'') per tetrahedron, using Z + Z' + Z'' = i*pi."""
        out = []
        for i in range(len(self.Z) // 2):
            z, zp = self.Z[2 * i], self.Z[2 * i + 1]
            out.append((z, zp, 1 - z - zp))
        return out

    def full(self) -> tuple[Fraction, ...]:
        return tuple(x for s in self.shapes for x in s)


def solve(system: SymplecticSystem) -> ExactSolution:
    """Z = (1/2)(-J SY^T J) C_bar, checked by SY Z = C_bar."""
    if not system.gram_certified:
        raise GramIdentityError("SY J SY^T is not 2 J")
    D = system.dual_matrix()
    Z = tuple(Fraction(sum(d * c for d, c in zip(row, system.C_bar)), 2) for row in D)
    back = tuple(sum(s * z for s, z in zip(row, Z)) for row in system.SY)
    if back != tuple(Fraction(c) for c in system.C_bar):
        raise GramIdentityError("SY Z does not reproduce C_bar")
    return ExactSolution(Z, system)


@dataclass(frozen=True)
class ResidualRow:
    name: str
    kind: str  # "edge" or "cusp"
    in_sy: bool
    value: Fraction
    target: int

    @property
    def residual(self) -> Fraction:
        return self.value - self.target


def verify_solution(sol: ExactSolution) -> list[ResidualRow]:
    """Evaluate every edge row (spanning edges included) and every cusp row at the solution."""
    system = sol.system
    full = sol.full()

    def value(inc):
        return sum(x * z for x, z in zip(inc, full))

    out = []
    in_sy = {name for name, role in zip(system.row_order, system.roles) if role == "C"}
    for e, inc in system.edge_incidence.items():
        out.append(ResidualRow(f"C{e}", "edge", f"C{e}" in in_sy, value(inc), 2))
    for name, role, inc in zip(system.row_order, system.roles, system.In):
        if role in ("m", "l"):
            out.append(ResidualRow(name, "cusp", True, value(inc), 0))
    return out


def edge_rows_orthogonal(system: SymplecticSystem) -> bool:
    rows = [_nz(v) for v in system.edge_incidence.values()]
    return all(omega_nz(a, b) == 0 for a in rows for b in rows)


def rank_without_and_with_gamma(system: SymplecticSystem) -> tuple[int, int]:
    """Rank of the edge+cusp NZ rows, and of those rows plus the Gamma rows."""
    base = [list(_nz(v)) for v in system.edge_incidence.values()]
    base += [list(r) for r, role in zip(system.NZ, system.roles) if role in ("m", "l")]
    gammas = [list(r) for r, role in zip(system.NZ, system.roles) if role == "Gamma"]
    return rational_rank(base), rational_rank(base + gammas)


# -- output ---------------------------------------------------------------

def fraction_json(x: Fraction) -> dict:
    x = Fraction(x)
    return {"num": x.numerator, "den": x.denominator}


def matrix_csv(rows, row_names, columns) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["row"] + list(columns))
    for name, row in zip(row_names, rows):
        w.writerow([name] + list(row))
    return buf.getvalue()


def system_json(system: SymplecticSystem) -> dict:
    return {
        "rows": list(system.row_order),
        "roles": list(system.roles),
        "incidence": {"columns": system.in_columns(), "matrix": [list(r) for r in system.In]},
        "nz": {"columns": system.nz_columns(), "matrix": [list(r) for r in system.NZ]},
        "C": list(system.C),
        "C_flat": list(system.C_flat),
        "C_bar": list(system.C_bar),
        "J": [list(r) for r in system.J],
        "gram": [list(r) for r in system.gram],
        "gram_certified": system.gram_certified,
        "edge_incidence": {f"C{e}": list(v) for e, v in system.edge_incidence.items()},
        "spanning_edges": list(system.spanning_edges),
    }


def solution_json(sol: ExactSolution) -> dict:
    report = verify_solution(sol)
    return {
        "unit": "i*pi",
        "Z": [fraction_json(z) for z in sol.Z],
        "shapes": [{"Z": fraction_json(a), "Z'": fraction_json(b), "Z''": fraction_json(c)}
                   for a, b, c in sol.shapes],
        "residuals": [{"row": r.name, "kind": r.kind, "in_sy": r.in_sy,
                       "value": fraction_json(r.value), "target": r.target,
                       "residual": fraction_json(r.residual)} for r in report],
    }
