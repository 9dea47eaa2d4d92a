"""Command-line front end: info, track, basis, nz, sy, solve, check, svg."""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import tempfile
from pathlib import Path

from .curves import Basis, CurveError, build_basis, standard_gram
from .matrices import (GramIdentityError, assemble, edge_rows_orthogonal, matrix_csv,
                       rank_without_and_with_gamma, solution_json, solve, system_json)
from .symplectic import holonomy, omega, pairing, pairing_facewise
from .svg import end_svgs
from .traintrack import TrainTrack, WeightVector
from .triangulation import IdealTriangulation, TriangulationError, load_triangulation

EXIT_OK, EXIT_INVALID, EXIT_INTERNAL = 0, 1, 2
CHECK_PAIRS = 64
CHECK_RANGE = 3


class CheckFailed(RuntimeError):
    pass


def write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


# -- payloads -----------------------------------------------------------

def info_payload(T: IdealTriangulation) -> dict:
    genera = [e.genus for e in T.ends]
    lhs, rhs = 2 * T.n, 2 * len(T.edge_classes) - 2 * len(T.ends) + 2 * sum(genera)
    return {
        "tetrahedra": T.n,
        "edges": len(T.edge_classes),
        "ends": len(T.ends),
        "genera": genera,
        "edge_degrees": [e.degree for e in T.edge_classes],
        "end_triangles": [len(e.triangles) for e in T.ends],
        "euler_identity": {"2n": lhs, "2n_E - 2n_c + 2g": rhs, "holds": lhs == rhs},
        "labelling": T.labelling.convention,
    }


def basis_payload(basis: Basis) -> dict:
    track = basis.track
    rows = []
    for r in basis.rows:
        h = holonomy(track, r.weights)
        rows.append({
            "name": r.name,
            "role": r.role,
            "incidence": list(h.incidence),
            "nz": list(h.nz),
            "weights": [{"branch": track.index(b), "weight": x} for b, x in r.weights.support().items()],
            "walks": [{"coefficient": c, "steps": w.to_json()} for c, w in r.terms],
        })
    ctx = basis.context
    return {
        "rows": rows,
        "context": {
            "tree": list(ctx.tree),
            "colour": list(ctx.colour),
            "E0": ctx.e0,
            "long_rectangles": {str(e): [t, f, list(ij)] for e, (t, f, ij) in sorted(ctx.long_rect.items())},
            "remaining": list(ctx.remaining),
        },
        "normalization_moves": [list(m) for m in basis.moves],
        "relaxed_legs": basis.relaxed_legs,
    }


def nz_payload(system) -> tuple[dict, str]:
    """Classical NZ matrix: every edge row, then the cusp rows."""
    names, inc = [], []
    for e, v in system.edge_incidence.items():
        names.append(f"C{e}")
        inc.append(list(v))
    for name, role, v in zip(system.row_order, system.roles, system.In):
        if role in ("m", "l"):
            names.append(name)
            inc.append(list(v))
    nz = [[r[3 * i + k] - r[3 * i + 2] for i in range(system.n) for k in (0, 1)] for r in inc]
    doc = {
        "rows": names,
        "incidence": {"columns": system.in_columns(), "matrix": inc},
        "nz": {"columns": system.nz_columns(), "matrix": nz},
    }
    return doc, matrix_csv(nz, names, system.nz_columns())


def _random_combo(rng: random.Random, track: TrainTrack, kernel) -> WeightVector:
    w = WeightVector.zero(track)
    for k in kernel:
        c = rng.randint(-CHECK_RANGE, CHECK_RANGE)
        if c:
            w = w + c * k
    return w


def run_checks(T: IdealTriangulation, seed: int) -> list[tuple[str, bool, str]]:
    """Property suites; each result is (name, passed, detail)."""
    out = []
    track = TrainTrack(T)
    kernel = track.kernel_basis
    rng = random.Random(seed)
    pairs = [(_random_combo(rng, track, kernel), _random_combo(rng, track, kernel))
             for _ in range(CHECK_PAIRS)]
    bad = [i for i, (z, w) in enumerate(pairs)
           if omega(holonomy(track, z), holonomy(track, w)) != pairing(track, z, w)]
    out.append(("pairing-vs-holonomy", not bad, f"{CHECK_PAIRS - len(bad)}/{CHECK_PAIRS} pairs"))
    bad = [i for i, (z, w) in enumerate(pairs)
           if pairing(track, z, w) != pairing_facewise(track, z, w)]
    out.append(("facewise-oracle", not bad, f"{CHECK_PAIRS - len(bad)}/{CHECK_PAIRS} pairs"))
    osc = all(track.is_oscillating(k) for k in kernel)
    out.append(("kernel-oscillating", osc, f"kernel rank {len(kernel)}"))
    info = info_payload(T)
    out.append(("euler-identity", info["euler_identity"]["holds"],
                f"2n={info['euler_identity']['2n']}"))
    try:
        basis = build_basis(track)
    except CurveError as exc:
        out.append(("basis", False, str(exc)))
        return out
    rows = basis.rows
    size_ok = len(rows) == 2 * T.n
    osc_ok = all(track.is_oscillating(r.weights) for r in rows)
    gram = [[pairing(track, a.weights, b.weights) for b in rows] for a in rows]
    hs = [holonomy(track, r.weights) for r in rows]
    ogram = [[omega(a, b) for b in hs] for a in hs]
    ok = size_ok and osc_ok and gram == ogram == standard_gram(T.n)
    out.append(("basis", ok, f"{len(rows)} rows, relaxed legs {basis.relaxed_legs}"))
    try:
        system = assemble(basis)
        sol = solve(system)
    except GramIdentityError as exc:
        out.append(("solver", False, str(exc)))
        return out
    n2 = 2 * T.n
    D = system.dual_matrix()
    prod = [[sum(D[i][k] * system.SY[k][j] for k in range(n2)) for j in range(n2)] for i in range(n2)]
    ident = prod == [[2 if i == j else 0 for j in range(n2)] for i in range(n2)]
    half = all((2 * z).denominator == 1 for z in sol.Z)
    out.append(("solver", ident and half, "(-J SY^T J) SY = 2 Id, SY Z = C_bar, 2Z integral"))
    out.append(("edge-orthogonality", edge_rows_orthogonal(system), "edge NZ rows"))
    lo, hi = rank_without_and_with_gamma(system)
    out.append(("gamma-completes-rank", hi == n2, f"rank {lo} -> {hi}"))
    return out


# -- command dispatch -------------------------------------------------------

def _emit(args, files: dict[str, str], primary: str) -> None:
    """Write files under --out, or print the primary one."""
    if args.out:
        out = Path(args.out)
        for name, text in files.items():
            write_atomic(out / name, text)
            if args.verbose:
                print(f"wrote {out / name}", file=sys.stderr)
    else:
        sys.stdout.write(files[primary])


def cmd_info(args, T):
    doc = info_payload(T)
    _emit(args, {"info.json": dumps(doc)}, "info.json")
    return EXIT_OK


def cmd_track(args, T):
    _emit(args, {"track.json": dumps(TrainTrack(T).to_json())}, "track.json")
    return EXIT_OK


def cmd_basis(args, T):
    basis = build_basis(TrainTrack(T))
    _emit(args, {"basis.json": dumps(basis_payload(basis))}, "basis.json")
    return EXIT_OK


def cmd_nz(args, T):
    system = assemble(build_basis(TrainTrack(T)))
    doc, csv_text = nz_payload(system)
    files = {"nz.json": dumps(doc), "nz.csv": csv_text}
    _emit(args, files, "nz.csv" if args.format == "csv" else "nz.json")
    return EXIT_OK


def cmd_sy(args, T):
    system = assemble(build_basis(TrainTrack(T)))
    files = {
        "sy.json": dumps(system_json(system)),
        "sy.csv": matrix_csv(system.SY, system.row_order, system.nz_columns()),
        "incidence.csv": matrix_csv(system.In, system.row_order, system.in_columns()),
    }
    _emit(args, files, "sy.csv" if args.format == "csv" else "sy.json")
    return EXIT_OK


def cmd_solve(args, T):
    sol = solve(assemble(build_basis(TrainTrack(T))))
    _emit(args, {"solution.json": dumps(solution_json(sol))}, "solution.json")
    return EXIT_OK


def cmd_check(args, T):
    results = run_checks(T, args.seed)
    lines = [f"{'PASS' if ok else 'FAIL'} {name}: {detail}" for name, ok, detail in results]
    failed = sum(not ok for _, ok, _ in results)
    lines.append(f"{len(results) - failed}/{len(results)} suites passed (seed {args.seed})")
    text = "\n".join(lines) + "\n"
    if args.format == "json":
        doc = {"seed": args.seed, "suites": [{"name": n, "passed": ok, "detail": d} for n, ok, d in results]}
        _emit(args, {"check.json": dumps(doc)}, "check.json")
    else:
        _emit(args, {"check.txt": text}, "check.txt")
    if args.out:
        sys.stdout.write(text)
    if failed:
        raise CheckFailed(f"{failed} property suite(s) failed")
    return EXIT_OK


def cmd_svg(args, T):
    basis = build_basis(TrainTrack(T))
    svgs = end_svgs(basis)
    files = {f"end{k}.svg": text for k, text in enumerate(svgs)}
    if args.out:
        _emit(args, files, "end0.svg")
    else:
        sys.stdout.write(svgs[0])
    return EXIT_OK


COMMANDS = {
    "info": (cmd_info, "counts of tetrahedra, edges, ends, genera and the Euler identity"),
    "track": (cmd_track, "branches and vertices of the train track as JSON"),
    "basis": (cmd_basis, "symplectic basis curves (walks and weights) as JSON"),
    "nz": (cmd_nz, "incidence and Neumann-Zagier matrices of edge and cusp rows"),
    "sy": (cmd_sy, "the square SY matrix of the full basis"),
    "solve": (cmd_solve, "exact solution of SY Z = C_bar with residual report"),
    "check": (cmd_check, "property sweep with a pass/fail summary"),
    "svg": (cmd_svg, "one SVG per end with the basis curves drawn on it"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="oscbasis", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    for name, (_, helptext) in COMMANDS.items():
        p = sub.add_parser(name, help=helptext)
        p.add_argument("input_path", nargs="?", help="triangulation file (same as --input)")
        p.add_argument("--input", dest="input", help="triangulation file (.json for the JSON form)")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--out", help="directory for output files; stdout when omitted")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--verbose", action="store_true")
        p.add_argument("--json-errors", action="store_true",
                       help="report errors as a JSON object on stderr")
    return parser


def _fail(args, code: int, doc: dict) -> int:
    if getattr(args, "json_errors", False):
        sys.stderr.write(json.dumps(doc, sort_keys=True) + "\n")
    else:
        where = ", ".join(f"{k} {doc[k]}" for k in ("line", "tet", "face") if doc.get(k) is not None)
        sys.stderr.write(f"error: {doc['error']}: {doc['message']}" + (f" ({where})" if where else "") + "\n")
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    path = args.input or args.input_path
    if not path:
        return _fail(args, EXIT_INVALID, {"error": "usage", "message": "no input file given"})
    try:
        T = load_triangulation(path)
    except OSError as exc:
        return _fail(args, EXIT_INVALID, {"error": "io", "message": str(exc)})
    except TriangulationError as exc:
        return _fail(args, EXIT_INVALID, exc.as_dict())
    handler = COMMANDS[args.command][0]
    try:
        return handler(args, T)
    except CheckFailed as exc:
        return _fail(args, EXIT_INTERNAL, {"error": "check failed", "message": str(exc)})
    except (CurveError, GramIdentityError, AssertionError) as exc:
        return _fail(args, EXIT_INTERNAL, {"error": "internal", "message": str(exc)})


if __name__ == "__main__":
    sys.exit(main())
