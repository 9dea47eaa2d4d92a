"""The oriented train track with stations carried by the cell structure.

Cells per tetrahedron ``t``: four boundary triangles ``(t, v)``, four hexagons
``(t, f)`` (truncated faces), a short rectangle between each triangle side and
the hexagon it borders, and a long rectangle along each edge of each hexagon.

Short side ``v`` of hexagon ``(t, f)`` sits next to triangle ``(t, v)`` and
carries the same label as the side of that triangle on face ``f``.

Branch kinds and orientations:

* ``TriangleCorner(t, v, x)`` runs around corner ``x`` of triangle (t,v), from
  side ``wx`` to side ``xy`` where ``(w, x, y)`` is cyclic-alphabetical.
* ``TriangleExit(t, v, k)`` leaves the triangle through side ``k`` into the
  short rectangle.
* ``HexCentral(t, f, k)`` runs from the 3-switch in short rectangle ``k`` to
  the 1-switch on the glued short side.
* ``HexLong(t, f, k, l)`` starts at short rectangle ``k`` and runs along the
  long rectangle towards ``l`` into the station.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple, Sequence

from .triangulation import LABELS, SIDES, IdealTriangulation


def _typed(cls):
    """Make a NamedTuple compare and hash by type as well as by value.

    Plain NamedTuples with the same field values are equal, so e.g. a triangle
    exit and a hexagon central branch with matching numbers would collide as
    dictionary keys.
    """

    def __eq__(self, other):
        return type(self) is type(other) and tuple.__eq__(self, other)

    def __ne__(self, other):
        return not __eq__(self, other)

    def __hash__(self):
        return hash((cls.__name__, tuple(self)))

    cls.__eq__, cls.__ne__, cls.__hash__ = __eq__, __ne__, __hash__
    return cls


@_typed
class TriangleCorner(NamedTuple):
    tet: int
    vertex: int
    label: str


@_typed
class TriangleExit(NamedTuple):
    tet: int
    vertex: int
    side: str


@_typed
class HexCentral(NamedTuple):
    tet: int
    face: int
    side: str


@_typed
class HexLong(NamedTuple):
    tet: int
    face: int
    start: str
    end: str


@_typed
class HexExit(NamedTuple):
    """Alias of the exit branch seen from the hexagon; resolves to a TriangleExit."""

    tet: int
    face: int
    side: str


BranchId = TriangleCorner | TriangleExit | HexCentral | HexLong


def cyclic_after(k: str, seq: Sequence[str]) -> tuple[str, str]:
    """The two elements following ``k`` cyclically in ``seq``."""
    i = seq.index(k)
    return seq[(i + 1) % 3], seq[(i + 2) % 3]


def corner_sides(x: str) -> tuple[str, str]:
    """(incoming side, outgoing side) of corner branch ``x``."""
    i = LABELS.index(x)
    return SIDES[(i - 1) % 3], SIDES[i]


@_typed
class TwoSwitch(NamedTuple):
    tet: int
    vertex: int
    side: str


@_typed
class ThreeSwitch(NamedTuple):
    tet: int
    face: int
    side: str


@_typed
class OneSwitch(NamedTuple):
    tet: int
    face: int
    side: str  # the lower of the two glued short sides names the switch


@_typed
class Station(NamedTuple):
    tet: int
    face: int
    edge: tuple[int, int]  # the lower of the two glued long-rectangle slots names it


@dataclass(frozen=True)
class TrackVertex:
    key: TwoSwitch | ThreeSwitch | OneSwitch | Station
    # (branch, eps) with eps = +1 if the branch points away from the vertex
    branches: tuple
    # stations only: per branch (side, end); side 0 is the hexagon named by
    # the key, end 0 is the end nearest the first short side of its hexagon
    placement: tuple = ()

    @property
    def kind(self) -> str:
        return type(self.key).__name__


class WeightVector:
    """Integer weights on the branches of one track (dense, immutable)."""

    __slots__ = ("track", "values")

    def __init__(self, track: "TrainTrack", values):
        self.track = track
        self.values = tuple(int(x) for x in values)
        if len(self.values) != len(track.branches):
            raise ValueError("weight vector length does not match the track")

    @classmethod
    def zero(cls, track):
        return cls(track, [0] * len(track.branches))

    @classmethod
    def from_map(cls, track, weights: dict):
        vals = [0] * len(track.branches)
        for b, x in weights.items():
            vals[track.index(b)] += x
        return cls(track, vals)

    def __getitem__(self, branch) -> int:
        return self.values[self.track.index(branch)]

    def _check(self, other):
        if not isinstance(other, WeightVector) or other.track is not self.track:
            raise TypeError("weight vectors live on different tracks")

    def __add__(self, other):
        self._check(other)
        return WeightVector(self.track, [x + y for x, y in zip(self.values, other.values)])

    def __sub__(self, other):
        self._check(other)
        return WeightVector(self.track, [x - y for x, y in zip(self.values, other.values)])

    def __neg__(self):
        return WeightVector(self.track, [-x for x in self.values])

    def __mul__(self, k: int):
        return WeightVector(self.track, [k * x for x in self.values])

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, WeightVector) and self.values == other.values

    def __hash__(self):
        return hash(self.values)

    def support(self) -> dict:
        return {self.track.branches[i]: x for i, x in enumerate(self.values) if x}

    def __repr__(self):
        return f"WeightVector({self.support()})"


class TrainTrack:
    """Branch and vertex catalogue for a triangulation with its abc-labelling."""

    def __init__(self, T: IdealTriangulation):
        self.T = T
        self.labelling = T.labelling
        branches: list = []
        for t in range(T.n):
            branches += [TriangleCorner(t, v, x) for v in range(4) for x in LABELS]
            branches += [TriangleExit(t, v, k) for v in range(4) for k in SIDES]
            branches += [HexCentral(t, f, k) for f in range(4) for k in SIDES]
            branches += [HexLong(t, f, k, l) for f in range(4) for k in SIDES for l in SIDES if k != l]
        self.branches = tuple(branches)
        self._index = {b: i for i, b in enumerate(branches)}
        self.vertices = tuple(self._build_vertices())

    # -- hexagon combinatorics ----------------------------------------

    def short_side_label(self, t: int, f: int, v: int) -> str:
        """Label of short side ``v`` of hexagon (t,f)."""
        return self.T.side_on_face(t, v, f)

    def short_side_vertex(self, t: int, f: int, k: str) -> int:
        for v in range(4):
            if v != f and self.short_side_label(t, f, v) == k:
                return v
        raise KeyError((t, f, k))

    def glued_short_side(self, t: int, f: int, k: str) -> tuple[int, int, str]:
        """The short side (t2, f2, k2) glued to short side k of hexagon (t,f)."""
        v = self.short_side_vertex(t, f, k)
        t2, p = self.T.gluings[t][f]
        return t2, p[f], self.short_side_label(t2, p[f], p[v])

    def long_edge_sides(self, t: int, f: int, i: int, j: int) -> tuple[str, str]:
        """Short-side labels at the two ends of the long rectangle along edge {i,j}."""
        return self.short_side_label(t, f, i), self.short_side_label(t, f, j)

    def long_rectangles(self):
        """All long rectangles (t, f, (i, j)), i < j, in id order."""
        for t in range(self.T.n):
            for f in range(4):
                for i in range(4):
                    for j in range(i + 1, 4):
                        if f not in (i, j):
                            yield (t, f, (i, j))

    # -- catalogue ------------------------------------------------------

    def index(self, branch) -> int:
        return self._index[self.canonical(branch)]

    def canonical(self, branch):
        if isinstance(branch, HexExit):
            v = self.short_side_vertex(branch.tet, branch.face, branch.side)
            return TriangleExit(branch.tet, v, branch.side)
        return branch

    def _build_vertices(self):
        T = self.T
        out = []
        for t in range(T.n):
            for v in range(4):
                for k in SIDES:
                    x, y = k[0], k[1]
                    out.append(TrackVertex(TwoSwitch(t, v, k), (
                        (TriangleExit(t, v, k), 1),
                        (TriangleCorner(t, v, x), -1),
                        (TriangleCorner(t, v, y), 1),
                    )))
        for t in range(T.n):
            for f in range(4):
                for k in SIDES:
                    l, m = cyclic_after(k, SIDES)
                    v = self.short_side_vertex(t, f, k)
                    out.append(TrackVertex(ThreeSwitch(t, f, k), (
                        (TriangleExit(t, v, k), -1),
                        (HexCentral(t, f, k), 1),
                        (HexLong(t, f, k, l), 1),
                        (HexLong(t, f, k, m), 1),
                    )))
        seen = set()
        for t in range(T.n):
            for f in range(4):
                for k in SIDES:
                    if (t, f, k) in seen:
                        continue
                    t2, f2, k2 = self.glued_short_side(t, f, k)
                    seen.update({(t, f, k), (t2, f2, k2)})
                    out.append(TrackVertex(OneSwitch(t, f, k), (
                        (HexCentral(t, f, k), -1), (HexCentral(t2, f2, k2), -1))))
        seen = set()
        for t, f, (i, j) in self.long_rectangles():
            if (t, f, (i, j)) in seen:
                continue
            t2, p = T.gluings[t][f]
            i2, j2 = p[i], p[j]
            f2 = p[f]
            other = (t2, f2, (min(i2, j2), max(i2, j2)))
            seen.update({(t, f, (i, j)), other})
            k, l = self.long_edge_sides(t, f, i, j)
            # order the first hexagon's pair cyclic-alphabetically
            if SIDES.index(l) != (SIDES.index(k) + 1) % 3:
                i, j, k, l = j, i, l, k
                i2, j2 = j2, i2
            k2 = self.short_side_label(t2, f2, i2)
            l2 = self.short_side_label(t2, f2, j2)
            branches = (
                (HexLong(t, f, k, l), -1), (HexLong(t, f, l, k), -1),
                (HexLong(t2, f2, k2, l2), -1), (HexLong(t2, f2, l2, k2), -1),
            )
            placement = ((0, 0), (0, 1), (1, 0), (1, 1))
            out.append(TrackVertex(Station(t, f, (min(i, j), max(i, j))), branches, placement))
        return out

    @cached_property
    def vertices_by_kind(self) -> dict:
        out = {"TwoSwitch": [], "ThreeSwitch": [], "OneSwitch": [], "Station": []}
        for vx in self.vertices:
            out[vx.kind].append(vx)
        return out

    @cached_property
    def endpoints(self) -> dict:
        """branch -> list of incident vertex indices (each branch has two)."""
        out = {b: [] for b in self.branches}
        for n, vx in enumerate(self.vertices):
            for b, _ in vx.branches:
                out[b].append(n)
        return out

    @cached_property
    def hexagon_pairs(self) -> tuple:
        """Glued hexagon pairs ((t,f), (t2,f2)), each listed once."""
        out = []
        seen = set()
        for t in range(self.T.n):
            for f in range(4):
                if (t, f) in seen:
                    continue
                t2, p = self.T.gluings[t][f]
                seen.update({(t, f), (t2, p[f])})
                out.append(((t, f), (t2, p[f])))
        return tuple(out)

    # -- compatibility system -----------------------------------------

    @cached_property
    def compatibility_rows(self) -> tuple:
        """Rows (kind, location, {branch index: coefficient}); each row must vanish."""
        T = self.T
        rows = []

        def row(kind, where, terms):
            coeffs: dict = {}
            for b, c in terms:
                i = self.index(b)
                coeffs[i] = coeffs.get(i, 0) + c
            rows.append((kind, where, {i: c for i, c in coeffs.items() if c}))

        for t in range(T.n):
            for v in range(4):
                for k in SIDES:
                    x, y = k[0], k[1]
                    # n(xy) = n(x) - n(y)
                    row("i", (t, v, k), [(TriangleExit(t, v, k), 1),
                                         (TriangleCorner(t, v, x), -1),
                                         (TriangleCorner(t, v, y), 1)])
        for t in range(T.n):
            for f in range(4):
                for k in SIDES:
                    l, m = cyclic_after(k, SIDES)
                    row("ii", (t, f, k), [(HexExit(t, f, k), 1), (HexCentral(t, f, k), -1),
                                          (HexLong(t, f, k, l), -1), (HexLong(t, f, k, m), -1)])
        for vx in self.vertices_by_kind["OneSwitch"]:
            (b1, _), (b2, _) = vx.branches
            row("iii", vx.key, [(b1, 1), (b2, 1)])
        for vx in self.vertices_by_kind["Station"]:
            (g, _), (d, _), (gh, _), (dh, _) = vx.branches
            row("iv", vx.key, [(g, 1), (gh, 1), (d, -1), (dh, -1)])
        return tuple(rows)

    def matrix(self) -> list[list[int]]:
        N = len(self.branches)
        out = []
        for _, _, coeffs in self.compatibility_rows:
            r = [0] * N
            for i, c in coeffs.items():
                r[i] = c
            out.append(r)
        return out

    @cached_property
    def kernel_basis(self) -> tuple[WeightVector, ...]:
        from .intlinalg import integer_kernel

        basis = integer_kernel(self.matrix(), len(self.branches))
        out = tuple(WeightVector(self, v) for v in basis)
        for w in out:
            if not self.is_oscillating(w):
                raise AssertionError("kernel vector fails the compatibility system")
        return out

    def violations(self, w: WeightVector) -> list:
        vals = w.values
        return [(kind, where) for kind, where, coeffs in self.compatibility_rows
                if sum(c * vals[i] for i, c in coeffs.items())]

    def is_oscillating(self, w: WeightVector) -> bool:
        return not self.violations(w)

    def switch_sums(self, w: WeightVector) -> list[int]:
        """sum(eps * n) at every switch (stations excluded)."""
        out = []
        for vx in self.vertices:
            if vx.kind != "Station":
                out.append(sum(e * w[b] for b, e in vx.branches))
        return out

    def to_json(self) -> dict:
        def bid(b):
            return {"kind": type(b).__name__, **b._asdict()}

        return {
            "tetrahedra": self.T.n,
            "orientation": list(self.T.orientation),
            "labelling": [dict(zip(["01/23", "02/13", "03/12"], self.labelling.pair_labels(t)))
                          for t in range(self.T.n)],
            "branches": [{"id": i, **bid(b)} for i, b in enumerate(self.branches)],
            "vertices": [
                {
                    "id": n,
                    "kind": vx.kind,
                    "at": {k: (list(x) if isinstance(x, tuple) else x) for k, x in vx.key._asdict().items()},
                    "branches": [{"branch": self.index(b), "eps": e} for b, e in vx.branches],
                    **({"placement": [list(p) for p in vx.placement]} if vx.placement else {}),
                }
                for n, vx in enumerate(self.vertices)
            ],
        }


def build_track(T: IdealTriangulation) -> TrainTrack:
    return TrainTrack(T)


def compatibility_system(track: TrainTrack) -> list[list[int]]:
    return track.matrix()


def is_oscillating(track: TrainTrack, w: WeightVector) -> bool:
    return track.is_oscillating(w)


def kernel_basis(track: TrainTrack) -> list[WeightVector]:
    return list(track.kernel_basis)
