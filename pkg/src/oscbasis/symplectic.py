"""Intersection pairing of abstract oscillating curves, holonomy and the form omega."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .traintrack import (HexCentral, HexLong, TrainTrack, TriangleCorner, TriangleExit,
                         TrackVertex, WeightVector, cyclic_after)
from .triangulation import LABELS, SIDES

_POSITIVE = {("a", "b"), ("b", "c"), ("c", "a"), ("ab", "bc"), ("bc", "ca"), ("ca", "ab")}


def epsilon(k: str, l: str) -> int:
    """+1 if (k, l) is cyclic-alphabetical, -1 if reversed, 0 otherwise."""
    if (k, l) in _POSITIVE:
        return 1
    if (l, k) in _POSITIVE:
        return -1
    return 0


class NotOscillating(ValueError):
    pass


def local_pairing(vertex: TrackVertex, g, d) -> int:
    """Local signed intersection number of branches g and d at a vertex."""
    incident = {b for b, _ in vertex.branches}
    if g not in incident or d not in incident:
        raise ValueError(f"branch not incident to {vertex.key}")
    if g == d:
        return 0
    kind = vertex.kind
    if kind == "TwoSwitch":
        if isinstance(g, TriangleCorner) and isinstance(d, TriangleCorner):
            return epsilon(g.label, d.label)
        return 0
    if kind == "ThreeSwitch":
        if isinstance(g, TriangleExit) or isinstance(d, TriangleExit):
            return 0
        if isinstance(g, HexLong) and isinstance(d, HexLong):
            # (k,l) . (k,m) = -eps(l,m)
            return -epsilon(g.end, d.end)
        if isinstance(g, HexCentral):
            return epsilon(g.side, d.end)
        return -epsilon(d.side, g.end)
    if kind == "Station":
        place = dict(zip((b for b, _ in vertex.branches), vertex.placement))
        if place[g][0] != place[d][0]:
            return 0
        # same hexagon: (x,y) . (y,x) = eps(x,y)
        return epsilon(g.start, d.start)
    return 0


def _vertex_tables(track: TrainTrack):
    """Per vertex: list of (index g, index d, local value) with nonzero value."""
    out = []
    for vx in track.vertices:
        if vx.kind == "OneSwitch":
            continue
        entries = []
        for g, _ in vx.branches:
            for d, _ in vx.branches:
                val = local_pairing(vx, g, d)
                if val:
                    entries.append((track.index(g), track.index(d), val))
        out.extend(entries)
    return out


def _table(track):
    table = getattr(track, "_pairing_table", None)
    if table is None:
        table = track._pairing_table = _vertex_tables(track)
    return table


def _require_oscillating(track, *ws):
    for w in ws:
        if not track.is_oscillating(w):
            raise NotOscillating("argument is not an abstract oscillating curve")


def pairing(track: TrainTrack, z: WeightVector, zp: WeightVector, *, check: bool = True) -> int:
    """2 z.z' as the sum of local intersection numbers over all vertices."""
    if check:
        _require_oscillating(track, z, zp)
    a, b = z.values, zp.values
    return sum(a[i] * b[j] * val for i, j, val in _table(track))


def pairing_facewise(track: TrainTrack, z: WeightVector, zp: WeightVector, *,
                     check: bool = True) -> int:
    """2 z.z' regrouped over triangles and glued hexagon pairs."""
    if check:
        _require_oscillating(track, z, zp)
    T = track.T
    total = 0
    for t in range(T.n):
        for v in range(4):
            ab, bc = TriangleExit(t, v, "ab"), TriangleExit(t, v, "bc")
            total += z[ab] * zp[bc] - z[bc] * zp[ab]
    for (t, f), _ in track.hexagon_pairs:
        for k in SIDES:
            l, m = cyclic_after(k, SIDES)
            t2, f2, kh = track.glued_short_side(t, f, k)
            lh = track.glued_short_side(t, f, l)[2]
            mh = track.glued_short_side(t, f, m)[2]

            def n(w, x, y):
                return w[HexLong(t, f, x, y)]

            def nh(w, x, y):
                return w[HexLong(t2, f2, x, y)]

            nk, nkp = z[HexCentral(t, f, k)], zp[HexCentral(t, f, k)]
            total += nk * (n(zp, k, l) - n(zp, k, m) + nh(zp, kh, lh) - nh(zp, kh, mh))
            total += nkp * (-n(z, k, l) + n(z, k, m) - nh(z, kh, lh) + nh(z, kh, mh))
            total += (-n(z, k, l) * n(zp, k, m) + n(z, k, m) * n(zp, k, l)
                      - nh(z, kh, mh) * nh(zp, kh, lh) + nh(z, kh, lh) * nh(zp, kh, mh))
            # stations: the long rectangle between short sides k and l
            total += (n(z, k, l) * n(zp, l, k) - n(z, l, k) * n(zp, k, l)
                      - nh(z, kh, lh) * nh(zp, lh, kh) + nh(z, lh, kh) * nh(zp, kh, lh))
    return total


@dataclass(frozen=True)
class HolonomyVector:
    """Coefficients of a_i, b_i, c_i; the NZ view is (a_i - c_i, b_i - c_i)."""

    incidence: tuple[int, ...]

    @classmethod
    def from_nz(cls, nz) -> "HolonomyVector":
        """Lift NZ coordinates (x_i, y_i) to the incidence vector (x_i, y_i, 0)."""
        if len(nz) % 2:
            raise ValueError("NZ vector has odd length")
        out: list = []
        for i in range(len(nz) // 2):
            out += [nz[2 * i], nz[2 * i + 1], 0]
        return cls(tuple(out))

    @property
    def n(self) -> int:
        return len(self.incidence) // 3

    @cached_property
    def nz(self) -> tuple[int, ...]:
        out = []
        for i in range(self.n):
            a, b, c = self.incidence[3 * i:3 * i + 3]
            out += [a - c, b - c]
        return tuple(out)

    def __add__(self, other):
        return HolonomyVector(tuple(x + y for x, y in zip(self.incidence, other.incidence)))

    def __neg__(self):
        return HolonomyVector(tuple(-x for x in self.incidence))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, k: int):
        return HolonomyVector(tuple(k * x for x in self.incidence))

    __rmul__ = __mul__


def holonomy(track: TrainTrack, z: WeightVector) -> HolonomyVector:
    out = [0] * (3 * track.T.n)
    for i, b in enumerate(track.branches):
        if isinstance(b, TriangleCorner) and z.values[i]:
            out[3 * b.tet + LABELS.index(b.label)] += z.values[i]
    return HolonomyVector(tuple(out))


def omega_nz(u: tuple[int, ...], v: tuple[int, ...]) -> int:
    """omega on NZ coordinates (pairs (a-c, b-c) per tetrahedron)."""
    if len(u) != len(v) or len(u) % 2:
        raise ValueError("dimension mismatch")
    return sum(u[2 * i] * v[2 * i + 1] - u[2 * i + 1] * v[2 * i] for i in range(len(u) // 2))


def omega(u, v) -> int:
    """omega(u, v), evaluated on the NZ view.  Accepts HolonomyVectors or NZ tuples."""
    uu = u.nz if isinstance(u, HolonomyVector) else tuple(u)
    vv = v.nz if isinstance(v, HolonomyVector) else tuple(v)
    return omega_nz(uu, vv)


def incidence_to_nz(inc) -> tuple[int, ...]:
    return HolonomyVector(tuple(inc)).nz
