"""Ideal triangulations: parsing, validation and derived combinatorics.

A triangulation with ``n`` tetrahedra is stored as ``gluings[t][f] = (t2, perm)``
where ``perm`` is a permutation of ``(0, 1, 2, 3)`` taking the vertices of
tetrahedron ``t`` to those of ``t2``; face ``f`` of ``t`` is glued to face
``perm[f]`` of ``t2``.

Truncating the ideal vertices gives one boundary triangle ``(t, v)`` per
tetrahedron vertex.  Its corners are the tetrahedron edges ``{v, w}`` and its
sides lie on the faces containing ``v``.
"""

from __future__ import annotations

import json
import random
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import permutations
from pathlib import Path
from typing import Iterable, NamedTuple

LABELS = ("a", "b", "c")
SIDES = ("ab", "bc", "ca")

# the three pairs of opposite edges of a tetrahedron
OPPOSITE_PAIRS = (((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2)))
EDGE_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))


class TriangulationError(ValueError):
    """Invalid gluing data.  ``kind`` is a short machine-readable tag."""

    def __init__(self, kind: str, message: str, tet: int | None = None,
                 face: int | None = None, line: int | None = None):
        self.kind = kind
        self.detail = message
        self.tet = tet
        self.face = face
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if tet is not None:
            where.append(f"tet {tet}")
        if face is not None:
            where.append(f"face {face}")
        loc = f" ({', '.join(where)})" if where else ""
        super().__init__(f"{kind}: {message}{loc}")

    def as_dict(self) -> dict:
        return {"error": self.kind, "message": self.detail, "tet": self.tet,
                "face": self.face, "line": self.line}


def perm_sign(p: Iterable[int]) -> int:
    p = list(p)
    sign = 1
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                sign = -sign
    return sign


def perm_inverse(p: tuple[int, ...]) -> tuple[int, ...]:
    inv = [0] * len(p)
    for i, x in enumerate(p):
        inv[x] = i
    return tuple(inv)


def third_label(x: str, y: str) -> str:
    (z,) = set(LABELS) - {x, y}
    return z


def side_name(x: str, y: str) -> str:
    """Name of the side between corners ``x`` and ``y`` ("ab", "bc" or "ca")."""
    for s in SIDES:
        if set(s) == {x, y}:
            return s
    raise ValueError(f"no side between {x!r} and {y!r}")


def corner_between(s1: str, s2: str) -> str:
    """Common corner of two distinct sides."""
    (x,) = set(s1) & set(s2)
    return x


def opposite_label(side: str) -> str:
    (z,) = set(LABELS) - set(side)
    return z


class EdgeClass(NamedTuple):
    id: int
    representatives: tuple[tuple[int, tuple[int, int]], ...]
    degree: int
    end_ends: tuple[int, int]


class End(NamedTuple):
    id: int
    triangles: tuple[tuple[int, int], ...]
    genus: int
    euler_char: int
    vertex_count: int


class BoundaryTriangle(NamedTuple):
    tet: int
    vertex: int
    # corner label -> (tet vertex w at that corner, edge class id)
    corners: dict
    # side label -> (face, neighbouring (tet, vertex), side label there)
    sides: dict

    @property
    def id(self) -> int:
        return 4 * self.tet + self.vertex


@dataclass(frozen=True)
class AbcLabelling:
    """Per tetrahedron, the label of each opposite-edge pair."""

    labels: tuple[dict, ...]  # labels[t][(i, j)] for i < j
    orientation: tuple[int, ...]
    convention: str

    def label(self, t: int, i: int, j: int) -> str:
        return self.labels[t][(min(i, j), max(i, j))]

    def pair_labels(self, t: int) -> tuple[str, str, str]:
        """Labels of ({01,23}, {02,13}, {03,12})."""
        return tuple(self.labels[t][p[0]] for p in OPPOSITE_PAIRS)


def _parse_perm(token: str, line: int | None, tet: int, face: int) -> tuple[int, ...]:
    if len(token) != 4 or not token.isdigit():
        raise TriangulationError("malformed", f"bad permutation {token!r}", tet, face, line)
    p = tuple(int(ch) for ch in token)
    if sorted(p) != [0, 1, 2, 3]:
        raise TriangulationError("malformed", f"{token!r} is not a permutation of 0123",
                                 tet, face, line)
    return p


def _parse_item(item, line, tet, face):
    if item in ("-", "_", None):
        raise TriangulationError("unglued face", "face has no gluing", tet, face, line)
    if isinstance(item, str):
        if ":" not in item:
            raise TriangulationError("malformed", f"expected t:perm, got {item!r}", tet, face, line)
        t2, perm = item.split(":", 1)
        if not t2.strip().isdigit():
            raise TriangulationError("malformed", f"bad tetrahedron index {t2!r}", tet, face, line)
        return int(t2), _parse_perm(perm.strip(), line, tet, face)
    if isinstance(item, (list, tuple)) and len(item) == 2:
        t2, perm = item
        if not isinstance(t2, int) or isinstance(t2, bool):
            raise TriangulationError("malformed", f"bad tetrahedron index {t2!r}", tet, face, line)
        if isinstance(perm, (list, tuple)):
            perm = "".join(str(x) for x in perm)
        return t2, _parse_perm(str(perm), line, tet, face)
    if isinstance(item, dict) and "tet" in item and "perm" in item:
        return _parse_item([item["tet"], item["perm"]], line, tet, face)
    raise TriangulationError("malformed", f"cannot read gluing {item!r}", tet, face, line)


def parse_triangulation(text: str, *, json_mirror: bool | None = None) -> "IdealTriangulation":
    """Parse gluing data in the line format (or its JSON mirror) and validate it.

    The line format::

        # comment
        2
        1:0132 1:1230 1:2310 1:2103
        0:0132 0:3201 0:3012 0:2031

    Item ``k`` on the line of tetrahedron ``t`` is ``t2:perm`` for face ``k``.
    """
    if json_mirror is None:
        json_mirror = text.lstrip().startswith("{")
    if json_mirror:
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise TriangulationError("malformed", f"invalid JSON: {exc.msg}", line=exc.lineno) from None
        if not isinstance(doc, dict) or "gluings" not in doc:
            raise TriangulationError("malformed", "JSON document needs a 'gluings' list")
        rows = doc["gluings"]
        n = doc.get("n", doc.get("tetrahedra", len(rows) if isinstance(rows, list) else None))
        if not isinstance(rows, list) or not isinstance(n, int) or n != len(rows):
            raise TriangulationError("malformed", "'n' does not match the number of gluing rows")
        lines = [(None, row) for row in rows]
    else:
        n = None
        lines = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            s = raw.strip()
            if not s or s.startswith("#"):
                continue
            if n is None:
                if not s.isdigit():
                    raise TriangulationError("malformed", f"expected tetrahedron count, got {s!r}",
                                             line=lineno)
                n = int(s)
                continue
            lines.append((lineno, s.split()))
        if n is None:
            raise TriangulationError("malformed", "empty document")
        if len(lines) != n:
            raise TriangulationError("malformed", f"expected {n} tetrahedron lines, found {len(lines)}")
    if n <= 0:
        raise TriangulationError("malformed", "tetrahedron count must be positive")
    gluings = []
    for t, (lineno, items) in enumerate(lines):
        if not isinstance(items, list) or len(items) != 4:
            count = len(items) if isinstance(items, list) else "?"
            raise TriangulationError("malformed", f"expected 4 face gluings, found {count}",
                                     tet=t, line=lineno)
        row = []
        for f, item in enumerate(items):
            t2, perm = _parse_item(item, lineno, t, f)
            if not 0 <= t2 < n:
                raise TriangulationError("malformed", f"tetrahedron {t2} out of range", t, f, lineno)
            row.append((t2, perm))
        gluings.append(tuple(row))
    return IdealTriangulation.from_gluings(gluings)


def load_triangulation(path: str | Path) -> "IdealTriangulation":
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    return parse_triangulation(text, json_mirror=path.suffix.lower() == ".json")


def format_triangulation(T: "IdealTriangulation") -> str:
    out = [str(T.n)]
    for row in T.gluings:
        out.append(" ".join(f"{t2}:{''.join(map(str, p))}" for t2, p in row))
    return "\n".join(out) + "\n"


def _orient(gluings) -> tuple[int, ...]:
    n = len(gluings)
    orient = [0] * n
    for root in range(n):
        if orient[root]:
            continue
        orient[root] = 1
        queue = deque([root])
        while queue:
            t = queue.popleft()
            for f, (t2, p) in enumerate(gluings[t]):
                want = -orient[t] * perm_sign(p)
                if orient[t2] == 0:
                    orient[t2] = want
                    queue.append(t2)
                elif orient[t2] != want:
                    raise TriangulationError(
                        "non-orientable", "face gluing cannot reverse orientation", t, f)
    return tuple(orient)


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[max(rx, ry)] = min(rx, ry)


@dataclass(frozen=True)
class IdealTriangulation:
    gluings: tuple
    orientation: tuple[int, ...] = field(default=())

    @classmethod
    def from_gluings(cls, gluings) -> "IdealTriangulation":
        gluings = tuple(tuple((int(t2), tuple(p)) for t2, p in row) for row in gluings)
        n = len(gluings)
        for t, row in enumerate(gluings):
            if len(row) != 4:
                raise TriangulationError("malformed", "expected 4 faces", tet=t)
            for f, (t2, p) in enumerate(row):
                if not 0 <= t2 < n:
                    raise TriangulationError("malformed", f"tetrahedron {t2} out of range", t, f)
                if sorted(p) != [0, 1, 2, 3]:
                    raise TriangulationError("malformed", "not a permutation", t, f)
                back_t, back_p = gluings[t2][p[f]]
                if back_t != t or back_p != perm_inverse(p):
                    raise TriangulationError(
                        "non-involutive gluing",
                        f"face {p[f]} of tet {t2} is not glued back by the inverse permutation", t, f)
                if t2 == t and p[f] == f:
                    raise TriangulationError("invalid edge", "face glued to itself", t, f)
        T = cls(gluings, _orient(gluings))
        T._check_edges()
        return T

    @property
    def n(self) -> int:
        return len(self.gluings)

    # -- edges -------------------------------------------------------------

    @cached_property
    def _edge_data(self):
        slots = [(t, e) for t in range(self.n) for e in EDGE_PAIRS]
        uf = _UnionFind(slots)
        for t in range(self.n):
            for f, (t2, p) in enumerate(self.gluings[t]):
                for i, j in EDGE_PAIRS:
                    if f in (i, j):
                        continue
                    a, b = sorted((p[i], p[j]))
                    uf.union((t, (i, j)), (t2, (a, b)))
        ids = {}
        members = {}
        for s in slots:
            r = uf.find(s)
            if r not in ids:
                ids[r] = len(ids)
                members[ids[r]] = []
            members[ids[r]].append(s)
        slot_class = {s: ids[uf.find(s)] for s in slots}
        return slot_class, [tuple(members[k]) for k in range(len(ids))]

    def edge_class_of(self, t: int, i: int, j: int) -> int:
        return self._edge_data[0][(t, (min(i, j), max(i, j)))]

    # -- boundary triangulation ------------------------------------------

    @cached_property
    def _corner_classes(self):
        """Boundary vertices: classes of corners (t, v, w), the end of edge {v,w} at v."""
        corners = [(t, v, w) for t in range(self.n) for v in range(4) for w in range(4) if v != w]
        uf = _UnionFind(corners)
        for t in range(self.n):
            for f, (t2, p) in enumerate(self.gluings[t]):
                for v in range(4):
                    for w in range(4):
                        if len({v, w, f}) == 3:
                            uf.union((t, v, w), (t2, p[v], p[w]))
        ids = {}
        out = {}
        for c in corners:
            r = uf.find(c)
            ids.setdefault(r, len(ids))
            out[c] = ids[r]
        return out

    def corner_class(self, t: int, v: int, w: int) -> int:
        return self._corner_classes[(t, v, w)]

    def _check_edges(self):
        for t in range(self.n):
            for i, j in EDGE_PAIRS:
                if self.corner_class(t, i, j) == self.corner_class(t, j, i):
                    raise TriangulationError("invalid edge", f"edge {i}{j} is identified with its reverse", t)

    @cached_property
    def _end_data(self):
        tris = [(t, v) for t in range(self.n) for v in range(4)]
        uf = _UnionFind(tris)
        for t in range(self.n):
            for f, (t2, p) in enumerate(self.gluings[t]):
                for v in range(4):
                    if v != f:
                        uf.union((t, v), (t2, p[v]))
        ids = {}
        tri_end = {}
        for x in tris:
            r = uf.find(x)
            ids.setdefault(r, len(ids))
            tri_end[x] = ids[r]
        return tri_end, len(ids)

    def end_of(self, t: int, v: int) -> int:
        return self._end_data[0][(t, v)]

    @cached_property
    def ends(self) -> tuple[End, ...]:
        tri_end, count = self._end_data
        out = []
        for e in range(count):
            tris = tuple(x for x in sorted(tri_end) if tri_end[x] == e)
            verts = {self.corner_class(t, v, w) for t, v in tris for w in range(4) if w != v}
            F = len(tris)
            E = 3 * F // 2
            V = len(verts)
            chi = V - E + F
            if chi % 2:
                raise AssertionError("odd Euler characteristic on a closed oriented surface")
            out.append(End(e, tris, (2 - chi) // 2, chi, V))
        return tuple(out)

    @cached_property
    def edge_classes(self) -> tuple[EdgeClass, ...]:
        _, members = self._edge_data
        out = []
        for k, reps in enumerate(members):
            t, (i, j) = reps[0]
            out.append(EdgeClass(k, reps, len(reps), (self.end_of(t, i), self.end_of(t, j))))
        return tuple(out)

    def is_connected(self) -> bool:
        seen = {0}
        queue = deque([0])
        while queue:
            t = queue.popleft()
            for t2, _ in self.gluings[t]:
                if t2 not in seen:
                    seen.add(t2)
                    queue.append(t2)
        return len(seen) == self.n

    def euler_identity_holds(self) -> bool:
        """2n = 2 n_E - 2 n_ends + 2 (sum of genera)."""
        g = sum(e.genus for e in self.ends)
        return 2 * self.n == 2 * len(self.edge_classes) - 2 * len(self.ends) + 2 * g

    # -- labelling -------------------------------------------------------

    @cached_property
    def labelling(self) -> AbcLabelling:
        return abc_labelling(self)

    def vertex_order(self, t: int, v: int) -> tuple[int, int, int]:
        """The other three vertices of ``t`` in anticlockwise order seen from outside at ``v``.

        The starting vertex is the one whose edge carries label ``a``.
        """
        lab = self.labelling
        ws = [w for w in range(4) if w != v]
        for w1, w2, w3 in permutations(ws):
            if perm_sign((v, w1, w2, w3)) == self.orientation[t] and lab.label(t, v, w1) == "a":
                return (w1, w2, w3)
        raise AssertionError("unreachable")

    def corner_vertex(self, t: int, v: int, x: str) -> int:
        """Vertex ``w`` of tet ``t`` such that corner ``{v,w}`` of triangle (t,v) has label x."""
        return self.vertex_order(t, v)[LABELS.index(x)]

    def side_face(self, t: int, v: int, side: str) -> int:
        """Face of tet ``t`` carrying the given side of triangle (t,v)."""
        return self.corner_vertex(t, v, opposite_label(side))

    def side_on_face(self, t: int, v: int, f: int) -> str:
        """Label of the side of triangle (t,v) that lies on face ``f``."""
        x = self.labelling.label(t, v, f)
        return "".join(y for y in SIDES if opposite_label(y) == x)

    def across_side(self, t: int, v: int, side: str) -> tuple[int, int, str]:
        """Neighbouring boundary triangle across a side, and the side label there."""
        f = self.side_face(t, v, side)
        t2, p = self.gluings[t][f]
        return t2, p[v], self.side_on_face(t2, p[v], p[f])

    @cached_property
    def boundary_triangles(self) -> tuple[BoundaryTriangle, ...]:
        out = []
        for t in range(self.n):
            for v in range(4):
                corners = {}
                for x in LABELS:
                    w = self.corner_vertex(t, v, x)
                    corners[x] = (w, self.edge_class_of(t, v, w))
                sides = {}
                for s in SIDES:
                    t2, v2, s2 = self.across_side(t, v, s)
                    sides[s] = (self.side_face(t, v, s), (t2, v2), s2)
                out.append(BoundaryTriangle(t, v, corners, sides))
        return tuple(out)


def edge_classes(T: IdealTriangulation) -> list[EdgeClass]:
    return list(T.edge_classes)


def boundary_triangulation(T: IdealTriangulation) -> tuple[list[End], list[BoundaryTriangle]]:
    tris = list(T.boundary_triangles)
    for bt in tris:
        if sorted(bt.corners) != list(LABELS):
            raise AssertionError("corner labels are not a permutation of abc")
        for s, (f, (t2, v2), s2) in bt.sides.items():
            x, y = s[0], s[1]
            wx, wy = bt.corners[x][0], bt.corners[y][0]
            p = T.gluings[bt.tet][f]
            # endpoint edge classes agree across the glued side
            nb = tris[4 * t2 + v2]
            there = {nb.corners[z][0]: nb.corners[z][1] for z in LABELS}
            if there[p[1][wx]] != bt.corners[x][1] or there[p[1][wy]] != bt.corners[y][1]:
                raise AssertionError("boundary side gluing mismatch")
    return list(T.ends), tris


def _labels_for(convention: int, sign: int) -> dict:
    """Labels of the opposite pairs for one tetrahedron."""
    if convention == 0:
        order = ("a", "b", "c")
    else:
        order = ("a", "c", "b")
    if sign < 0:
        order = (order[0], order[2], order[1])
    out = {}
    for pair, x in zip(OPPOSITE_PAIRS, order):
        for e in pair:
            out[e] = x
    return out


def _reads_anticlockwise(labels: dict, sign: int) -> bool:
    """Check a,b,c anticlockwise at every vertex and clockwise around every face.

    Seen from outside a tetrahedron of orientation ``sign``, the vertices
    (w1,w2,w3) around vertex v appear anticlockwise iff sign(v,w1,w2,w3) = sign,
    and the vertices (i,j,k) of the face opposite f appear anticlockwise iff
    sign(f,i,j,k) = -sign.
    """
    lab = lambda i, j: labels[(min(i, j), max(i, j))]
    cyc = {("a", "b", "c"), ("b", "c", "a"), ("c", "a", "b")}
    for v in range(4):
        ws = [w for w in range(4) if w != v]
        for w1, w2, w3 in permutations(ws):
            if perm_sign((v, w1, w2, w3)) == sign:
                if (lab(v, w1), lab(v, w2), lab(v, w3)) not in cyc:
                    return False
                break
    for f in range(4):
        ws = [w for w in range(4) if w != f]
        for i, j, k in permutations(ws):
            if perm_sign((f, i, j, k)) == -sign:
                # edges met walking anticlockwise i -> j -> k -> i
                read = (lab(i, j), lab(j, k), lab(k, i))
                if tuple(reversed(read)) not in cyc:
                    return False
                break
    return True


def abc_labelling(T: IdealTriangulation, *, mirror: bool = False) -> AbcLabelling:
    """abc-labelling for the orientation found by propagation from tet 0.

    With ``mirror=True`` the global orientation is reversed, which swaps
    labels b and c in every tetrahedron.
    """
    orient = tuple(-s for s in T.orientation) if mirror else T.orientation
    for convention in (0, 1):
        labels = tuple(_labels_for(convention, s) for s in orient)
        if all(_reads_anticlockwise(lab, s) for lab, s in zip(labels, orient)):
            return AbcLabelling(labels, orient, "primary" if convention == 0 else "alternate")
    raise AssertionError("no abc convention validates")


def random_triangulation(n: int, rng: random.Random, *, max_tries: int = 10_000) -> IdealTriangulation:
    """A connected, oriented gluing of ``n`` tetrahedra with every face paired at random.

    Pairings whose edges fold back on themselves are rejected and redrawn.
    """
    faces = [(t, f) for t in range(n) for f in range(4)]
    for _ in range(max_tries):
        order = faces[:]
        rng.shuffle(order)
        gluings = [[None] * 4 for _ in range(n)]
        for (t, f), (t2, f2) in zip(order[::2], order[1::2]):
            odd = [p for p in permutations(range(4)) if p[f] == f2 and perm_sign(p) == -1]
            p = rng.choice(odd)
            gluings[t][f] = (t2, p)
            gluings[t2][f2] = (t, perm_inverse(p))
        try:
            T = IdealTriangulation.from_gluings(gluings)
        except TriangulationError:
            continue
        if T.is_connected():
            return T
    raise TriangulationError("malformed", f"no valid gluing of {n} tetrahedra found")
