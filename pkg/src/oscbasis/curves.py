"""Basis curves: edge curves, boundary curves and dual edge curves.

Curves are built as combinatorial walks and then realized as weight vectors
on the train track.  A walk is a cyclic sequence of

* ``CornerPass(tet, vertex, label, direction)``: cross boundary triangle
  (tet, vertex) around corner ``label``; ``direction`` +1 follows the corner
  branch orientation.  Between two consecutive corner passes the walk crosses
  the shared side through the short rectangles and the 1-switch.
* ``Dive(tet, face, entry, exit)``: enter the long rectangle of hexagon
  (tet, face) along edge {entry, exit} from the short side at vertex
  ``entry``, reverse orientation at the station and come out at ``exit``.
"""

from __future__ import annotations

import copy
from collections import deque
from dataclasses import dataclass, field
from typing import NamedTuple

from .intlinalg import symplectic_reduce
from .symplectic import holonomy, pairing
from .traintrack import (HexCentral, HexLong, TrainTrack, TriangleCorner, TriangleExit,
                         WeightVector, _typed, corner_sides)
from .triangulation import LABELS, SIDES, IdealTriangulation, corner_between


class CurveError(RuntimeError):
    """An internal invariant of curve construction failed."""


@_typed
class CornerPass(NamedTuple):
    tet: int
    vertex: int
    label: str
    direction: int

    @property
    def sides(self) -> tuple[str, str]:
        s_in, s_out = corner_sides(self.label)
        return (s_in, s_out) if self.direction > 0 else (s_out, s_in)


@_typed
class Dive(NamedTuple):
    tet: int
    face: int
    entry: int
    exit: int


@dataclass(frozen=True)
class CurveWalk:
    steps: tuple

    @property
    def stations(self) -> int:
        return sum(isinstance(s, Dive) for s in self.steps)

    def reversed(self) -> "CurveWalk":
        out = []
        for s in reversed(self.steps):
            if isinstance(s, CornerPass):
                out.append(s._replace(direction=-s.direction))
            else:
                out.append(Dive(s.tet, s.face, s.exit, s.entry))
        return CurveWalk(tuple(out))

    def to_json(self) -> list:
        out = []
        for s in self.steps:
            if isinstance(s, CornerPass):
                out.append({"step": "corner", "tet": s.tet, "vertex": s.vertex,
                            "label": s.label, "direction": s.direction})
            else:
                out.append({"step": "dive", "tet": s.tet, "face": s.face,
                            "entry": s.entry, "exit": s.exit})
        return out


def pass_for(t: int, v: int, s_in: str, s_out: str) -> CornerPass:
    if s_in == s_out:
        raise CurveError("walk enters and leaves a triangle through the same side")
    x = corner_between(s_in, s_out)
    return CornerPass(t, v, x, 1 if corner_sides(x) == (s_in, s_out) else -1)


def realize_walk(track: TrainTrack, walk: CurveWalk) -> WeightVector:
    """Signed branch weights of a closed walk; orientation flips at each station."""
    T = track.T
    steps = walk.steps
    if not steps:
        return WeightVector.zero(track)
    w: dict = {}

    def add(b, x):
        w[b] = w.get(b, 0) + x

    o = 1
    L = len(steps)
    for n, st in enumerate(steps):
        nxt = steps[(n + 1) % L]
        if isinstance(st, CornerPass):
            t, v = st.tet, st.vertex
            add(TriangleCorner(t, v, st.label), o * st.direction)
            s_out = st.sides[1]
            if isinstance(nxt, CornerPass):
                t2, v2, s2 = T.across_side(t, v, s_out)
                if (nxt.tet, nxt.vertex) != (t2, v2) or nxt.sides[0] != s2:
                    raise CurveError(f"step {n}: next corner pass is not across side {s_out}")
                add(TriangleExit(t, v, s_out), o)
                add(HexCentral(t, T.side_face(t, v, s_out), s_out), o)
                add(HexCentral(t2, T.side_face(t2, v2, s2), s2), -o)
                add(TriangleExit(t2, v2, s2), -o)
            else:
                if (nxt.tet, nxt.entry) != (t, v) or T.side_face(t, v, s_out) != nxt.face:
                    raise CurveError(f"step {n}: dive does not start at side {s_out}")
        else:
            t, f, i, j = st
            if len({f, i, j}) != 3:
                raise CurveError(f"step {n}: not a long rectangle")
            k = track.short_side_label(t, f, i)
            l = track.short_side_label(t, f, j)
            add(TriangleExit(t, i, k), o)
            add(HexLong(t, f, k, l), o)
            o = -o
            add(HexLong(t, f, l, k), -o)
            add(TriangleExit(t, j, l), -o)
            if not isinstance(nxt, CornerPass) or (nxt.tet, nxt.vertex) != (t, j) or nxt.sides[0] != l:
                raise CurveError(f"step {n}: walk does not continue into triangle ({t},{j}) from side {l}")
    if o != 1:
        raise CurveError("odd number of station crossings")
    return WeightVector.from_map(track, w)


# -- edge curves ---------------------------------------------------------

def edge_endpoint(T: IdealTriangulation, edge: int) -> tuple[int, int, int]:
    """Starting corner (t, v, w) of the loop around the chosen end of an edge.

    The end is the one meeting the lowest boundary triangle id; the start is
    the lowest corner of that end.
    """
    t, (i, j) = T.edge_classes[edge].representatives[0]
    targets = {T.corner_class(t, i, j), T.corner_class(t, j, i)}
    best = None
    for t2 in range(T.n):
        for v in range(4):
            for x in LABELS:
                w = T.corner_vertex(t2, v, x)
                if T.corner_class(t2, v, w) in targets:
                    key = (4 * t2 + v, x)
                    if best is None or key < best[0]:
                        best = (key, (t2, v, w))
    return best[1]


def edge_loop_walk(T: IdealTriangulation, edge: int) -> CurveWalk:
    t, v, w = edge_endpoint(T, edge)
    lab = T.labelling
    start = (t, v, lab.label(t, v, w))
    cur = start
    steps = []
    while True:
        t, v, x = cur
        steps.append(CornerPass(t, v, x, 1))
        s_out = corner_sides(x)[1]
        f = T.side_face(t, v, s_out)
        t2, p = T.gluings[t][f]
        v2, w2 = p[v], p[T.corner_vertex(t, v, x)]
        x2 = lab.label(t2, v2, w2)
        if corner_sides(x2)[0] != T.side_on_face(t2, v2, p[f]):
            raise CurveError("vertex link does not turn consistently")
        cur = (t2, v2, x2)
        if cur == start:
            return CurveWalk(tuple(steps))
        if len(steps) > 12 * T.n:
            raise CurveError("vertex link walk does not close")


def edge_curve(track: TrainTrack, edge: int) -> WeightVector:
    return realize_walk(track, edge_loop_walk(track.T, edge))


# -- basis curves as combinations of walks -------------------------------

@dataclass(frozen=True)
class BasisCurve:
    name: str
    role: str  # "m", "l", "Gamma" or "C"
    weights: WeightVector
    terms: tuple = ()  # (coefficient, CurveWalk)

    def __add__(self, other: "BasisCurve") -> "BasisCurve":
        return BasisCurve(self.name, self.role, self.weights + other.weights,
                          _merge(self.terms + other.terms))

    def __neg__(self):
        return self * -1

    def __mul__(self, k: int):
        return BasisCurve(self.name, self.role, self.weights * k,
                          tuple((c * k, w) for c, w in self.terms if c * k))

    __rmul__ = __mul__


def _merge(terms):
    out: dict = {}
    order = []
    for c, w in terms:
        if w not in out:
            order.append(w)
            out[w] = 0
        out[w] += c
    return tuple((out[w], w) for w in order if out[w])


# -- boundary curves ----------------------------------------------------

def _side_key(T, t, v, s):
    t2, v2, s2 = T.across_side(t, v, s)
    return min(((t, v), s), ((t2, v2), s2))


def _end_generators(T: IdealTriangulation, end) -> tuple[list[CurveWalk], set]:
    """Tree-cotree generators of H_1 of one end, as dual cycles.

    Returns the cycle walks and the set of sides their dual edges cross.
    """
    tris = list(end.triangles)
    root = tris[0]
    parent = {root: None}
    tree = set()
    queue = deque([root])
    while queue:
        t, v = queue.popleft()
        for s in SIDES:
            t2, v2, s2 = T.across_side(t, v, s)
            if (t2, v2) not in parent:
                parent[(t2, v2)] = ((t, v), s, s2)
                tree.add(_side_key(T, t, v, s))
                queue.append((t2, v2))
    # primal spanning tree on the boundary vertices, avoiding dual-tree sides
    comp = {}

    def find(x):
        while comp.setdefault(x, x) != x:
            x = comp[x]
        return x

    generators = []
    for t, v in tris:
        for s in SIDES:
            key = _side_key(T, t, v, s)
            if key != ((t, v), s) or key in tree:
                continue
            a = find(T.corner_class(t, v, T.corner_vertex(t, v, s[0])))
            b = find(T.corner_class(t, v, T.corner_vertex(t, v, s[1])))
            if a != b:
                comp[max(a, b)] = min(a, b)
            else:
                generators.append(key)

    def up(x):
        path = [x]
        while parent[path[-1]] is not None:
            path.append(parent[path[-1]][0])
        return path

    walks = []
    used = set()
    for (ta, va), sa in generators:
        tb, vb, sb = T.across_side(ta, va, sa)
        A, B = (ta, va), (tb, vb)
        # crossings (from, exit side, to, entry side) around the cycle
        crossings = [(A, sa, B, sb)]
        pa, pb = up(A), up(B)
        common = next(x for x in pb if x in set(pa))
        for x in pb[:pb.index(common)]:
            par, s_par, s_child = parent[x]
            crossings.append((x, s_child, par, s_par))
        down = []
        for x in pa[:pa.index(common)]:
            par, s_par, s_child = parent[x]
            down.append((par, s_par, x, s_child))
        crossings += list(reversed(down))
        steps = []
        for n, (_, _, to, entry) in enumerate(crossings):
            frm, exit_side, _, _ = crossings[(n + 1) % len(crossings)]
            if frm != to:
                raise CurveError("dual cycle is not connected")
            steps.append(pass_for(to[0], to[1], entry, exit_side))
        for frm, s, _, _ in crossings:
            used.add(_side_key(T, frm[0], frm[1], s))
        walks.append(CurveWalk(tuple(steps)))
    return walks, used


def boundary_basis(track: TrainTrack, end_id: int) -> list[tuple[BasisCurve, BasisCurve]]:
    """Symplectic pairs (m, l) for one end, with pairing(m, l) = 2."""
    return _boundary_basis(track, end_id)[0]


def _boundary_basis(track, end_id):
    T = track.T
    end = T.ends[end_id]
    walks, used = _end_generators(T, end)
    if len(walks) != 2 * end.genus:
        raise CurveError(f"end {end_id}: found {len(walks)} generators for genus {end.genus}")
    ws = [realize_walk(track, w) for w in walks]
    gram = [[pairing(track, a, b, check=False) for b in ws] for a in ws]
    pairs, null = symplectic_reduce(gram)
    if null or any(d != 2 for _, _, d in pairs):
        raise CurveError(f"end {end_id}: boundary intersection form is not unimodular")
    out = []
    for n, (e, f, _) in enumerate(pairs):
        suffix = f"{end_id}" if end.genus == 1 else f"{end_id}_{n}"
        m = _combine(track, f"m{suffix}", "m", e, ws, walks)
        l = _combine(track, f"l{suffix}", "l", f, ws, walks)
        out.append((m, l))
    return out, used


def _combine(track, name, role, coeffs, ws, walks):
    weights = WeightVector.zero(track)
    for c, w in zip(coeffs, ws):
        if c:
            weights = weights + c * w
    return BasisCurve(name, role, weights, tuple((c, w) for c, w in zip(coeffs, walks) if c))


# -- dual edge curves ----------------------------------------------------

@dataclass(frozen=True)
class DualCurveContext:
    tree: tuple  # edge ids of the spanning tree of the end graph
    parent: tuple  # per end: (parent end, edge id) or None at the root
    colour: tuple  # per end: 0 or 1
    e0: int
    long_rect: dict  # edge id -> (t, f, (i, j))
    remaining: tuple  # edges not in tree + {E0}, in id order

    @property
    def spanning(self) -> tuple:
        return self.tree + (self.e0,)


def build_dual_context(T: IdealTriangulation, track: TrainTrack | None = None) -> DualCurveContext:
    ends = len(T.ends)
    edges = T.edge_classes
    parent: list = [None] * ends
    seen = {0}
    colour = [0] * ends
    tree = []
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for E in edges:
            a, b = E.end_ends
            if u not in (a, b):
                continue
            w = b if a == u else a
            if w not in seen:
                seen.add(w)
                parent[w] = (u, E.id)
                colour[w] = 1 - colour[u]
                tree.append(E.id)
                queue.append(w)
    if len(seen) != ends:
        raise CurveError("end graph is disconnected")
    e0 = next((E.id for E in edges if E.id not in tree
               and colour[E.end_ends[0]] == colour[E.end_ends[1]]), None)
    if e0 is None:
        raise CurveError("no same-colour edge in the end graph")
    track = track or TrainTrack(T)
    long_rect = {}
    for t, f, (i, j) in track.long_rectangles():
        long_rect.setdefault(T.edge_class_of(t, i, j), (t, f, (i, j)))
    remaining = tuple(E.id for E in edges if E.id not in tree and E.id != e0)
    return DualCurveContext(tuple(tree), tuple(parent), tuple(colour), e0, long_rect, remaining)


class RoutingError(CurveError):
    pass


class _Router:
    """Obstacle bookkeeping on the boundary surface.

    Every side keeps an ordered list of tokens (points where obstacles cross
    it).  Inside a triangle, obstacles are disjoint components touching some
    tokens: one star joining the sides crossed by boundary cycles, and one
    chord per routed arc.  Two side segments lie in the same region iff no
    component separates them along the triangle boundary.
    """

    def __init__(self, T: IdealTriangulation, cycle_sides):
        self.T = T
        self.tokens: dict = {}
        self.components: dict = {(t, v): [] for t in range(T.n) for v in range(4)}
        self._next = 0
        self.relaxed_legs = 0
        star: dict = {}
        for key in sorted(cycle_sides):
            tok = self._new()
            self.tokens[key] = [tok]
            (t, v), s = key
            t2, v2, _ = T.across_side(t, v, s)
            star.setdefault((t, v), set()).add(tok)
            star.setdefault((t2, v2), set()).add(tok)
        for tri, toks in star.items():
            self.components[tri].append(frozenset(toks))

    def _new(self):
        self._next += 1
        return self._next

    def _view(self, tri, s):
        """(canonical key, reversed?) for side s seen from triangle tri."""
        t, v = tri
        key = _side_key(self.T, t, v, s)
        if key == (tri, s):
            return key, False
        # the partner view; gluings reverse orientation so the order flips
        kt, ks = key
        x0 = self.T.corner_vertex(kt[0], kt[1], ks[0])
        f = self.T.side_face(kt[0], kt[1], ks)
        p = self.T.gluings[kt[0]][f][1]
        return key, p[x0] != self.T.corner_vertex(t, v, s[0])

    def _flips(self, tri, s):
        """Whether the token order reverses when side s is seen from the other triangle."""
        t2, v2, s2 = self.T.across_side(tri[0], tri[1], s)
        return self._view(tri, s)[1] != self._view((t2, v2), s2)[1]

    def side_tokens(self, tri, s):
        key, rev = self._view(tri, s)
        toks = self.tokens.get(key, [])
        return list(reversed(toks)) if rev else list(toks)

    def regions(self, tri):
        seq = []
        offset = {}
        for s in SIDES:
            offset[s] = len(seq)
            seq += self.side_tokens(tri, s)
        N = len(seq)
        pos = {tok: n for n, tok in enumerate(seq)}
        comps = []
        for comp in self.components[tri]:
            ps = sorted(pos[x] for x in comp if x in pos)
            if len(ps) > 1:
                comps.append(ps)

        def region(s, g):
            if N == 0:
                return ()
            gap = (offset[s] + g - 1) % N
            return tuple(sum(1 for p in ps if p <= gap) % len(ps) for ps in comps)

        return region

    def innermost(self, tri, s, w):
        """Segment of side s next to the corner at tet vertex w."""
        t, v = tri
        return 0 if self.T.corner_vertex(t, v, s[0]) == w else len(self.side_tokens(tri, s))

    def _search(self, first, e_tri, e_side, goal_seg):
        """Shortest chain of crossings from state ``first`` into the goal region.

        Each crossing is returned as (exit side, left token, right token), the
        tokens bounding the crossed segment in the order seen from the triangle
        being left (None at a corner).
        """
        T = self.T
        regions = {}

        def region(tri, s, g):
            if tri not in regions:
                regions[tri] = self.regions(tri)
            return regions[tri](s, g)

        goal = region(e_tri, e_side, goal_seg)
        prev = {first: None}
        queue = deque([first])
        while queue:
            state = queue.popleft()
            tri, s_in, g_in = state
            r = region(tri, s_in, g_in)
            if tri == e_tri and s_in != e_side and r == goal:
                chain = []
                while prev[state] is not None:
                    state, s_out, g = prev[state]
                    toks = self.side_tokens(state[0], s_out)
                    chain.append((s_out, toks[g - 1] if g else None, toks[g] if g < len(toks) else None))
                return chain[::-1]
            for s_out in SIDES:
                if s_out == s_in:
                    continue
                n_tok = len(self.side_tokens(tri, s_out))
                for g in range(n_tok + 1):
                    if region(tri, s_out, g) != r:
                        continue
                    t2, v2, s2 = T.across_side(tri[0], tri[1], s_out)
                    nxt = ((t2, v2), s2, n_tok - g if self._flips(tri, s_out) else g)
                    if nxt not in prev:
                        prev[nxt] = (state, s_out, g)
                        queue.append(nxt)
        return None

    def route(self, start, end):
        """Route an arc from (tri, side, corner vertex) into end (tri, side, corner vertex).

        Returns the passes (tri, entry side, exit side).  When no arc avoids the
        obstacles the leg is routed through the bare triangulation instead, is
        not recorded as an obstacle, and ``relaxed_legs`` is incremented.
        """
        saved = (copy.deepcopy(self.tokens), copy.deepcopy(self.components))
        try:
            return self._route_avoiding(start, end)
        except RoutingError:
            self.tokens, self.components = saved
        self.relaxed_legs += 1
        return self._route_bare(start, end)

    def _route_avoiding(self, start, end):
        T = self.T
        tri, side, w = start
        e_tri, e_side, e_w = end
        tok = self._insert(tri, side, self.innermost(tri, side, w))
        pos = self.side_tokens(tri, side).index(tok)
        chain = self._search((tri, side, pos), e_tri, e_side, self.innermost(e_tri, e_side, e_w))
        if chain is None:
            raise RoutingError("no obstacle-free arc between the dive points")
        passes = []
        for s_out, left, right in chain:
            # earlier crossings of this leg may have split the segment; pick
            # the piece lying in the current region
            toks = self.side_tokens(tri, s_out)
            lo = toks.index(left) + 1 if left is not None else 0
            hi = toks.index(right) if right is not None else len(toks)
            region = self.regions(tri)
            r = region(side, self.side_tokens(tri, side).index(tok))
            g = next((g for g in range(lo, hi + 1) if region(s_out, g) == r), None)
            if g is None:
                raise RoutingError("routed arc would cross itself")
            exit_tok = self._insert(tri, s_out, g)
            self.components[tri].append(frozenset((tok, exit_tok)))
            passes.append((tri, side, s_out))
            t2, v2, s2 = T.across_side(tri[0], tri[1], s_out)
            tri, side, tok = (t2, v2), s2, exit_tok
        region = self.regions(tri)
        if (tri != e_tri or side == e_side or region(side, self.side_tokens(tri, side).index(tok))
                != region(e_side, self.innermost(e_tri, e_side, e_w))):
            raise RoutingError("routed arc misses its end point")
        exit_tok = self._insert(e_tri, e_side, self.innermost(e_tri, e_side, e_w))
        self.components[tri].append(frozenset((tok, exit_tok)))
        passes.append((tri, side, e_side))
        return passes

    def _route_bare(self, start, end):
        T = self.T
        first = (start[0], start[1])
        e_tri, e_side = end[0], end[1]
        prev = {first: None}
        queue = deque([first])
        while queue:
            state = queue.popleft()
            tri, s_in = state
            if tri == e_tri and s_in != e_side:
                passes = [(tri, s_in, e_side)]
                while prev[state] is not None:
                    state, s_out = prev[state]
                    passes.append((state[0], state[1], s_out))
                return passes[::-1]
            for s_out in SIDES:
                if s_out != s_in:
                    t2, v2, s2 = T.across_side(tri[0], tri[1], s_out)
                    if ((t2, v2), s2) not in prev:
                        prev[((t2, v2), s2)] = (state, s_out)
                        queue.append(((t2, v2), s2))
        raise RoutingError("no arc between the dive points in the boundary triangulation")

    def _insert(self, tri, s, g):
        """Insert a token into segment g of side s (as seen from tri)."""
        key, rev = self._view(tri, s)
        toks = self.tokens.setdefault(key, [])
        idx = len(toks) - g if rev else g
        tok = self._new()
        toks.insert(idx, tok)
        return tok

def _dive(T, rect, from_end) -> Dive:
    t, f, (i, j) = rect
    if T.end_of(t, i) == from_end:
        return Dive(t, f, i, j)
    if T.end_of(t, j) == from_end:
        return Dive(t, f, j, i)
    raise CurveError("edge does not meet the requested end")


def _tree_path(ctx: DualCurveContext, u: int, w: int) -> list[tuple[int, int, int]]:
    """Edges (edge, from end, to end) along the tree from end u to end w."""

    def up(x):
        path = [x]
        while ctx.parent[path[-1]] is not None:
            path.append(ctx.parent[path[-1]][0])
        return path

    pu, pw = up(u), up(w)
    common = next(x for x in pu if x in set(pw))
    out = []
    for x in pu[:pu.index(common)]:
        par, e = ctx.parent[x]
        out.append((e, x, par))
    down = []
    for x in pw[:pw.index(common)]:
        par, e = ctx.parent[x]
        down.append((e, par, x))
    return out + list(reversed(down))


def dive_cycle(T: IdealTriangulation, ctx: DualCurveContext, edge: int) -> list[Dive]:
    """Dives of the even end-graph cycle through ``edge``."""
    rect = ctx.long_rect[edge]
    t, f, (i, j) = rect
    X, Y = T.end_of(t, i), T.end_of(t, j)
    dives = [Dive(t, f, i, j)]
    if ctx.colour[X] != ctx.colour[Y]:
        hops = _tree_path(ctx, Y, X)
    else:
        r0 = ctx.long_rect[ctx.e0]
        p, q = T.end_of(r0[0], r0[2][0]), T.end_of(r0[0], r0[2][1])
        hops = _tree_path(ctx, Y, p) + [(ctx.e0, p, q)] + _tree_path(ctx, q, X)
    for e, a, _ in hops:
        dives.append(_dive(T, ctx.long_rect[e], a))
    if len(dives) % 2:
        raise CurveError("dual curve cycle has odd length")
    return dives


def route_dual_curve(track: TrainTrack, ctx: DualCurveContext, edge: int,
                     router: _Router | None = None) -> CurveWalk:
    """Closed walk diving through ``edge`` and the spanning edges closing an even cycle."""
    T = track.T
    if edge in ctx.spanning:
        raise CurveError("dual curves are only built for edges outside the spanning set")
    if router is None:
        used = set()
        for end in T.ends:
            used |= _end_generators(T, end)[1]
        router = _Router(T, used)
    dives = dive_cycle(T, ctx, edge)
    steps = []
    for n, d in enumerate(dives):
        nxt = dives[(n + 1) % len(dives)]
        start = ((d.tet, d.exit), T.side_on_face(d.tet, d.exit, d.face), d.entry)
        end = ((nxt.tet, nxt.entry), T.side_on_face(nxt.tet, nxt.entry, nxt.face), nxt.exit)
        steps.append(d)
        for tri, s_in, s_out in router.route(start, end):
            steps.append(pass_for(tri[0], tri[1], s_in, s_out))
    return CurveWalk(tuple(steps))


# -- the full basis ------------------------------------------------------

class NormalizationError(CurveError):
    pass


def normalize_rows(rows: list, n_boundary_pairs: int, form, log: list | None = None) -> list:
    """Signs and Gram-Schmidt moves so that the Gram of ``form`` is exactly 2 J_std.

    ``rows`` is ordered (m_1, l_1, ..., Gamma_1, C_1, ...) and may hold any
    values supporting +, unary - and integer scaling.  Only negations of l or
    Gamma rows and additions of multiples of C_j, m_j, l_j to Gamma rows are
    used; each move is appended to ``log`` when given.
    """
    rows = list(rows)
    g = n_boundary_pairs
    npairs = len(rows) // 2
    if len(rows) % 2:
        raise NormalizationError("odd number of rows")

    def note(*move):
        if log is not None:
            log.append(move)

    for k in range(npairs):
        val = form(rows[2 * k], rows[2 * k + 1])
        if val == -2:
            r = 2 * k + 1 if k < g else 2 * k
            rows[r] = -rows[r]
            note("negate", r)
        elif val != 2:
            raise NormalizationError(f"pair {k} has pairing {val}, expected +-2")
    for k in range(g, npairs):
        for j in range(g):
            pm = form(rows[2 * k], rows[2 * j])
            pl = form(rows[2 * k], rows[2 * j + 1])
            if pm % 2 or pl % 2:
                raise NormalizationError(f"odd pairing of row {2 * k} with boundary pair {j}")
            if pm:
                rows[2 * k] = rows[2 * k] + (pm // 2) * rows[2 * j + 1]
                note("add", 2 * k, pm // 2, 2 * j + 1)
            if pl:
                rows[2 * k] = rows[2 * k] + (-(pl // 2)) * rows[2 * j]
                note("add", 2 * k, -(pl // 2), 2 * j)
    for k in range(g, npairs):
        for k2 in range(k + 1, npairs):
            val = form(rows[2 * k], rows[2 * k2])
            if val % 2:
                raise NormalizationError(f"odd pairing between rows {2 * k} and {2 * k2}")
            if val:
                rows[2 * k2] = rows[2 * k2] + (-(val // 2)) * rows[2 * k + 1]
                note("add", 2 * k2, -(val // 2), 2 * k + 1)
    gram = [[form(a, b) for b in rows] for a in rows]
    if gram != standard_gram(npairs):
        raise NormalizationError("Gram matrix is not 2 J_std after normalization")
    return rows


def normalize_basis(track: TrainTrack, rows: list[BasisCurve], n_boundary_pairs: int,
                    log: list | None = None) -> list[BasisCurve]:
    """normalize_rows under the train-track pairing of the curves' weights."""
    return normalize_rows(rows, n_boundary_pairs,
                          lambda a, b: pairing(track, a.weights, b.weights, check=False), log)


def standard_gram(npairs: int) -> list[list[int]]:
    G = [[0] * (2 * npairs) for _ in range(2 * npairs)]
    for k in range(npairs):
        G[2 * k][2 * k + 1] = 2
        G[2 * k + 1][2 * k] = -2
    return G


@dataclass
class Basis:
    track: TrainTrack
    context: DualCurveContext
    rows: list  # normalized BasisCurves in pair order
    n_boundary_pairs: int
    edge_curves: dict = field(default_factory=dict)  # edge id -> BasisCurve, all edges
    dual_walks: dict = field(default_factory=dict)  # edge id -> routed CurveWalk
    relaxed_legs: int = 0  # surface arcs that could not avoid earlier curves
    moves: tuple = ()  # normalization moves applied to the raw rows

    @property
    def names(self) -> list[str]:
        return [r.name for r in self.rows]

    def holonomies(self):
        return [holonomy(self.track, r.weights) for r in self.rows]


def build_basis(track: TrainTrack) -> Basis:
    T = track.T
    ctx = build_dual_context(T, track)
    boundary = []
    used = set()
    for end in T.ends:
        pairs, u = _boundary_basis(track, end.id)
        used |= u
        for m, l in pairs:
            boundary += [m, l]
    edge_curves = {}
    for E in T.edge_classes:
        walk = edge_loop_walk(T, E.id)
        edge_curves[E.id] = BasisCurve(f"C{E.id}", "C", realize_walk(track, walk), ((1, walk),))
    router = _Router(T, used)
    rows = list(boundary)
    dual_walks = {}
    for e in ctx.remaining:
        walk = route_dual_curve(track, ctx, e, router)
        dual_walks[e] = walk
        rows += [BasisCurve(f"Gamma{e}", "Gamma", realize_walk(track, walk), ((1, walk),)),
                 edge_curves[e]]
    if len(rows) != 2 * T.n:
        raise CurveError(f"basis has {len(rows)} rows, expected {2 * T.n}")
    for r in rows:
        if not track.is_oscillating(r.weights):
            raise CurveError(f"{r.name} is not oscillating")
    moves: list = []
    rows = normalize_basis(track, rows, len(boundary) // 2, moves)
    return Basis(track, ctx, rows, len(boundary) // 2, edge_curves, dual_walks,
                 router.relaxed_legs, tuple(moves))
