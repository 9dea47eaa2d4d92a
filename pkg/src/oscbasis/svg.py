"""SVG drawings of each end: the boundary triangulation unfolded flat, with curves.

Triangles are laid out on the integer lattice.  The root triangle has corners
a=(0,0), b=(1,0), c=(0,1); each triangle met by breadth-first search across a
side gets the apex P + Q - R, where PQ is the shared side and R is the
parent's third corner.  Unfoldings of large ends may overlap.
"""

from __future__ import annotations

from collections import deque
from fractions import Fraction

from .curves import Basis, CornerPass, Dive
from .triangulation import LABELS, SIDES, IdealTriangulation

SCALE = 120
MARGIN = 40
COLOURS = {"m": "#1f5fbf", "l": "#c0392b", "Gamma": "#1e8449", "C": "#7d3c98"}


def fmt(x) -> str:
    """Fixed three-decimal rendering of a rational, without floats."""
    q = round(Fraction(x) * 1000)
    sign = "-" if q < 0 else ""
    q = abs(q)
    return f"{sign}{q // 1000}.{q % 1000:03d}"


def unfold(T: IdealTriangulation, end_id: int) -> dict:
    """Corner positions {(t, v): {label: (x, y)}} for one end."""
    tris = list(T.ends[end_id].triangles)
    root = tris[0]
    pos = {root: {"a": (0, 0), "b": (1, 0), "c": (0, 1)}}
    queue = deque([root])
    while queue:
        t, v = queue.popleft()
        for s in SIDES:
            t2, v2, s2 = T.across_side(t, v, s)
            if (t2, v2) in pos:
                continue
            f = T.side_face(t, v, s)
            p = T.gluings[t][f][1]
            here = pos[(t, v)]
            there = {}
            for x in s:
                w = p[T.corner_vertex(t, v, x)]
                there[T.labelling.label(t2, v2, w)] = here[x]
            z = next(x for x in LABELS if x not in s)
            (px, py), (qx, qy) = here[s[0]], here[s[1]]
            rx, ry = here[z]
            apex = next(x for x in LABELS if x not in there)
            there[apex] = (px + qx - rx, py + qy - ry)
            pos[(t2, v2)] = there
            queue.append((t2, v2))
    return pos


def _along(pos, s, frac):
    (x0, y0), (x1, y1) = pos[s[0]], pos[s[1]]
    return (x0 + (x1 - x0) * frac, y0 + (y1 - y0) * frac)


def _from_corner(pos, s, corner, frac):
    return _along(pos, s, frac if s[0] == corner else 1 - frac)


def _portal(pos, T, t, v, side, w):
    """Point on ``side`` close to the corner at tet vertex ``w``."""
    frac = Fraction(1, 6) if T.corner_vertex(t, v, side[0]) == w else Fraction(5, 6)
    return _along(pos, side, frac)


def end_svg(basis: Basis, end_id: int) -> str:
    T = basis.track.T
    pos = unfold(T, end_id)
    on_end = set(pos)
    xs = [p[0] for c in pos.values() for p in c.values()]
    ys = [p[1] for c in pos.values() for p in c.values()]
    x0, y1 = min(xs), max(ys)
    width = (max(xs) - x0) * SCALE + 2 * MARGIN
    height = (y1 - min(ys)) * SCALE + 2 * MARGIN + 20 * len(COLOURS)

    def px(pt):
        x, y = pt
        return f"{fmt((x - x0) * SCALE + MARGIN)},{fmt((y1 - y) * SCALE + MARGIN)}"

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{fmt(width)}" height="{fmt(height)}" '
           f'font-family="sans-serif" font-size="10">',
           f"<title>end {end_id}</title>",
           '<g fill="#f4f6f7" stroke="#7f8c8d" stroke-width="1">']
    for (t, v), c in sorted(pos.items()):
        out.append(f'<polygon points="{" ".join(px(c[x]) for x in LABELS)}"/>')
    out.append("</g>")
    out.append('<g fill="#555">')
    for (t, v), c in sorted(pos.items()):
        cx = sum(Fraction(c[x][0]) for x in LABELS) / 3
        cy = sum(Fraction(c[x][1]) for x in LABELS) / 3
        out.append(f'<text x="{px((cx, cy)).split(",")[0]}" y="{px((cx, cy)).split(",")[1]}" '
                   f'text-anchor="middle">{t}.{v}</text>')
    out.append("</g>")

    rows = basis.rows
    k_total = len(rows) + 1
    for k, row in enumerate(rows):
        colour = COLOURS.get(row.role, "#000")
        frac = Fraction(k + 1, k_total)
        out.append(f'<g stroke="{colour}" fill="none" stroke-width="1.5"><title>{row.name}</title>')
        for _, walk in row.terms:
            for st in walk.steps:
                if isinstance(st, CornerPass) and (st.tet, st.vertex) in on_end:
                    c = pos[(st.tet, st.vertex)]
                    s_in, s_out = st.sides
                    # offsets measured from the corner keep each row on its own track
                    a = _from_corner(c, s_in, st.label, frac)
                    b = _from_corner(c, s_out, st.label, frac)
                    corner = c[st.label]
                    mid = ((a[0] + b[0] + corner[0]) / 3, (a[1] + b[1] + corner[1]) / 3)
                    out.append(f'<polyline points="{px(a)} {px(mid)} {px(b)}"/>')
                elif isinstance(st, Dive):
                    for tri, w in (((st.tet, st.entry), st.exit), ((st.tet, st.exit), st.entry)):
                        if tri in on_end:
                            side = T.side_on_face(tri[0], tri[1], st.face)
                            pt = _portal(pos[tri], T, tri[0], tri[1], side, w)
                            out.append(f'<circle cx="{px(pt).split(",")[0]}" cy="{px(pt).split(",")[1]}" '
                                       f'r="3" fill="{colour}"/>')
        out.append("</g>")
    ly = (y1 - min(ys)) * SCALE + 2 * MARGIN
    for n, (role, colour) in enumerate(COLOURS.items()):
        out.append(f'<text x="{MARGIN}" y="{fmt(ly + 16 * n)}" fill="{colour}">{role}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def end_svgs(basis: Basis) -> list[str]:
    return [end_svg(basis, e.id) for e in basis.track.T.ends]
