import json

import pytest

from oscbasis.triangulation import (IdealTriangulation, TriangulationError, abc_labelling,
                                    boundary_triangulation, edge_classes, format_triangulation,
                                    parse_triangulation, perm_sign)

FIG8 = "2\n1:0132 1:1230 1:2310 1:2103\n0:0132 0:3201 0:3012 0:2103\n"


def _gluings(text):
    rows = [line.split() for line in text.strip().splitlines()[1:]]
    return tuple(tuple((int(it[0]), tuple(int(c) for c in it[2:])) for it in row) for row in rows)


def test_figure8_counts():
    T = parse_triangulation(FIG8)
    assert T.n == 2
    assert len(T.edge_classes) == 2
    assert len(T.ends) == 1
    assert T.ends[0].genus == 1
    assert T.euler_identity_holds()


def test_figure8_edge_degrees():
    T = parse_triangulation(FIG8)
    assert sorted(e.degree for e in edge_classes(T)) == [6, 6]


def test_figure8_boundary_triangles():
    T = parse_triangulation(FIG8)
    ends, tris = boundary_triangulation(T)
    assert len(ends) == 1
    assert len(tris) == 8
    assert len(ends[0].triangles) == 8


def test_comments_and_blank_lines():
    text = "# figure-eight\n\n" + FIG8.replace("\n", "\n\n")
    assert parse_triangulation(text).gluings == parse_triangulation(FIG8).gluings


def test_json_mirror():
    doc = {"n": 2, "gluings": [["1:0132", "1:1230", "1:2310", "1:2103"],
                               [[0, "0132"], [0, [3, 2, 0, 1]], {"tet": 0, "perm": "3012"},
                                [0, "2103"]]]}
    T = parse_triangulation(json.dumps(doc))
    assert T.gluings == parse_triangulation(FIG8).gluings


def test_format_round_trip():
    T = parse_triangulation(FIG8)
    assert parse_triangulation(format_triangulation(T)).gluings == T.gluings


@pytest.mark.parametrize("text, kind", [
    ("1\n0:1023 0:1023 0:1230 -\n", "unglued face"),
    ("1\n0:1023 0:1023 0:1230 0:1230\n", "non-involutive gluing"),
    ("2\n1:0132 1:1230 1:2310\n0:0132 0:3201 0:3012 0:2103\n", "malformed"),
    ("2\n1:0132 1:1230 1:2310 1:2103\n", "malformed"),
    ("x\n", "malformed"),
    ("", "malformed"),
    ("1\n0:1023 0:1023 0:1230 0:3013\n", "malformed"),
    ("1\n0:1023 0:1023 0:1230 5:3012\n", "malformed"),
    ("1\n0:1203 0:2013 0:0231 0:0312\n", "non-orientable"),
])
def test_invalid_inputs(text, kind):
    with pytest.raises(TriangulationError) as info:
        parse_triangulation(text)
    assert info.value.kind == kind


def test_error_location():
    with pytest.raises(TriangulationError) as info:
        parse_triangulation("1\n0:1023 0:1023 0:1230 -\n")
    doc = info.value.as_dict()
    assert doc == {"error": "unglued face", "message": "face has no gluing",
                   "tet": 0, "face": 3, "line": 2}


def test_face_glued_to_itself():
    with pytest.raises(TriangulationError):
        IdealTriangulation.from_gluings([[(0, (0, 1, 2, 3))] * 4])


def test_all_edges_identified():
    # the only way to fold all six edges of one tetrahedron together is non-orientable,
    # so build it without validation and read the raw union-find
    gl = _gluings("1\n0:1203 0:2013 0:0231 0:0312")
    T = IdealTriangulation(gl, (1,))
    _, classes = T._edge_data
    assert len(classes) == 1
    assert len(classes[0]) == 6


def test_disjoint_union_edges():
    gl = _gluings(FIG8)
    shifted = tuple(tuple((t + 2, p) for t, p in row) for row in gl)
    U = IdealTriangulation.from_gluings(gl + shifted)
    assert not U.is_connected()
    assert len(U.edge_classes) == 4
    assert sorted(e.degree for e in U.edge_classes) == [6, 6, 6, 6]
    assert len(U.ends) == 2


def test_orientation_rule():
    T = parse_triangulation(FIG8)
    assert T.orientation[0] == 1
    for t, row in enumerate(T.gluings):
        for t2, p in row:
            assert T.orientation[t] * T.orientation[t2] * perm_sign(p) == -1


def test_labelling_positive_tet():
    T = parse_triangulation(FIG8)
    lab = abc_labelling(T)
    assert lab.convention == "primary"
    # every gluing permutation is odd, so both tets are positive
    assert T.orientation == (1, 1)
    assert lab.pair_labels(0) == lab.pair_labels(1) == ("a", "b", "c")


def test_labelling_negative_tet():
    # an even gluing permutation forces the neighbour to be negative
    T = parse_triangulation("1\n0:1023 0:1023 0:1230 0:3012\n")
    assert T.orientation == (1,)
    two = IdealTriangulation.from_gluings(
        [[(1, (0, 1, 2, 3)), (1, (0, 1, 2, 3)), (1, (0, 1, 2, 3)), (1, (0, 1, 2, 3))],
         [(0, (0, 1, 2, 3)), (0, (0, 1, 2, 3)), (0, (0, 1, 2, 3)), (0, (0, 1, 2, 3))]])
    assert two.orientation == (1, -1)
    lab = two.labelling
    assert lab.pair_labels(0) == ("a", "b", "c")
    assert lab.pair_labels(1) == ("a", "c", "b")


def test_mirror_swaps_b_and_c():
    T = parse_triangulation(FIG8)
    lab, mir = abc_labelling(T), abc_labelling(T, mirror=True)
    swap = {"a": "a", "b": "c", "c": "b"}
    for t in range(T.n):
        assert tuple(swap[x] for x in lab.pair_labels(t)) == mir.pair_labels(t)


def test_edge_corner_counts_match_reference_edge_vector():
    # the edge vector (2,0,1,2,0,1) of the reference data, up to a cyclic (a,b,c) shift per tet
    T = parse_triangulation(FIG8)
    reference = (2, 0, 1, 2, 0, 1)
    rotations = lambda v: {tuple(v[r:] + v[:r]) for r in range(3)}
    found = False
    for e in T.edge_classes:
        counts = [0] * 6
        for t, (i, j) in e.representatives:
            counts[3 * t + "abc".index(T.labelling.label(t, i, j))] += 1
        if all(tuple(reference[3 * t:3 * t + 3]) in rotations(counts[3 * t:3 * t + 3])
               for t in range(2)):
            found = True
    assert found


@pytest.mark.parametrize("text", [
    "1\n0:1023 0:1023 0:1230 0:3012\n",
    "1\n0:1023 0:1023 0:0132 0:0132\n",
    FIG8,
])
def test_euler_identity(text):
    T = parse_triangulation(text)
    lhs = 2 * T.n
    rhs = 2 * len(T.edge_classes) - 2 * len(T.ends) + 2 * sum(e.genus for e in T.ends)
    assert lhs == rhs
