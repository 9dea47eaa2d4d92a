import random
from collections import Counter

import pytest

from oscbasis.intlinalg import rational_rank
from oscbasis.traintrack import (HexCentral, HexLong, ThreeSwitch, TriangleCorner, TriangleExit,
                                 TwoSwitch, WeightVector, build_track, compatibility_system,
                                 is_oscillating, kernel_basis)

# kernel rank of the figure-8 compatibility system, frozen after the first exact run
FIG8_KERNEL_RANK = 48


def test_figure8_counts(fig8_track):
    tr = fig8_track
    assert len(tr.branches) == 120
    kinds = Counter(v.kind for v in tr.vertices)
    assert kinds == {"TwoSwitch": 24, "ThreeSwitch": 24, "OneSwitch": 12, "Station": 12}


def test_one_tet_counts(one_tet_track):
    assert len(one_tet_track.branches) == 60


def test_stations_join_glued_hexagons(fig8_track, one_tet_track):
    for tr in (fig8_track, one_tet_track):
        T = tr.T
        for vx in tr.vertices_by_kind["Station"]:
            faces = {(b.tet, b.face) for b, _ in vx.branches}
            assert len(vx.branches) == 4
            assert len(faces) == 2
            (t, f), (t2, f2) = sorted(faces)
            t_glued, p = T.gluings[t][f]
            assert (t_glued, p[f]) == (t2, f2)


def test_row_counts(fig8_track):
    kinds = Counter(kind for kind, _, _ in fig8_track.compatibility_rows)
    n, pairs = 2, 4
    assert kinds == {"i": 12 * n, "ii": 12 * n, "iii": 3 * pairs, "iv": 3 * pairs}


def test_row_entries(fig8_track):
    for row in compatibility_system(fig8_track):
        assert set(row) <= {-1, 0, 1}
        assert sum(map(abs, row)) <= 4


def test_zero_is_oscillating(fig8_track):
    assert is_oscillating(fig8_track, WeightVector.zero(fig8_track))


def test_single_corner_is_not(fig8_track):
    w = WeightVector.from_map(fig8_track, {TriangleCorner(0, 0, "a"): 1})
    assert not is_oscillating(fig8_track, w)
    assert any(kind == "i" for kind, _ in fig8_track.violations(w))


def test_kernel_rank_regression(fig8_track):
    K = kernel_basis(fig8_track)
    assert len(K) == FIG8_KERNEL_RANK
    # independent check: rank by rational elimination
    assert rational_rank([list(w.values) for w in K]) == FIG8_KERNEL_RANK
    assert len(fig8_track.branches) - rational_rank(compatibility_system(fig8_track)) == FIG8_KERNEL_RANK


def test_rank_nullity(any_case):
    _, T, basis = any_case
    tr = basis.track
    rank = rational_rank(compatibility_system(tr))
    assert rank + len(kernel_basis(tr)) == len(tr.branches)


def test_random_combinations_oscillate(fig8_track):
    rng = random.Random(5)
    K = kernel_basis(fig8_track)
    for _ in range(20):
        w = sum((rng.randint(-3, 3) * k for k in K), WeightVector.zero(fig8_track))
        assert is_oscillating(fig8_track, w)
        assert all(s == 0 for s in fig8_track.switch_sums(w))


def test_branch_types_never_alias():
    # same field values, different branch kinds
    assert TriangleExit(0, 0, "ab") != HexCentral(0, 0, "ab")
    assert hash(TriangleExit(0, 0, "ab")) != hash(HexCentral(0, 0, "ab"))
    assert TwoSwitch(0, 0, "ab") != ThreeSwitch(0, 0, "ab")
    assert HexLong(0, 1, "ab", "bc") == HexLong(0, 1, "ab", "bc")


def test_branch_index_is_a_bijection(fig8_track):
    tr = fig8_track
    assert len(set(tr.branches)) == len(tr.branches)
    assert [tr.index(b) for b in tr.branches] == list(range(len(tr.branches)))


def test_weight_vectors_on_different_tracks(fig8_track, one_tet_track):
    with pytest.raises(TypeError):
        WeightVector.zero(fig8_track) + WeightVector.zero(one_tet_track)


def test_track_json_lists_everything(fig8_track):
    doc = fig8_track.to_json()
    assert len(doc["branches"]) == 120
    assert len(doc["vertices"]) == 72


def test_build_track_is_deterministic(fig8):
    a, b = build_track(fig8), build_track(fig8)
    assert a.branches == b.branches
