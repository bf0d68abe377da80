from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from alcove_groupoid.arrangement import (
    ArrangementError,
    OnWallError,
    adjacency,
    adjacent_alcoves,
    brute_force_alcoves,
    build_window,
    codim2_faces,
    enumerate_alcoves,
    locate_alcove,
    restricted_families,
)
from alcove_groupoid.polyhedra import simplex_strictly_feasible
from alcove_groupoid.rootdata import build_root_datum, levi_sublattice

from conftest import window


def test_a1_wall_positions():
    w = window("A1", (), 5, 2)
    assert sorted(-h.offset for h in w.hyperplanes) == [-11, -6, -1, 4, 9]
    assert all(h.linear == (1,) for h in w.hyperplanes)


def test_levi_parallel_families_stay_distinct():
    rd = build_root_datum("A3")
    fams = restricted_families(rd, levi_sublattice(rd, [1]))
    by_root = {f.root: (f.linear, f.const) for f in fams}
    assert by_root[(1, 0, 0)] == ((1, 0), 1)
    assert by_root[(1, 1, 0)] == ((1, 0), 2)
    w = window("A3", (1,), 5, 1)
    xs = {h.offset for h in w.hyperplanes if h.linear == (1, 0)}
    assert {Fraction(1), Fraction(2)} <= xs


def test_a2_hyperplane_count():
    assert len(window("A2", (), 5, 1).hyperplanes) == 9


def test_exact_duplicates_merge_with_provenance():
    # each (root, level) source is recorded on exactly one stored hyperplane
    for w in (window("B2", (), 5, 2), window("A3", (1,), 5, 2), window("G2", (), 7, 1)):
        keys = [h.key for h in w.hyperplanes]
        assert len(keys) == len(set(keys))
        srcs = [src for h in w.hyperplanes for src in h.provenance]
        assert len(srcs) == len(w.families) * (2 * w.N + 1)


def test_locate_examples():
    w = window("A2", (), 5, 2)
    a = locate_alcove(w, (0, 0))
    assert all(0 < f.value(a.sample) < 5 for f in w.families)
    assert sorted(f.value((0, 0)) for f in w.families) == [1, 1, 2]
    with pytest.raises(OnWallError, match=r"H_\{1,0\}"):
        locate_alcove(window("A1", (), 5, 2), (-1,))
    wl = window("A3", (1,), 5, 1)
    # (1, 1) pairs to 1 + 1 + 3 = 5 with the highest coroot: on a wall
    with pytest.raises(OnWallError, match=r"H_\{111,1\}"):
        locate_alcove(wl, (1, 1))
    b = locate_alcove(wl, (1, 0))
    assert wl.signs_at(b.sample) == b.id == wl.signs_at((1, 0))


def test_locate_outside_window():
    with pytest.raises(ArrangementError):
        locate_alcove(window("A1", (), 5, 1), (20,))


def test_rejects_bad_windows():
    rd = build_root_datum("A2")
    with pytest.raises(ArrangementError):
        build_window(rd, [0, 1], 5, 1)
    with pytest.raises(ArrangementError):
        build_window(rd, [], 5, 0)
    with pytest.raises(ValueError):
        build_window(rd, [], 4, 1)


# |W| * N^rank: the window {|f_alpha| < N p} is the N-fold dilate of the
# union of the |W| alcoves around -rho
@pytest.mark.parametrize("label,N", [("A1", 3), ("A1xA1", 1), ("A1xA1", 2), ("A2", 1), ("A2", 2), ("A2", 3),
                                     ("B2", 1), ("B2", 2), ("G2", 1), ("A3", 1)])
def test_alcove_count_torus_levi(label, N):
    p = 7 if label == "G2" else 5
    w = window(label, (), p, N)
    rd = w.rd
    assert len(enumerate_alcoves(w)) == rd.weyl_order * N ** rd.rank


@pytest.mark.parametrize("args", [("A1", (), 5, 3), ("A1xA1", (), 5, 2), ("A2", (), 5, 2), ("B2", (), 5, 1),
                                  ("G2", (), 5, 1), ("A3", (1,), 5, 1), ("A3", (0,), 5, 1)])
def test_closure_matches_brute_force(args):
    w = window(*args)
    assert [a.id for a in enumerate_alcoves(w)] == brute_force_alcoves(w)


def test_frozen_counts():
    # window census cross-checked by brute_force_alcoves above
    w = window("A3", (1,), 5, 1)
    assert (len(w.hyperplanes), len(enumerate_alcoves(w))) == (15, 12)
    w = window("A3", (1,), 5, 2)
    assert (len(w.hyperplanes), len(enumerate_alcoves(w))) == (25, 60)
    assert len(window("G2", (), 5, 2).hyperplanes) == 30


@pytest.mark.parametrize("args", [("A2", (), 5, 2), ("A3", (1,), 5, 2), ("G2", (), 7, 1), ("A3", (), 5, 1)])
def test_sign_consistency_and_samples(args):
    w = window(*args)
    for a in enumerate_alcoves(w):
        assert w.signs_at(a.sample) == a.id
        assert locate_alcove(w, a.sample).id == a.id


def test_adjacency_examples_and_symmetry():
    w1 = window("A1", (), 5, 3)
    degrees = sorted(len(v) for v in adjacency(w1).values())
    assert degrees == [1, 1, 2, 2, 2, 2]
    w = window("A2", (), 5, 2)
    adj = adjacency(w)
    assert max(len(v) for v in adj.values()) == 3
    assert sum(len(v) == 3 for v in adj.values()) > 0
    for a, nbs in adj.items():
        for hi, b in nbs:
            assert sum(x != y for x, y in zip(a, b)) == 1 and a[hi] != b[hi]
            assert (hi, a) in adj[b]
    a = enumerate_alcoves(w)[0]
    assert sorted(b.id for b, _ in adjacent_alcoves(w, a)) == sorted(b for _, b in adj[a.id])


def test_non_facet_flip_is_empty():
    w = window("A2", (), 5, 2)
    found = False
    for a in enumerate_alcoves(w):
        facets = set(w.facets(a))
        for hi in range(len(w.hyperplanes)):
            if hi in facets:
                continue
            flipped = a.id[:hi] + ("-" if a.id[hi] == "+" else "+") + a.id[hi + 1:]
            cs = []
            for h, s in zip(w.hyperplanes, flipped):
                sg = 1 if s == "+" else -1
                cs.append((tuple(Fraction(sg * c) for c in h.linear), sg * h.offset, True))
            assert not simplex_strictly_feasible(cs, w.dim)
            found = True
        break
    assert found


def test_faces_examples():
    assert codim2_faces(window("A1", (), 5, 3)) == []
    w = window("A2", (), 5, 2)
    neg_rho = (Fraction(-1), Fraction(-1))
    at_rho = [f for f in codim2_faces(w) if all(w.hyperplanes[i].value(neg_rho) == 0 for i in f.hyperplanes)]
    assert len(at_rho) == 1
    f = at_rho[0]
    assert f.pencil == 3 and len(f.star) == 6 and not f.truncated
    for f in codim2_faces(window("A1xA1", (), 5, 2)):
        assert f.pencil == 2
        if not f.truncated:
            assert len(f.star) == 4


@pytest.mark.parametrize("args", [("A2", (), 5, 2), ("B2", (), 5, 2), ("G2", (), 7, 2), ("A3", (1,), 5, 2)])
def test_star_sizes_and_cyclic_order(args):
    w = window(*args)
    for f in codim2_faces(w):
        if f.truncated:
            assert len(f.star) < 2 * f.pencil
            continue
        assert len(f.star) == 2 * f.pencil
        n = len(f.star)
        for i in range(n):
            x, y = f.star[i], f.star[(i + 1) % n]
            assert sum(x[h] != y[h] for h in f.hyperplanes) == 1
        for h in f.hyperplanes:
            assert w.hyperplanes[h].value(f.sample) == 0


def test_pencils_of_rank_two_types():
    assert {f.pencil for f in codim2_faces(window("B2", (), 5, 2))} == {2, 4}
    assert {f.pencil for f in codim2_faces(window("G2", (), 7, 2))} == {2, 3, 6}


def test_parallel_enumeration_is_partition_independent():
    rd = build_root_datum("A2")
    w1, w4 = build_window(rd, [], 5, 2), build_window(rd, [], 5, 2)
    a = [x.id for x in enumerate_alcoves(w1, workers=1)]
    b = [x.id for x in enumerate_alcoves(w4, workers=4)]
    assert a == b
    assert adjacency(w1) == adjacency(w4)


def test_seed_fallback_when_origin_perturbation_leaves_window():
    # <rho, theta^vee> = 5 for G2 puts the origin on a level-1 wall
    w = window("G2", (), 5, 1)
    assert len(enumerate_alcoves(w)) == 12


def test_seed_override():
    rd = build_root_datum("A2")
    w = build_window(rd, [], 5, 2)
    w.seed_point = ("3", "-7")
    assert [a.id for a in enumerate_alcoves(w)] == [a.id for a in enumerate_alcoves(window("A2", (), 5, 2))]


@settings(max_examples=40, deadline=None)
@given(st.tuples(st.fractions(-12, 12, max_denominator=5), st.fractions(-12, 12, max_denominator=5)))
def test_random_points_land_in_their_alcove(pt):
    w = window("A2", (), 5, 2)
    try:
        a = locate_alcove(w, pt)
    except ArrangementError:
        return
    assert w.signs_at(pt) == a.id
    assert a.id in {x.id for x in enumerate_alcoves(w)}
