import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from alcove_groupoid.arrangement import adjacency, codim2_faces, enumerate_alcoves
from alcove_groupoid.salvetti import (
    SalvettiError,
    bfs_distances,
    connect_galleries,
    count_shortest_paths,
    generator_between,
    generators,
    make_gallery,
    minimal_galleries,
    minimal_positive_galleries,
    opposite_alcove,
    relations,
    substitution_table,
    verify_first_relations,
)

from conftest import window


def test_generator_counts():
    assert len(generators(window("A1", (), 5, 3))) == 10
    assert len(generators(window("A1xA1", (), 5, 1))) == 8
    for N in (1, 2, 3):
        # interior edges of a triangulated hexagon of side N: 9N^2 - 3N
        assert len(generators(window("A2", (), 5, N))) == 2 * (9 * N * N - 3 * N)


def test_generators_closed_under_reversal(a2):
    gens = generators(a2)
    pairs = {(g.source, g.target) for g in gens}
    assert len(pairs) == len(gens)
    assert all((t, s) in pairs for s, t in pairs)
    assert all(g.source != g.target for g in gens)
    g = gens[5]
    assert generator_between(a2, g.source, g.target) == g
    with pytest.raises(SalvettiError):
        generator_between(a2, gens[0].source, gens[0].source)


def test_relation_counts():
    assert relations(window("A1", (), 5, 3)) == []
    assert len(relations(window("A1xA1", (), 5, 1))) == 4
    for N in (1, 2):
        interior_vertices = 3 * N * N - 3 * N + 1
        assert len(relations(window("A2", (), 5, N))) == 6 * interior_vertices
        assert len(relations(window("A1xA1", (), 5, N))) == 4 * (2 * N - 1) ** 2


def test_opposite_examples(a1a1, a2):
    for f in codim2_faces(a1a1):
        if f.truncated:
            continue
        for a in f.star:
            b = opposite_alcove(a1a1, a, f).id
            # diagonal of the square: differs on both walls, 2 steps around the star
            i, j = f.star.index(a), f.star.index(b)
            assert (i - j) % 4 == 2
    for f in codim2_faces(a2):
        if f.truncated:
            continue
        for a in f.star:
            b = opposite_alcove(a2, a, f).id
            assert (f.star.index(a) - f.star.index(b)) % len(f.star) == f.pencil
            assert opposite_alcove(a2, b, f).id == a


def test_opposite_requires_star_membership(a2):
    f = next(f for f in codim2_faces(a2) if not f.truncated)
    outsider = next(a.id for a in enumerate_alcoves(a2) if a.id not in f.star)
    with pytest.raises(SalvettiError):
        opposite_alcove(a2, outsider, f)


def test_truncated_face_rejected(a2):
    f = next(f for f in codim2_faces(a2) if f.truncated)
    with pytest.raises(SalvettiError, match="excluded from relations"):
        minimal_positive_galleries(a2, f.star[0], f)


@pytest.mark.parametrize("args", [("A1xA1", (), 5, 2), ("A2", (), 5, 2), ("B2", (), 5, 2), ("G2", (), 7, 2),
                                  ("A3", (1,), 5, 1), ("A3", (), 5, 1)])
def test_relation_invariants(args):
    w = window(*args)
    adj = adjacency(w)
    faces = {f.id: f for f in codim2_faces(w)}
    for r in relations(w):
        f = faces[r.face]
        k = f.pencil
        assert r.left.length == r.right.length == k
        assert r.left.word != r.right.word
        assert r.left.word[0] != r.right.word[0] and r.left.word[-1] != r.right.word[-1]
        assert set(r.left.alcoves) <= set(f.star) and set(r.right.alcoves) <= set(f.star)
        assert r.left.source == r.right.source == r.opposite
        assert r.left.target == r.right.target == r.apex
        # star-local census and global census both see exactly two shortest paths
        star_adj = {a: [(h, b) for h, b in adj[a] if b in f.star] for a in f.star}
        assert count_shortest_paths(star_adj, r.opposite, r.apex) == (k, 2)
        assert count_shortest_paths(adj, r.opposite, r.apex) == (k, 2)


def test_make_gallery_rejects_non_adjacent(a2):
    ids = [a.id for a in enumerate_alcoves(a2)]
    far = max(ids, key=lambda b: bfs_distances(adjacency(a2), ids[0]).get(b, 0))
    with pytest.raises(SalvettiError):
        make_gallery(a2, [ids[0], far])


def test_first_relations_small_cases():
    rep = verify_first_relations(window("A1", (), 5, 3))
    assert rep.count("fail") == 0 and all(p.galleries == 1 for p in rep.pairs)
    w = window("A1xA1", (), 5, 1)
    adj = adjacency(w)
    ids = [a.id for a in enumerate_alcoves(w)]
    corner = next(b for b in ids if bfs_distances(adj, ids[0])[b] == 2)
    rep = verify_first_relations(w, pairs=[(ids[0], corner)])
    assert rep.pairs[0].galleries == 2 and rep.pairs[0].verdict == "pass"


def test_first_relations_a2_distance_three(a2):
    rep = verify_first_relations(a2, max_distance=3)
    assert rep.count("fail") == 0 and rep.count("inconclusive") == 0
    assert rep.count("pass") == len(rep.pairs) > 0


def test_connect_galleries_detects_unrelated_paths(a1a1):
    # with an empty relation table two distinct galleries cannot be connected
    adj = adjacency(a1a1)
    ids = [a.id for a in enumerate_alcoves(a1a1)]
    src = ids[0]
    dst = next(b for b, d in sorted(bfs_distances(adj, src).items()) if d == 2
               and len(minimal_galleries(adj, src, b)) == 2)
    gals = minimal_galleries(adj, src, dst)
    assert connect_galleries(gals, {}, 100)[0] == "fail"
    assert connect_galleries(gals, substitution_table(relations(a1a1)), 100)[0] == "pass"
    assert connect_galleries(gals[:1], {}, 100)[0] == "pass"


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_minimal_gallery_census_matches_path_count(data):
    w = window("A2", (), 5, 2)
    adj = adjacency(w)
    ids = sorted(adj)
    src = data.draw(st.sampled_from(ids))
    dst = data.draw(st.sampled_from(ids))
    gals = minimal_galleries(adj, src, dst)
    dist, count = count_shortest_paths(adj, src, dst)
    assert len(gals) == count
    assert all(len(g) - 1 == dist for g in gals)
    assert all(g[0] == src and g[-1] == dst for g in gals)
