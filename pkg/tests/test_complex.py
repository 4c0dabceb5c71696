import itertools
import math

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from oracles import incidence, med_networkx, to_networkx
from sheafsample.complex import Cover, SimplicialComplex, make_face, nerve, orientation_index
from sheafsample.errors import InvalidFace, NotClosed, UnknownFace
from sheafsample.zoo import cycle_graph, path_graph, star_graph


class TestFaces:
    def test_make_face_sorts(self):
        assert make_face([3, 1, 2]) == (1, 2, 3)

    @pytest.mark.parametrize("bad", [[], [1, 1], [-1], [0.5], [True]])
    def test_make_face_rejects(self, bad):
        with pytest.raises(InvalidFace):
            make_face(bad)

    def test_orientation_of_edge(self):
        assert orientation_index((0, 1), (1,)) == 1
        assert orientation_index((0, 1), (0,)) == -1

    def test_orientation_of_triangle(self):
        assert orientation_index((0, 1, 2), (1, 2)) == 1
        assert orientation_index((0, 1, 2), (0, 2)) == -1
        assert orientation_index((0, 1, 2), (0, 1)) == 1

    def test_orientation_zero_off_codim_one(self):
        assert orientation_index((0, 1, 2), (0,)) == 0
        assert orientation_index((0, 1), (2,)) == 0

    @given(st.sets(st.integers(0, 30), min_size=2, max_size=6))
    def test_orientation_matches_permutation_sign(self, vs):
        b = make_face(vs)
        for a in itertools.combinations(b, len(b) - 1):
            assert orientation_index(b, a) == incidence(b, a)


class TestSimplicialComplex:
    def test_closure_of_triangle(self):
        tri = SimplicialComplex.from_maximal_faces([[0, 1, 2]])
        assert len(tri) == 7
        assert tri.dimension == 2
        assert tri.faces(1) == ((0, 1), (0, 2), (1, 2))

    def test_constructor_requires_closed(self):
        with pytest.raises(NotClosed):
            SimplicialComplex([(0,), (0, 1)])

    def test_empty_complex(self):
        empty = SimplicialComplex([])
        assert empty.dimension == -1
        assert empty.vertices == ()

    def test_maximal_faces(self):
        x = SimplicialComplex.from_maximal_faces([[0, 1, 2], [2, 3], [4]])
        assert x.maximal_faces() == ((0, 1, 2), (2, 3), (4,))

    def test_attachments_are_codim_one(self):
        tri = SimplicialComplex.from_maximal_faces([[0, 1, 2]])
        pairs = list(tri.attachments())
        assert len(pairs) == 3 * 2 + 3
        assert all(len(b) == len(a) + 1 and set(a) < set(b) for a, b in pairs)

    def test_cofaces_and_boundary(self):
        tri = SimplicialComplex.from_maximal_faces([[0, 1, 2]])
        assert set(tri.cofaces((0,))) >= {(0, 1), (0, 2)}
        assert set(tri.boundary((0, 1, 2))) == {(0, 1), (0, 2), (1, 2)}

    def test_unknown_face(self):
        with pytest.raises(UnknownFace):
            path_graph(3).cofaces((5,))

    def test_skeleton_and_subcomplex(self):
        tri = SimplicialComplex.from_maximal_faces([[0, 1, 2]])
        assert tri.skeleton(1).dimension == 1
        assert tri.subcomplex([(0,), (1,), (0, 1)]).faces() == ((0,), (1,), (0, 1))
        assert tri.is_closed([(0,), (1,), (0, 1)])
        assert not tri.is_closed([(0, 1)])
        with pytest.raises(NotClosed):
            tri.subcomplex([(0, 1)])

    def test_contains(self):
        x = path_graph(3)
        assert (1, 0) in x
        assert (0, 2) not in x
        assert "junk" not in x

    @given(st.lists(st.sets(st.integers(0, 8), min_size=1, max_size=4), min_size=1, max_size=6))
    def test_closure_is_subset_closed(self, maximal):
        x = SimplicialComplex.from_maximal_faces(maximal)
        assert x.validate() == []
        for f in x.faces():
            for r in range(1, len(f)):
                for sub in itertools.combinations(f, r):
                    assert sub in x


class TestGraphQueries:
    def test_degrees_on_star(self):
        s = star_graph(3)
        assert s.degree(0) == 3
        assert [s.degree(v) for v in (1, 2, 3)] == [1, 1, 1]
        assert s.incident_edges(0) == ((0, 1), (0, 2), (0, 3))

    def test_distance_unreachable(self):
        x = SimplicialComplex.from_maximal_faces([[0, 1], [2, 3]])
        assert x.edge_distance(0, 3) == math.inf
        assert x.max_edge_distance([0]) == math.inf
        assert len(x.connected_components()) == 2

    def test_med_of_empty_sample(self):
        assert path_graph(3).max_edge_distance([]) == math.inf

    @settings(max_examples=60, deadline=None)
    @given(st.integers(2, 10), st.data())
    def test_med_matches_networkx(self, n, data):
        g = nx.gnp_random_graph(n, 0.4, seed=data.draw(st.integers(0, 10_000)))
        edges = [sorted(e) for e in g.edges]
        x = SimplicialComplex.from_maximal_faces(edges + [[v] for v in g.nodes])
        ys = data.draw(st.sets(st.sampled_from(sorted(g.nodes)), min_size=1))
        assert x.max_edge_distance(ys) == med_networkx(x, ys)

    def test_components_match_networkx(self):
        x = SimplicialComplex.from_maximal_faces([[0, 1], [1, 2], [4, 5], [7]])
        ours = sorted(tuple(sorted(c)) for c in x.connected_components())
        theirs = sorted(tuple(sorted(c)) for c in nx.connected_components(to_networkx(x)))
        assert ours == theirs

    def test_cycle_distances(self):
        c = cycle_graph(6)
        assert c.edge_distance(0, 3) == 3
        assert c.max_edge_distance([0, 3]) == 1


class TestNerve:
    def test_triple_intersection_gives_solid_triangle(self):
        cover = {"A": {1, 2, 4, 7}, "B": {2, 3, 5, 7}, "C": {4, 5, 6, 7}}
        x = nerve(cover)
        assert x == SimplicialComplex.from_maximal_faces([[0, 1, 2]])

    def test_no_triple_intersection_gives_hollow_triangle(self):
        cover = {"A": {1, 2, 4}, "B": {2, 3, 5}, "C": {4, 5, 6}}
        x = nerve(cover)
        assert x == cycle_graph(3)

    def test_labels_follow_input_order(self):
        cover = Cover([("U", {1}), ("V", {1, 2})])
        assert cover.labels == ("U", "V")
        assert nerve(cover).faces(1) == ((0, 1),)

    def test_rejects_empty_set_and_duplicates(self):
        with pytest.raises(ValueError):
            Cover({"A": set()})
        with pytest.raises(ValueError):
            Cover([("A", {1}), ("A", {2})])
        with pytest.raises(ValueError):
            nerve({})

    @settings(max_examples=80, deadline=None)
    @given(st.lists(st.sets(st.integers(0, 9), min_size=1, max_size=5), min_size=1, max_size=5))
    def test_nerve_matches_brute_force(self, sets):
        x = nerve(list(enumerate(sets)))
        expected = set()
        for r in range(1, len(sets) + 1):
            for idx in itertools.combinations(range(len(sets)), r):
                if set.intersection(*(sets[i] for i in idx)):
                    expected.add(idx)
        assert set(x.faces()) == expected
        assert x.dimension <= len(sets) - 1
