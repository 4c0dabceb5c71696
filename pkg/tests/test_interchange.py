import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from strategies import graph_sheaves
from sheafsample.complex import SimplicialComplex
from sheafsample.interchange import (
    FORMAT_VERSION,
    Document,
    DocumentError,
    decode_matrix,
    dump,
    dumps,
    encode_matrix,
    load,
    load_morphism,
    loads,
    to_dict,
)
from sheafsample.sampling import SheafMorphism, SimplicialMap, full_stalk_sampling
from sheafsample.zoo import MetricGraph, constant_sheaf, cycle_graph, path_graph, transmission_line_sheaf

finite = st.floats(allow_nan=False, allow_infinity=False)


def assert_same_sheaf(f, g):
    assert f.base == g.base
    assert f.field == g.field
    assert f.stalk_dims == g.stalk_dims
    for key, mat in f.restrictions.items():
        other = g.restrictions[key]
        assert mat.dtype == other.dtype
        assert np.array_equal(mat, other)


class TestMatrices:
    @given(st.integers(0, 4), st.integers(0, 4), st.data())
    def test_round_trip_is_bit_exact(self, rows, cols, data):
        re = data.draw(st.lists(finite, min_size=rows * cols, max_size=rows * cols))
        im = data.draw(st.lists(finite, min_size=rows * cols, max_size=rows * cols))
        mat = (np.array(re) + 1j * np.array(im)).reshape(rows, cols)
        text = json.dumps(encode_matrix(mat))
        back = decode_matrix(json.loads(text), "m")
        assert np.array_equal(back.view(float), mat.view(float))

    def test_plain_numbers_accepted(self):
        assert decode_matrix({"rows": 1, "cols": 2, "data": [1, 2.5]}, "m").tolist() == [[1, 2.5]]

    @pytest.mark.parametrize(
        "obj",
        [
            {"rows": 1, "cols": 1},
            {"rows": 1, "cols": 2, "data": [[1, 0]]},
            {"rows": -1, "cols": 0, "data": []},
            {"rows": 1, "cols": 1, "data": [["a", 0]]},
        ],
    )
    def test_malformed(self, obj):
        with pytest.raises(DocumentError):
            decode_matrix(obj, "m")


class TestDocuments:
    @settings(max_examples=60, deadline=None)
    @given(graph_sheaves())
    def test_sheaf_round_trip(self, f):
        doc = loads(dumps(Document(f.base, f)))
        assert_same_sheaf(f, doc.sheaf)

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.floats(0.01, 100), min_size=3, max_size=3), finite, st.floats(-1, 1))
    def test_complex_sheaf_and_metric_round_trip(self, lengths, kre, kim):
        mg = MetricGraph.from_directed_edges([(1, 2, lengths[0]), (2, 0, lengths[1]), (0, 1, lengths[2])])
        f = transmission_line_sheaf(mg, complex(kre % 10, kim))
        doc = loads(dumps(Document(f.base, f, metric=mg)))
        assert_same_sheaf(f, doc.sheaf)
        assert doc.metric.lengths == mg.lengths
        assert doc.metric.orientation == mg.orientation

    def test_morphism_round_trip(self):
        f = constant_sheaf(path_graph(3), 2)
        m = full_stalk_sampling(f, [0, 2])
        doc = loads(dumps(Document(f.base, f, morphism=m, sample_support=[0, 2])))
        assert doc.sample_support == [0, 2]
        assert_same_sheaf(m.destination, doc.morphism.destination)
        for face, c in m.components.items():
            assert np.array_equal(c, doc.morphism.components[face])

    def test_morphism_along_collapse(self):
        point = SimplicialComplex.from_maximal_faces([[0]])
        src = constant_sheaf(point)
        dst = constant_sheaf(path_graph(2))
        m = SheafMorphism(SimplicialMap(path_graph(2), point, {0: 0, 1: 0}), src, dst, {a: [[1.0]] for a in path_graph(2).faces()})
        doc = loads(dumps(Document(point, src, morphism=m)))
        assert doc.morphism.along.vertex_map == {0: 0, 1: 0}

    def test_morphism_without_codomain_builds_sampling_sheaf(self):
        f = constant_sheaf(path_graph(3))
        obj = {
            "version": FORMAT_VERSION,
            "complex": [[0, 1], [1, 2]],
            "sheaf": to_dict(Document(f.base, f))["sheaf"],
            "morphism": {"components": [{"face": [1], "matrix": {"rows": 1, "cols": 1, "data": [[1, 0]]}}]},
        }
        m = loads(json.dumps(obj)).morphism
        assert m.destination.stalk_dims[(1,)] == 1
        assert m.destination.stalk_dims[(0,)] == 0

    def test_missing_stalks_are_zero(self):
        obj = {"version": FORMAT_VERSION, "complex": [[0, 1]], "sheaf": {"stalks": [{"face": [0], "dim": 1}]}}
        f = loads(json.dumps(obj)).sheaf
        assert f.stalk_dims == {(0,): 1, (1,): 0, (0, 1): 0}

    def test_file_helpers(self, tmp_path):
        f = constant_sheaf(cycle_graph(3))
        path = tmp_path / "c3.json"
        dump(Document(f.base, f), path)
        assert_same_sheaf(f, load(path).sheaf)
        mpath = tmp_path / "m.json"
        m = full_stalk_sampling(f, [0])
        mpath.write_text(json.dumps({"version": FORMAT_VERSION, "morphism": to_dict(Document(f.base, f, morphism=m))["morphism"]}))
        assert np.array_equal(load_morphism(mpath, f).components[(0,)], [[1.0]])


class TestErrors:
    def test_parse_error_reports_position(self):
        with pytest.raises(DocumentError, match=r"line 2, column \d+"):
            loads('{"version": "1.0",\n  "complex": [[0, 1]],, }')

    def test_missing_file(self, tmp_path):
        with pytest.raises(DocumentError, match="cannot read"):
            load(tmp_path / "nope.json")

    @pytest.mark.parametrize(
        "obj, pattern",
        [
            ([], "JSON object"),
            ({"complex": []}, "version"),
            ({"version": "9.9", "complex": []}, "unsupported"),
            ({"version": "1.0", "complex": [[0, "x"]]}, "list of integers"),
            ({"version": "1.0", "complex": [[0, 0]]}, "repeated"),
            ({"version": "1.0", "complex": [[0]], "sheaf": {"stalks": [{"face": [1], "dim": 1}]}}, "not in the complex"),
            ({"version": "1.0", "complex": [[0]], "sheaf": {"field": "quaternion", "stalks": []}}, "field"),
            ({"version": "1.0", "complex": [[0, 1]], "sheaf": {"stalks": [{"face": [0], "dim": 1}, {"face": [0, 1], "dim": 1}]}}, "missing"),
            ({"version": "1.0", "complex": [[0]], "sample_support": [3]}, "not vertices"),
            ({"version": "1.0", "complex": [[0, 1]], "lengths": [{"edge": [0, 1], "length": -2}]}, "non-positive"),
            ({"version": "1.0", "complex": [[0]], "morphism": {"components": []}}, "source sheaf"),
        ],
    )
    def test_invalid_documents(self, obj, pattern):
        with pytest.raises(DocumentError, match=pattern):
            loads(json.dumps(obj))

    def test_complex_entry_in_real_sheaf(self):
        obj = {
            "version": "1.0",
            "complex": [[0, 1]],
            "sheaf": {
                "stalks": [{"face": [0], "dim": 1}, {"face": [1], "dim": 0}, {"face": [0, 1], "dim": 1}],
                "restrictions": [{"from": [0], "to": [0, 1], "matrix": {"rows": 1, "cols": 1, "data": [[0, 1]]}}],
            },
        }
        with pytest.raises(DocumentError, match="complex entry"):
            loads(json.dumps(obj))
