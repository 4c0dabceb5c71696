"""JSON interchange documents for complexes, sheaves, morphisms and graphs.

A document looks like::

    {
      "version": "1.0",
      "complex": [[0, 1], [1, 2]],
      "sheaf": {
        "field": "real",
        "stalks": [{"face": [0], "dim": 1}, ...],
        "restrictions": [
          {"from": [0], "to": [0, 1],
           "matrix": {"rows": 1, "cols": 1, "data": [[1.0, 0.0]]}}
        ]
      },
      "morphism": {
        "complex": [[0, 1]],
        "vertex_map": [[0, 0], [1, 1]],
        "codomain": {...sheaf block...},
        "components": [{"face": [0], "matrix": {...}}]
      },
      "sample_support": [0, 2],
      "lengths": [{"edge": [2, 0], "length": 1.5}]
    }

Matrix entries are always ``[re, im]`` pairs in row-major order. Stalks left
out of ``stalks`` are zero-dimensional. In ``lengths`` the order of
``edge`` gives the edge orientation (tail first).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np

from .complex import SimplicialComplex, make_face
from .errors import SheafError
from .sampling import SheafMorphism, SimplicialMap
from .sheaf import CellularSheaf
from .zoo import MetricGraph

FORMAT_VERSION = "1.0"
REPORT_SCHEMA = "sheafsample-report/1.0"


class DocumentError(SheafError):
    """The document is not valid JSON or does not follow the format."""


@dataclass
class Document:
    complex: SimplicialComplex
    sheaf: CellularSheaf | None = None
    morphism: SheafMorphism | None = None
    sample_support: list[int] | None = None
    metric: MetricGraph | None = None


# -- encoding -------------------------------------------------------------


def encode_matrix(mat: np.ndarray) -> dict:
    mat = np.asarray(mat)
    rows, cols = mat.shape
    flat = mat.reshape(-1)
    return {
        "rows": rows,
        "cols": cols,
        "data": [[float(np.real(x)), float(np.imag(x))] for x in flat],
    }


def encode_sheaf(sheaf: CellularSheaf) -> dict:
    return {
        "field": sheaf.field,
        "stalks": [{"face": list(f), "dim": sheaf.stalk_dim(f)} for f in sheaf.base.faces()],
        "restrictions": [
            {"from": list(a), "to": list(b), "matrix": encode_matrix(r)}
            for (a, b), r in sorted(sheaf.restrictions.items(), key=lambda kv: (len(kv[0][1]), kv[0][1], kv[0][0]))
            if r.size
        ],
    }


def encode_complex(base: SimplicialComplex) -> list[list[int]]:
    return [list(f) for f in base.maximal_faces()]


def encode_morphism(m: SheafMorphism) -> dict:
    return {
        "complex": encode_complex(m.along.source),
        "vertex_map": [[v, w] for v, w in sorted(m.along.vertex_map.items())],
        "codomain": encode_sheaf(m.destination),
        "components": [
            {"face": list(f), "matrix": encode_matrix(c)}
            for f, c in sorted(m.components.items(), key=lambda kv: (len(kv[0]), kv[0]))
            if c.size
        ],
    }


def to_dict(doc: Document) -> dict:
    out: dict[str, Any] = {"version": FORMAT_VERSION, "complex": encode_complex(doc.complex)}
    if doc.sheaf is not None:
        out["sheaf"] = encode_sheaf(doc.sheaf)
    if doc.morphism is not None:
        out["morphism"] = encode_morphism(doc.morphism)
    if doc.sample_support is not None:
        out["sample_support"] = list(doc.sample_support)
    if doc.metric is not None:
        out["lengths"] = [
            {"edge": list(doc.metric.orientation[e]), "length": doc.metric.lengths[e]}
            for e in doc.complex.edges
        ]
    return out


def dumps(doc: Document) -> str:
    return json.dumps(to_dict(doc), indent=1)


def dump(doc: Document, path: str | Path) -> None:
    Path(path).write_text(dumps(doc) + "\n")


# -- decoding -------------------------------------------------------------


def _need(obj: dict, key: str, where: str):
    if not isinstance(obj, dict) or key not in obj:
        raise DocumentError(f"{where}: missing field {key!r}")
    return obj[key]


def _face(value, where: str):
    if not isinstance(value, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in value):
        raise DocumentError(f"{where}: a face must be a list of integers")
    try:
        return make_face(value)
    except SheafError as exc:
        raise DocumentError(f"{where}: {exc}") from None


def decode_matrix(obj: dict, where: str) -> np.ndarray:
    rows = _need(obj, "rows", where)
    cols = _need(obj, "cols", where)
    data = _need(obj, "data", where)
    if not (isinstance(rows, int) and isinstance(cols, int) and rows >= 0 and cols >= 0):
        raise DocumentError(f"{where}: rows and cols must be non-negative integers")
    if not isinstance(data, list) or len(data) != rows * cols:
        raise DocumentError(f"{where}: expected {rows * cols} entries for a {rows}x{cols} matrix")
    vals = []
    for x in data:
        if isinstance(x, (int, float)) and not isinstance(x, bool):
            vals.append(complex(x, 0.0))
        elif isinstance(x, list) and len(x) == 2 and all(isinstance(t, (int, float)) for t in x):
            vals.append(complex(float(x[0]), float(x[1])))
        else:
            raise DocumentError(f"{where}: entries must be [re, im] pairs")
    return np.array(vals, dtype=complex).reshape(rows, cols)


def _coerce(mat: np.ndarray, field: str, where: str) -> np.ndarray:
    if field == "real":
        if np.any(mat.imag != 0):
            raise DocumentError(f"{where}: complex entry in a real sheaf")
        return mat.real.copy()
    return mat


def decode_complex(value, where: str = "complex") -> SimplicialComplex:
    if not isinstance(value, list):
        raise DocumentError(f"{where}: expected a list of maximal faces")
    faces = [_face(f, f"{where}[{i}]") for i, f in enumerate(value)]
    return SimplicialComplex.from_maximal_faces(faces)


def decode_sheaf(obj: dict, base: SimplicialComplex, where: str = "sheaf") -> CellularSheaf:
    field = obj.get("field", "real") if isinstance(obj, dict) else None
    if field not in ("real", "complex"):
        raise DocumentError(f"{where}.field must be 'real' or 'complex'")
    dims = {f: 0 for f in base.faces()}
    for i, st in enumerate(_need(obj, "stalks", where)):
        w = f"{where}.stalks[{i}]"
        face = _face(_need(st, "face", w), w)
        if face not in base:
            raise DocumentError(f"{w}: face {list(face)} is not in the complex")
        dim = _need(st, "dim", w)
        if not isinstance(dim, int) or dim < 0:
            raise DocumentError(f"{w}: dim must be a non-negative integer")
        dims[face] = dim
    maps = {}
    for i, r in enumerate(obj.get("restrictions", [])):
        a = _face(_need(r, "from", f"{where}.restrictions[{i}]"), f"{where}.restrictions[{i}]")
        b = _face(_need(r, "to", f"{where}.restrictions[{i}]"), f"{where}.restrictions[{i}]")
        w = f"{where}: restriction {list(a)}->{list(b)}"
        maps[a, b] = _coerce(decode_matrix(_need(r, "matrix", w), w), field, w)
    try:
        return CellularSheaf(base, dims, maps, field)
    except SheafError as exc:
        raise DocumentError(f"{where}: {exc}") from None


def decode_morphism(obj: dict, source: CellularSheaf, where: str = "morphism") -> SheafMorphism:
    dom = decode_complex(obj["complex"], f"{where}.complex") if "complex" in obj else source.base
    vmap_raw = obj.get("vertex_map")
    if vmap_raw is None:
        vmap = {v: v for v in dom.vertices}
    else:
        try:
            vmap = {int(v): int(w) for v, w in vmap_raw}
        except (TypeError, ValueError):
            raise DocumentError(f"{where}.vertex_map: expected [source, target] pairs") from None
    try:
        along = SimplicialMap(dom, source.base, vmap)
    except SheafError as exc:
        raise DocumentError(f"{where}.vertex_map: {exc}") from None
    comps = {}
    for i, c in enumerate(_need(obj, "components", where)):
        w = f"{where}.components[{i}]"
        face = _face(_need(c, "face", w), w)
        comps[face] = decode_matrix(_need(c, "matrix", w), f"{where}: component on {list(face)}")
    if "codomain" in obj:
        dest = decode_sheaf(obj["codomain"], dom, f"{where}.codomain")
    else:
        dims = {f: 0 for f in dom.faces()}
        for f, c in comps.items():
            if f not in dom:
                raise DocumentError(f"{where}: component on {list(f)}, which is not a face")
            dims[f] = c.shape[0]
        dest = CellularSheaf(dom, dims, {}, source.field)
    fld = "complex" if "complex" in (source.field, dest.field) else "real"
    comps = {f: _coerce(c, fld, f"{where}: component on {list(f)}") for f, c in comps.items()}
    try:
        return SheafMorphism(along, source, dest, comps)
    except SheafError as exc:
        raise DocumentError(f"{where}: {exc}") from None


def decode_lengths(value, base: SimplicialComplex) -> MetricGraph:
    lengths, orient = {}, {}
    for i, item in enumerate(value):
        w = f"lengths[{i}]"
        edge = _need(item, "edge", w)
        length = _need(item, "length", w)
        if not (isinstance(edge, list) and len(edge) == 2 and all(isinstance(v, int) for v in edge)):
            raise DocumentError(f"{w}: edge must be a [tail, head] pair")
        if not isinstance(length, (int, float)) or isinstance(length, bool):
            raise DocumentError(f"{w}: length must be a number")
        face = _face(edge, w)
        lengths[face] = float(length)
        orient[face] = (edge[0], edge[1])
    try:
        return MetricGraph(base, lengths, orient)
    except (ValueError, SheafError) as exc:
        raise DocumentError(f"lengths: {exc}") from None


def from_dict(obj: Any) -> Document:
    if not isinstance(obj, dict):
        raise DocumentError("document must be a JSON object")
    version = _need(obj, "version", "document")
    if version != FORMAT_VERSION:
        raise DocumentError(f"unsupported format version {version!r} (expected {FORMAT_VERSION!r})")
    base = decode_complex(_need(obj, "complex", "document"))
    doc = Document(base)
    if "sheaf" in obj:
        doc.sheaf = decode_sheaf(obj["sheaf"], base)
    if "morphism" in obj:
        if doc.sheaf is None:
            raise DocumentError("morphism: a morphism needs the source sheaf in the same document")
        doc.morphism = decode_morphism(obj["morphism"], doc.sheaf)
    if "sample_support" in obj:
        sup = obj["sample_support"]
        if not isinstance(sup, list) or not all(isinstance(v, int) for v in sup):
            raise DocumentError("sample_support: expected a list of vertex ids")
        missing = [v for v in sup if (v,) not in base]
        if missing:
            raise DocumentError(f"sample_support: {missing} are not vertices")
        doc.sample_support = list(sup)
    if "lengths" in obj:
        doc.metric = decode_lengths(obj["lengths"], base)
    return doc


def loads(text: str) -> Document:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return from_dict(obj)


def load(path: str | Path) -> Document:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc.strerror}") from None
    return loads(text)


def load_morphism(path: str | Path, source: CellularSheaf) -> SheafMorphism:
    """Read a morphism-only document (``version`` plus ``morphism``)."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc.strerror}") from None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(obj, dict) or obj.get("version") != FORMAT_VERSION:
        raise DocumentError(f"morphism document must carry version {FORMAT_VERSION!r}")
    return decode_morphism(_need(obj, "morphism", "document"), source)
