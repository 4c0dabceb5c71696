"""Finite abstract simplicial complexes.

Faces are tuples of non-negative vertex ids in strictly increasing order.
That canonical order is the orientation of every face.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from typing import Hashable, Iterable, Mapping, Sequence

from .errors import InvalidFace, NotClosed, UnknownFace

Face = tuple[int, ...]


def make_face(vertices: Iterable[int]) -> Face:
    """Return the canonical face on a collection of vertex ids.

    Raises:
        InvalidFace: if the collection is empty, repeats an id, or holds
            something other than a non-negative integer.
    """
    vs = list(vertices)
    if not vs:
        raise InvalidFace("a face needs at least one vertex")
    for v in vs:
        if isinstance(v, bool) or not isinstance(v, int) or v < 0:
            raise InvalidFace(f"vertex ids must be non-negative integers, got {v!r}")
    face = tuple(sorted(vs))
    if len(set(face)) != len(face):
        raise InvalidFace(f"repeated vertex in {vs!r}")
    return face


def orientation_index(b: Sequence[int], a: Sequence[int]) -> int:
    """Signed incidence [b:a] between canonical faces.

    Returns (-1)**j when ``a`` is ``b`` with the vertex at position ``j``
    removed, and 0 in every other case.
    """
    b = tuple(b)
    a = tuple(a)
    if len(b) != len(a) + 1:
        return 0
    for j in range(len(b)):
        if b[:j] + b[j + 1:] == a:
            return -1 if j % 2 else 1
    return 0


def _subfaces(face: Face) -> Iterable[Face]:
    for r in range(1, len(face) + 1):
        yield from itertools.combinations(face, r)


class SimplicialComplex:
    """An immutable finite simplicial complex.

    Build one with :meth:`from_maximal_faces` (or :func:`nerve`); the
    constructor expects an already subset-closed face collection.
    """

    __slots__ = ("_faces", "_by_dim", "_adjacency")

    def __init__(self, faces: Iterable[Iterable[int]]):
        canonical = {make_face(f) for f in faces}
        for f in canonical:
            for sub in _subfaces(f):
                if sub not in canonical:
                    raise NotClosed(f"face {f} is stored but its subface {sub} is not")
        by_dim: dict[int, list[Face]] = {}
        for f in canonical:
            by_dim.setdefault(len(f) - 1, []).append(f)
        self._faces = frozenset(canonical)
        self._by_dim = {k: tuple(sorted(v)) for k, v in sorted(by_dim.items())}
        adjacency: dict[int, set[int]] = {v: set() for (v,) in self._by_dim.get(0, ())}
        for u, w in self._by_dim.get(1, ()):
            adjacency[u].add(w)
            adjacency[w].add(u)
        self._adjacency = {v: tuple(sorted(n)) for v, n in adjacency.items()}

    @classmethod
    def from_maximal_faces(cls, faces: Iterable[Iterable[int]]) -> "SimplicialComplex":
        """Smallest complex containing every listed face."""
        closure: set[Face] = set()
        for f in faces:
            closure.update(_subfaces(make_face(f)))
        return cls(closure)

    # -- basic queries -------------------------------------------------

    @property
    def dimension(self) -> int:
        """Largest face dimension, or -1 for the empty complex."""
        return max(self._by_dim, default=-1)

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(f[0] for f in self._by_dim.get(0, ()))

    @property
    def edges(self) -> tuple[Face, ...]:
        return self._by_dim.get(1, ())

    def faces(self, k: int | None = None) -> tuple[Face, ...]:
        """Faces of dimension ``k`` in lexicographic order, or all faces by
        increasing dimension when ``k`` is None."""
        if k is None:
            return tuple(f for d in sorted(self._by_dim) for f in self._by_dim[d])
        return self._by_dim.get(k, ())

    def __contains__(self, face) -> bool:
        try:
            return make_face(face) in self._faces
        except (InvalidFace, TypeError):
            return False

    def __len__(self) -> int:
        return len(self._faces)

    def __iter__(self):
        return iter(self.faces())

    def __eq__(self, other) -> bool:
        return isinstance(other, SimplicialComplex) and self._faces == other._faces

    def __hash__(self) -> int:
        return hash(self._faces)

    def __repr__(self) -> str:
        return f"SimplicialComplex({[list(f) for f in self.maximal_faces()]})"

    def maximal_faces(self) -> tuple[Face, ...]:
        """Faces that are not attached to any other face, sorted."""
        out = []
        for f in self.faces():
            fs = set(f)
            if not any(len(g) == len(f) + 1 and fs < set(g) for g in self._by_dim.get(len(f), ())):
                out.append(f)
        return tuple(sorted(out, key=lambda f: (f, len(f))))

    def _require(self, face) -> Face:
        f = make_face(face)
        if f not in self._faces:
            raise UnknownFace(f"{f} is not a face of this complex")
        return f

    def attached(self, a, b) -> bool:
        """True iff ``a`` is a proper subset of ``b``."""
        a = self._require(a)
        b = self._require(b)
        return len(a) < len(b) and set(a) < set(b)

    def cofaces(self, a) -> tuple[Face, ...]:
        """Faces having ``a`` as a codimension-1 face."""
        a = self._require(a)
        sa = set(a)
        return tuple(g for g in self._by_dim.get(len(a), ()) if sa < set(g))

    def boundary(self, b) -> tuple[Face, ...]:
        """Codimension-1 faces of ``b`` (empty for a vertex)."""
        b = self._require(b)
        if len(b) == 1:
            return ()
        return tuple(sorted(b[:j] + b[j + 1:] for j in range(len(b))))

    def attachments(self) -> Iterable[tuple[Face, Face]]:
        """All codimension-1 attachments ``(a, b)``, ordered by ``b``."""
        for b in self.faces():
            for a in self.boundary(b):
                yield a, b

    def validate(self) -> list[str]:
        """Closure violations (always empty for complexes built here)."""
        problems = []
        for f in self._faces:
            for sub in _subfaces(f):
                if sub not in self._faces:
                    problems.append(f"{f} lacks subface {sub}")
        return problems

    # -- subcomplexes --------------------------------------------------

    def skeleton(self, k: int) -> "SimplicialComplex":
        """All faces of dimension at most ``k``."""
        if k < 0:
            raise ValueError("skeleton degree must be non-negative")
        return SimplicialComplex(f for f in self._faces if len(f) - 1 <= k)

    def is_closed(self, faces: Iterable[Iterable[int]]) -> bool:
        """Whether a collection of faces of this complex is subset-closed."""
        fs = {self._require(f) for f in faces}
        return all(sub in fs for f in fs for sub in _subfaces(f))

    def subcomplex(self, faces: Iterable[Iterable[int]]) -> "SimplicialComplex":
        """The closed subcomplex given by ``faces``.

        Raises:
            NotClosed: if the collection is not subset-closed.
        """
        fs = {self._require(f) for f in faces}
        for f in fs:
            for sub in _subfaces(f):
                if sub not in fs:
                    raise NotClosed(f"{f} is listed but its subface {sub} is not")
        return SimplicialComplex(fs)

    # -- graph structure of the 1-skeleton ----------------------------

    def degree(self, v: int) -> int:
        return len(self.neighbors(v))

    def neighbors(self, v: int) -> tuple[int, ...]:
        if v not in self._adjacency:
            raise UnknownFace(f"vertex {v} is not in this complex")
        return self._adjacency[v]

    def incident_edges(self, v: int) -> tuple[Face, ...]:
        """Edges containing ``v``, sorted lexicographically."""
        return tuple(sorted((min(v, w), max(v, w)) for w in self.neighbors(v)))

    def _bfs(self, sources: Iterable[int]) -> dict[int, int]:
        dist = {s: 0 for s in sources}
        queue = deque(dist)
        while queue:
            u = queue.popleft()
            for w in self._adjacency[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return dist

    def edge_distance(self, v: int, w: int) -> float:
        """Fewest edges on a path from ``v`` to ``w``; ``math.inf`` if none."""
        self.neighbors(v)
        self.neighbors(w)
        return self._bfs([v]).get(w, math.inf)

    def max_edge_distance(self, samples: Iterable[int]) -> float:
        """Largest distance from any vertex to its nearest sample vertex.

        Empty sample sets, and sets that leave some vertex unreachable,
        give ``math.inf``.
        """
        ys = set(samples)
        for y in ys:
            self.neighbors(y)
        if not ys:
            return math.inf
        dist = self._bfs(ys)
        if len(dist) < len(self._adjacency):
            return math.inf
        return max(dist.values())

    def connected_components(self) -> list[tuple[int, ...]]:
        seen: set[int] = set()
        comps = []
        for v in self.vertices:
            if v not in seen:
                comp = tuple(sorted(self._bfs([v])))
                seen.update(comp)
                comps.append(comp)
        return comps


class Cover:
    """A finite cover: labelled, non-empty sets of opaque point ids."""

    def __init__(self, sets: Mapping[Hashable, Iterable] | Iterable[tuple[Hashable, Iterable]]):
        items = list(sets.items()) if isinstance(sets, Mapping) else list(sets)
        labels = [label for label, _ in items]
        if len(set(labels)) != len(labels):
            raise ValueError("cover labels must be unique")
        self.labels = tuple(labels)
        self.sets = tuple(frozenset(s) for _, s in items)
        for label, s in zip(self.labels, self.sets):
            if not s:
                raise ValueError(f"cover set {label!r} is empty")

    def __len__(self) -> int:
        return len(self.sets)


def nerve(cover: Cover | Mapping | Iterable) -> SimplicialComplex:
    """Nerve of a cover.

    Vertex ``i`` stands for the ``i``-th cover set (``cover.labels[i]``);
    a face is present iff the corresponding sets share a point.
    """
    if not isinstance(cover, Cover):
        cover = Cover(cover)
    if len(cover) == 0:
        raise ValueError("cannot take the nerve of an empty cover")
    faces: list[Face] = []

    def grow(face: Face, common: frozenset) -> None:
        faces.append(face)
        for j in range(face[-1] + 1, len(cover.sets)):
            meet = common & cover.sets[j]
            if meet:
                grow(face + (j,), meet)

    for i, s in enumerate(cover.sets):
        grow((i,), s)
    return SimplicialComplex(faces)
