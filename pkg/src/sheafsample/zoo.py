"""Constructors for concrete sheaf families.

Covers constant sheaves, m-term grouping sheaves on paths, piecewise-linear
sheaves on graphs, transmission line (Helmholtz) sheaves on metric graphs and
degree-n polynomial spline sheaves on chains.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from math import comb
from typing import Iterable, Mapping

import numpy as np

from .complex import Face, SimplicialComplex, make_face, orientation_index
from .errors import HypothesisViolated, IsolatedVertex, FormulaMismatch
from .sheaf import CellularSheaf, cohomology

# -- complexes used throughout ---------------------------------------------


def path_graph(n: int) -> SimplicialComplex:
    """Vertices ``0..n-1`` joined consecutively."""
    if n < 1:
        raise ValueError("a path needs at least one vertex")
    if n == 1:
        return SimplicialComplex.from_maximal_faces([[0]])
    return SimplicialComplex.from_maximal_faces([[i, i + 1] for i in range(n - 1)])


def cycle_graph(n: int) -> SimplicialComplex:
    if n < 3:
        raise ValueError("a simplicial cycle needs at least three vertices")
    return SimplicialComplex.from_maximal_faces([[i, (i + 1) % n] for i in range(n)])


def star_graph(leaves: int) -> SimplicialComplex:
    """Center ``0`` joined to leaves ``1..leaves``."""
    return SimplicialComplex.from_maximal_faces([[0, i] for i in range(1, leaves + 1)])


def _require_graph(graph: SimplicialComplex) -> None:
    if graph.dimension > 1:
        raise ValueError("expected a graph (a complex of dimension at most 1)")


# -- constant sheaf --------------------------------------------------------


def constant_sheaf(base: SimplicialComplex, dim: int = 1, field: str = "real") -> CellularSheaf:
    """Stalk ``dim`` everywhere, identity restrictions."""
    eye = np.eye(dim)
    return CellularSheaf(
        base,
        {f: dim for f in base.faces()},
        {ab: eye for ab in base.attachments()},
        field,
    )


# -- grouping sheaf --------------------------------------------------------


def grouping_sheaf(n_vertices: int, window: int, v_dim: int = 1) -> CellularSheaf:
    """m-term grouping sheaf on a path with ``n_vertices`` vertices.

    Vertex stalks hold ``window`` consecutive blocks of size ``v_dim``; edge
    stalks hold ``window - 1``. Toward its left edge a vertex drops its last
    block, toward its right edge its first block, so global sections are
    sliding windows over ``n_vertices + window - 1`` blocks.
    """
    if n_vertices < 2 or window < 1 or v_dim < 1:
        raise ValueError("need n_vertices >= 2, window >= 1, v_dim >= 1")
    graph = path_graph(n_vertices)
    vd = window * v_dim
    ed = (window - 1) * v_dim
    drop_last = np.eye(vd)[:ed]
    drop_first = np.eye(vd)[v_dim:]
    dims = {(v,): vd for v in graph.vertices}
    dims.update({e: ed for e in graph.edges})
    maps = {}
    for u, w in graph.edges:
        maps[(u,), (u, w)] = drop_first
        maps[(w,), (u, w)] = drop_last
    return CellularSheaf(graph, dims, maps)


# -- piecewise linear sheaf ------------------------------------------------


def pl_sheaf(graph: SimplicialComplex) -> CellularSheaf:
    """Sheaf of piecewise linear functions on a graph.

    A vertex of degree ``d`` carries (value, slope on each incident edge),
    with incident edges in sorted order; an isolated vertex carries only a
    value. An edge carries (value, slope). Restricting vertex ``v`` to edge
    ``e`` sends (y, m_1, ..., m_d) to (y + ([e:v] - 1) m_e / 2, m_e).
    """
    _require_graph(graph)
    dims: dict[Face, int] = {}
    maps = {}
    for v in graph.vertices:
        dims[(v,)] = 1 + graph.degree(v)
    for e in graph.edges:
        dims[e] = 2
    for v in graph.vertices:
        inc = graph.incident_edges(v)
        for pos, e in enumerate(inc):
            sign = orientation_index(e, (v,))
            r = np.zeros((2, 1 + len(inc)))
            r[0, 0] = 1.0
            r[0, 1 + pos] = 0.5 * (sign - 1)
            r[1, 1 + pos] = 1.0
            maps[(v,), e] = r
    return CellularSheaf(graph, dims, maps)


# -- transmission line sheaf -----------------------------------------------


@dataclass(frozen=True)
class MetricGraph:
    """A graph with a positive length on every edge.

    ``orientation`` maps an edge to its ``(tail, head)`` pair; edges left out
    run from the smaller vertex id to the larger.
    """

    graph: SimplicialComplex
    lengths: Mapping[Face, float]
    orientation: Mapping[Face, tuple[int, int]] | None = None

    def __post_init__(self):
        _require_graph(self.graph)
        lengths = {make_face(e): float(L) for e, L in self.lengths.items()}
        for e in self.graph.edges:
            if e not in lengths:
                raise ValueError(f"edge {e} has no length")
            if not lengths[e] > 0:
                raise ValueError(f"edge {e} has non-positive length {lengths[e]}")
        extra = set(lengths) - set(self.graph.edges)
        if extra:
            raise ValueError(f"lengths given for non-edges {sorted(extra)}")
        orient = {e: e for e in self.graph.edges}
        for e, (tail, head) in (self.orientation or {}).items():
            face = make_face(e)
            if face not in orient or make_face((tail, head)) != face:
                raise ValueError(f"orientation {(tail, head)} does not match edge {face}")
            orient[face] = (int(tail), int(head))
        object.__setattr__(self, "lengths", lengths)
        object.__setattr__(self, "orientation", orient)

    @classmethod
    def uniform(cls, graph: SimplicialComplex, length: float = 1.0) -> "MetricGraph":
        return cls(graph, {e: length for e in graph.edges})

    @classmethod
    def from_directed_edges(cls, edges: Iterable[tuple[int, int, float]]) -> "MetricGraph":
        """Build from ``(tail, head, length)`` triples."""
        edges = list(edges)
        graph = SimplicialComplex.from_maximal_faces([[t, h] for t, h, _ in edges])
        return cls(
            graph,
            {(t, h): L for t, h, L in edges},
            {make_face((t, h)): (t, h) for t, h, _ in edges},
        )

    def incidence(self, edge: Face, v: int) -> int:
        """+1 if ``v`` is the head of ``edge``, -1 if it is the tail."""
        tail, head = self.orientation[edge]
        return 1 if v == head else -1


def transmission_line_sheaf(mg: MetricGraph, wavenumber: complex) -> CellularSheaf:
    """Sheaf of local Helmholtz solutions on a metric graph.

    A vertex of degree ``d`` has stalk C^d (one amplitude per incident edge,
    edges in sorted order), every edge has stalk C^2. For the m-th edge of
    ``v``, with ``t = (2/d) * sum(u) - u_m`` and length ``L``, the restriction
    gives ``(u_m, exp(-ikL) t)`` when ``v`` is the head of the edge and
    ``(exp(ikL) t, u_m)`` when it is the tail. Edge orientation therefore
    matters: a loop resonates when ``k`` times its signed length (edges run
    against the loop count negatively) lies in 2*pi*Z.

    Raises:
        IsolatedVertex: if some vertex has degree 0.
    """
    graph = mg.graph
    k = complex(wavenumber)
    dims: dict[Face, int] = {}
    maps = {}
    for v in graph.vertices:
        deg = graph.degree(v)
        if deg == 0:
            raise IsolatedVertex(f"vertex {v} has no incident edge")
        dims[(v,)] = deg
    for e in graph.edges:
        dims[e] = 2
    for v in graph.vertices:
        inc = graph.incident_edges(v)
        deg = len(inc)
        for m, e in enumerate(inc):
            transmit = np.full(deg, 2.0 / deg, dtype=complex)
            transmit[m] -= 1.0
            pick = np.zeros(deg, dtype=complex)
            pick[m] = 1.0
            phase = cmath.exp(1j * k * mg.lengths[e])
            if mg.incidence(e, v) == 1:
                r = np.vstack([pick, transmit / phase])
            else:
                r = np.vstack([phase * transmit, pick])
            maps[(v,), e] = r
    return CellularSheaf(graph, dims, maps, field="complex")


# -- polynomial spline sheaf -----------------------------------------------


@dataclass(frozen=True)
class SplineParams:
    """Degree ``n`` and knot spacing (one value, or one per edge)."""

    degree: int
    spacing: float | tuple[float, ...] = 1.0

    def __post_init__(self):
        if self.degree < 1:
            raise ValueError("spline degree must be at least 1")
        sp = self.spacing
        values = sp if isinstance(sp, tuple) else (sp,)
        if any(not L > 0 for L in values):
            raise ValueError("knot spacing must be positive")

    def length(self, edge_index: int) -> float:
        if isinstance(self.spacing, tuple):
            return float(self.spacing[edge_index])
        return float(self.spacing)


def spline_left_restriction(n: int) -> np.ndarray:
    """Keeps ``a_0..a_{n-1}`` and ``a_n^+``: the knot seen from its right segment."""
    r = np.zeros((n + 1, n + 2))
    r[:n, :n] = np.eye(n)
    r[n, n + 1] = 1.0
    return r


def spline_right_restriction(n: int, spacing: float) -> np.ndarray:
    """Re-expands the knot's left segment about the previous knot.

    Entry ``(k, i)`` is ``binom(i, k) (-L)^(i-k)`` for ``i < n``, column ``n``
    (``b_n^-``) carries ``binom(n, k) (-L)^(n-k)`` and column ``n+1`` is zero.
    """
    r = np.zeros((n + 1, n + 2))
    for k in range(n + 1):
        for i in range(k, n + 1):
            r[k, i] = comb(i, k) * (-spacing) ** (i - k)
    return r


def spline_sheaf(n_vertices: int, params: SplineParams) -> CellularSheaf:
    """Degree-n spline sheaf on a chain ``0 - 1 - ... - n_vertices-1``.

    Vertex stalks are ``(a_0, ..., a_{n-1}, a_n^-, a_n^+)``: the shared
    low-order Taylor coefficients at the knot and the leading coefficients
    of the segments to its left and right. Edge stalks are the n+1
    coefficients of the segment expanded about its left knot.
    """
    if n_vertices < 2:
        raise ValueError("a spline chain needs at least two vertices")
    n = params.degree
    graph = path_graph(n_vertices)
    if isinstance(params.spacing, tuple) and len(params.spacing) != n_vertices - 1:
        raise ValueError("need one spacing per edge")
    dims = {(v,): n + 2 for v in graph.vertices}
    dims.update({e: n + 1 for e in graph.edges})
    left = spline_left_restriction(n)
    maps = {}
    for i, (u, w) in enumerate(graph.edges):
        maps[(u,), (u, w)] = left
        maps[(w,), (u, w)] = spline_right_restriction(n, params.length(i))
    return CellularSheaf(graph, dims, maps)


# -- PL sampling redundancy ------------------------------------------------


def pl_redundancy_dim(graph: SimplicialComplex, samples: Iterable[int], tol: float | None = None) -> int:
    """Redundancy of full-stalk PL sampling on ``samples``, in closed form.

    Returns ``2|E| - sum over unsampled y of (deg y + 1)`` after checking it
    against the numerically computed H^1 of the ambiguity sheaf.

    Raises:
        HypothesisViolated: if some vertex is more than one edge away from
            every sample.
        FormulaMismatch: if the closed form and the computation disagree.
    """
    from .sampling import restrict_to_subcomplex

    ys = set(samples)
    if graph.max_edge_distance(ys) > 1:
        raise HypothesisViolated("closed form needs every vertex within one edge of a sample")
    predicted = 2 * len(graph.edges) - sum(graph.degree(v) + 1 for v in graph.vertices if v not in ys)
    vanishing = restrict_to_subcomplex(pl_sheaf(graph), [(y,) for y in ys], tol).vanishing
    computed = cohomology(vanishing, 1, tol).dim
    if computed != predicted:
        raise FormulaMismatch(f"closed form gives {predicted}, computation gives {computed}")
    return predicted
