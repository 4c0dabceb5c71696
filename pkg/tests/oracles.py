"""Independent reference computations used by the tests.

Nothing here imports the coboundary or rank code under test: cochain
matrices are rebuilt from restriction data with exact rational arithmetic,
and graph distances come from networkx.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import networkx as nx
import numpy as np
import sympy


def permutation_sign(seq) -> int:
    """Sign of the permutation sorting ``seq`` (by inversion count)."""
    inversions = sum(1 for i, j in itertools.combinations(range(len(seq)), 2) if seq[i] > seq[j])
    return -1 if inversions % 2 else 1


def incidence(b, a) -> int:
    """[b:a] from the sign of the permutation (missing vertex, *a)."""
    if len(b) != len(a) + 1 or not set(a) < set(b):
        return 0
    (missing,) = set(b) - set(a)
    return permutation_sign((missing, *a)) * permutation_sign(b)


def exact(mat) -> sympy.Matrix:
    """Rational sympy matrix from a float array whose entries are dyadic."""
    mat = np.asarray(mat)
    return sympy.Matrix(mat.shape[0], mat.shape[1], [sympy.Rational(Fraction(float(x))) for x in mat.reshape(-1)])


def exact_coboundary(sheaf, k: int) -> sympy.Matrix:
    rows = sheaf.base.faces(k + 1)
    cols = sheaf.base.faces(k)
    row_off = list(itertools.accumulate([0] + [sheaf.stalk_dim(f) for f in rows]))
    col_off = list(itertools.accumulate([0] + [sheaf.stalk_dim(f) for f in cols]))
    d = sympy.zeros(row_off[-1], col_off[-1])
    for i, b in enumerate(rows):
        for j, a in enumerate(cols):
            s = incidence(b, a)
            if s and sheaf.stalk_dim(a) and sheaf.stalk_dim(b):
                block = s * exact(sheaf.restrictions[(a, b)])
                d[row_off[i]:row_off[i + 1], col_off[j]:col_off[j + 1]] = block
    return d


def exact_betti(sheaf, k: int) -> int:
    """dim ker d^k - rank d^{k-1}, computed over the rationals."""
    dk = exact_coboundary(sheaf, k)
    dim_ck = sum(sheaf.stalk_dim(f) for f in sheaf.base.faces(k))
    rank_k = dk.rank() if dk.rows and dk.cols else 0
    if k == 0:
        return dim_ck - rank_k
    prev = exact_coboundary(sheaf, k - 1)
    rank_prev = prev.rank() if prev.rows and prev.cols else 0
    return dim_ck - rank_k - rank_prev


def to_networkx(graph) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from(graph.vertices)
    g.add_edges_from(graph.edges)
    return g


def med_networkx(graph, samples) -> float:
    """Largest distance from a vertex to its nearest sample."""
    g = to_networkx(graph)
    samples = set(samples)
    if not samples:
        return float("inf")
    dist = nx.multi_source_dijkstra_path_length(g, samples)
    if len(dist) < g.number_of_nodes():
        return float("inf")
    return max(dist.values())


def random_connected_graph(rng: np.random.Generator, max_vertices: int = 12) -> nx.Graph:
    """Random spanning tree plus a few extra edges."""
    n = int(rng.integers(2, max_vertices + 1))
    g = nx.Graph()
    g.add_nodes_from(range(n))
    for v in range(1, n):
        g.add_edge(v, int(rng.integers(0, v)))
    extra = int(rng.integers(0, n))
    for _ in range(extra):
        u, w = (int(x) for x in rng.choice(n, 2, replace=False))
        g.add_edge(u, w)
    return g


def exact_vanishing_betti(sheaf, samples) -> tuple[int, int]:
    """(dim H^0, dim H^1) of the sheaf with its stalks on ``samples`` zeroed.

    On a graph this is ``d^0`` with the sampled vertex columns deleted.
    """
    d0 = exact_coboundary(sheaf, 0)
    keep = []
    offset = 0
    for (v,) in sheaf.base.faces(0):
        dim = sheaf.stalk_dim((v,))
        if v not in set(samples):
            keep.extend(range(offset, offset + dim))
        offset += dim
    sub = d0[:, keep] if keep else sympy.zeros(d0.rows, 0)
    rank = sub.rank() if sub.rows and sub.cols else 0
    return len(keep) - rank, d0.rows - rank
