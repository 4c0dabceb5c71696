"""Hypothesis strategies shared across test modules."""

import numpy as np
from hypothesis import strategies as st

from sheafsample.complex import SimplicialComplex
from sheafsample.sheaf import CellularSheaf


@st.composite
def graph_sheaves(draw, max_vertices: int = 6, max_dim: int = 3):
    """Random integer sheaf on a random small graph."""
    n = draw(st.integers(2, max_vertices))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=8))
    base = SimplicialComplex.from_maximal_faces([list(e) for e in edges] + [[v] for v in range(n)])
    dims = {f: draw(st.integers(0, max_dim)) for f in base.faces()}
    maps = {}
    for a, b in base.attachments():
        size = dims[a] * dims[b]
        entries = draw(st.lists(st.integers(-2, 2), min_size=size, max_size=size))
        maps[a, b] = np.array(entries, dtype=float).reshape(dims[b], dims[a])
    return CellularSheaf(base, dims, maps)
