"""Cellular sheaves, their cochain complexes and numerical cohomology."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .complex import Face, SimplicialComplex, make_face, orientation_index
from .errors import (
    FieldMismatch,
    IllConditioned,
    MissingRestriction,
    SheafError,
    ShapeMismatch,
    UnknownFace,
)
from .linalg import RankInfo, check_gap, null_space, range_space

FIELDS = {"real": np.float64, "complex": np.complex128}


def as_field_matrix(value, fld: str, shape: tuple[int, int], what: str) -> np.ndarray:
    """Coerce ``value`` to a read-only matrix over ``fld`` with ``shape``."""
    arr = np.asarray(value)
    if arr.size == 0 and shape[0] * shape[1] == 0:
        arr = arr.reshape(shape)
    if arr.ndim != 2 or arr.shape != shape:
        raise ShapeMismatch(f"{what} has shape {arr.shape}, expected {shape}")
    if fld == "real":
        if np.iscomplexobj(arr):
            if np.any(arr.imag != 0):
                raise FieldMismatch(f"{what} has complex entries in a real sheaf")
            arr = arr.real
        out = np.array(arr, dtype=np.float64)
    else:
        out = np.array(arr, dtype=np.complex128)
    out.setflags(write=False)
    return out


class CellularSheaf:
    """Finite-dimensional stalks on faces and linear restrictions between them.

    Only codimension-1 restrictions are stored; longer ones are composed on
    demand. Restrictions touching a zero-dimensional stalk may be omitted.

    Args:
        base: the underlying complex.
        stalk_dims: dimension of the stalk on every face.
        restrictions: ``(a, b) -> matrix`` of shape ``(dim b, dim a)`` for
            each codimension-1 attachment ``a`` of ``b``.
        field: ``"real"`` or ``"complex"``.
    """

    def __init__(
        self,
        base: SimplicialComplex,
        stalk_dims: Mapping[Sequence[int], int],
        restrictions: Mapping[tuple[Sequence[int], Sequence[int]], object],
        field: str = "real",
    ):
        if field not in FIELDS:
            raise ValueError(f"field must be 'real' or 'complex', not {field!r}")
        self.base = base
        self.field = field
        dims: dict[Face, int] = {}
        for f, d in stalk_dims.items():
            face = make_face(f)
            if face not in base:
                raise UnknownFace(f"stalk given on {face}, which is not a face of the base")
            if int(d) != d or d < 0:
                raise ShapeMismatch(f"stalk dimension on {face} must be a non-negative integer")
            dims[face] = int(d)
        missing = [f for f in base.faces() if f not in dims]
        if missing:
            raise ShapeMismatch(f"no stalk given on {missing[0]}")
        self._dims = dims

        given: dict[tuple[Face, Face], object] = {}
        for (a, b), mat in restrictions.items():
            key = (make_face(a), make_face(b))
            if key[0] not in base or key[1] not in base:
                raise UnknownFace(f"restriction {key[0]}->{key[1]} refers to a face outside the base")
            if len(key[1]) != len(key[0]) + 1 or not set(key[0]) < set(key[1]):
                raise UnknownFace(f"{key[0]}->{key[1]} is not a codimension-1 attachment")
            given[key] = mat
        maps: dict[tuple[Face, Face], np.ndarray] = {}
        for a, b in base.attachments():
            shape = (dims[b], dims[a])
            what = f"restriction {a}->{b}"
            if (a, b) in given:
                maps[a, b] = as_field_matrix(given[a, b], field, shape, what)
            elif 0 in shape:
                maps[a, b] = as_field_matrix(np.zeros(shape), field, shape, what)
            else:
                raise MissingRestriction(f"{what} between nonzero stalks is missing")
        self._maps = maps

    @property
    def dtype(self):
        return FIELDS[self.field]

    def stalk_dim(self, face) -> int:
        f = make_face(face)
        if f not in self._dims:
            raise UnknownFace(f"{f} is not a face of the base")
        return self._dims[f]

    @property
    def stalk_dims(self) -> dict[Face, int]:
        return dict(self._dims)

    @property
    def restrictions(self) -> dict[tuple[Face, Face], np.ndarray]:
        """Stored codimension-1 restrictions, keyed by ``(a, b)``."""
        return dict(self._maps)

    def restriction(self, a, b) -> np.ndarray:
        """Restriction from the stalk on ``a`` to the stalk on ``b``.

        Composed along the chain that adds the missing vertices in
        increasing order; ``a == b`` gives the identity.
        """
        a = make_face(a)
        b = make_face(b)
        if a not in self._dims or b not in self._dims:
            raise UnknownFace(f"{a} or {b} is not a face of the base")
        if not set(a) <= set(b):
            raise UnknownFace(f"{a} is not a face of {b}")
        out = np.eye(self._dims[a], dtype=self.dtype)
        cur = a
        for v in sorted(set(b) - set(a)):
            nxt = tuple(sorted(cur + (v,)))
            out = self._maps[cur, nxt] @ out
            cur = nxt
        return out

    def __repr__(self) -> str:
        return (
            f"CellularSheaf({self.field}, faces={len(self.base)}, "
            f"total_dim={sum(self._dims.values())})"
        )


# -- validation ----------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    """Two restriction paths ``a -> b -> c`` and ``a -> b_alt -> c`` disagree."""

    a: Face
    b: Face
    b_alt: Face
    c: Face
    deviation: float

    def __str__(self) -> str:
        return (
            f"non-commuting restrictions {list(self.a)} -> {list(self.b)} -> {list(self.c)} "
            f"vs via {list(self.b_alt)}: deviation {self.deviation:.3e}"
        )


def validate(sheaf: CellularSheaf, tol: float = 1e-8) -> list[Violation]:
    """Check that the stored restrictions compose functorially.

    Every pair ``a`` inside ``c`` with ``|c| = |a| + 2`` has exactly two
    intermediate faces; the two composites must agree to within
    ``tol * max(1, |largest entry|)``. That square condition implies path
    independence for all longer chains.
    """
    out = []
    maps = sheaf._maps
    for c in sheaf.base.faces():
        if len(c) < 3:
            continue
        for i in range(len(c)):
            for j in range(i + 1, len(c)):
                a = tuple(v for k, v in enumerate(c) if k not in (i, j))
                b1 = c[:i] + c[i + 1:]
                b2 = c[:j] + c[j + 1:]
                p1 = maps[b1, c] @ maps[a, b1]
                p2 = maps[b2, c] @ maps[a, b2]
                if p1.size == 0:
                    continue
                dev = float(np.max(np.abs(p1 - p2)))
                scale = max(1.0, float(np.max(np.abs(p1))), float(np.max(np.abs(p2))))
                if dev > tol * scale:
                    b, b_alt = sorted((b1, b2))
                    out.append(Violation(a, b, b_alt, c, dev))
    return out


# -- cochains ------------------------------------------------------------


@dataclass(frozen=True)
class Block:
    face: Face
    offset: int
    dim: int


def cochain_space(sheaf: CellularSheaf, k: int, order: Sequence[Sequence[int]] | None = None) -> list[Block]:
    """Layout of the degree-``k`` cochain space.

    Faces appear in lexicographic order unless ``order`` lists the
    ``k``-faces explicitly.
    """
    if k < 0:
        raise ValueError("cochain degree must be non-negative")
    faces = sheaf.base.faces(k)
    if order is not None:
        ordered = [make_face(f) for f in order]
        if sorted(ordered) != list(faces):
            raise ValueError(f"order must be a permutation of the {k}-faces")
        faces = ordered
    blocks = []
    offset = 0
    for f in faces:
        d = sheaf.stalk_dim(f)
        blocks.append(Block(f, offset, d))
        offset += d
    return blocks


def cochain_dim(sheaf: CellularSheaf, k: int) -> int:
    return sum(sheaf.stalk_dim(f) for f in sheaf.base.faces(k)) if k >= 0 else 0


def coboundary(
    sheaf: CellularSheaf,
    k: int,
    orders: Mapping[int, Sequence[Sequence[int]]] | None = None,
) -> np.ndarray:
    """Matrix of the coboundary from degree ``k`` to degree ``k + 1``.

    Block ``(b, a)`` is ``[b:a]`` times the restriction from ``a`` to ``b``.
    A negative ``k`` gives the zero map out of the zero space.
    """
    orders = orders or {}
    if k < 0:
        return np.zeros((cochain_dim(sheaf, 0), 0), dtype=sheaf.dtype)
    cols = cochain_space(sheaf, k, orders.get(k))
    rows = cochain_space(sheaf, k + 1, orders.get(k + 1))
    n_cols = sum(blk.dim for blk in cols)
    n_rows = sum(blk.dim for blk in rows)
    d = np.zeros((n_rows, n_cols), dtype=sheaf.dtype)
    col_at = {blk.face: blk for blk in cols}
    for rb in rows:
        if rb.dim == 0:
            continue
        b = rb.face
        for j in range(len(b)):
            a = b[:j] + b[j + 1:]
            cb = col_at[a]
            if cb.dim == 0:
                continue
            sign = orientation_index(b, a)
            d[rb.offset: rb.offset + rb.dim, cb.offset: cb.offset + cb.dim] = sign * sheaf._maps[a, b]
    return d


def d_squared_check(sheaf: CellularSheaf) -> float:
    """Largest relative size of ``d^{k+1} d^k`` over all degrees.

    Measured as the max-entry norm of the product divided by the product
    of the spectral norms of the factors (zero when either factor is zero).
    """
    worst = 0.0
    for k in range(max(sheaf.base.dimension - 1, 0)):
        dk = coboundary(sheaf, k)
        dk1 = coboundary(sheaf, k + 1)
        if dk.size == 0 or dk1.size == 0:
            continue
        prod = dk1 @ dk
        scale = np.linalg.norm(dk, 2) * np.linalg.norm(dk1, 2)
        if scale == 0:
            continue
        worst = max(worst, float(np.max(np.abs(prod))) / scale)
    return worst


# -- cohomology ----------------------------------------------------------


@dataclass
class CohomologyResult:
    """Dimension and representative basis of one cohomology space.

    ``basis`` holds orthonormal cochains as columns; they lie in the kernel
    of ``d^k`` and are orthogonal to the image of ``d^{k-1}``.
    """

    degree: int
    dim: int
    basis: np.ndarray
    tolerance_used: float
    layout: list[Block]
    kernel_info: RankInfo
    image_info: RankInfo
    sheaf: CellularSheaf = field(repr=False)

    @property
    def gap_ratio(self) -> float:
        return min(self.kernel_info.gap_ratio, self.image_info.gap_ratio)

    def by_face(self, j: int) -> dict[Face, np.ndarray]:
        """Split basis vector ``j`` into its per-face components."""
        v = self.basis[:, j]
        return {blk.face: v[blk.offset: blk.offset + blk.dim] for blk in self.layout}

    def extend(self, j: int) -> dict[Face, np.ndarray]:
        """Values of global section ``j`` on every face of the base.

        Only meaningful in degree 0. Each higher face takes the restriction
        of its first vertex's value.
        """
        if self.degree != 0:
            raise ValueError("only degree-0 classes extend to sections")
        at_vertex = {f[0]: x for f, x in self.by_face(j).items()}
        return {
            f: self.sheaf.restriction((f[0],), f) @ at_vertex[f[0]]
            for f in self.sheaf.base.faces()
        }


def cohomology(
    sheaf: CellularSheaf,
    k: int,
    tol: float | None = None,
    check: bool = True,
    orders: Mapping[int, Sequence[Sequence[int]]] | None = None,
) -> CohomologyResult:
    """Degree-``k`` sheaf cohomology, ker d^k modulo image d^{k-1}.

    Args:
        tol: absolute singular-value threshold used for both coboundaries;
            ``None`` picks the default relative to each matrix.
        check: raise :class:`IllConditioned` when a rank decision has a
            singular value gap ratio below the threshold.
        orders: optional face orderings per degree.

    Raises:
        IllConditioned: see ``check``; the exception's ``result`` attribute
            holds the computed result.
    """
    if k < 0:
        raise ValueError("cohomology degree must be non-negative")
    dk = coboundary(sheaf, k, orders)
    dprev = coboundary(sheaf, k - 1, orders)
    ker, kinfo = null_space(dk, tol)
    img, iinfo = range_space(dprev, tol)
    dim = ker.shape[1] - img.shape[1]
    if dim < 0:
        raise SheafError(
            f"image of d^{k - 1} is larger than the kernel of d^{k}; the coboundaries do not compose to zero"
        )
    residual = ker - img @ (img.conj().T @ ker)
    if dim and residual.size:
        u, _, _ = np.linalg.svd(residual, full_matrices=False)
        basis = u[:, :dim]
    else:
        basis = np.zeros((dk.shape[1], 0), dtype=sheaf.dtype)
    result = CohomologyResult(
        degree=k,
        dim=dim,
        basis=basis,
        tolerance_used=kinfo.tol,
        layout=cochain_space(sheaf, k, (orders or {}).get(k)),
        kernel_info=kinfo,
        image_info=iinfo,
        sheaf=sheaf,
    )
    if check:
        try:
            check_gap(kinfo, f"d^{k}")
            check_gap(iinfo, f"d^{k - 1}")
        except IllConditioned as exc:
            exc.result = result
            raise
    return result


def global_sections(sheaf: CellularSheaf, tol: float | None = None, check: bool = True) -> CohomologyResult:
    """H^0, the space of global sections, determined by vertex values."""
    return cohomology(sheaf, 0, tol, check)


def betti(sheaf: CellularSheaf, tol: float | None = None, check: bool = True) -> list[int]:
    """Cohomology dimensions in every degree up to the base dimension."""
    return [cohomology(sheaf, k, tol, check).dim for k in range(sheaf.base.dimension + 1)]


def euler_characteristic(sheaf: CellularSheaf) -> int:
    """Alternating sum of cochain space dimensions."""
    return sum((-1) ** k * cochain_dim(sheaf, k) for k in range(sheaf.base.dimension + 1))


def on_subcomplex(sheaf: CellularSheaf, sub: SimplicialComplex) -> CellularSheaf:
    """The same stalks and restrictions, over a closed subcomplex of the base."""
    for f in sub.faces():
        if f not in sheaf.base:
            raise UnknownFace(f"{f} is not a face of the base")
    return CellularSheaf(
        sub,
        {f: sheaf.stalk_dim(f) for f in sub.faces()},
        {(a, b): sheaf._maps[a, b] for a, b in sub.attachments()},
        sheaf.field,
    )


def zero_sheaf(base: SimplicialComplex, field: str = "real") -> CellularSheaf:
    return CellularSheaf(base, {f: 0 for f in base.faces()}, {}, field)


def assignment_is_section(
    sheaf: CellularSheaf, values: Mapping[Sequence[int], Iterable], tol: float = 1e-9
) -> bool:
    """Whether ``values`` (face -> vector) is a section on its support."""
    vals = {make_face(f): np.asarray(v) for f, v in values.items()}
    for f, v in vals.items():
        if v.shape != (sheaf.stalk_dim(f),):
            raise ShapeMismatch(f"value on {f} has shape {v.shape}")
    for a in vals:
        for b in vals:
            if len(a) < len(b) and set(a) < set(b):
                if not np.allclose(sheaf.restriction(a, b) @ vals[a], vals[b], atol=tol):
                    return False
    return True
