"""Sheaf morphisms, sampling, ambiguity sheaves and reconstruction checks."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, NamedTuple, Sequence

import numpy as np

from .complex import Face, SimplicialComplex, make_face
from .errors import (
    InvalidMap,
    NonInvariantKernel,
    NotClosed,
    NotSurjective,
    ShapeMismatch,
    UnknownFace,
    UnsupportedSupport,
)
from .linalg import has_full_row_rank, null_space, rank_info
from .sheaf import CellularSheaf, as_field_matrix, cochain_dim, cohomology, euler_characteristic

# Relative threshold for a restriction leaving a component kernel.
KERNEL_INVARIANCE_TOL = 1e-8


class SimplicialMap:
    """A vertex map ``source -> target`` sending every face onto a face.

    Faces map to the (canonical) set of their vertex images, so dimension
    never increases.
    """

    def __init__(self, source: SimplicialComplex, target: SimplicialComplex, vertex_map: Mapping[int, int]):
        vmap = {int(v): int(w) for v, w in vertex_map.items()}
        for v in source.vertices:
            if v not in vmap:
                raise InvalidMap(f"vertex {v} has no image")
            if (vmap[v],) not in target:
                raise InvalidMap(f"vertex {v} maps to {vmap[v]}, which is not a target vertex")
        for f in source.faces():
            if self._image(vmap, f) not in target:
                raise InvalidMap(f"face {f} maps to {self._image(vmap, f)}, which is not a target face")
        self.source = source
        self.target = target
        self.vertex_map = vmap

    @staticmethod
    def _image(vmap: Mapping[int, int], face: Face) -> Face:
        return tuple(sorted({vmap[v] for v in face}))

    @classmethod
    def identity(cls, base: SimplicialComplex) -> "SimplicialMap":
        return cls(base, base, {v: v for v in base.vertices})

    @property
    def is_identity(self) -> bool:
        return self.source == self.target and all(v == w for v, w in self.vertex_map.items())

    def __call__(self, face) -> Face:
        return self._image(self.vertex_map, make_face(face))


class SheafMorphism:
    """Stalkwise linear maps ``F(f(a)) -> G(a)`` along a simplicial map ``f``.

    ``F`` lives on ``along.target`` and ``G`` on ``along.source``: the
    morphism runs against the direction of the base map. A component may be
    omitted when either of its stalks is zero.
    """

    def __init__(
        self,
        along: SimplicialMap,
        source: CellularSheaf,
        destination: CellularSheaf,
        components: Mapping[Sequence[int], object],
    ):
        if source.base != along.target or destination.base != along.source:
            raise InvalidMap("sheaf bases do not match the simplicial map")
        fld = "complex" if "complex" in (source.field, destination.field) else "real"
        comps: dict[Face, np.ndarray] = {}
        given = {make_face(f): m for f, m in components.items()}
        for f in given:
            if f not in along.source:
                raise UnknownFace(f"component given on {f}, which is not a face of the domain base")
        for a in along.source.faces():
            shape = (destination.stalk_dim(a), source.stalk_dim(along(a)))
            what = f"component on {a}"
            if a in given:
                comps[a] = as_field_matrix(given[a], fld, shape, what)
            elif 0 in shape:
                comps[a] = as_field_matrix(np.zeros(shape), fld, shape, what)
            else:
                raise ShapeMismatch(f"{what} between nonzero stalks is missing")
        self.along = along
        self.source = source
        self.destination = destination
        self.components = comps
        self.field = fld

    @classmethod
    def over_identity(cls, source: CellularSheaf, destination: CellularSheaf, components) -> "SheafMorphism":
        return cls(SimplicialMap.identity(source.base), source, destination, components)

    @classmethod
    def identity(cls, sheaf: CellularSheaf) -> "SheafMorphism":
        return cls.over_identity(sheaf, sheaf, {f: np.eye(sheaf.stalk_dim(f)) for f in sheaf.base.faces()})


@dataclass(frozen=True)
class MorphismViolation:
    a: Face
    b: Face
    deviation: float

    def __str__(self) -> str:
        return f"square over {list(self.a)} -> {list(self.b)} does not commute: deviation {self.deviation:.3e}"


def validate_morphism(m: SheafMorphism, tol: float = 1e-8) -> list[MorphismViolation]:
    """Non-commuting squares ``m_b F(f(a) -> f(b)) != G(a -> b) m_a``."""
    out = []
    f = m.along
    for a, b in f.source.attachments():
        lhs = m.components[b] @ m.source.restriction(f(a), f(b))
        rhs = m.destination.restriction(a, b) @ m.components[a]
        if lhs.size == 0:
            continue
        dev = float(np.max(np.abs(lhs - rhs)))
        scale = max(1.0, float(np.max(np.abs(lhs))), float(np.max(np.abs(rhs))))
        if dev > tol * scale:
            out.append(MorphismViolation(a, b, dev))
    return out


def is_sampling_morphism(m: SheafMorphism, tol: float | None = None) -> bool:
    """True iff every component is surjective (numerical full row rank)."""
    return all(has_full_row_rank(c, tol) for c in m.components.values())


# -- sampling sheaves ------------------------------------------------------


def _vertex_support(base: SimplicialComplex, support: Iterable) -> list[int]:
    out = []
    for y in support:
        if isinstance(y, (tuple, list)):
            if len(y) != 1:
                raise UnsupportedSupport(f"{tuple(y)} is not a vertex")
            (y,) = y
        if (y,) not in base:
            raise UnsupportedSupport(f"{y!r} is not a vertex of the base")
        out.append(int(y))
    return sorted(set(out))


def sampling_sheaf(
    base: SimplicialComplex,
    support: Iterable[int],
    stalk_dim: int | Mapping[int, int] = 1,
    field: str = "real",
) -> CellularSheaf:
    """Sheaf with the given stalks on ``support`` vertices and zero elsewhere.

    All restrictions are zero maps.
    """
    ys = _vertex_support(base, support)
    dims = {f: 0 for f in base.faces()}
    for y in ys:
        dims[(y,)] = stalk_dim[y] if isinstance(stalk_dim, Mapping) else stalk_dim
    return CellularSheaf(base, dims, {}, field)


# -- ambiguity sheaves -----------------------------------------------------


def _kernel_bases(m: SheafMorphism, tol: float | None) -> dict[Face, np.ndarray]:
    bad = [a for a, c in m.components.items() if not has_full_row_rank(c, tol)]
    if bad:
        raise NotSurjective(
            "sampling components are not surjective on " + ", ".join(str(list(a)) for a in bad), bad
        )
    bases = {}
    for a, c in m.components.items():
        if c.shape[0] == 0:
            bases[a] = np.eye(c.shape[1], dtype=m.source.dtype)
        else:
            bases[a] = null_space(c, tol)[0].astype(m.source.dtype, copy=False)
    return bases


def ambiguity_sheaf(
    m: SheafMorphism, tol: float | None = None, invariance_tol: float = KERNEL_INVARIANCE_TOL
) -> CellularSheaf:
    """Kernel sheaf of a stalkwise surjective morphism over the identity map.

    Stalks are orthonormal kernel bases of the components; restrictions are
    the source restrictions written in those bases.

    Raises:
        NotSurjective: some component is not surjective.
        NonInvariantKernel: some source restriction moves a component kernel
            outside the next kernel by more than ``invariance_tol`` (relative).
    """
    if not m.along.is_identity:
        raise InvalidMap("ambiguity sheaves are only built over the identity simplicial map")
    F = m.source
    bases = _kernel_bases(m, tol)
    maps = {}
    bad = []
    for (a, b), r in F.restrictions.items():
        ka, kb = bases[a], bases[b]
        moved = r @ ka
        coords = kb.conj().T @ moved
        if moved.size:
            dev = float(np.max(np.abs(moved - kb @ coords)))
            if dev > invariance_tol * max(1.0, float(np.max(np.abs(r)))):
                bad.append((a, b))
        maps[a, b] = coords
    if bad:
        raise NonInvariantKernel(
            "restrictions do not preserve component kernels on "
            + ", ".join(f"{list(a)}->{list(b)}" for a, b in bad),
            bad,
        )
    dims = {f: k.shape[1] for f, k in bases.items()}
    return CellularSheaf(F.base, dims, maps, F.field)


class Restricted(NamedTuple):
    """``on_subcomplex`` keeps the stalks on the subcomplex and zeros the
    rest; ``vanishing`` is the kernel of the canonical surjection onto it."""

    on_subcomplex: CellularSheaf
    vanishing: CellularSheaf
    morphism: SheafMorphism


def _closed_support(base: SimplicialComplex, faces: Iterable) -> set[Face]:
    fs = set()
    for f in faces:
        f = (f,) if isinstance(f, (int, np.integer)) else f
        face = make_face(f)
        if face not in base:
            raise UnknownFace(f"{face} is not a face of the base")
        fs.add(face)
    for f in fs:
        for j in range(len(f)):
            if len(f) > 1 and f[:j] + f[j + 1:] not in fs:
                raise NotClosed(f"{f} is in the subcomplex but {f[:j] + f[j + 1:]} is not")
    return fs


def full_stalk_sampling(F: CellularSheaf, faces: Iterable) -> SheafMorphism:
    """The canonical surjection of ``F`` onto its copy supported on ``faces``.

    ``faces`` is a closed collection of faces; bare integers are vertices.
    """
    ys = _closed_support(F.base, faces)
    dims = {f: (F.stalk_dim(f) if f in ys else 0) for f in F.base.faces()}
    maps = {(a, b): r for (a, b), r in F.restrictions.items() if b in ys}
    target = CellularSheaf(F.base, dims, maps, F.field)
    comps = {f: np.eye(F.stalk_dim(f)) for f in ys}
    return SheafMorphism.over_identity(F, target, comps)


def restrict_to_subcomplex(F: CellularSheaf, faces: Iterable, tol: float | None = None) -> Restricted:
    """Both sheaves attached to a closed subcomplex ``Y`` of the base.

    Raises:
        NotClosed: if ``faces`` is not subset-closed.
    """
    m = full_stalk_sampling(F, faces)
    return Restricted(m.destination, ambiguity_sheaf(m, tol), m)


# -- reports ---------------------------------------------------------------


@dataclass(frozen=True)
class SamplingReport:
    ambiguity_dim: int
    redundancy_dim: int
    tolerance_used: float

    @property
    def perfect(self) -> bool:
        return self.ambiguity_dim == 0 and self.redundancy_dim == 0

    @property
    def verdict(self) -> str:
        if self.perfect:
            return "PERFECT"
        if self.ambiguity_dim and self.redundancy_dim:
            return "BOTH"
        return "AMBIGUOUS" if self.ambiguity_dim else "REDUNDANT"

    def as_dict(self) -> dict:
        return {
            "ambiguity": self.ambiguity_dim,
            "redundancy": self.redundancy_dim,
            "perfect": self.perfect,
            "verdict": self.verdict,
            "tolerance_used": self.tolerance_used,
        }


def nyquist_check(m: SheafMorphism, tol: float | None = None, check: bool = True) -> SamplingReport:
    """Ambiguity (H^0) and redundancy (H^1) of the ambiguity sheaf of ``m``.

    Sampling is perfect, with global sections of source and samples in
    bijection, iff both vanish.
    """
    A = ambiguity_sheaf(m, tol)
    h0 = cohomology(A, 0, tol, check)
    h1 = cohomology(A, 1, tol, check)
    return SamplingReport(h0.dim, h1.dim, h0.tolerance_used)


@dataclass(frozen=True)
class ObstructionReport:
    obstructed: bool
    dim: int
    tolerance_used: float

    @property
    def verdict(self) -> str:
        return "OBSTRUCTED" if self.obstructed else "CLEAR"


def obstruction_check(F: CellularSheaf, support: Iterable[int], tol: float | None = None, check: bool = True) -> ObstructionReport:
    """Global sections of ``F`` vanishing on the vertex set ``support``.

    Any nonzero one blocks injective recovery for every sampling supported
    there.
    """
    ys = _vertex_support(F.base, support)
    vanishing = restrict_to_subcomplex(F, [(y,) for y in ys], tol).vanishing
    h0 = cohomology(vanishing, 0, tol, check)
    return ObstructionReport(h0.dim > 0, h0.dim, h0.tolerance_used)


@dataclass
class InducedMap:
    """Matrix of an induced map between cohomology spaces in computed bases."""

    degree: int
    matrix: np.ndarray
    rank: int
    source_dim: int
    target_dim: int

    @property
    def injective(self) -> bool:
        return self.rank == self.source_dim

    @property
    def surjective(self) -> bool:
        return self.rank == self.target_dim

    @property
    def isomorphism(self) -> bool:
        return self.injective and self.surjective


def induced_map(m: SheafMorphism, k: int = 0, tol: float | None = None, check: bool = True) -> InducedMap:
    """Map ``H^k(F) -> H^k(G)`` induced by ``m``.

    Degree 0 is supported along any simplicial map (vertices always go to
    vertices); higher degrees only along the identity.
    """
    f = m.along
    if k > 0 and not f.is_identity:
        raise NotImplementedError("higher-degree induced maps are only implemented over the identity map")
    hf = cohomology(m.source, k, tol, check)
    hg = cohomology(m.destination, k, tol, check)
    rows = {blk.face: blk for blk in hg.layout}
    cols = {blk.face: blk for blk in hf.layout}
    chain = np.zeros((cochain_dim(m.destination, k), cochain_dim(m.source, k)), dtype=complex)
    for a in f.source.faces(k):
        fa = f(a)
        if len(fa) != len(a):
            continue
        rb, cb = rows[a], cols[fa]
        chain[rb.offset: rb.offset + rb.dim, cb.offset: cb.offset + cb.dim] = m.components[a]
    image = chain @ hf.basis
    mat = hg.basis.conj().T @ image
    if m.field == "real":
        mat = mat.real
    rank = rank_info(mat, tol).rank if mat.size else 0
    return InducedMap(k, mat, rank, hf.dim, hg.dim)


def induced_h0_map(m: SheafMorphism, tol: float | None = None, check: bool = True) -> InducedMap:
    return induced_map(m, 0, tol, check)


class EulerReport(NamedTuple):
    cochain_deviation: int
    cohomology_deviation: int


def euler_check(m: SheafMorphism, tol: float | None = None, check: bool = True) -> EulerReport:
    """Dimension bookkeeping of ``0 -> A -> F -> S -> 0``.

    ``cochain_deviation`` is chi(F) - chi(A) - chi(S) over cochain spaces;
    ``cohomology_deviation`` is the alternating sum of
    dim H^k(A) - dim H^k(F) + dim H^k(S). Both are zero for an exact sequence.
    """
    A = ambiguity_sheaf(m, tol)
    F, S = m.source, m.destination
    chain_dev = euler_characteristic(F) - euler_characteristic(A) - euler_characteristic(S)
    top = F.base.dimension
    coho_dev = 0
    for k in range(top + 1):
        sign = (-1) ** k
        coho_dev += sign * (
            cohomology(A, k, tol, check).dim - cohomology(F, k, tol, check).dim + cohomology(S, k, tol, check).dim
        )
    return EulerReport(chain_dev, coho_dev)
