"""SVD-based rank, kernel and image computations with a rank-gap diagnostic."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import IllConditioned

# Smallest acceptable ratio between the smallest kept and the largest
# dropped singular value.
GAP_THRESHOLD = 1e3


@dataclass(frozen=True)
class RankInfo:
    rank: int
    tol: float
    singular_values: np.ndarray
    gap_ratio: float

    @property
    def well_separated(self) -> bool:
        return self.gap_ratio >= GAP_THRESHOLD


def default_tolerance(shape: tuple[int, int], sigma_max: float) -> float:
    """``max(rows, cols) * eps * sigma_max``."""
    return max(shape) * np.finfo(float).eps * sigma_max


def _svd(a: np.ndarray, full: bool):
    m, n = a.shape
    if m == 0 or n == 0:
        u = np.eye(m, dtype=a.dtype)
        vh = np.eye(n, dtype=a.dtype)
        return u, np.zeros(0), vh
    return np.linalg.svd(a, full_matrices=full)


def rank_info(a: np.ndarray, tol: float | None = None) -> RankInfo:
    """Numerical rank of ``a``.

    ``tol`` is an absolute threshold on singular values; ``None`` picks
    :func:`default_tolerance`.
    """
    a = np.atleast_2d(np.asarray(a))
    s = _svd(a, full=False)[1]
    sigma_max = float(s[0]) if s.size else 0.0
    used = default_tolerance(a.shape, sigma_max) if tol is None else float(tol)
    rank = int(np.count_nonzero(s > used))
    if 0 < rank < s.size and s[rank] > 0:
        gap = float(s[rank - 1] / s[rank])
    else:
        gap = np.inf
    return RankInfo(rank, used, s, gap)


def check_gap(info: RankInfo, what: str = "matrix") -> None:
    """Raise :class:`IllConditioned` if the rank decision is fragile."""
    if not info.well_separated:
        raise IllConditioned(
            f"{what}: singular value gap ratio {info.gap_ratio:.3g} at rank {info.rank} "
            f"is below {GAP_THRESHOLD:g} (tol={info.tol:.3g})",
            gap_ratio=info.gap_ratio,
        )


def null_space(a: np.ndarray, tol: float | None = None) -> tuple[np.ndarray, RankInfo]:
    """Orthonormal basis (as columns) of the numerical kernel of ``a``."""
    a = np.atleast_2d(np.asarray(a))
    info = rank_info(a, tol)
    _, _, vh = _svd(a, full=True)
    basis = vh[info.rank:].conj().T
    return basis, info


def range_space(a: np.ndarray, tol: float | None = None) -> tuple[np.ndarray, RankInfo]:
    """Orthonormal basis (as columns) of the numerical image of ``a``."""
    a = np.atleast_2d(np.asarray(a))
    info = rank_info(a, tol)
    u, _, _ = _svd(a, full=True)
    return u[:, : info.rank], info


def has_full_row_rank(a: np.ndarray, tol: float | None = None) -> bool:
    a = np.atleast_2d(np.asarray(a))
    if a.shape[0] == 0:
        return True
    return rank_info(a, tol).rank == a.shape[0]
