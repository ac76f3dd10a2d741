"""Rectangular regions of interest and grid <-> vector plumbing.

Images are plain 2D float64 arrays, spectra plain 2D complex128 arrays in
unshifted DFT layout (index (0, 0) is the zero-frequency entry). Unknowns are
vectorized row-major; every matrix in the package follows the same ordering.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BoundsError, ParameterError, ShapeError


@dataclass(frozen=True)
class RoiSpec:
    """A K x L axis-aligned region anchored at (top, left).

    All fields are nonnegative integers; k_rows and l_cols are at least 1.
    """

    top: int
    left: int
    k_rows: int
    l_cols: int

    def __post_init__(self) -> None:
        for name in ("top", "left", "k_rows", "l_cols"):
            value = getattr(self, name)
            if not isinstance(value, (int, np.integer)):
                raise ParameterError(f"RoiSpec.{name} must be an integer, got {value!r}")
        if self.top < 0 or self.left < 0:
            raise ParameterError(
                f"RoiSpec anchor must be nonnegative, got ({self.top}, {self.left})"
            )
        if self.k_rows < 1 or self.l_cols < 1:
            raise ParameterError(
                f"RoiSpec must span at least one cell, got {self.k_rows} x {self.l_cols}"
            )

    @property
    def shape(self) -> tuple[int, int]:
        return (self.k_rows, self.l_cols)

    @property
    def pixel_count(self) -> int:
        return self.k_rows * self.l_cols

    @property
    def center(self) -> tuple[float, float]:
        """Geometric center in grid coordinates."""
        return (self.top + (self.k_rows - 1) / 2.0, self.left + (self.l_cols - 1) / 2.0)

    def slices(self) -> tuple[slice, slice]:
        return (
            slice(self.top, self.top + self.k_rows),
            slice(self.left, self.left + self.l_cols),
        )

    def cells(self) -> np.ndarray:
        """Absolute (row, col) coordinates of every cell, row-major, shape (K*L, 2)."""
        rows = np.arange(self.top, self.top + self.k_rows)
        cols = np.arange(self.left, self.left + self.l_cols)
        rr, cc = np.meshgrid(rows, cols, indexing="ij")
        return np.column_stack([rr.ravel(), cc.ravel()])

    def require_inside(self, rows: int, cols: int) -> None:
        if self.top + self.k_rows > rows or self.left + self.l_cols > cols:
            raise BoundsError(
                f"ROI {self.k_rows}x{self.l_cols} at ({self.top}, {self.left}) "
                f"does not fit a {rows}x{cols} grid"
            )


def centered_roi(rows: int, cols: int, k_rows: int, l_cols: int) -> RoiSpec:
    """A K x L region centered (up to rounding) on a rows x cols grid."""
    if k_rows > rows or l_cols > cols:
        raise BoundsError(
            f"a {k_rows}x{l_cols} region does not fit in a {rows}x{cols} grid"
        )
    roi = RoiSpec((rows - k_rows) // 2, (cols - l_cols) // 2, k_rows, l_cols)
    roi.require_inside(rows, cols)
    return roi


def vectorize_roi(grid: np.ndarray, roi: RoiSpec) -> np.ndarray:
    """Row-major copy of the ROI cells as a 1D vector of length K*L."""
    grid = np.asarray(grid)
    if grid.ndim != 2:
        raise ShapeError(f"expected a 2D grid, got ndim={grid.ndim}")
    roi.require_inside(*grid.shape)
    return grid[roi.slices()].ravel().copy()


def scatter_roi(vec: np.ndarray, roi: RoiSpec, rows: int, cols: int) -> np.ndarray:
    """Embed a row-major K*L vector into an otherwise dark rows x cols frame."""
    vec = np.asarray(vec, dtype=float)
    if vec.shape != (roi.pixel_count,):
        raise ShapeError(
            f"vector length {vec.shape} does not match ROI pixel count {roi.pixel_count}"
        )
    roi.require_inside(rows, cols)
    frame = np.zeros((rows, cols))
    frame[roi.slices()] = vec.reshape(roi.shape)
    return frame


def assert_isolated(grid: np.ndarray, roi: RoiSpec, tol: float = 0.0) -> None:
    """Raise if any cell outside the ROI exceeds tol in magnitude."""
    grid = np.asarray(grid)
    roi.require_inside(*grid.shape)
    outside = np.abs(grid).astype(float)
    outside[roi.slices()] = 0.0
    worst = float(outside.max()) if outside.size else 0.0
    if worst > tol:
        where = np.unravel_index(int(np.argmax(outside)), outside.shape)
        raise ParameterError(
            f"grid is not isolated to the ROI: |value|={worst:g} at {where} (tol {tol:g})"
        )


def conjugate_symmetry_error(spectrum: np.ndarray) -> float:
    """Max deviation of S(u, v) from conj(S(-u mod M, -v mod N)).

    Zero (to roundoff) exactly when the spectrum came from a real image.
    """
    s = np.asarray(spectrum)
    if s.ndim != 2:
        raise ShapeError(f"expected a 2D spectrum, got ndim={s.ndim}")
    mirrored = s[::-1, ::-1]
    mirrored = np.roll(mirrored, (1, 1), axis=(0, 1))
    return float(np.abs(s - np.conj(mirrored)).max())
