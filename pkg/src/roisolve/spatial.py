"""Recovery in the image domain: kernel-entry linear systems.

For an isolated ROI every observed cell is a known linear mix of the ROI
pixels, with coefficients read straight off the kernel: the row for observed
cell (m, n) and column for unknown cell (k, l) holds the kernel value at
offset (k - m, l - n). Solving that dense system undoes the blur.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import ParameterError, ShapeError, SingularSystemError
from .grid import RoiSpec
from .optics import PsfKernel

# Above this condition estimate a plain solve is considered untrustworthy;
# the CLI switches to the truncated solver when the caller did not pin one.
CONDITION_LIMIT = 1e14

# Relative singular-value floor of the truncated solver (1 / CONDITION_LIMIT).
TRUNCATION_RTOL = 1e-14

# Row-block size cap (in matrix entries) when filling large systems, keeps
# the index scratch arrays small.
_FILL_CHUNK_ENTRIES = 10_000_000


def solve_two_point_1d(
    p: float, q_a: float, q_b: float, y_a: float, y_b: float
) -> tuple[float, float]:
    """Closed-form recovery of two mixed point sources.

    The observations are y_a = p*x_a + q_a*x_b and y_b = p*x_b + q_b*x_a with
    p the kernel peak and q_a, q_b the cross couplings. Solves the 2x2 system
    in the symmetric form x_a = (p*y_a - q_a*y_b) / (p^2 - q_a*q_b),
    x_b = (p*y_b - q_b*y_a) / (p^2 - q_a*q_b).

    Raises:
        SingularSystemError: p^2 == q_a*q_b to roundoff (the two observations
            carry the same information).
    """
    det = p * p - q_a * q_b
    scale = max(p * p, abs(q_a * q_b))
    if scale == 0.0 or abs(det) <= 1e-12 * scale:
        raise SingularSystemError(
            f"two-point system is singular: p^2={p * p:g} vs q_a*q_b={q_a * q_b:g}"
        )
    x_a = (p * y_a - q_a * y_b) / det
    x_b = (p * y_b - q_b * y_a) / det
    return (float(x_a), float(x_b))


def ring_cells(roi: RoiSpec, rows: int, cols: int, width: int = 2) -> np.ndarray:
    """Cells within Chebyshev distance `width` around the ROI, clipped to the grid.

    Returns an (n, 2) array of absolute (row, col) coordinates, row-major over
    the enclosing rectangle, ROI cells excluded.
    """
    if width < 1:
        raise ParameterError(f"ring width must be >= 1, got {width}")
    roi.require_inside(rows, cols)
    r0 = max(roi.top - width, 0)
    r1 = min(roi.top + roi.k_rows + width, rows)
    c0 = max(roi.left - width, 0)
    c1 = min(roi.left + roi.l_cols + width, cols)
    rr, cc = np.meshgrid(np.arange(r0, r1), np.arange(c0, c1), indexing="ij")
    rr = rr.ravel()
    cc = cc.ravel()
    inside = (
        (rr >= roi.top)
        & (rr < roi.top + roi.k_rows)
        & (cc >= roi.left)
        & (cc < roi.left + roi.l_cols)
    )
    return np.column_stack([rr[~inside], cc[~inside]])


def system_matrix(psf: PsfKernel, roi: RoiSpec, obs_cells: np.ndarray) -> np.ndarray:
    """Dense system matrix: rows follow obs_cells, columns the ROI row-major.

    Entry (i, j) is the kernel value at offset (unknown_j - observed_i). Filled
    in row blocks so scratch index arrays stay bounded for large systems.
    """
    obs_cells = np.asarray(obs_cells)
    if obs_cells.ndim != 2 or obs_cells.shape[1] != 2:
        raise ShapeError(f"obs_cells must have shape (n, 2), got {obs_cells.shape}")
    unknowns = roi.cells()
    n_rows = obs_cells.shape[0]
    n_cols = unknowns.shape[0]
    a = np.empty((n_rows, n_cols))
    chunk = max(1, _FILL_CHUNK_ENTRIES // max(n_cols, 1))
    for start in range(0, n_rows, chunk):
        stop = min(start + chunk, n_rows)
        du = unknowns[None, :, 0] - obs_cells[start:stop, None, 0]
        dv = unknowns[None, :, 1] - obs_cells[start:stop, None, 1]
        a[start:stop] = psf.values(du, dv)
    return a


@dataclass(frozen=True)
class SpatialSystem:
    """A built image-domain system A x = y ready for a solver."""

    a_matrix: np.ndarray
    rhs: np.ndarray
    roi: RoiSpec
    obs_cells: np.ndarray
    condition_estimate: float

    @property
    def is_square(self) -> bool:
        return self.a_matrix.shape[0] == self.a_matrix.shape[1]


def build_system(
    psf: PsfKernel,
    observed: np.ndarray,
    roi: RoiSpec,
    extra_obs: np.ndarray | None = None,
    estimate_condition: bool = True,
) -> SpatialSystem:
    """Assemble the system for an isolated ROI of a blurred image.

    Args:
        psf: blur kernel; its window must cover every offset the chosen
            observation cells need.
        observed: blurred image containing the ROI.
        roi: region holding the unknown pixels.
        extra_obs: optional (n, 2) absolute coordinates of observation cells
            appended below the ROI's own cells (an overdetermined system).
        estimate_condition: compute a 2-norm condition estimate (SVD; skip for
            very large systems and the estimate is reported as nan).

    Returns:
        SpatialSystem with rows [ROI cells; extra_obs] in row-major order.
    """
    observed = np.asarray(observed, dtype=float)
    if observed.ndim != 2:
        raise ShapeError(f"observed image must be 2D, got ndim={observed.ndim}")
    roi.require_inside(*observed.shape)
    obs_cells = roi.cells()
    if extra_obs is not None and len(extra_obs) > 0:
        extra = np.asarray(extra_obs)
        if extra.ndim != 2 or extra.shape[1] != 2:
            raise ShapeError(f"extra_obs must have shape (n, 2), got {extra.shape}")
        if (
            extra.min() < 0
            or extra[:, 0].max() >= observed.shape[0]
            or extra[:, 1].max() >= observed.shape[1]
        ):
            raise ShapeError("extra_obs contains cells outside the observed image")
        obs_cells = np.vstack([obs_cells, extra])
    a = system_matrix(psf, roi, obs_cells)
    rhs = observed[obs_cells[:, 0], obs_cells[:, 1]].astype(float)
    cond = float(np.linalg.cond(a)) if estimate_condition else float("nan")
    return SpatialSystem(
        a_matrix=a, rhs=rhs, roi=roi, obs_cells=obs_cells, condition_estimate=cond
    )


@dataclass(frozen=True)
class SpatialSolution:
    """Solver output: recovered pixels plus bookkeeping.

    pixels: row-major ROI values (clamped if requested).
    residual: ||A x - y||_2 / (K*L) for the returned pixels.
    negative_count / min_pixel: nonnegativity report, taken before clamping.
    """

    pixels: np.ndarray
    residual: float
    condition: float
    method: str
    negative_count: int
    min_pixel: float


SPATIAL_METHODS = ("direct", "least_squares", "truncated")


def _truncated_lstsq(a: np.ndarray, rhs: np.ndarray, rtol: float) -> np.ndarray:
    u, s, vt = np.linalg.svd(a, full_matrices=False)
    keep = s > rtol * s[0] if s.size else np.zeros(0, dtype=bool)
    if not keep.any():
        raise SingularSystemError("every singular value fell below the truncation floor")
    coeff = (u[:, keep].conj().T @ rhs) / s[keep]
    return vt[keep].conj().T @ coeff


def solve_system(
    system: SpatialSystem,
    method: str = "direct",
    clamp_negative: bool = False,
) -> SpatialSolution:
    """Solve a built system and report the recovered ROI.

    Methods: "direct" (LU, square systems only), "least_squares" (works for
    square and overdetermined), "truncated" (SVD with singular values below
    TRUNCATION_RTOL of the largest discarded).
    """
    if method not in SPATIAL_METHODS:
        raise ParameterError(f"unknown method {method!r}, expected one of {SPATIAL_METHODS}")
    a = system.a_matrix
    rhs = system.rhs
    if method == "direct":
        if not system.is_square:
            raise ShapeError(
                f"direct solve needs a square system, got {a.shape}; "
                "use least_squares for extra observation cells"
            )
        try:
            x = np.linalg.solve(a, rhs)
        except np.linalg.LinAlgError as exc:
            raise SingularSystemError(
                f"direct solve failed: {exc}", condition=system.condition_estimate
            ) from exc
    elif method == "least_squares":
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
            x, _, _, _ = scipy.linalg.lstsq(a, rhs, lapack_driver="gelsd")
    else:
        x = _truncated_lstsq(a, rhs, TRUNCATION_RTOL)
    negative_count = int(np.count_nonzero(x < 0))
    min_pixel = float(x.min()) if x.size else 0.0
    if clamp_negative:
        x = np.maximum(x, 0.0)
    residual = float(np.linalg.norm(a @ x - rhs)) / system.roi.pixel_count
    return SpatialSolution(
        pixels=x,
        residual=residual,
        condition=system.condition_estimate,
        method=method,
        negative_count=negative_count,
        min_pixel=min_pixel,
    )
