"""Forward observation model: blur an ideal frame, optionally add noise.

The blur is circular convolution with the kernel, evaluated in the transform
domain. Image-side spectra here use the normalized transform

    Y(u, v) = (1 / (M*N)) * sum_{m,n} x(m, n) * exp(-2j*pi*(m*u/M + n*v/N))

so a spectrum and its image are linked by image = real(ifft2(Y)) * M * N.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputError, ParameterError, ShapeError
from .grid import RoiSpec, scatter_roi, vectorize_roi
from .optics import PsfKernel, build_otf


@dataclass(frozen=True)
class NoiseSpec:
    """Additive white Gaussian noise pinned to a peak signal-to-noise ratio.

    psnr_db: target ratio in decibels; math.inf disables the noise.
    seed: stream seed; equal specs reproduce the same realization.
    """

    psnr_db: float
    seed: int
    kind: str = "gaussian"

    def __post_init__(self) -> None:
        if math.isnan(self.psnr_db):
            raise ParameterError("psnr_db must not be NaN")
        if self.kind != "gaussian":
            raise ParameterError(f"unsupported noise kind {self.kind!r}")

    def sigma(self, peak: float) -> float:
        """Noise standard deviation for a given signal peak."""
        if not math.isfinite(self.psnr_db):
            return 0.0
        return abs(peak) / 10.0 ** (self.psnr_db / 20.0)


def _check_field(ideal: np.ndarray, shape: tuple[int, int], what: str) -> np.ndarray:
    arr = np.asarray(ideal, dtype=float)
    if arr.ndim != 2:
        raise ShapeError(f"{what} must be 2D, got ndim={arr.ndim}")
    if arr.shape != shape:
        raise ShapeError(f"{what} shape {arr.shape} does not match the field {shape}")
    return arr


def observe_spatial(ideal: np.ndarray, psf: PsfKernel) -> np.ndarray:
    """Blurred image of an ideal frame: circular convolution with the kernel."""
    if psf.spec is None:
        raise ParameterError("kernel carries no transfer spec; cannot blur a full field")
    arr = _check_field(ideal, psf.spec.shape, "ideal frame")
    otf = build_otf(psf.spec)
    return np.fft.ifft2(np.fft.fft2(arr) * otf).real


def observe_spectrum(ideal: np.ndarray, otf: np.ndarray) -> np.ndarray:
    """Filtered normalized spectrum of an ideal frame.

    Returns OTF(u, v) * Y(u, v) with Y the normalized transform above; this is
    exactly the normalized transform of the blurred image.
    """
    arr = np.asarray(ideal, dtype=float)
    otf = np.asarray(otf)
    if arr.ndim != 2 or otf.ndim != 2:
        raise ShapeError("ideal frame and transfer grid must both be 2D")
    if arr.shape != otf.shape:
        raise ShapeError(f"ideal frame {arr.shape} and transfer grid {otf.shape} differ")
    rows, cols = arr.shape
    return np.fft.fft2(arr) * otf / (rows * cols)


def spectrum_to_image(spectrum: np.ndarray) -> np.ndarray:
    """Invert the normalized transform back to a real image."""
    spec = np.asarray(spectrum)
    if spec.ndim != 2:
        raise ShapeError(f"spectrum must be 2D, got ndim={spec.ndim}")
    rows, cols = spec.shape
    return np.fft.ifft2(spec).real * (rows * cols)


def image_to_spectrum(image: np.ndarray) -> np.ndarray:
    """Normalized transform of an image (inverse of spectrum_to_image)."""
    arr = np.asarray(image, dtype=float)
    if arr.ndim != 2:
        raise ShapeError(f"image must be 2D, got ndim={arr.ndim}")
    rows, cols = arr.shape
    return np.fft.fft2(arr) / (rows * cols)


def add_noise(observed: np.ndarray, noise: NoiseSpec) -> np.ndarray:
    """Add white Gaussian noise scaled so peak/sigma hits the requested ratio.

    The peak is taken from the input image itself (its max value). With
    psnr_db=inf the input is returned unchanged (same array, no copy).
    """
    arr = np.asarray(observed, dtype=float)
    if arr.ndim != 2:
        raise ShapeError(f"observed image must be 2D, got ndim={arr.ndim}")
    if not math.isfinite(noise.psnr_db):
        return arr
    peak = float(arr.max())
    if peak <= 0:
        raise DegenerateInputError("observed image has no positive peak to scale noise to")
    sigma = noise.sigma(peak)
    rng = np.random.default_rng(noise.seed)
    return arr + sigma * rng.standard_normal(arr.shape)


def measure_psnr_db(clean: np.ndarray, noisy: np.ndarray) -> float:
    """Realized peak signal-to-noise ratio between a clean image and its noisy copy."""
    clean = np.asarray(clean, dtype=float)
    noisy = np.asarray(noisy, dtype=float)
    if clean.shape != noisy.shape:
        raise ShapeError(f"shape mismatch {clean.shape} vs {noisy.shape}")
    sigma = float(np.std(noisy - clean))
    if sigma == 0:
        return math.inf
    peak = float(clean.max())
    if peak <= 0:
        raise DegenerateInputError("clean image has no positive peak")
    return 20.0 * math.log10(peak / sigma)


def extra_light_ratio(full_sample: np.ndarray, roi: RoiSpec, psf: PsfKernel) -> float:
    """How much light the surroundings leak into the ROI observation.

    Ratio of ROI-summed observed intensity for the full sample versus the same
    sample with everything outside the ROI switched off. Close to 1 means the
    region is effectively isolated.
    """
    arr = _check_field(full_sample, psf.spec.shape, "sample")
    roi.require_inside(*arr.shape)
    isolated = scatter_roi(vectorize_roi(arr, roi), roi, *arr.shape)
    obs_full = observe_spatial(arr, psf)
    obs_isolated = observe_spatial(isolated, psf)
    denom = float(obs_isolated[roi.slices()].sum())
    if abs(denom) < 1e-300:
        raise DegenerateInputError("isolated ROI contributes no light; ratio undefined")
    return float(obs_full[roi.slices()].sum()) / denom
