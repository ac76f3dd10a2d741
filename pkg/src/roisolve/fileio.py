"""File formats: raw matrices, 16-bit PGM previews, CSV tables, manifests.

The raw matrix format is the authoritative interchange: one ASCII header line
"rows cols kind" (kind is real64 or complex64-pairs) followed by the row-major
little-endian float64 payload; complex values are written as re,im pairs. PGM
output is a lossy rescaled preview for looking at images, never for math.
"""

from __future__ import annotations

import csv
import io
import math
import os
from typing import Iterable, Mapping

import numpy as np

from .errors import FileFormatError, ParameterError, ShapeError

RAW_KIND_REAL = "real64"
RAW_KIND_COMPLEX = "complex64-pairs"


def format_float(value) -> str:
    """Shortest exact decimal for a float (or int/str passthrough)."""
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    v = float(value)
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return format(v, ".17g")


# ---------------------------------------------------------------------------
# raw matrices

def write_raw_matrix(path: str, matrix: np.ndarray) -> None:
    """Write a 2D real or complex matrix in the raw format described above."""
    arr = np.asarray(matrix)
    if arr.ndim != 2:
        raise ShapeError(f"raw format stores 2D matrices, got ndim={arr.ndim}")
    if np.iscomplexobj(arr):
        kind = RAW_KIND_COMPLEX
        payload = arr.astype("<c16").tobytes(order="C")
    else:
        kind = RAW_KIND_REAL
        payload = arr.astype("<f8").tobytes(order="C")
    header = f"{arr.shape[0]} {arr.shape[1]} {kind}\n".encode("ascii")
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(payload)


def read_raw_matrix(path: str) -> np.ndarray:
    """Read the raw matrix format back; returns float64 or complex128."""
    with open(path, "rb") as fh:
        header = fh.readline(256)
        if not header.endswith(b"\n"):
            raise FileFormatError("raw header line missing or too long", offset=0)
        parts = header.decode("ascii", errors="replace").split()
        if len(parts) != 3:
            raise FileFormatError(
                f"raw header needs 'rows cols kind', got {header!r}", offset=0
            )
        try:
            rows, cols = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise FileFormatError(f"raw header dimensions not integers: {exc}", offset=0)
        kind = parts[2]
        if rows < 0 or cols < 0:
            raise FileFormatError(f"raw header dimensions negative: {rows}x{cols}", offset=0)
        if kind == RAW_KIND_REAL:
            dtype, itemsize = np.dtype("<f8"), 8
        elif kind == RAW_KIND_COMPLEX:
            dtype, itemsize = np.dtype("<c16"), 16
        else:
            raise FileFormatError(f"unknown raw kind {kind!r}", offset=0)
        expected = rows * cols * itemsize
        payload = fh.read(expected + 1)
    if len(payload) != expected:
        raise FileFormatError(
            f"raw payload holds {len(payload)} bytes, header promises {expected}",
            offset=len(header),
        )
    data = np.frombuffer(payload, dtype=dtype).reshape(rows, cols)
    return data.astype(np.complex128) if kind == RAW_KIND_COMPLEX else data.astype(np.float64)


# ---------------------------------------------------------------------------
# 16-bit PGM previews

PGM_MAXVAL = 65535


def write_pgm16(path: str, image: np.ndarray) -> None:
    """Save a rescaled 16-bit preview (P5, big-endian, maxval 65535).

    The image max maps to 65535 and negatives clamp to 0, so absolute values
    are not preserved; use the raw format when the numbers matter.
    """
    arr = np.asarray(image, dtype=float)
    if arr.ndim != 2:
        raise ShapeError(f"PGM stores 2D images, got ndim={arr.ndim}")
    peak = float(arr.max()) if arr.size else 0.0
    scale = PGM_MAXVAL / peak if peak > 0 else 0.0
    scaled = np.clip(arr * scale, 0, PGM_MAXVAL)
    quantized = np.floor(scaled + 0.5).astype(">u2")
    with open(path, "wb") as fh:
        fh.write(f"P5\n{arr.shape[1]} {arr.shape[0]}\n{PGM_MAXVAL}\n".encode("ascii"))
        fh.write(quantized.tobytes(order="C"))


def _read_pgm_token(fh: io.BufferedReader) -> bytes:
    # PGM allows '#' comments and arbitrary whitespace between header tokens.
    token = b""
    while True:
        ch = fh.read(1)
        if ch == b"":
            raise FileFormatError("unexpected end of PGM header", offset=fh.tell())
        if ch == b"#":
            while ch not in (b"\n", b""):
                ch = fh.read(1)
            continue
        if ch.isspace():
            if token:
                return token
            continue
        token += ch


def read_pgm16(path: str) -> np.ndarray:
    """Read a 8- or 16-bit P5 image; returns the stored counts as float64."""
    with open(path, "rb") as fh:
        magic = fh.read(2)
        if magic != b"P5":
            raise FileFormatError(f"not a P5 raster (magic {magic!r})", offset=0)
        try:
            cols = int(_read_pgm_token(fh))
            rows = int(_read_pgm_token(fh))
            maxval = int(_read_pgm_token(fh))
        except ValueError as exc:
            raise FileFormatError(f"PGM header token not an integer: {exc}", offset=fh.tell())
        if not (0 < maxval < 65536):
            raise FileFormatError(f"PGM maxval {maxval} out of range", offset=fh.tell())
        dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
        expected = rows * cols * dtype.itemsize
        offset = fh.tell()
        payload = fh.read(expected + 1)
    if len(payload) != expected:
        raise FileFormatError(
            f"PGM payload holds {len(payload)} bytes, header promises {expected}",
            offset=offset,
        )
    return np.frombuffer(payload, dtype=dtype).reshape(rows, cols).astype(np.float64)


def sniff_raster(path: str) -> str:
    """Return 'pgm' or 'raw' by peeking at the file start."""
    with open(path, "rb") as fh:
        start = fh.read(2)
    return "pgm" if start == b"P5" else "raw"


def read_raster(path: str) -> np.ndarray:
    """Read either raster format; raw payloads must be real for images."""
    if sniff_raster(path) == "pgm":
        return read_pgm16(path)
    arr = read_raw_matrix(path)
    if np.iscomplexobj(arr):
        raise FileFormatError(f"{path} holds complex data, expected an image")
    return arr


# ---------------------------------------------------------------------------
# CSV tables

def write_table_csv(path: str, header: Iterable[str], rows: Iterable[Iterable]) -> None:
    """Write a CSV with floats rendered as shortest exact decimals.

    The rendering is deterministic, so identical data produces identical
    bytes (newline pinned to \\n regardless of platform).
    """
    with open(path, "w", newline="\n", encoding="ascii") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(list(header))
        for row in rows:
            writer.writerow([format_float(v) for v in row])


# ---------------------------------------------------------------------------
# manifests (key = value; also the config file format)

def write_manifest(path: str, entries: Mapping[str, str]) -> None:
    """Write 'key = value' lines; values are stored verbatim."""
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        for key, value in entries.items():
            if "=" in key or "\n" in key or "\n" in str(value):
                raise ParameterError(f"manifest key/value must be single-line, got {key!r}")
            fh.write(f"{key} = {value}\n")


def read_manifest(path: str) -> dict[str, str]:
    """Parse 'key = value' lines; '#' starts a comment, blanks are skipped."""
    entries: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            if "=" not in stripped:
                raise FileFormatError(
                    f"{os.path.basename(path)}:{lineno}: expected 'key = value', "
                    f"got {stripped!r}"
                )
            key, _, value = stripped.partition("=")
            key = key.strip()
            if not key:
                raise FileFormatError(f"{os.path.basename(path)}:{lineno}: empty key")
            entries[key] = value.strip()
    return entries
