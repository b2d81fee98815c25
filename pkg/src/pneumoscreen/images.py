"""Grayscale raster loading, the two resizing strategies, and grid tiling.

Supported inputs are 8-bit grayscale or RGB PNG and binary PGM (P5).
Color is collapsed to luminance with Rec.601 weights, rounded to the
nearest integer. Resampling is bilinear with corner pixel centers mapped
onto corner pixel centers, so identity-size resizes are exact.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from pneumoscreen import errors
from pneumoscreen._kernels import resize_bilinear

_PIL_FORMATS = {"PNG", "PPM"}  # PPM covers binary PGM (P5)
_LUMA = (0.299, 0.587, 0.114)  # Rec.601


@dataclass
class GrayImage:
    """A 2-D luminance raster; pixels is uint8 with shape (height, width)."""

    width: int
    height: int
    pixels: np.ndarray
    id: str = ""

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise errors.ZeroDimension(
                f"image dimensions must be >= 1, got {self.width}x{self.height}"
            )
        self.pixels = np.asarray(self.pixels, dtype=np.uint8)
        if self.pixels.shape != (self.height, self.width):
            raise errors.ZeroDimension(
                f"pixel buffer shape {self.pixels.shape} does not match "
                f"{self.height}x{self.width}"
            )

    @classmethod
    def from_array(cls, pixels: np.ndarray, image_id: str = "") -> "GrayImage":
        pixels = np.asarray(pixels, dtype=np.uint8)
        if pixels.ndim != 2:
            raise errors.ZeroDimension(f"expected a 2-D array, got shape {pixels.shape}")
        h, w = pixels.shape
        return cls(width=w, height=h, pixels=pixels, id=image_id)


@dataclass
class TileGrid:
    """Row-major tiles cut from a parent image at the stored boundaries."""

    rows: int
    cols: int
    tiles: list[GrayImage]
    parent_id: str
    row_bounds: tuple[int, ...]
    col_bounds: tuple[int, ...]

    def __post_init__(self):
        if len(self.tiles) != self.rows * self.cols:
            raise errors.LengthMismatch(
                f"{len(self.tiles)} tiles for a {self.rows}x{self.cols} grid"
            )

    @property
    def tile_count(self) -> int:
        return self.rows * self.cols


def _to_luminance(arr: np.ndarray) -> np.ndarray:
    r, g, b = arr[..., 0], arr[..., 1], arr[..., 2]
    lum = _LUMA[0] * r + _LUMA[1] * g + _LUMA[2] * b
    return np.rint(lum).astype(np.uint8)


def decode_image(data: bytes, image_id: str = "") -> GrayImage:
    """Decode PNG or binary PGM bytes into a GrayImage."""
    if len(data) == 0:
        raise errors.CorruptFile("empty file")
    try:
        pil = Image.open(io.BytesIO(data))
        pil.load()
    except UnidentifiedImageError:
        # Recognizable magic but broken body is a corrupt file; anything
        # else is an unsupported format.
        if data[:8] == b"\x89PNG\r\n\x1a\n" or data[:2] in (b"P5", b"P2"):
            raise errors.CorruptFile("unreadable image data") from None
        raise errors.UnsupportedFormat("not a PNG or PGM file") from None
    except OSError as exc:
        raise errors.CorruptFile(f"unreadable image data: {exc}") from None

    if pil.format not in _PIL_FORMATS:
        raise errors.UnsupportedFormat(f"unsupported raster format {pil.format}")

    if pil.mode == "P":
        pil = pil.convert("RGB")
    if pil.mode == "L":
        arr = np.asarray(pil, dtype=np.uint8)
    elif pil.mode == "RGB":
        arr = _to_luminance(np.asarray(pil, dtype=np.float64))
    else:
        raise errors.UnsupportedFormat(
            f"unsupported pixel mode {pil.mode}; need 8-bit grayscale or RGB"
        )
    if arr.size == 0:
        raise errors.ZeroDimension("image has a zero dimension")
    return GrayImage.from_array(arr, image_id)


def load_image(path: str | Path) -> GrayImage:
    """Load a raster from disk; the image id defaults to the file stem."""
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise errors.CorruptFile(f"cannot read {path}: {exc}") from None
    return decode_image(data, image_id=path.stem)


def save_pgm(img: GrayImage, path: str | Path) -> None:
    """Write a binary PGM (P5). Byte-deterministic, handy for fixtures."""
    header = f"P5\n{img.width} {img.height}\n255\n".encode("ascii")
    Path(path).write_bytes(header + img.pixels.tobytes())


def save_image(img: GrayImage, path: str | Path) -> None:
    path = Path(path)
    if path.suffix.lower() == ".pgm":
        save_pgm(img, path)
    else:
        Image.fromarray(img.pixels, mode="L").save(path)


def resize_raw(img: GrayImage, target_w: int, target_h: int) -> GrayImage:
    """Bilinear resize to exactly target_w x target_h, ignoring aspect ratio."""
    if target_w < 1 or target_h < 1:
        raise errors.ZeroDimension(f"target {target_w}x{target_h} is not positive")
    pixels = resize_bilinear(np.ascontiguousarray(img.pixels), target_h, target_w)
    return GrayImage(width=target_w, height=target_h, pixels=pixels, id=img.id)


def resize_with_padding(img: GrayImage, target_w: int, target_h: int) -> GrayImage:
    """Scale by a single factor preserving aspect ratio, center, pad with black.

    The scaled content size rounds half-to-even; when padding is odd the
    extra pixel goes to the bottom/right.
    """
    if target_w < 1 or target_h < 1:
        raise errors.ZeroDimension(f"target {target_w}x{target_h} is not positive")
    scale = min(target_w / img.width, target_h / img.height)
    content_w = min(max(round(img.width * scale), 1), target_w)
    content_h = min(max(round(img.height * scale), 1), target_h)
    content = resize_bilinear(np.ascontiguousarray(img.pixels), content_h, content_w)

    out = np.zeros((target_h, target_w), dtype=np.uint8)
    top = (target_h - content_h) // 2
    left = (target_w - content_w) // 2
    out[top : top + content_h, left : left + content_w] = content
    return GrayImage(width=target_w, height=target_h, pixels=out, id=img.id)


def split_grid(img: GrayImage, rows: int, cols: int) -> TileGrid:
    """Cut a regular grid; offsets are round(i*dim/parts), so uneven sizes
    spread the remainder and the tiles always partition the image exactly."""
    if rows < 1 or cols < 1:
        raise errors.ZeroDimension(f"grid {rows}x{cols} is not positive")
    if rows > img.height or cols > img.width:
        raise errors.GridTooFine(
            f"grid {rows}x{cols} too fine for a {img.width}x{img.height} image"
        )
    row_bounds = tuple(round(i * img.height / rows) for i in range(rows + 1))
    col_bounds = tuple(round(j * img.width / cols) for j in range(cols + 1))

    tiles = []
    for i in range(rows):
        for j in range(cols):
            patch = img.pixels[
                row_bounds[i] : row_bounds[i + 1], col_bounds[j] : col_bounds[j + 1]
            ].copy()
            tiles.append(GrayImage.from_array(patch, f"{img.id}#{i * cols + j}"))
    return TileGrid(
        rows=rows,
        cols=cols,
        tiles=tiles,
        parent_id=img.id,
        row_bounds=row_bounds,
        col_bounds=col_bounds,
    )


def reassemble(grid: TileGrid) -> GrayImage:
    """Stitch tiles back together at their boundaries (partition inverse)."""
    height, width = grid.row_bounds[-1], grid.col_bounds[-1]
    out = np.empty((height, width), dtype=np.uint8)
    for i in range(grid.rows):
        for j in range(grid.cols):
            tile = grid.tiles[i * grid.cols + j]
            out[
                grid.row_bounds[i] : grid.row_bounds[i + 1],
                grid.col_bounds[j] : grid.col_bounds[j + 1],
            ] = tile.pixels
    return GrayImage.from_array(out, grid.parent_id)
