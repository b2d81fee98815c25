import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from PIL import Image

from pneumoscreen import errors, images
from conftest import gray


def _oracle_resize(src: np.ndarray, out_h: int, out_w: int) -> np.ndarray:
    """Independent scalar bilinear oracle.

    Corner pixel centers map onto corner pixel centers via a precomputed
    per-axis step (the pinned coordinate convention); weights, gathers and
    half-even rounding are re-derived from scratch here.
    """
    in_h, in_w = src.shape
    step_y = 0.0 if out_h == 1 else (in_h - 1) / (out_h - 1)
    step_x = 0.0 if out_w == 1 else (in_w - 1) / (out_w - 1)
    out = np.zeros((out_h, out_w), dtype=np.uint8)
    for i in range(out_h):
        y = (in_h - 1) / 2 if out_h == 1 else i * step_y
        y = min(max(y, 0.0), in_h - 1)
        y0 = math.floor(y)
        y1 = min(y0 + 1, in_h - 1)
        fy = y - y0
        for j in range(out_w):
            x = (in_w - 1) / 2 if out_w == 1 else j * step_x
            x = min(max(x, 0.0), in_w - 1)
            x0 = math.floor(x)
            x1 = min(x0 + 1, in_w - 1)
            fx = x - x0
            top = src[y0, x0] * (1 - fx) + src[y0, x1] * fx
            bot = src[y1, x0] * (1 - fx) + src[y1, x1] * fx
            out[i, j] = round(top * (1 - fy) + bot * fy)
    return out


class TestLoadImage:
    def test_pgm_identity_read(self, tmp_path):
        path = tmp_path / "tiny.pgm"
        path.write_bytes(b"P5\n2 2\n255\n" + bytes([0, 255, 128, 64]))
        img = images.load_image(path)
        assert (img.width, img.height) == (2, 2)
        assert img.pixels.tolist() == [[0, 255], [128, 64]]
        assert img.id == "tiny"

    @pytest.mark.parametrize(
        "rgb,expected", [((255, 0, 0), 76), ((0, 255, 0), 150), ((0, 0, 255), 29)]
    )
    def test_rgb_converts_to_rec601_luminance(self, tmp_path, rgb, expected):
        path = tmp_path / "dot.png"
        Image.new("RGB", (1, 1), rgb).save(path)
        assert images.load_image(path).pixels[0, 0] == expected

    def test_grayscale_png_reads_raw_values(self, tmp_path):
        path = tmp_path / "g.png"
        Image.fromarray(np.array([[7, 200]], dtype=np.uint8), mode="L").save(path)
        assert images.load_image(path).pixels.tolist() == [[7, 200]]

    def test_zero_byte_file_is_corrupt(self, tmp_path):
        path = tmp_path / "empty.png"
        path.write_bytes(b"")
        with pytest.raises(errors.CorruptFile):
            images.load_image(path)

    def test_truncated_png_is_corrupt(self, tmp_path):
        path = tmp_path / "broken.png"
        path.write_bytes(b"\x89PNG\r\n\x1a\n" + b"\x00" * 8)
        with pytest.raises(errors.CorruptFile):
            images.load_image(path)

    def test_unknown_magic_is_unsupported(self, tmp_path):
        path = tmp_path / "note.txt"
        path.write_bytes(b"not an image at all")
        with pytest.raises(errors.UnsupportedFormat):
            images.load_image(path)

    def test_other_raster_format_is_unsupported(self, tmp_path):
        path = tmp_path / "img.bmp"
        Image.new("L", (2, 2)).save(path, format="BMP")
        with pytest.raises(errors.UnsupportedFormat):
            images.load_image(path)

    def test_sixteen_bit_png_is_unsupported(self, tmp_path):
        path = tmp_path / "deep.png"
        Image.new("I;16", (1, 1), 1000).save(path)
        with pytest.raises(errors.UnsupportedFormat):
            images.load_image(path)


class TestResizeRaw:
    def test_identity_size_is_exact(self, rng):
        img = gray(rng.integers(0, 256, size=(31, 17)))
        out = images.resize_raw(img, 17, 31)
        assert np.array_equal(out.pixels, img.pixels)

    def test_two_pixel_line_upsamples_linearly(self):
        img = gray([[0, 255]])
        out = images.resize_raw(img, 4, 1)
        assert out.pixels.tolist() == [[0, 85, 170, 255]]

    def test_matches_independent_oracle(self, rng):
        for _ in range(5):
            h, w = rng.integers(2, 24, size=2)
            th, tw = rng.integers(1, 30, size=2)
            img = gray(rng.integers(0, 256, size=(h, w)))
            out = images.resize_raw(img, int(tw), int(th))
            assert np.array_equal(out.pixels, _oracle_resize(img.pixels, int(th), int(tw)))

    def test_downsample_hits_requested_dimensions(self, rng):
        img = gray(rng.integers(0, 256, size=(768, 1024)))
        out = images.resize_raw(img, 310, 310)
        assert (out.width, out.height) == (310, 310)

    def test_zero_target_rejected(self):
        with pytest.raises(errors.ZeroDimension):
            images.resize_raw(gray([[1]]), 0, 5)

    @given(
        value=st.integers(0, 255),
        h=st.integers(1, 12),
        w=st.integers(1, 12),
        th=st.integers(1, 20),
        tw=st.integers(1, 20),
    )
    @settings(max_examples=60, deadline=None)
    def test_constant_images_are_fixed_points(self, value, h, w, th, tw):
        img = gray(np.full((h, w), value))
        out = images.resize_raw(img, tw, th)
        assert np.all(out.pixels == value)
        back = images.resize_raw(out, w, h)
        assert np.array_equal(back.pixels, img.pixels)

    def test_pure_same_input_same_output(self, rng):
        img = gray(rng.integers(0, 256, size=(40, 25)))
        first = images.resize_raw(img, 13, 19)
        second = images.resize_raw(img, 13, 19)
        assert np.array_equal(first.pixels, second.pixels)


class TestResizeWithPadding:
    def test_matching_aspect_equals_raw(self, rng):
        img = gray(rng.integers(0, 256, size=(40, 40)))
        padded = images.resize_with_padding(img, 25, 25)
        raw = images.resize_raw(img, 25, 25)
        assert np.array_equal(padded.pixels, raw.pixels)

    def test_wide_input_centers_vertically(self):
        img = gray(np.full((50, 100), 200))
        out = images.resize_with_padding(img, 100, 100)
        assert np.all(out.pixels[25:75, :] == 200)
        assert np.all(out.pixels[:25, :] == 0)
        assert np.all(out.pixels[75:, :] == 0)

    def test_landscape_chest_film_band_arithmetic(self):
        img = gray(np.full((768, 1024), 130))
        out = images.resize_with_padding(img, 310, 310)
        assert (out.width, out.height) == (310, 310)
        assert np.all(out.pixels[:39, :] == 0)
        assert np.all(out.pixels[271:, :] == 0)
        assert np.all(out.pixels[39:271, :] == 130)  # 232 content rows

    @given(
        h=st.integers(1, 40),
        w=st.integers(1, 40),
        th=st.integers(1, 40),
        tw=st.integers(1, 40),
    )
    @settings(max_examples=80, deadline=None)
    def test_content_centered_and_padding_zero(self, h, w, th, tw):
        img = gray(np.full((h, w), 255))
        out = images.resize_with_padding(img, tw, th)
        rows = np.nonzero(out.pixels.any(axis=1))[0]
        cols = np.nonzero(out.pixels.any(axis=0))[0]
        assert len(rows) and len(cols)
        top, bottom = rows[0], th - 1 - rows[-1]
        left, right = cols[0], tw - 1 - cols[-1]
        assert abs(int(top) - int(bottom)) <= 1
        assert abs(int(left) - int(right)) <= 1
        # content block solid 255, everything else exactly 0
        assert np.all(out.pixels[rows[0] : rows[-1] + 1, cols[0] : cols[-1] + 1] == 255)
        assert out.pixels.sum() == 255 * len(rows) * len(cols)


class TestSplitGrid:
    def test_divisible_grid(self, rng):
        img = gray(rng.integers(0, 256, size=(9, 9)))
        grid = images.split_grid(img, 3, 3)
        assert grid.tile_count == 9
        assert all(t.width == 3 and t.height == 3 for t in grid.tiles)

    def test_uneven_grid_uses_rounded_cuts(self, rng):
        img = gray(rng.integers(0, 256, size=(10, 10)))
        grid = images.split_grid(img, 3, 3)
        assert grid.row_bounds == (0, 3, 7, 10)
        assert grid.col_bounds == (0, 3, 7, 10)
        heights = [t.height for t in grid.tiles[::3]]
        widths = [t.width for t in grid.tiles[:3]]
        assert heights == [3, 4, 3]
        assert widths == [3, 4, 3]

    def test_standard_nine_way_split(self, rng):
        img = gray(rng.integers(0, 256, size=(300, 300)))
        grid = images.split_grid(img, 3, 3)
        assert all(t.width == 100 and t.height == 100 for t in grid.tiles)

    def test_too_fine_grid_rejected(self):
        with pytest.raises(errors.GridTooFine):
            images.split_grid(gray(np.zeros((4, 4))), 5, 2)

    def test_tiles_row_major_and_ids_indexed(self, rng):
        img = gray(rng.integers(0, 256, size=(6, 6)), "parent")
        grid = images.split_grid(img, 2, 3)
        assert grid.parent_id == "parent"
        assert [t.id for t in grid.tiles] == [f"parent#{k}" for k in range(6)]
        assert np.array_equal(grid.tiles[1].pixels, img.pixels[0:3, 2:4])

    @given(
        h=st.integers(1, 40),
        w=st.integers(1, 40),
        data=st.data(),
    )
    @settings(max_examples=80, deadline=None)
    def test_partition_reassembles_exactly(self, h, w, data):
        rows = data.draw(st.integers(1, h))
        cols = data.draw(st.integers(1, w))
        seed = data.draw(st.integers(0, 2**16))
        pixels = np.random.default_rng(seed).integers(0, 256, size=(h, w))
        img = gray(pixels)
        grid = images.split_grid(img, rows, cols)
        assert np.array_equal(images.reassemble(grid).pixels, img.pixels)
