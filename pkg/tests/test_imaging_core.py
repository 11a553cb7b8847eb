import numpy as np
import pytest

from ocsynth.errors import IoFailure
from ocsynth.imaging import (
    Image,
    Mask,
    load_depth_mm,
    load_image,
    load_mask,
    save_depth_mm,
    save_image,
    save_mask,
)


def test_image_rejects_bad_shapes():
    with pytest.raises(ValueError):
        Image(np.zeros((4, 4), dtype=np.uint8))
    with pytest.raises(ValueError):
        Image(np.zeros((4, 4, 2), dtype=np.uint8))
    with pytest.raises(ValueError):
        Image(np.zeros((4, 4, 3), dtype=np.float32))
    with pytest.raises(ValueError):
        Image(np.zeros((0, 4, 3), dtype=np.uint8))


def test_mask_rejects_nonbinary():
    with pytest.raises(ValueError):
        Mask(np.full((4, 4), 2, dtype=np.uint8))
    with pytest.raises(ValueError):
        Mask(np.zeros((4, 4, 1), dtype=np.uint8))


def test_png_rgb_roundtrip(tmp_path, rng):
    img = Image(rng.integers(0, 256, size=(17, 23, 3), dtype=np.uint8))
    p = tmp_path / "a.png"
    save_image(img, p)
    back = load_image(p)
    assert np.array_equal(back.pixels, img.pixels)


def test_png_rgba_roundtrip(tmp_path, rng):
    img = Image(rng.integers(0, 256, size=(9, 11, 4), dtype=np.uint8))
    p = tmp_path / "a.png"
    save_image(img, p)
    assert np.array_equal(load_image(p).pixels, img.pixels)


def test_jpeg_reads_as_rgb(tmp_path, rng):
    from PIL import Image as PilImage

    arr = rng.integers(0, 256, size=(16, 16, 3), dtype=np.uint8)
    PilImage.fromarray(arr).save(tmp_path / "a.jpg", quality=95)
    img = load_image(tmp_path / "a.jpg")
    assert img.channels == 3
    assert (img.height, img.width) == (16, 16)


def test_mask_roundtrip(tmp_path):
    m = np.zeros((12, 12), dtype=np.uint8)
    m[3:7, 2:9] = 1
    p = tmp_path / "m.png"
    save_mask(Mask(m), p)
    assert np.array_equal(load_mask(p).data, m)


def test_depth_roundtrip_16bit(tmp_path, rng):
    d = rng.integers(0, 65536, size=(8, 8), dtype=np.uint16)
    p = tmp_path / "d.png"
    save_depth_mm(d, p)
    back = load_depth_mm(p)
    assert back.dtype == np.uint16
    assert np.array_equal(back, d)


def test_load_missing_file_raises_iofailure(tmp_path):
    with pytest.raises(IoFailure):
        load_image(tmp_path / "nope.png")
