import math

import numpy as np
import pytest
import torch
from PIL import Image

from utils import imaging
from utils.errors import BadInput, FormatError, NotFoundError, NumericalError
from utils.imaging import ImageBuffer


def _constant(value, size=16):
    return ImageBuffer.from_array(np.full((size, size, 3), value, dtype=np.uint8))


class TestLoading:

    def test_same_size_is_byte_identical(self, tmp_path, random_image):
        image = random_image()
        path = str(tmp_path / 'a.png')
        imaging.save_image(path, image)
        loaded = imaging.load_image(path, (16, 16))
        assert np.array_equal(loaded.data, image.data)

    def test_resize_preserves_constants(self, tmp_path):
        path = str(tmp_path / 'c.png')
        imaging.save_image(path, _constant(77, size=64))
        loaded = imaging.load_image(path, (32, 32))
        assert loaded.size == (32, 32)
        assert (loaded.data == 77).all()

    def test_grayscale_promoted_to_rgb(self, tmp_path):
        path = str(tmp_path / 'g.png')
        Image.fromarray(np.full((8, 8), 200, dtype=np.uint8)).save(path)
        loaded = imaging.load_image(path)
        assert loaded.data.shape == (8, 8, 3)
        assert (loaded.data == 200).all()

    def test_corrupt_file(self, tmp_path):
        path = tmp_path / 'bad.png'
        path.write_bytes(b'not an image at all')
        with pytest.raises(FormatError):
            imaging.load_image(str(path))

    def test_missing_file(self, tmp_path):
        with pytest.raises(NotFoundError):
            imaging.load_image(str(tmp_path / 'missing.png'))

    def test_zero_target(self, tmp_path, random_image):
        path = str(tmp_path / 'a.png')
        imaging.save_image(path, random_image())
        with pytest.raises(BadInput):
            imaging.load_image(path, (0, 16))

    def test_png_bytes_round_trip(self, random_image):
        image = random_image(9, 13)
        assert np.array_equal(imaging.decode_png(imaging.encode_png(image)).data, image.data)


class TestConversion:

    def test_all_byte_values_round_trip(self):
        values = np.arange(256, dtype=np.uint8).reshape(16, 16, 1).repeat(3, axis=2)
        image = ImageBuffer.from_array(values)
        assert np.array_equal(imaging.from_tensor(imaging.to_tensor(image)).data, values)

    def test_layout_and_scale(self):
        image = _constant(255, size=2)
        tensor = imaging.to_tensor(image)
        assert tensor.shape == (3, 2, 2)
        assert torch.all(tensor == 1.0)

    def test_clamp(self):
        tensor = torch.full((3, 2, 2), 1.7)
        tensor[0, 0, 0] = -0.4
        image = imaging.from_tensor(tensor)
        assert image.data[0, 0, 0] == 0
        assert image.data[1, 1, 2] == 255

    def test_non_finite_rejected(self):
        tensor = torch.zeros((3, 2, 2))
        tensor[1, 0, 0] = float('nan')
        with pytest.raises(NumericalError):
            imaging.from_tensor(tensor)


class TestMetrics:

    def test_psnr_identical(self, random_image):
        image = random_image()
        assert imaging.psnr(image, image) == math.inf

    def test_psnr_closed_forms(self, golden):
        vectors = golden('metrics')
        base = _constant(100)
        plus_one = ImageBuffer.from_array(base.data + 1)
        assert imaging.psnr(base, plus_one) == pytest.approx(
            vectors['psnr_uniform_unit_difference']['expected'], abs=1e-3)

        half = base.data.copy()
        half.reshape(-1)[::2] += 2
        assert imaging.psnr(base, ImageBuffer.from_array(half)) == pytest.approx(
            vectors['psnr_half_bytes_differ_by_two']['expected'], abs=1e-3)

    def test_psnr_matches_double_precision_oracle(self, random_image):
        a, b = random_image(), random_image()
        diff = a.data.astype(np.float64) - b.data.astype(np.float64)
        expected = 10.0 * math.log10(255.0 ** 2 / np.mean(diff ** 2))
        assert imaging.psnr(a, b) == pytest.approx(expected, rel=1e-9)
        assert imaging.psnr(b, a) == imaging.psnr(a, b)

    def test_psnr_dimension_mismatch(self, random_image):
        with pytest.raises(BadInput):
            imaging.psnr(random_image(16, 16), random_image(16, 17))

    def test_ssim_self_similarity(self, random_image):
        image = random_image()
        assert imaging.ssim(image, image) == pytest.approx(1.0)

    def test_ssim_equal_constants(self):
        assert imaging.ssim(_constant(40), _constant(40)) == pytest.approx(1.0)

    def test_ssim_black_vs_white(self, golden):
        expected = golden('metrics')['ssim_black_vs_white']['expected']
        assert imaging.ssim(_constant(0), _constant(255)) == pytest.approx(expected, abs=1e-5)

    def test_ssim_symmetric(self, random_image):
        a, b = random_image(), random_image()
        assert imaging.ssim(a, b) == pytest.approx(imaging.ssim(b, a), abs=1e-9)

    def test_ssim_needs_window(self, random_image):
        with pytest.raises(BadInput):
            imaging.ssim(random_image(8, 8), random_image(8, 8))


class TestDataset:

    def test_lexicographic_order(self, tmp_path, random_image):
        for name in ('b.png', 'a.png', 'c.png'):
            imaging.save_image(str(tmp_path / name), random_image())
        (tmp_path / 'notes.txt').write_text('ignored')
        handle = imaging.list_dataset(str(tmp_path), (16, 16))
        assert handle.names == ['a.png', 'b.png', 'c.png']
        assert len(handle) == 3

    def test_undecodable_files_skipped(self, tmp_path, random_image):
        imaging.save_image(str(tmp_path / 'ok.png'), random_image())
        (tmp_path / 'broken.png').write_bytes(b'\x89PNG garbage')
        assert imaging.list_dataset(str(tmp_path), (16, 16)).names == ['ok.png']

    def test_empty_directory(self, tmp_path):
        with pytest.raises(NotFoundError) as err:
            imaging.list_dataset(str(tmp_path), (16, 16))
        assert err.value.error_code == 'IMG_007'

    def test_tensors_in_listing_order(self, tiny_dataset):
        tensors = tiny_dataset.load_tensors(workers=3)
        assert tensors.shape == (len(tiny_dataset), 3, 16, 16)
        for index in range(len(tiny_dataset)):
            assert torch.equal(tensors[index], imaging.to_tensor(tiny_dataset.load(index)))
