import numpy as np
import pytest

from chaosbreak import RgbImage, encrypt
from chaosbreak.avalanche import BitLocation, avalanche_experiment, diff_images, flip_bit
from chaosbreak.randomness import random_key


class TestFlipBit:
    def test_involution_and_distance(self, rng):
        img = RgbImage.random(5, 4, rng)
        loc = BitLocation("G", 3, 2, 6)
        flipped = flip_bit(img, loc)
        assert flip_bit(flipped, loc) == img
        assert diff_images(img, flipped).hamming == 1

    def test_msb_of_zero(self):
        out = flip_bit(RgbImage.zeros(1, 1), BitLocation("R", 0, 0, 7))
        assert out.pixels[0, 0, 0] == 0x80

    @pytest.mark.parametrize("loc", [BitLocation("R", 2, 0, 0), BitLocation("B", 0, 3, 0),
                                     BitLocation("R", -1, 0, 0)])
    def test_out_of_bounds(self, loc):
        with pytest.raises(IndexError):
            flip_bit(RgbImage.zeros(2, 3), loc)

    @pytest.mark.parametrize("fields", [("X", 0, 0, 0), ("R", 0, 0, 8), ("G", 0, 0, -1)])
    def test_invalid_location(self, fields):
        with pytest.raises(ValueError):
            BitLocation(*fields)


class TestDiffImages:
    def test_identical(self, rng):
        img = RgbImage.random(6, 6, rng)
        d = diff_images(img, img)
        assert d.hamming == 0 and not d.changed_maps.any() and not d.plane_counts.any()

    def test_single_bit(self):
        a = RgbImage.zeros(2, 2)
        b = flip_bit(a, BitLocation("B", 1, 0, 3))
        d = diff_images(a, b)
        assert d.hamming == 1
        assert d.plane_counts[2, 3] == 1 and d.plane_counts.sum() == 1
        assert d.changed_maps[2, 1, 0] and d.changed_maps.sum() == 1

    def test_popcount_oracle(self, rng):
        a, b = RgbImage.random(7, 9, rng), RgbImage.random(7, 9, rng)
        d = diff_images(a, b)
        expected = sum(bin(int(x) ^ int(y)).count("1")
                       for x, y in zip(a.pixels.reshape(-1), b.pixels.reshape(-1)))
        assert d.hamming == expected == d.plane_counts.sum()
        per_plane = [[sum((int(x) ^ int(y)) >> bit & 1 for x, y in zip(a.pixels[..., c].ravel(),
                                                                       b.pixels[..., c].ravel()))
                      for bit in range(8)] for c in range(3)]
        assert d.plane_counts.tolist() == per_plane
        assert np.array_equal(d.changed_maps, (a.pixels != b.pixels).transpose(2, 0, 1))

    def test_size_mismatch(self):
        with pytest.raises(ValueError):
            diff_images(RgbImage.zeros(2, 2), RgbImage.zeros(2, 3))


class TestAvalancheExperiment:
    def test_confined_to_flipped_plane(self, rng):
        for _ in range(20):
            key = random_key(rng)
            img = RgbImage.random(16, 12, rng)
            loc = BitLocation("RGB"[rng.integers(3)], int(rng.integers(16)), int(rng.integers(12)),
                              int(rng.integers(8)))
            d = avalanche_experiment(img, key, loc)
            assert d.changed_planes() == {loc.bit}

    def test_matches_direct_encryption(self, rng, ref_key):
        img = RgbImage.random(8, 8, rng)
        loc = BitLocation("R", 4, 4, 5)
        d = avalanche_experiment(img, ref_key, loc)
        ref = diff_images(encrypt(img, ref_key), encrypt(flip_bit(img, loc), ref_key))
        assert d.hamming == ref.hamming and np.array_equal(d.plane_counts, ref.plane_counts)

    # Changed bits per channel for a red flip in a 2x2 image, traced by hand
    # through the row-major prefix XOR and the backward column-major scan.
    # Confusion stages cancel in the difference.
    @pytest.mark.parametrize("row, col, expected", [
        (0, 0, (4, 2, 2)),
        (0, 1, (3, 2, 2)),
        (1, 0, (2, 2, 2)),
        (1, 1, (1, 3, 3)),
    ])
    def test_two_by_two_footprint(self, rng, ref_key, row, col, expected):
        img = RgbImage.random(2, 2, rng)
        d = avalanche_experiment(img, ref_key, BitLocation("R", row, col, 2))
        assert tuple(d.plane_counts[:, 2]) == expected

    def test_minimal_footprint_position(self, rng, ref_key):
        img = RgbImage.random(2, 2, rng)
        totals = {(i, j): avalanche_experiment(img, ref_key, BitLocation("R", i, j, 0)).hamming
                  for i in range(2) for j in range(2)}
        assert min(totals, key=totals.get) == (1, 0)

    def test_fraction_far_below_half(self, rng, ref_key):
        img = RgbImage.random(32, 32, rng)
        d = avalanche_experiment(img, ref_key, BitLocation("R", 16, 16, 5))
        assert d.changed_fraction < 0.125
        assert d.changed_channels() == {"R", "G", "B"}

    def test_report_dict(self, rng, ref_key):
        img = RgbImage.random(4, 4, rng)
        d = avalanche_experiment(img, ref_key, BitLocation("G", 1, 1, 1)).to_dict()
        assert d["hamming_distance"] == sum(sum(v) for v in d["plane_counts"].values())
        assert d["changed_planes"] == [1]
