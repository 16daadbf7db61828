import numpy as np
import pytest

import oracles
from chaosbreak import RgbImage, SecretKey, encrypt, generate_keystream
from chaosbreak.attack import EquivalentKey, build_equivalent_key, diffusion_only, recover
from chaosbreak.cipher import xor_key_image
from chaosbreak.randomness import random_key


class CountingOracle:
    def __init__(self, key):
        self.key = key
        self.calls = 0

    def __call__(self, img):
        self.calls += 1
        return encrypt(img, self.key)


def test_diffusion_only_zero():
    assert diffusion_only(RgbImage.zeros(5, 5)) == RgbImage.zeros(5, 5)


def test_diffusion_only_single_pixel_support():
    img = np.zeros((2, 3, 3), dtype=np.uint8)
    img[0, 0] = (1, 0, 0)
    img = RgbImage(img)
    expected = oracles.diffusion2(oracles.diffusion1(oracles.to_lists(img)))
    out = diffusion_only(img)
    assert out == RgbImage(np.array(expected, dtype=np.uint8))
    # the red flip reaches every pixel through diffusion I
    assert (out.r == 1).all()


@pytest.mark.parametrize("shape", [(2, 2), (3, 5), (16, 16)])
def test_ciphertext_difference_is_keyless(rng, shape):
    for _ in range(5):
        key = random_key(rng)
        a, b = RgbImage.random(*shape, rng), RgbImage.random(*shape, rng)
        assert encrypt(a, key) ^ encrypt(b, key) == diffusion_only(a ^ b)


def test_decomposition_white_box(rng, ref_key):
    img = RgbImage.random(9, 7, rng)
    xk, cks = generate_keystream(ref_key, 9, 7)
    cks_img = RgbImage(cks.stack())
    expected = diffusion_only(img) ^ diffusion_only(xor_key_image(xk, 9, 7)) ^ cks_img
    assert encrypt(img, ref_key) == expected


def test_equivalent_key_is_zero_ciphertext(ref_key):
    oracle = CountingOracle(ref_key)
    equiv = build_equivalent_key(oracle, 12, 10)
    assert oracle.calls == 1
    assert equiv.image == encrypt(RgbImage.zeros(12, 10), ref_key)


def test_equivalent_key_structure(ref_key):
    # zero plaintext: ciphertext = D(Xkey pseudo-image) ^ CKS
    xk, cks = generate_keystream(ref_key, 32, 32)
    equiv = build_equivalent_key(lambda im: encrypt(im, ref_key), 32, 32)
    assert equiv.image ^ RgbImage(cks.stack()) == diffusion_only(xor_key_image(xk, 32, 32))
    assert equiv.image != RgbImage.zeros(32, 32)


@pytest.mark.parametrize("shape", [(1, 1), (2, 2), (3, 5), (16, 16), (64, 48)])
def test_recover_plaintext(rng, shape):
    for _ in range(4):
        key = random_key(rng)
        oracle = CountingOracle(key)
        equiv = build_equivalent_key(oracle, *shape)
        img = RgbImage.random(*shape, rng)
        assert recover(encrypt(img, key), equiv) == img
        assert oracle.calls == 1


def test_recover_equiv_with_itself(ref_key):
    equiv = build_equivalent_key(lambda im: encrypt(im, ref_key), 6, 6)
    assert recover(equiv.image, equiv) == RgbImage.zeros(6, 6)


def test_recover_size_mismatch(ref_key):
    equiv = EquivalentKey(encrypt(RgbImage.zeros(4, 4), ref_key))
    with pytest.raises(ValueError):
        recover(RgbImage.zeros(4, 5), equiv)


def test_oracle_wrong_size_rejected():
    with pytest.raises(ValueError):
        build_equivalent_key(lambda im: RgbImage.zeros(1, 1), 3, 3)


def test_oracle_failure_propagates():
    def broken(img):
        raise RuntimeError("service down")

    with pytest.raises(RuntimeError):
        build_equivalent_key(broken, 2, 2)


def test_recover_reads_no_key_material(rng, ref_key, monkeypatch):
    img = RgbImage.random(8, 8, rng)
    cipher = encrypt(img, ref_key)
    equiv = build_equivalent_key(lambda im: encrypt(im, ref_key), 8, 8)
    import chaosbreak.chaos_maps as cm

    def forbidden(*args, **kwargs):
        raise AssertionError("recover touched the key schedule")

    monkeypatch.setattr(cm, "generate_keystream", forbidden)
    monkeypatch.setattr(SecretKey, "__init__", forbidden)
    assert recover(cipher, equiv) == img
