"""Confusion/diffusion pipeline over RGB byte images and its inverse."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chaos_maps import KeystreamImage, SecretKey, XorKeys, generate_keystream


@dataclass(frozen=True, eq=False)
class RgbImage:
    """An ``M x N`` image of byte triples, stored as an ``(M, N, 3)`` uint8 array.

    The array is copied on construction and made read-only; every
    operation in this package returns a fresh image.
    """

    pixels: np.ndarray

    def __post_init__(self):
        px = np.array(self.pixels, copy=True)
        if px.ndim != 3 or px.shape[2] != 3 or px.shape[0] < 1 or px.shape[1] < 1:
            raise ValueError(f"expected a non-empty (M, N, 3) array, got shape {px.shape}")
        if px.dtype != np.uint8:
            if not np.issubdtype(px.dtype, np.integer) or px.min() < 0 or px.max() > 255:
                raise ValueError("pixel values must be bytes in 0..255")
            px = px.astype(np.uint8)
        px.setflags(write=False)
        object.__setattr__(self, "pixels", px)

    @classmethod
    def from_planes(cls, r, g, b) -> "RgbImage":
        return cls(np.stack([np.asarray(r), np.asarray(g), np.asarray(b)], axis=-1))

    @classmethod
    def zeros(cls, M: int, N: int) -> "RgbImage":
        return cls(np.zeros((M, N, 3), dtype=np.uint8))

    @classmethod
    def random(cls, M: int, N: int, rng: np.random.Generator) -> "RgbImage":
        return cls(rng.integers(0, 256, size=(M, N, 3), dtype=np.uint8))

    @property
    def M(self) -> int:
        return self.pixels.shape[0]

    @property
    def N(self) -> int:
        return self.pixels.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.pixels.shape[0], self.pixels.shape[1]

    @property
    def r(self) -> np.ndarray:
        return self.pixels[:, :, 0]

    @property
    def g(self) -> np.ndarray:
        return self.pixels[:, :, 1]

    @property
    def b(self) -> np.ndarray:
        return self.pixels[:, :, 2]

    def __xor__(self, other: "RgbImage") -> "RgbImage":
        if not isinstance(other, RgbImage):
            return NotImplemented
        _check_same_size(self.shape, other.shape)
        return RgbImage(self.pixels ^ other.pixels)

    def __eq__(self, other):
        if not isinstance(other, RgbImage):
            return NotImplemented
        return np.array_equal(self.pixels, other.pixels)

    def __repr__(self):
        return f"RgbImage({self.M}x{self.N})"


def _check_same_size(a: tuple[int, int], b: tuple[int, int]) -> None:
    if a != b:
        raise ValueError(f"image size mismatch: {a[0]}x{a[1]} vs {b[0]}x{b[1]}")


# Scan helpers. Row-major: k -> (k // N, k % N). Column-major: k -> (k % M, k // M).

def _row_scan(img: RgbImage) -> np.ndarray:
    return img.pixels.reshape(-1, 3)


def _col_scan(img: RgbImage) -> np.ndarray:
    # element k of the result is pixel (k % M, k // M)
    return img.pixels.transpose(1, 0, 2).reshape(-1, 3)


def _from_col_scan(seq: np.ndarray, M: int, N: int) -> RgbImage:
    return RgbImage(seq.reshape(N, M, 3).transpose(1, 0, 2))


def _mix_other_channels(v: np.ndarray) -> np.ndarray:
    """Per pixel ``(g^b, b^r, r^g)`` -- the channel mixing of Diffusion II."""
    r, g, b = v[:, 0], v[:, 1], v[:, 2]
    return np.stack([g ^ b, b ^ r, r ^ g], axis=-1)


def xor_key_image(xk: XorKeys, M: int, N: int) -> RgbImage:
    """Pseudo-image whose pixel ``k`` is ``(Xkey(3k%4), Xkey((3k+1)%4), Xkey((3k+2)%4))``."""
    k = np.arange(M * N)[:, None]
    idx = (3 * k + np.arange(3)) % 4
    table = np.array(xk.keys, dtype=np.uint8)
    return RgbImage(table[idx].reshape(M, N, 3))


def confusion1(img: RgbImage, xk: XorKeys) -> RgbImage:
    return img ^ xor_key_image(xk, img.M, img.N)


def confusion2(img: RgbImage, cks: KeystreamImage) -> RgbImage:
    _check_same_size(img.shape, (cks.M, cks.N))
    return RgbImage(img.pixels ^ cks.stack())


def diffusion1(img: RgbImage) -> RgbImage:
    """Row-major running XOR, channel by channel."""
    out = np.bitwise_xor.accumulate(_row_scan(img), axis=0)
    return RgbImage(out.reshape(img.pixels.shape))


def inverse_diffusion1(img: RgbImage) -> RgbImage:
    seq = _row_scan(img)
    out = seq.copy()
    out[1:] ^= seq[:-1]
    return RgbImage(out.reshape(img.pixels.shape))


def diffusion2(img: RgbImage) -> RgbImage:
    """Backward column-major scan mixing each pixel with the other two
    channels of its already-diffused successor.

    With ``A(v) = (g^b, b^r, r^g)`` the recurrence is
    ``out[k] = in[k] ^ A(out[k+1])``. ``A`` is linear and idempotent over
    GF(2), so ``out[k] = in[k] ^ A(in[k+1] ^ ... ^ in[MN-1])``, which is
    computed here from a suffix XOR.
    """
    seq = _col_scan(img)
    suffix = np.bitwise_xor.accumulate(seq[::-1], axis=0)[::-1]
    out = seq.copy()
    out[:-1] ^= _mix_other_channels(suffix[1:])
    return _from_col_scan(out, img.M, img.N)


def inverse_diffusion2(img: RgbImage) -> RgbImage:
    seq = _col_scan(img)
    out = seq.copy()
    out[:-1] ^= _mix_other_channels(seq[1:])
    return _from_col_scan(out, img.M, img.N)


def encrypt_with(img: RgbImage, xk: XorKeys, cks: KeystreamImage) -> RgbImage:
    """Encrypt using precomputed key material."""
    return confusion2(diffusion2(diffusion1(confusion1(img, xk))), cks)


def decrypt_with(img: RgbImage, xk: XorKeys, cks: KeystreamImage) -> RgbImage:
    return confusion1(inverse_diffusion1(inverse_diffusion2(confusion2(img, cks))), xk)


def encrypt(img: RgbImage, key: SecretKey) -> RgbImage:
    xk, cks = generate_keystream(key, img.M, img.N)
    return encrypt_with(img, xk, cks)


def decrypt(img: RgbImage, key: SecretKey) -> RgbImage:
    xk, cks = generate_keystream(key, img.M, img.N)
    return decrypt_with(img, xk, cks)
