"""Single-bit plaintext perturbation and ciphertext bit-difference analysis."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chaos_maps import SecretKey, generate_keystream
from .cipher import RgbImage, _check_same_size, encrypt_with

CHANNEL_NAMES = ("R", "G", "B")


@dataclass(frozen=True)
class BitLocation:
    """One bit of one channel of one pixel; ``bit`` 0 is the least significant."""

    channel: str
    row: int
    col: int
    bit: int

    def __post_init__(self):
        ch = str(self.channel).upper()
        if ch not in CHANNEL_NAMES:
            raise ValueError(f"channel must be one of R, G, B; got {self.channel!r}")
        object.__setattr__(self, "channel", ch)
        if not 0 <= self.bit <= 7:
            raise ValueError(f"bit index must be in 0..7, got {self.bit}")

    @property
    def channel_index(self) -> int:
        return CHANNEL_NAMES.index(self.channel)


@dataclass(frozen=True, eq=False)
class DiffReport:
    changed_maps: np.ndarray  # (3, M, N) bool
    plane_counts: np.ndarray  # (3, 8) int, column b = bit plane b
    hamming: int

    @property
    def total_bits(self) -> int:
        return 24 * self.changed_maps.shape[1] * self.changed_maps.shape[2]

    @property
    def changed_fraction(self) -> float:
        return self.hamming / self.total_bits

    def changed_planes(self) -> set[int]:
        return {int(b) for b in np.flatnonzero(self.plane_counts.sum(axis=0))}

    def changed_channels(self) -> set[str]:
        return {CHANNEL_NAMES[c] for c in np.flatnonzero(self.plane_counts.sum(axis=1))}

    def to_dict(self) -> dict:
        return {
            "hamming_distance": self.hamming,
            "total_bits": self.total_bits,
            "changed_fraction": self.changed_fraction,
            "plane_counts": {
                name: self.plane_counts[c].tolist() for c, name in enumerate(CHANNEL_NAMES)
            },
            "changed_pixels": {
                name: int(self.changed_maps[c].sum()) for c, name in enumerate(CHANNEL_NAMES)
            },
            "changed_planes": sorted(self.changed_planes()),
        }


def flip_bit(img: RgbImage, loc: BitLocation) -> RgbImage:
    if not (0 <= loc.row < img.M and 0 <= loc.col < img.N):
        raise IndexError(f"pixel ({loc.row}, {loc.col}) outside a {img.M}x{img.N} image")
    px = img.pixels.copy()
    px[loc.row, loc.col, loc.channel_index] ^= np.uint8(1 << loc.bit)
    return RgbImage(px)


def diff_images(a: RgbImage, b: RgbImage) -> DiffReport:
    _check_same_size(a.shape, b.shape)
    delta = (a.pixels ^ b.pixels).transpose(2, 0, 1)  # (3, M, N)
    planes = np.unpackbits(delta[..., None], axis=-1, bitorder="little")  # (3, M, N, 8)
    counts = planes.reshape(3, -1, 8).sum(axis=1).astype(np.int64)
    return DiffReport(delta != 0, counts, int(counts.sum()))


def avalanche_experiment(img: RgbImage, key: SecretKey, loc: BitLocation) -> DiffReport:
    xk, cks = generate_keystream(key, img.M, img.N)
    return diff_images(encrypt_with(img, xk, cks), encrypt_with(flip_bit(img, loc), xk, cks))
