"""One-chosen-plaintext break of the cipher.

Every stage of the cipher is XOR-linear, so the ciphertext of the all-zero
image is all an attacker needs: ``encrypt(I) ^ encrypt(0)`` equals the
diffusion-only image of ``I``, and the diffusions are keyless and
invertible. Nothing here touches :class:`~chaosbreak.chaos_maps.SecretKey`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .cipher import (
    RgbImage,
    _check_same_size,
    diffusion1,
    diffusion2,
    inverse_diffusion1,
    inverse_diffusion2,
)

EncryptionOracle = Callable[[RgbImage], RgbImage]


@dataclass(frozen=True)
class EquivalentKey:
    """Ciphertext of the all-zero plaintext under the victim key."""

    image: RgbImage

    @property
    def shape(self) -> tuple[int, int]:
        return self.image.shape


def diffusion_only(img: RgbImage) -> RgbImage:
    return diffusion2(diffusion1(img))


def build_equivalent_key(oracle: EncryptionOracle, M: int, N: int) -> EquivalentKey:
    """Query ``oracle`` once with the zero image of size ``M x N``."""
    cipher = oracle(RgbImage.zeros(M, N))
    if not isinstance(cipher, RgbImage) or cipher.shape != (M, N):
        raise ValueError("oracle returned a ciphertext of the wrong size")
    return EquivalentKey(cipher)


def recover(cipher: RgbImage, equiv: EquivalentKey) -> RgbImage:
    _check_same_size(cipher.shape, equiv.shape)
    return inverse_diffusion1(inverse_diffusion2(cipher ^ equiv.image))
