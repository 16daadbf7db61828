from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..chaos_maps import SecretKey, generate_keystream

CHANNELS = {"R": 0, "G": 1, "B": 2}


@dataclass(frozen=True, eq=False)
class BitSequence:
    """Packed bit string (MSB-first within each byte) with an explicit length.

    Pad bits after position ``n`` in the last byte are ignored.
    """

    packed: np.ndarray
    n: int
    _bits: np.ndarray | None = field(default=None, init=False, repr=False)

    def __post_init__(self):
        packed = np.frombuffer(bytes(np.asarray(self.packed, dtype=np.uint8)), dtype=np.uint8)
        n = int(self.n)
        if n < 1:
            raise ValueError("a bit sequence needs at least one bit")
        if n > 8 * packed.size:
            raise ValueError(f"bit length {n} exceeds the {8 * packed.size} bits supplied")
        object.__setattr__(self, "packed", packed)
        object.__setattr__(self, "n", n)

    @classmethod
    def from_bytes(cls, data: bytes, n: int | None = None) -> "BitSequence":
        return cls(np.frombuffer(data, dtype=np.uint8), 8 * len(data) if n is None else n)

    @classmethod
    def from_bits(cls, bits) -> "BitSequence":
        """Build from a ``'0'/'1'`` string (whitespace ignored) or a 0/1 array."""
        if isinstance(bits, str):
            bits = "".join(bits.split())
            if set(bits) - {"0", "1"}:
                raise ValueError("bit strings may contain only 0 and 1")
            arr = np.frombuffer(bits.encode(), dtype=np.uint8) - ord("0")
        else:
            arr = np.asarray(bits, dtype=np.uint8)
            if arr.size and arr.max() > 1:
                raise ValueError("bit arrays may contain only 0 and 1")
        return cls(np.packbits(arr), arr.size)

    @property
    def bits(self) -> np.ndarray:
        """Unpacked 0/1 uint8 array of length ``n``."""
        if self._bits is None:
            b = np.unpackbits(self.packed)[: self.n]
            b.setflags(write=False)
            object.__setattr__(self, "_bits", b)
        return self._bits

    def __len__(self):
        return self.n

    def __eq__(self, other):
        if not isinstance(other, BitSequence):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.bits, other.bits)


def extract_prns(key: SecretKey, M: int, N: int, channel: str = "B") -> BitSequence:
    """Keystream plane of ``key`` read row-major, each byte MSB first."""
    try:
        c = CHANNELS[channel.upper()]
    except KeyError:
        raise ValueError(f"channel must be one of R, G, B; got {channel!r}") from None
    _, cks = generate_keystream(key, M, N)
    plane = (cks.cksr, cks.cksg, cks.cksb)[c]
    return BitSequence(plane.reshape(-1), 8 * M * N)
