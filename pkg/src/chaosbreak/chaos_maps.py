"""Standard/logistic map iteration and keystream derivation.

All reals are IEEE-754 doubles. Trajectories are reproducible within one
build, not necessarily across libm implementations.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * math.pi

# logistic-map points whose orbit collapses (0 and 0.75 are fixed points,
# 0.5 -> 1 -> 0)
DEGENERATE_LOGISTIC = (0.0, 0.5, 0.75, 1.0)


class DegenerateOrbitWarning(UserWarning):
    """The logistic orbit seeding the blue keystream has collapsed."""


def reduce_mod(value: float, modulus: float) -> float:
    """Sign-safe ``value mod modulus`` in ``[0, modulus)``."""
    r = value - math.floor(value / modulus) * modulus
    # rounding can land exactly on the modulus for tiny negative inputs
    if r >= modulus or r < 0.0:
        r = 0.0
    return r


@dataclass(frozen=True)
class SecretKey:
    x0: float
    y0: float
    K: float
    L: int

    def __post_init__(self):
        if not 0.0 < self.x0 < TWO_PI:
            raise ValueError(f"x0 must lie in (0, 2pi), got {self.x0!r}")
        if not 0.0 < self.y0 < TWO_PI:
            raise ValueError(f"y0 must lie in (0, 2pi), got {self.y0!r}")
        if not self.K > 18:
            raise ValueError(f"K must exceed 18, got {self.K!r}")
        if isinstance(self.L, bool) or int(self.L) != self.L:
            raise ValueError(f"L must be an integer, got {self.L!r}")
        object.__setattr__(self, "L", int(self.L))
        if not 100 < self.L < 1100:
            raise ValueError(f"L must satisfy 100 < L < 1100, got {self.L}")


@dataclass(frozen=True)
class StandardMapState:
    x: float
    y: float


@dataclass(frozen=True)
class LogisticState:
    z: float


@dataclass(frozen=True)
class XorKeys:
    keys: tuple[int, int, int, int]

    def __post_init__(self):
        keys = tuple(int(k) for k in self.keys)
        if len(keys) != 4 or any(not 0 <= k <= 255 for k in keys):
            raise ValueError(f"expected four bytes, got {self.keys!r}")
        object.__setattr__(self, "keys", keys)

    def __getitem__(self, i: int) -> int:
        return self.keys[i]


@dataclass(frozen=True, eq=False)
class KeystreamImage:
    """The three CKS planes, each ``M x N`` uint8."""

    cksr: np.ndarray
    cksg: np.ndarray
    cksb: np.ndarray

    def __post_init__(self):
        shape = np.shape(self.cksr)
        if len(shape) != 2 or shape[0] < 1 or shape[1] < 1:
            raise ValueError(f"keystream planes must be non-empty 2-D, got {shape}")
        for name in ("cksr", "cksg", "cksb"):
            plane = np.asarray(getattr(self, name))
            if plane.shape != shape:
                raise ValueError("keystream planes differ in shape")
            if plane.dtype != np.uint8:
                raise ValueError(f"{name} must be uint8, got {plane.dtype}")
            plane.setflags(write=False)
            object.__setattr__(self, name, plane)

    @property
    def M(self) -> int:
        return self.cksr.shape[0]

    @property
    def N(self) -> int:
        return self.cksr.shape[1]

    def stack(self) -> np.ndarray:
        """Planes as one ``(M, N, 3)`` array."""
        return np.stack([self.cksr, self.cksg, self.cksb], axis=-1)

    def __eq__(self, other):
        if not isinstance(other, KeystreamImage):
            return NotImplemented
        return np.array_equal(self.stack(), other.stack())


def standard_step(state: StandardMapState, K: float) -> StandardMapState:
    t = state.x + K * math.sin(state.y)
    return StandardMapState(reduce_mod(t, TWO_PI), reduce_mod(state.y + t, TWO_PI))


def logistic_step(state: LogisticState) -> LogisticState:
    z = state.z
    return LogisticState(min(max(4.0 * z * (1.0 - z), 0.0), 1.0))


def derive_xor_keys(key: SecretKey) -> XorKeys:
    return XorKeys((
        _to_byte(256.0 * key.x0 / TWO_PI),
        _to_byte(256.0 * key.y0 / TWO_PI),
        _to_byte(reduce_mod(key.K, 256.0)),
        key.L % 256,
    ))


def _to_byte(v: float) -> int:
    return min(math.floor(v), 255)


def standard_orbit(key: SecretKey, count: int) -> tuple[np.ndarray, np.ndarray]:
    """States ``(x_i, y_i)`` for ``i = 1..count`` after the ``L``-step warm-up.

    Returns two float64 arrays of length ``count``. The final warm-up
    state ``(x0', y0')`` is not included; use :func:`logistic_seed` on the
    key to get the value derived from it.
    """
    x, y = _standard_warmup(key)
    xs = np.empty(count)
    ys = np.empty(count)
    K = key.K
    sin, floor = math.sin, math.floor
    for i in range(count):
        t = x + K * sin(y)
        x = t - floor(t / TWO_PI) * TWO_PI
        y = y + t
        y = y - floor(y / TWO_PI) * TWO_PI
        if x >= TWO_PI or x < 0.0:
            x = 0.0
        if y >= TWO_PI or y < 0.0:
            y = 0.0
        xs[i] = x
        ys[i] = y
    return xs, ys


def _standard_warmup(key: SecretKey) -> tuple[float, float]:
    state = StandardMapState(key.x0, key.y0)
    for _ in range(key.L):
        state = standard_step(state, key.K)
    return state.x, state.y


def logistic_seed(key: SecretKey) -> float:
    """``z0 = (x0' + y0') mod 1`` where ``(x0', y0')`` ends the warm-up."""
    x, y = _standard_warmup(key)
    return reduce_mod(x + y, 1.0)


def logistic_orbit(z0: float, warmup: int, count: int) -> np.ndarray:
    """Iterate ``warmup`` times from ``z0``, then collect ``count`` states."""
    z = z0
    for _ in range(warmup):
        z = 4.0 * z * (1.0 - z)
    zs = np.empty(count)
    for i in range(count):
        z = 4.0 * z * (1.0 - z)
        zs[i] = z
    # 4z(1-z) <= 1 exactly; clip only absorbs rounding
    np.clip(zs, 0.0, 1.0, out=zs)
    return zs


def generate_keystream(key: SecretKey, M: int, N: int) -> tuple[XorKeys, KeystreamImage]:
    """Derive the XOR keys and the ``M x N`` CKS image for ``key``.

    Emits :class:`DegenerateOrbitWarning` if the logistic seed sits on (or
    the orbit falls into) a collapsing point, since the blue plane is then
    constant.
    """
    if not isinstance(key, SecretKey):
        raise TypeError(f"expected SecretKey, got {type(key).__name__}")
    if M < 1 or N < 1:
        raise ValueError(f"image size must be positive, got {M}x{N}")
    count = M * N
    x_end, y_end = _standard_warmup(key)
    xs, ys = standard_orbit(key, count)
    z0 = reduce_mod(x_end + y_end, 1.0)
    zs = logistic_orbit(z0, key.L, count)
    if z0 in DEGENERATE_LOGISTIC or zs[-1] in (0.0, 0.75):
        warnings.warn(
            f"logistic seed z0={z0!r} gives a degenerate orbit; "
            "the blue keystream plane is constant",
            DegenerateOrbitWarning,
            stacklevel=2,
        )
    scale = 256.0 / TWO_PI
    planes = [
        np.minimum(np.floor(scale * xs), 255).astype(np.uint8).reshape(M, N),
        np.minimum(np.floor(scale * ys), 255).astype(np.uint8).reshape(M, N),
        np.minimum(np.floor(256.0 * zs), 255).astype(np.uint8).reshape(M, N),
    ]
    return derive_xor_keys(key), KeystreamImage(*planes)
