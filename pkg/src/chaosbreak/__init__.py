"""A chaotic-map image cipher, its one-chosen-plaintext break, and tools
for measuring its keystream randomness and plaintext sensitivity."""

from .attack import EquivalentKey, build_equivalent_key, diffusion_only, recover
from .chaos_maps import (
    DegenerateOrbitWarning,
    KeystreamImage,
    LogisticState,
    SecretKey,
    StandardMapState,
    XorKeys,
    derive_xor_keys,
    generate_keystream,
    logistic_step,
    standard_step,
)
from .cipher import (
    RgbImage,
    confusion1,
    confusion2,
    decrypt,
    diffusion1,
    diffusion2,
    encrypt,
    inverse_diffusion1,
    inverse_diffusion2,
)

__version__ = "0.1.0"
