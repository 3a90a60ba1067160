"""SplitMix64 generator used for every random decision of the online algorithm.

The generator is fixed (rather than ``random`` or numpy) so traces stay
comparable bit-for-bit across platforms and implementations.
"""

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
_INV_2_53 = 1.0 / (1 << 53)


def mix64(z: int) -> int:
    """The SplitMix64 output finalizer applied to ``z``."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def splitmix64(seed: int) -> int:
    """First output word of a SplitMix64 stream started at ``seed``."""
    return mix64(seed + GOLDEN_GAMMA)


class SplitMix64:
    """Minimal SplitMix64 stream.

    >>> rng = SplitMix64(0)
    >>> hex(rng.next_u64())
    '0xe220a8397b1dcdaf'
    """

    __slots__ = ("state",)

    def __init__(self, seed: int = 0):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        return mix64(self.state)

    def uniform(self) -> float:
        """Uniform double in [0, 1) from the top 53 bits of the next word."""
        return (self.next_u64() >> 11) * _INV_2_53

    def __repr__(self):
        return f"SplitMix64(state={self.state:#018x})"
