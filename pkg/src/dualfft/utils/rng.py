from __future__ import annotations

import numpy as np

GOLDEN_GAMMA = np.uint64(0x9E3779B97F4A7C15)
MIX_1 = np.uint64(0xBF58476D1CE4E5B9)
MIX_2 = np.uint64(0x94D049BB133111EB)
_MASK64 = (1 << 64) - 1


class SplitMix64:
    """SplitMix64: state += gamma, then a 30/27/31 xor-shift-multiply mix.

    Counter based, so a block of draws is generated in one vectorized step.
    """

    def __init__(self, seed: int) -> None:
        self.state = int(seed) & _MASK64

    def next_u64(self, count: int) -> np.ndarray:
        steps = np.arange(1, count + 1, dtype=np.uint64)
        z = np.uint64(self.state) + steps * GOLDEN_GAMMA
        self.state = (self.state + count * int(GOLDEN_GAMMA)) & _MASK64
        z = (z ^ (z >> np.uint64(30))) * MIX_1
        z = (z ^ (z >> np.uint64(27))) * MIX_2
        return z ^ (z >> np.uint64(31))

    def uniform(self, count: int, low: float = -1.0, high: float = 1.0) -> np.ndarray:
        """Doubles in [low, high) built from the top 53 bits."""
        unit = (self.next_u64(count) >> np.uint64(11)).astype(np.float64) * 2.0 ** -53
        return low + (high - low) * unit
