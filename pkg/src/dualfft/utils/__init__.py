from .rng import SplitMix64

__all__ = ["SplitMix64"]
