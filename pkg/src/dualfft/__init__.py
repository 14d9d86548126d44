"""Radix-2 Stockham FFT with dual-select FMA twiddle factorization."""
from .fft import FftPlan, dft_oracle, forward, inverse, make_plan
from .precision import ArithmeticContext, Precision, round_to
from .twiddle import build_table, table_stats
from .types import SampleBuffer, Strategy

__all__ = [
    "ArithmeticContext",
    "FftPlan",
    "Precision",
    "SampleBuffer",
    "Strategy",
    "build_table",
    "dft_oracle",
    "forward",
    "inverse",
    "make_plan",
    "round_to",
    "table_stats",
]
