from __future__ import annotations
import logging
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .butterfly import kernel_for
from .precision import ArithmeticContext, Precision, parse_precision, round_to
from .twiddle import TwiddleTable, build_table, check_size
from .types import ComplexSample, LengthMismatchError, SampleBuffer, Strategy, parse_strategy

logger = logging.getLogger(__name__)

MAX_N = 2 ** 24
# rows of the oracle matrix evaluated per block
_ORACLE_BLOCK = 256


@dataclass(frozen=True, eq=False)
class FftPlan:
    """Immutable recipe: size, strategy, precision and the rounded table."""
    n: int
    m: int
    strategy: Strategy
    precision: Precision
    table: TwiddleTable

    def new_context(self) -> ArithmeticContext:
        return ArithmeticContext(self.precision)

    @property
    def butterflies_per_pass(self) -> int:
        return self.n // 2


def make_plan(
    n: int,
    strategy: Union[str, Strategy],
    precision: Union[str, Precision],
    clamp_eps: Optional[float] = None,
) -> FftPlan:
    """Build the strategy's FP64 table and round it once into ``precision``.

    Without an explicit clamp_eps the Linzer-Feig clamp is the working
    precision's unit roundoff, which keeps 1/clamp_eps finite in that format.
    """
    n = check_size(n, max_n=MAX_N)
    strategy = parse_strategy(strategy)
    precision = parse_precision(precision)
    if strategy is Strategy.LINZER_FEIG and clamp_eps is None:
        clamp_eps = precision.machine_epsilon
    table = build_table(n, strategy, clamp_eps=clamp_eps).rounded(precision)
    plan = FftPlan(n=n, m=n.bit_length() - 1, strategy=strategy, precision=precision, table=table)
    logger.debug("plan n=%d strategy=%s precision=%s", n, strategy.value, precision.value)
    return plan


def _check_length(plan: FftPlan, data: SampleBuffer) -> None:
    if len(data) != plan.n:
        raise LengthMismatchError(f"buffer length {len(data)} does not match plan n={plan.n}")


def forward(plan: FftPlan, data: SampleBuffer, ctx: Optional[ArithmeticContext] = None) -> SampleBuffer:
    """Out-of-place Stockham radix-2 FFT, natural order in and out.

    Pass t (half-block L = 2**t) pairs x[j] with x[j + n/2], applies table
    entry (j mod L) * n / 2**(t+1) to the second operand and writes the
    results L apart in the other buffer.
    """
    _check_length(plan, data)
    ctx = ctx or plan.new_context()
    kernel = kernel_for(plan.strategy)
    n, half = plan.n, plan.n // 2

    # copies: the ping-pong buffers must never alias the caller's arrays
    src_re = np.array(ctx.round(data.re), dtype=np.float64)
    src_im = np.array(ctx.round(data.im), dtype=np.float64)
    dst_re, dst_im = np.empty(n), np.empty(n)
    j = np.arange(half)
    for t in range(plan.m):
        L = 1 << t
        k = j & (L - 1)
        out = ((j >> t) << (t + 1)) + k
        twiddle = plan.table.gather(k * (n >> (t + 1)))
        a = ComplexSample(src_re[:half], src_im[:half])
        b = ComplexSample(src_re[half:], src_im[half:])
        A, B = kernel(a, b, twiddle, ctx)
        dst_re[out], dst_im[out] = A.re, A.im
        dst_re[out + L], dst_im[out + L] = B.re, B.im
        src_re, dst_re = dst_re, src_re
        src_im, dst_im = dst_im, src_im
    return SampleBuffer(re=src_re.copy(), im=src_im.copy())


def inverse(plan: FftPlan, spectrum: SampleBuffer, ctx: Optional[ArithmeticContext] = None) -> SampleBuffer:
    """conj -> forward -> conj, then one rounded multiply by 1/n per component."""
    _check_length(plan, spectrum)
    ctx = ctx or plan.new_context()
    y = forward(plan, spectrum.conj(), ctx).conj()
    scale = ctx.round(1.0 / plan.n)
    return SampleBuffer(re=ctx.mul(y.re, scale), im=ctx.mul(y.im, scale))


def dft_oracle(data: SampleBuffer) -> SampleBuffer:
    """Direct O(n^2) DFT in FP64, every kernel element from its own cos/sin."""
    n = len(data)
    x = data.to_complex()
    k = np.arange(n)
    out = np.empty(n, dtype=np.complex128)
    for start in range(0, n, _ORACLE_BLOCK):
        rows = k[start:start + _ORACLE_BLOCK]
        # reduce j*k mod n first so the angle stays in [0, 2*pi)
        angle = (-2.0 * np.pi / n) * (np.outer(rows, k) % n)
        out[start:start + len(rows)] = (np.cos(angle) + 1j * np.sin(angle)) @ x
    return SampleBuffer.from_complex(out)


def ingest(plan: FftPlan, data: SampleBuffer) -> SampleBuffer:
    """The input as forward() sees it after rounding into the plan's precision."""
    return SampleBuffer(re=round_to(data.re, plan.precision), im=round_to(data.im, plan.precision))
