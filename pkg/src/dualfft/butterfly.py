"""Radix-2 butterflies A = a + W*b, B = a - W*b over an ArithmeticContext.

Kernels are elementwise: a, b and the twiddle fields may be scalars (one
butterfly) or equal-length arrays (one butterfly per element). Negating an
operand is an exact sign flip and is not counted as arithmetic.
"""
from __future__ import annotations
from typing import Callable, Dict, Protocol, Tuple, Union

import numpy as np

from .precision import ArithmeticContext
from .twiddle import TwiddleColumns, TwiddleEntry
from .types import ComplexSample, Strategy, TwiddlePath, PATH_COS

Twiddle = Union[TwiddleEntry, TwiddleColumns]
Pair = Tuple[ComplexSample, ComplexSample]


class Kernel(Protocol):
    def __call__(self, a: ComplexSample, b: ComplexSample, entry: Twiddle, ctx: ArithmeticContext) -> Pair: ...


def butterfly_standard(a: ComplexSample, b: ComplexSample, entry: Twiddle, ctx: ArithmeticContext) -> Pair:
    """4 multiplications and 6 additions; the four products are shared."""
    wr, wi = entry.omega_r, entry.omega_i
    rr = ctx.mul(wr, b.re)
    ii = ctx.mul(wi, b.im)
    ir = ctx.mul(wi, b.re)
    ri = ctx.mul(wr, b.im)
    x = ctx.sub(rr, ii)
    y = ctx.add(ir, ri)
    return (
        ComplexSample(ctx.add(a.re, x), ctx.add(a.im, y)),
        ComplexSample(ctx.sub(a.re, x), ctx.sub(a.im, y)),
    )


def butterfly_linzer_feig(a: ComplexSample, b: ComplexSample, entry: Twiddle, ctx: ArithmeticContext) -> Pair:
    """Six FMAs with omega_i outside and t = omega_r / omega_i.

    s1 = b.im - t*b.re and s2 = b.re + t*b.im, so that omega_i*s2 is the
    imaginary part of W*b.
    """
    t, wi = entry.ratio, entry.multiplier
    s1 = ctx.fma(-t, b.re, b.im)
    s2 = ctx.fma(t, b.im, b.re)
    return (
        ComplexSample(ctx.fma(-s1, wi, a.re), ctx.fma(s2, wi, a.im)),
        ComplexSample(ctx.fma(s1, wi, a.re), ctx.fma(-s2, wi, a.im)),
    )


def butterfly_cosine(a: ComplexSample, b: ComplexSample, entry: Twiddle, ctx: ArithmeticContext) -> Pair:
    """Six FMAs with omega_r outside and t = omega_i / omega_r."""
    t, wr = entry.ratio, entry.multiplier
    s1 = ctx.fma(-t, b.im, b.re)
    s2 = ctx.fma(t, b.re, b.im)
    return (
        ComplexSample(ctx.fma(s1, wr, a.re), ctx.fma(s2, wr, a.im)),
        ComplexSample(ctx.fma(-s1, wr, a.re), ctx.fma(-s2, wr, a.im)),
    )


def butterfly_dual(a: ComplexSample, b: ComplexSample, entry: Twiddle, ctx: ArithmeticContext) -> Pair:
    """Branch on the path flag; both branches cost six FMAs."""
    if isinstance(entry, TwiddleEntry):
        kernel = butterfly_cosine if entry.path is TwiddlePath.COS else butterfly_linzer_feig
        return kernel(a, b, entry, ctx)

    cos = entry.path == PATH_COS
    sin = ~cos
    out = [np.empty_like(np.asarray(a.re, dtype=np.float64)) for _ in range(4)]
    for mask, kernel in ((cos, butterfly_cosine), (sin, butterfly_linzer_feig)):
        if not mask.any():
            continue
        part_a = ComplexSample(a.re[mask], a.im[mask])
        part_b = ComplexSample(b.re[mask], b.im[mask])
        A, B = kernel(part_a, part_b, entry.select(mask), ctx)
        for dst, src in zip(out, (A.re, A.im, B.re, B.im)):
            dst[mask] = src
    return ComplexSample(out[0], out[1]), ComplexSample(out[2], out[3])


KERNELS: Dict[Strategy, Kernel] = {
    Strategy.STANDARD: butterfly_standard,
    Strategy.LINZER_FEIG: butterfly_linzer_feig,
    Strategy.COSINE: butterfly_cosine,
    Strategy.DUAL_SELECT: butterfly_dual,
}


def kernel_for(strategy: Strategy) -> Callable[..., Pair]:
    return KERNELS[strategy]
