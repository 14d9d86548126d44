"""
Tests for the Stockham driver, inverse transform and DFT oracle
"""
import numpy as np
import pytest

from dualfft.analysis import relative_l2_error
from dualfft.fft import MAX_N, dft_oracle, forward, ingest, inverse, make_plan
from dualfft.precision import Precision
from dualfft.types import InvalidSizeError, LengthMismatchError, SampleBuffer, Strategy, UnknownStrategyError
from dualfft.utils.rng import SplitMix64

FP64 = Precision.FP64
SIZES = [2 ** p for p in range(1, 13)]


def seeded(n, seed):
    draws = SplitMix64(seed).uniform(2 * n)
    return SampleBuffer(re=draws[:n], im=draws[n:])


def close(x: SampleBuffer, values, tol=1e-14):
    return np.max(np.abs(x.to_complex() - np.asarray(values, dtype=complex))) <= tol


def test_make_plan_examples():
    plan = make_plan(1024, Strategy.DUAL_SELECT, Precision.FP16)
    assert (plan.n, plan.m, len(plan.table)) == (1024, 10, 512)
    assert plan.table.n == plan.n and plan.table.strategy is plan.strategy
    assert np.all(np.abs(plan.table.ratio) <= 1.0)

    for strategy in Strategy:
        p2 = make_plan(2, strategy, FP64)
        assert len(p2.table) == 1
        assert (p2.table.omega_r[0], p2.table.omega_i[0]) == (1.0, 0.0)

    with pytest.raises(InvalidSizeError):
        make_plan(1023, "dual", "fp64")
    with pytest.raises(InvalidSizeError):
        make_plan(2 * MAX_N, "dual", "fp64")
    with pytest.raises(UnknownStrategyError):
        make_plan(8, "radix4", "fp64")


def test_plan_clamp_follows_precision():
    assert make_plan(16, "lf", "fp16").table.multiplier[0] == -(2.0 ** -11)
    assert make_plan(16, "lf", "fp64").table.clamp_eps == 2.0 ** -53
    assert make_plan(16, "lf", "fp64", clamp_eps=1e-7).table.multiplier[0] == -1e-7
    # the rounded clamped ratio stays finite in FP16
    assert np.isfinite(make_plan(16, "lf", "fp16").table.ratio).all()


@pytest.mark.parametrize("strategy", list(Strategy))
def test_impulses(strategy):
    plan = make_plan(4, strategy, FP64)
    assert close(forward(plan, SampleBuffer.from_complex([1, 1, 1, 1])), [4, 0, 0, 0])
    assert close(forward(plan, SampleBuffer.from_complex([1, 0, 0, 0])), [1, 1, 1, 1])
    assert close(inverse(plan, forward(plan, SampleBuffer.from_complex([1, 0, 0, 0]))), [1, 0, 0, 0], 1e-15)
    assert close(inverse(plan, SampleBuffer.from_complex([4, 0, 0, 0])), [1, 1, 1, 1], 1e-15)


def test_dual_matches_oracle_n8():
    x = seeded(8, 1)
    y = forward(make_plan(8, "dual", FP64), x)
    assert relative_l2_error(y, dft_oracle(x)) < 1e-12


def test_oracle_examples():
    assert close(dft_oracle(SampleBuffer.from_complex([1, 0, 0, 0])), [1, 1, 1, 1])
    assert close(dft_oracle(SampleBuffer.from_complex([1, 1, 1, 1])), [4, 0, 0, 0])
    # any length, not only powers of two
    assert close(dft_oracle(SampleBuffer.from_complex([2.0])), [2.0])
    assert close(dft_oracle(SampleBuffer.from_complex([1, 1, 1])), [3, 0, 0])


def test_parseval():
    x = seeded(64, 9)
    X = dft_oracle(x)
    lhs = np.sum(X.re ** 2 + X.im ** 2)
    rhs = 64 * np.sum(x.re ** 2 + x.im ** 2)
    assert abs(lhs - rhs) / rhs < 1e-12


@pytest.mark.parametrize("strategy", list(Strategy))
@pytest.mark.parametrize("n", SIZES)
def test_oracle_equivalence(strategy, n):
    x = seeded(n, 100 + n)
    assert relative_l2_error(forward(make_plan(n, strategy, FP64), x), dft_oracle(x)) < 1e-11


@pytest.mark.parametrize("strategy", list(Strategy))
def test_op_counts(strategy):
    n = 1024
    plan = make_plan(n, strategy, Precision.FP32)
    ctx = plan.new_context()
    forward(plan, seeded(n, 3), ctx)
    c = ctx.counters
    butterflies = plan.butterflies_per_pass * plan.m
    assert butterflies == 5120
    if strategy.uses_fma:
        assert (c.fma_count, c.mul_count, c.add_count) == (30720, 0, 0)
    else:
        assert (c.fma_count, c.mul_count, c.add_count) == (0, 4 * 5120, 6 * 5120)


def test_inverse_counts_scaling():
    plan = make_plan(16, "dual", FP64)
    ctx = plan.new_context()
    inverse(plan, seeded(16, 2), ctx)
    assert ctx.counters.fma_count == 6 * 8 * 4
    assert ctx.counters.mul_count == 2 * 16


@pytest.mark.parametrize("strategy", list(Strategy))
@pytest.mark.parametrize("n", [2, 16, 256, 4096])
def test_roundtrip_fp64(strategy, n):
    plan = make_plan(n, strategy, FP64)
    x = seeded(n, 7 * n)
    assert relative_l2_error(inverse(plan, forward(plan, x)), x) < 1e-13


@pytest.mark.parametrize("n", [8, 64, 256, 1024])
def test_strategy_independence(n):
    x = seeded(n, 5)
    outs = {s: forward(make_plan(n, s, FP64), x) for s in
            (Strategy.LINZER_FEIG, Strategy.COSINE, Strategy.DUAL_SELECT)}
    for s1 in outs:
        for s2 in outs:
            if s1 is not s2:
                assert relative_l2_error(outs[s1], outs[s2]) < 1e-11


@pytest.mark.parametrize("strategy", list(Strategy))
def test_linearity_and_shift(strategy):
    n = 16
    plan = make_plan(n, strategy, FP64)
    x, y = seeded(n, 11), seeded(n, 12)
    alpha, beta = 0.75 - 0.5j, -1.25 + 2j
    combo = SampleBuffer.from_complex(alpha * x.to_complex() + beta * y.to_complex())
    expected = alpha * forward(plan, x).to_complex() + beta * forward(plan, y).to_complex()
    assert relative_l2_error(forward(plan, combo), SampleBuffer.from_complex(expected)) < 1e-13

    shift = 3
    X = forward(plan, x).to_complex()
    shifted = forward(plan, SampleBuffer.from_complex(np.roll(x.to_complex(), shift)))
    phase = np.exp(-2j * np.pi * np.arange(n) * shift / n)
    assert relative_l2_error(shifted, SampleBuffer.from_complex(X * phase)) < 1e-13


def test_forward_leaves_input_untouched():
    x = seeded(64, 4)
    before = (x.re.copy(), x.im.copy())
    plan = make_plan(64, "dual", FP64)
    forward(plan, x)
    inverse(plan, x)
    assert np.array_equal(x.re, before[0]) and np.array_equal(x.im, before[1])


def test_ingest_rounds_into_plan_precision():
    x = SampleBuffer.from_complex([0.1 + 0.2j, 1 / 3])
    plan = make_plan(2, "dual", "fp16")
    got = ingest(plan, x)
    assert got.re[0] == float(np.float16(0.1))
    assert got.im[0] == float(np.float16(0.2))
    # forward of a length-2 input is the single butterfly on the ingested values
    y = forward(plan, x)
    assert y.re[0] == float(np.float16(got.re[0] + got.re[1]))


def test_length_mismatch():
    plan = make_plan(8, "dual", FP64)
    with pytest.raises(LengthMismatchError):
        forward(plan, SampleBuffer.zeros(4))
    with pytest.raises(LengthMismatchError):
        inverse(plan, SampleBuffer.zeros(16))


def test_fp16_overflow_propagates():
    plan = make_plan(8, "standard", "fp16")
    y = forward(plan, SampleBuffer.from_complex([30000.0] * 8))
    assert not np.isfinite(y.re).all()
