"""
Tests for the four butterfly kernels
"""
import numpy as np
import pytest

from dualfft.analysis import observe_butterfly_constant
from dualfft.butterfly import (
    KERNELS, butterfly_cosine, butterfly_dual, butterfly_linzer_feig, butterfly_standard, kernel_for,
)
from dualfft.precision import ArithmeticContext, Precision
from dualfft.twiddle import (
    build_cosine_table, build_dual_select_table, build_linzer_feig_table, build_standard_table, build_table,
)
from dualfft.types import ComplexSample, Strategy

FP64 = Precision.FP64
FMA_STRATEGIES = [Strategy.LINZER_FEIG, Strategy.COSINE, Strategy.DUAL_SELECT]


def direct(a, b, entry):
    w = entry.omega_r + 1j * entry.omega_i
    za, zb = complex(a.re, a.im), complex(b.re, b.im)
    return za + w * zb, za - w * zb


def as_complex(s):
    return complex(s.re, s.im)


def random_operands(rng, count):
    v = rng.uniform(-1.0, 1.0, (4, count))
    return ComplexSample(v[0], v[1]), ComplexSample(v[2], v[3])


def test_standard_examples():
    ctx = ArithmeticContext(FP64)
    one = ComplexSample(1.0, 0.0)
    A, B = butterfly_standard(one, one, build_standard_table(4).entry(0), ctx)
    assert (A.re, A.im, B.re, B.im) == (2.0, 0.0, 0.0, 0.0)

    A, B = butterfly_standard(one, one, build_standard_table(4).entry(1), ctx)
    assert as_complex(A) == pytest.approx(1 - 1j, abs=1e-15)
    assert as_complex(B) == pytest.approx(1 + 1j, abs=1e-15)


def test_standard_counts():
    ctx = ArithmeticContext(FP64)
    one = ComplexSample(1.0, 0.0)
    butterfly_standard(one, one, build_standard_table(16).entry(3), ctx)
    c = ctx.counters
    assert (c.mul_count, c.add_count, c.fma_count) == (4, 6, 0)


def test_standard_matches_direct_complex():
    rng = np.random.default_rng(3)
    entry = build_standard_table(16).entry(3)
    ctx = ArithmeticContext(FP64)
    for _ in range(100):
        a = ComplexSample(*rng.uniform(-1, 1, 2).tolist())
        b = ComplexSample(*rng.uniform(-1, 1, 2).tolist())
        A, B = butterfly_standard(a, b, entry, ctx)
        ra, rb = direct(a, b, entry)
        assert abs(A.re - ra.real) <= 1e-15 and abs(A.im - ra.imag) <= 1e-15
        assert abs(B.re - rb.real) <= 1e-15 and abs(B.im - rb.imag) <= 1e-15


@pytest.mark.parametrize("strategy", FMA_STRATEGIES)
def test_fma_kernels_count_six(strategy):
    ctx = ArithmeticContext(Precision.FP32)
    table = build_table(64, strategy)
    kernel = kernel_for(strategy)
    a, b = ComplexSample(0.5, -0.25), ComplexSample(0.125, 1.0)
    for k in range(1, 32):
        before = ctx.counters.snapshot()
        kernel(a, b, table.entry(k), ctx)
        delta = ctx.counters.since(before)
        assert (delta.fma_count, delta.mul_count, delta.add_count) == (6, 0, 0)


def test_dual_counts_on_columns():
    ctx = ArithmeticContext(Precision.FP16)
    table = build_dual_select_table(64)
    rng = np.random.default_rng(4)
    a, b = random_operands(rng, 32)
    butterfly_dual(a, b, table.gather(np.arange(32)), ctx)
    assert ctx.counters.fma_count == 6 * 32
    assert ctx.counters.mul_count == 0


def test_linzer_feig_examples():
    ctx = ArithmeticContext(FP64)
    A, _ = butterfly_linzer_feig(ComplexSample(0.0, 0.0), ComplexSample(1.0, 1.0),
                                 build_linzer_feig_table(4).entry(1), ctx)
    assert abs(A.re - 1.0) <= np.spacing(1.0)
    assert abs(A.im + 1.0) <= np.spacing(1.0)

    entry = build_linzer_feig_table(1024).entry(1)
    one = ComplexSample(1.0, 0.0)
    A, B = butterfly_linzer_feig(one, one, entry, ctx)
    SA, SB = butterfly_standard(one, one, build_standard_table(1024).entry(1), ctx)
    for x, y in ((A, SA), (B, SB)):
        assert abs(x.re - y.re) <= 1e-13 and abs(x.im - y.im) <= 1e-13


def test_linzer_feig_fp16_large_ratio():
    entry = build_linzer_feig_table(1024).entry(1)
    a, b = ComplexSample(0.0, 0.0), ComplexSample(1.0, 1.0)
    A, B = butterfly_linzer_feig(a, b, entry.model_copy(update={
        "ratio": float(np.float16(entry.ratio)), "multiplier": float(np.float16(entry.multiplier)),
    }), ArithmeticContext(Precision.FP16))
    ra, rb = direct(a, b, entry)
    bound = 163 * Precision.FP16.machine_epsilon * abs(complex(1, 1)) * 4
    for x, r in ((A, ra), (B, rb)):
        assert abs(x.re - r.real) <= bound
        assert abs(x.im - r.imag) <= bound


def test_cosine_examples():
    ctx = ArithmeticContext(FP64)
    a, b = ComplexSample(0.3, -0.7), ComplexSample(0.9, 0.1)
    A, B = butterfly_cosine(a, b, build_cosine_table(8).entry(0), ctx)
    assert (A.re, A.im) == (0.3 + 0.9, -0.7 + 0.1)
    assert (B.re, B.im) == (0.3 - 0.9, -0.7 - 0.1)

    a, b = ComplexSample(1.0, 0.0), ComplexSample(0.0, 1.0)
    A, B = butterfly_cosine(a, b, build_cosine_table(8).entry(1), ctx)
    SA, SB = butterfly_standard(a, b, build_standard_table(8).entry(1), ctx)
    for x, y in ((A, SA), (B, SB)):
        assert abs(x.re - y.re) <= 1e-15 and abs(x.im - y.im) <= 1e-15


def test_dual_examples():
    ctx = ArithmeticContext(FP64)
    table = build_dual_select_table(1024)
    a, b = ComplexSample(0.3, -0.7), ComplexSample(0.9, 0.1)
    A, B = butterfly_dual(a, b, table.entry(0), ctx)
    assert (A.re, A.im, B.re, B.im) == (0.3 + 0.9, -0.7 + 0.1, 0.3 - 0.9, -0.7 - 0.1)

    A, B = butterfly_dual(a, b, table.entry(256), ctx)
    SA, SB = butterfly_standard(a, b, build_standard_table(1024).entry(256), ctx)
    for x, y in ((A, SA), (B, SB)):
        assert abs(x.re - y.re) <= 1e-13 and abs(x.im - y.im) <= 1e-13


def test_dual_scalar_and_column_paths_agree():
    table = build_dual_select_table(64)
    rng = np.random.default_rng(8)
    a, b = random_operands(rng, 32)
    A, B = butterfly_dual(a, b, table.gather(np.arange(32)), ArithmeticContext(Precision.FP16))
    for k in range(32):
        sa, sb = butterfly_dual(ComplexSample(a.re[k], a.im[k]), ComplexSample(b.re[k], b.im[k]),
                                table.entry(k), ArithmeticContext(Precision.FP16))
        assert (A.re[k], A.im[k], B.re[k], B.im[k]) == (sa.re, sa.im, sb.re, sb.im)


@pytest.mark.parametrize("strategy", FMA_STRATEGIES)
@pytest.mark.parametrize("n", [2, 8, 64, 1024, 4096])
def test_algebraic_equivalence_fp64(strategy, n):
    table = build_table(n, strategy)
    ks = np.flatnonzero(~table.clamped)
    if strategy is Strategy.COSINE and n >= 4:
        ks = ks[ks != n // 4]
    rng = np.random.default_rng(n)
    a, b = random_operands(rng, ks.size)
    A, B = kernel_for(strategy)(a, b, table.gather(ks), ArithmeticContext(FP64))
    SA, SB = butterfly_standard(a, b, build_standard_table(n).gather(ks), ArithmeticContext(FP64))
    for x, y in ((A.re, SA.re), (A.im, SA.im), (B.re, SB.re), (B.im, SB.im)):
        assert np.max(np.abs(x - y), initial=0.0) < 1e-13


@pytest.mark.parametrize("strategy", list(Strategy))
def test_linearity_power_of_two(strategy):
    table = build_table(256, strategy)
    ks = np.flatnonzero(~table.clamped)
    rng = np.random.default_rng(21)
    a, b = random_operands(rng, ks.size)
    kernel = KERNELS[strategy]
    A, B = kernel(a, b, table.gather(ks), ArithmeticContext(FP64))
    for lam in (0.25, 8.0, 2.0 ** 40):
        la, lb = ComplexSample(lam * a.re, lam * a.im), ComplexSample(lam * b.re, lam * b.im)
        LA, LB = kernel(la, lb, table.gather(ks), ArithmeticContext(FP64))
        assert np.array_equal(LA.re, lam * A.re) and np.array_equal(LA.im, lam * A.im)
        assert np.array_equal(LB.re, lam * B.re) and np.array_equal(LB.im, lam * B.im)


@pytest.mark.parametrize("strategy", list(Strategy))
def test_involution(strategy):
    n = 512
    table = build_table(n, strategy)
    ks = np.flatnonzero(~table.clamped)
    if strategy is Strategy.COSINE and n >= 4:
        ks = ks[ks != n // 4]
    rng = np.random.default_rng(5)
    a, b = random_operands(rng, ks.size)
    A, B = kernel_for(strategy)(a, b, table.gather(ks), ArithmeticContext(FP64))
    za, zb = A.re + 1j * A.im, B.re + 1j * B.im
    w = table.omega_r[ks] + 1j * table.omega_i[ks]
    a_back = (za + zb) / 2
    b_back = (za - zb) / (2 * w)
    tol = 4 * np.spacing(4.0)
    assert np.max(np.abs(a_back - (a.re + 1j * a.im))) <= tol
    assert np.max(np.abs(b_back - (b.re + 1j * b.im))) <= tol


@pytest.mark.parametrize("strategy", [Strategy.STANDARD, Strategy.LINZER_FEIG, Strategy.DUAL_SELECT])
def test_fp16_error_bound_conformance(strategy):
    # 200 trials x 511 butterflies: about 10**5 per strategy
    report = observe_butterfly_constant(1024, strategy, Precision.FP16, trials=200, seed=17)
    assert report.butterflies >= 100_000
    assert 0.0 < report.observed_constant <= 8.0


def test_observed_constant_is_deterministic():
    r1 = observe_butterfly_constant(64, "dual", "fp16", trials=5, seed=1)
    r2 = observe_butterfly_constant(64, "dual", "fp16", trials=5, seed=1)
    assert r1 == r2
    assert r1.worst_k >= 0
