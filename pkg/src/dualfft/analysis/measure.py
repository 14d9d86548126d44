"""Measured errors: relative L2 against the FP64 original or the DFT oracle."""
from __future__ import annotations
import logging
from concurrent.futures import ProcessPoolExecutor
from typing import List, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel

from ..butterfly import kernel_for
from ..fft import FftPlan, dft_oracle, forward, ingest, inverse, make_plan
from ..precision import Precision, parse_precision
from ..twiddle import build_table
from ..types import (
    ComplexSample, LengthMismatchError, Metric, SampleBuffer, Strategy,
    ZeroReferenceError, parse_strategy,
)
from ..utils.rng import SplitMix64

logger = logging.getLogger(__name__)


class ErrorReport(BaseModel):
    n: int
    strategy: Strategy
    precision: Precision
    metric: Metric
    trials: int
    seed: int
    rel_l2_median: float
    rel_l2_max: float
    nonfinite_trials: int


class ButterflyConstantReport(BaseModel):
    n: int
    strategy: Strategy
    precision: Precision
    trials: int
    seed: int
    butterflies: int
    observed_constant: float
    worst_k: int


def relative_l2_error(x: SampleBuffer, y: SampleBuffer) -> float:
    """||x - y||_2 / ||y||_2 with y the reference; +inf if x is not finite."""
    if len(x) != len(y):
        raise LengthMismatchError(f"lengths differ: {len(x)} vs {len(y)}")
    ref = np.linalg.norm(np.concatenate([y.re, y.im]))
    if ref == 0:
        raise ZeroReferenceError("reference vector is all zero")
    if not (np.isfinite(x.re).all() and np.isfinite(x.im).all()):
        return float("inf")
    return float(np.linalg.norm(np.concatenate([x.re - y.re, x.im - y.im])) / ref)


def random_inputs(n: int, trials: int, seed: int) -> List[SampleBuffer]:
    """Components uniform in [-1, 1), drawn re-then-im per trial."""
    rng = SplitMix64(seed)
    out = []
    for _ in range(trials):
        draws = rng.uniform(2 * n)
        out.append(SampleBuffer(re=draws[:n], im=draws[n:]))
    return out


def _trial_error(plan: FftPlan, metric: Metric, x: SampleBuffer) -> float:
    if metric is Metric.ROUNDTRIP:
        return relative_l2_error(inverse(plan, forward(plan, x)), x)
    return relative_l2_error(forward(plan, x), dft_oracle(ingest(plan, x)))


def _trial_error_packed(args: Tuple[FftPlan, Metric, SampleBuffer]) -> float:
    return _trial_error(*args)


def measure_error(
    n: int,
    strategy: Union[str, Strategy],
    precision: Union[str, Precision],
    metric: Union[str, Metric],
    trials: int,
    seed: int,
    workers: int = 1,
    clamp_eps: Optional[float] = None,
) -> ErrorReport:
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    metric = Metric(metric)
    plan = make_plan(n, strategy, precision, clamp_eps=clamp_eps)
    inputs = random_inputs(plan.n, trials, seed)

    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            errors = list(ex.map(_trial_error_packed, [(plan, metric, x) for x in inputs]))
    else:
        errors = [_trial_error(plan, metric, x) for x in inputs]

    errs = np.asarray(errors, dtype=np.float64)
    finite = errs[np.isfinite(errs)]
    nonfinite = int(errs.size - finite.size)
    if nonfinite:
        logger.warning("%d of %d trials produced non-finite output (n=%d %s %s)",
                       nonfinite, trials, plan.n, plan.strategy.value, plan.precision.value)
    median = float(np.median(finite)) if finite.size else float("inf")
    # the median skips non-finite trials, the max does not
    worst = float(finite.max()) if finite.size and not nonfinite else float("inf")
    logger.debug("measured n=%d %s %s %s median=%.3e max=%.3e",
                 plan.n, plan.strategy.value, plan.precision.value, metric.value, median, worst)
    return ErrorReport(
        n=plan.n,
        strategy=plan.strategy,
        precision=plan.precision,
        metric=metric,
        trials=trials,
        seed=seed,
        rel_l2_median=median,
        rel_l2_max=worst,
        nonfinite_trials=nonfinite,
    )


def observe_butterfly_constant(
    n: int,
    strategy: Union[str, Strategy],
    precision: Union[str, Precision],
    trials: int,
    seed: int,
) -> ButterflyConstantReport:
    """Largest per-butterfly deviation in units of max(|t|, 1) * eps * max(|a|, |b|).

    Every non-clamped entry of the plan's table is exercised once per trial
    with fresh inputs; the reference is the exact complex butterfly in FP64
    using the unrounded twiddle.
    """
    strategy = parse_strategy(strategy)
    p = parse_precision(precision)
    plan = make_plan(n, strategy, p)
    exact = build_table(plan.n, strategy, clamp_eps=plan.table.clamp_eps)
    ks = np.flatnonzero(~plan.table.clamped)
    twiddle = plan.table.gather(ks)
    w = exact.omega_r[ks] + 1j * exact.omega_i[ks]
    weight = np.maximum(np.abs(exact.ratio[ks]), 1.0)
    kernel = kernel_for(strategy)
    rng = SplitMix64(seed)

    worst, worst_k = 0.0, -1
    for _ in range(trials):
        draws = plan.new_context().round(rng.uniform(4 * ks.size)).reshape(4, -1)
        a = ComplexSample(draws[0], draws[1])
        b = ComplexSample(draws[2], draws[3])
        A, B = kernel(a, b, twiddle, plan.new_context())
        za, wb = draws[0] + 1j * draws[1], w * (draws[2] + 1j * draws[3])
        dev = np.max(np.abs(np.stack([
            A.re - (za + wb).real, A.im - (za + wb).imag,
            B.re - (za - wb).real, B.im - (za - wb).imag,
        ])), axis=0)
        scale = np.max(np.abs(draws), axis=0)
        with np.errstate(divide="ignore", invalid="ignore"):
            units = np.where(np.isfinite(dev), dev / (weight * p.machine_epsilon * scale), np.inf)
        units = np.where(scale == 0, 0.0, units)
        i = int(np.argmax(units))
        if units[i] > worst:
            worst, worst_k = float(units[i]), int(ks[i])
    return ButterflyConstantReport(
        n=plan.n,
        strategy=strategy,
        precision=p,
        trials=trials,
        seed=seed,
        butterflies=trials * int(ks.size),
        observed_constant=worst,
        worst_k=worst_k,
    )
