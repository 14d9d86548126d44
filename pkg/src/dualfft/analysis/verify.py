from __future__ import annotations
import logging
from typing import Iterator, List

import numpy as np
from pydantic import BaseModel

from ..config import load_settings
from ..fft import dft_oracle, forward, make_plan
from ..precision import Precision
from ..twiddle import build_dual_select_table, check_size
from ..types import PATH_COS, SampleBuffer, Strategy
from ..utils.rng import SplitMix64
from .measure import relative_l2_error

logger = logging.getLogger(__name__)


class CheckResult(BaseModel):
    name: str
    passed: bool
    detail: str


def power_sizes(max_n: int, start: int = 2) -> Iterator[int]:
    n = start
    while n <= max_n:
        yield n
        n *= 2


def check_theorem1(max_n: int) -> CheckResult:
    """|ratio| <= 1 for every dual-select entry of every size up to max_n."""
    checked = 0
    for n in power_sizes(max_n):
        table = build_dual_select_table(n)
        bad = np.flatnonzero(~(np.abs(table.ratio) <= 1.0))
        if bad.size:
            k = int(bad[0])
            return CheckResult(name="theorem1", passed=False,
                               detail=f"n={n} strategy=dual k={k} |ratio|={abs(table.ratio[k]):.17g}")
        checked += len(table)
    return CheckResult(name="theorem1", passed=True, detail=f"{checked} entries, n<={max_n}")


def check_path_split(max_n: int) -> CheckResult:
    for n in power_sizes(max_n, start=8):
        table = build_dual_select_table(n)
        cos = int((table.path == PATH_COS).sum())
        if cos != n // 4 or len(table) - cos != n // 4:
            return CheckResult(name="path_split", passed=False,
                               detail=f"n={n} strategy=dual cos={cos} sin={len(table) - cos}")
    return CheckResult(name="path_split", passed=True, detail=f"n/4 COS and n/4 SIN for 8<=n<={max_n}")


def check_oracle_equivalence(max_n: int) -> CheckResult:
    cfg = load_settings().verify
    limit = min(max_n, cfg.oracle_max_n)
    worst = 0.0
    for n in power_sizes(limit):
        draws = SplitMix64(cfg.seed + n).uniform(2 * n)
        x = SampleBuffer(re=draws[:n], im=draws[n:])
        ref = dft_oracle(x)
        for strategy in Strategy:
            y = forward(make_plan(n, strategy, Precision.FP64), x)
            err = relative_l2_error(y, ref)
            if not err < cfg.oracle_tolerance:
                with np.errstate(invalid="ignore"):
                    k = int(np.nanargmax(np.abs(y.to_complex() - ref.to_complex())))
                return CheckResult(name="oracle_equivalence", passed=False,
                                   detail=f"n={n} strategy={strategy.value} k={k} rel_l2={err:.3e}")
            worst = max(worst, err)
    return CheckResult(name="oracle_equivalence", passed=True,
                       detail=f"fp64 n<={limit} all strategies, worst rel_l2={worst:.3e}")


def check_fma_count(max_n: int) -> CheckResult:
    n = max_n
    m = n.bit_length() - 1
    butterflies = (n // 2) * m
    x = SampleBuffer.zeros(n)
    for strategy in Strategy:
        plan = make_plan(n, strategy, Precision.FP64)
        ctx = plan.new_context()
        forward(plan, x, ctx)
        c = ctx.counters
        if strategy.uses_fma:
            expected = (6 * butterflies, 0, 0)
        else:
            expected = (0, 6 * butterflies, 4 * butterflies)
        got = (c.fma_count, c.add_count, c.mul_count)
        if got != expected:
            return CheckResult(name="fma_count", passed=False,
                               detail=f"n={n} strategy={strategy.value} (fma, add, mul)={got} expected {expected}")
    return CheckResult(name="fma_count", passed=True, detail=f"n={n}: {6 * butterflies} FMAs per FMA strategy")


def run_verification(max_n: int) -> List[CheckResult]:
    max_n = check_size(max_n)
    results = []
    for check in (check_theorem1, check_path_split, check_oracle_equivalence, check_fma_count):
        result = check(max_n)
        logger.info("%s: %s (%s)", result.name, "pass" if result.passed else "FAIL", result.detail)
        results.append(result)
    return results
