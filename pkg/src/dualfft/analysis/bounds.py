"""Analytic error bounds: per butterfly (t * eps) and over m passes."""
from __future__ import annotations
import math
from typing import List, Optional, Union

from pydantic import BaseModel

from ..config import load_settings
from ..precision import Precision, parse_precision
from ..twiddle import RatioStats, build_table, check_size, storage_footprint, table_stats
from ..types import Strategy

TABLE1_STRATEGIES = (Strategy.LINZER_FEIG, Strategy.COSINE, Strategy.DUAL_SELECT)
TABLE2_STRATEGIES = (Strategy.LINZER_FEIG, Strategy.DUAL_SELECT)
BASELINE = Strategy.LINZER_FEIG


class BoundReport(BaseModel):
    strategy: Strategy
    n: int
    precision: Precision
    eps: float
    m: int
    t_max: float
    argmax_k: int
    singular_count: int
    cos_path_count: int
    sin_path_count: int
    per_butterfly_bound: float
    cumulative_bound: float
    linearized_bound: float
    improvement_vs_baseline: float
    divergent: bool
    table_bytes: int
    flag_bytes: int


def _check_args(t_max: float, eps: float, m: int = 0) -> None:
    if not t_max >= 0:
        raise ValueError(f"t_max must be >= 0, got {t_max}")
    if not eps > 0:
        raise ValueError(f"eps must be > 0, got {eps}")
    if m < 0:
        raise ValueError(f"m must be >= 0, got {m}")


def per_butterfly_bound(t_max: float, eps: float) -> float:
    _check_args(t_max, eps)
    return t_max * eps


def cumulative_bound(t_max: float, eps: float, m: int) -> float:
    """(1 + t_max*eps)**m - 1, evaluated through log1p/expm1."""
    _check_args(t_max, eps, m)
    try:
        return math.expm1(m * math.log1p(t_max * eps))
    except OverflowError:
        return math.inf


def linearized_bound(t_max: float, eps: float, m: int) -> float:
    _check_args(t_max, eps, m)
    return m * t_max * eps


def bound_report(
    stats: RatioStats,
    precision: Union[str, Precision],
    baseline_cumulative: Optional[float] = None,
) -> BoundReport:
    p = parse_precision(precision)
    eps = p.machine_epsilon
    m = stats.n.bit_length() - 1
    per_bf = per_butterfly_bound(stats.t_max, eps)
    cumulative = cumulative_bound(stats.t_max, eps, m)
    if baseline_cumulative is None:
        improvement = 1.0
    elif cumulative == 0:
        improvement = 1.0 if baseline_cumulative == 0 else math.inf
    else:
        improvement = baseline_cumulative / cumulative
    storage = storage_footprint(stats.n, p, stats.strategy)
    return BoundReport(
        strategy=stats.strategy,
        n=stats.n,
        precision=p,
        eps=eps,
        m=m,
        t_max=stats.t_max,
        argmax_k=stats.argmax_k,
        singular_count=stats.singular_count,
        cos_path_count=stats.cos_path_count,
        sin_path_count=stats.sin_path_count,
        per_butterfly_bound=per_bf,
        cumulative_bound=cumulative,
        linearized_bound=linearized_bound(stats.t_max, eps, m),
        improvement_vs_baseline=improvement,
        divergent=per_bf >= load_settings().analysis.divergence_threshold,
        table_bytes=storage.table_bytes,
        flag_bytes=storage.flag_bytes,
    )


def _rows(n: int, strategies, precision: Union[str, Precision]) -> List[BoundReport]:
    n = check_size(n)
    stats = {s: table_stats(build_table(n, s)) for s in strategies}
    baseline = bound_report(stats[BASELINE], precision).cumulative_bound
    return [bound_report(stats[s], precision, baseline_cumulative=baseline) for s in strategies]


def reproduce_table1(n: int = 1024, precision: Union[str, Precision] = Precision.FP16) -> List[BoundReport]:
    """Ratio bounds, singularities and per-butterfly bounds per strategy."""
    return _rows(n, TABLE1_STRATEGIES, precision)


def reproduce_table2(n: int = 1024, precision: Union[str, Precision] = Precision.FP16) -> List[BoundReport]:
    """Cumulative bounds over log2(n) passes, improvement against Linzer-Feig."""
    return _rows(n, TABLE2_STRATEGIES, precision)
