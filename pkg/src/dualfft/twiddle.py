from __future__ import annotations
import logging
import math
from dataclasses import dataclass, replace
from typing import List, Optional, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel

from .config import load_settings
from .precision import Precision, parse_precision, round_to
from .types import (
    InvalidSizeError, Strategy, TwiddlePath, parse_strategy,
    PATH_BY_CODE, PATH_COS, PATH_NONE, PATH_SIN,
)

logger = logging.getLogger(__name__)

CSV_COLUMNS = ["k", "theta", "omega_r", "omega_i", "path", "multiplier", "ratio", "clamped"]


def check_size(n: int, max_n: Optional[int] = None) -> int:
    if isinstance(n, bool) or int(n) != n:
        raise InvalidSizeError(f"n must be a power of two >= 2, got {n!r}")
    n = int(n)
    if n < 2 or n & (n - 1):
        raise InvalidSizeError(f"n must be a power of two >= 2, got {n}")
    if max_n is not None and n > max_n:
        raise InvalidSizeError(f"n must be a power of two <= {max_n}, got {n}")
    return n


class TwiddleEntry(BaseModel):
    k: int
    theta: float
    omega_r: float
    omega_i: float
    multiplier: float   # outer factor: omega_r (COS) or omega_i (SIN)
    ratio: float        # t
    path: Optional[TwiddlePath] = None
    clamped: bool = False


class RatioStats(BaseModel):
    strategy: Strategy
    n: int
    t_max: float
    argmax_k: int
    singular_count: int
    cos_path_count: int
    sin_path_count: int


class StorageFootprint(BaseModel):
    table_bytes: int
    flag_bytes: int


@dataclass(frozen=True)
class TwiddleColumns:
    """Twiddle scalars gathered for a batch of butterflies."""
    omega_r: np.ndarray
    omega_i: np.ndarray
    multiplier: np.ndarray
    ratio: np.ndarray
    path: np.ndarray

    def select(self, mask: np.ndarray) -> "TwiddleColumns":
        return TwiddleColumns(
            omega_r=self.omega_r[mask],
            omega_i=self.omega_i[mask],
            multiplier=self.multiplier[mask],
            ratio=self.ratio[mask],
            path=self.path[mask],
        )


@dataclass(frozen=True, eq=False)
class TwiddleTable:
    """All n/2 twiddles for one size and strategy, stored column-wise.

    Entry k belongs to theta_k = -2*pi*k/n.
    """
    n: int
    strategy: Strategy
    theta: np.ndarray
    omega_r: np.ndarray
    omega_i: np.ndarray
    multiplier: np.ndarray
    ratio: np.ndarray
    path: np.ndarray        # PATH_COS / PATH_SIN / PATH_NONE codes
    clamped: np.ndarray
    clamp_eps: Optional[float] = None
    precision: Precision = Precision.FP64

    def __post_init__(self) -> None:
        for name in ("theta", "omega_r", "omega_i", "multiplier", "ratio", "path", "clamped"):
            getattr(self, name).setflags(write=False)

    def __len__(self) -> int:
        return self.n // 2

    def entry(self, k: int) -> TwiddleEntry:
        code = int(self.path[k])
        return TwiddleEntry(
            k=int(k),
            theta=float(self.theta[k]),
            omega_r=float(self.omega_r[k]),
            omega_i=float(self.omega_i[k]),
            multiplier=float(self.multiplier[k]),
            ratio=float(self.ratio[k]),
            path=PATH_BY_CODE.get(code),
            clamped=bool(self.clamped[k]),
        )

    @property
    def entries(self) -> List[TwiddleEntry]:
        return [self.entry(k) for k in range(len(self))]

    def gather(self, indices: np.ndarray) -> TwiddleColumns:
        return TwiddleColumns(
            omega_r=self.omega_r[indices],
            omega_i=self.omega_i[indices],
            multiplier=self.multiplier[indices],
            ratio=self.ratio[indices],
            path=self.path[indices],
        )

    def rounded(self, precision: Union[str, Precision]) -> "TwiddleTable":
        """Round every stored scalar once into ``precision``."""
        p = parse_precision(precision)
        return replace(
            self,
            omega_r=round_to(self.omega_r, p),
            omega_i=round_to(self.omega_i, p),
            multiplier=round_to(self.multiplier, p),
            ratio=round_to(self.ratio, p),
            theta=self.theta.copy(),
            path=self.path.copy(),
            clamped=self.clamped.copy(),
            precision=p,
        )


def _unit_circle(n: int):
    k = np.arange(n // 2)
    # +0.0 folds the -0.0 produced at k = 0
    theta = (-2.0 * np.pi) * k / n + 0.0
    return k, theta, np.cos(theta), np.sin(theta) + 0.0


def _table(n: int, strategy: Strategy, theta, omega_r, omega_i, multiplier, ratio, path, clamped,
           clamp_eps: Optional[float] = None) -> TwiddleTable:
    table = TwiddleTable(
        n=n,
        strategy=strategy,
        theta=theta,
        omega_r=omega_r,
        omega_i=omega_i,
        multiplier=np.asarray(multiplier, dtype=np.float64),
        ratio=np.asarray(ratio, dtype=np.float64),
        path=np.asarray(path, dtype=np.int8),
        clamped=np.asarray(clamped, dtype=bool),
        clamp_eps=clamp_eps,
    )
    logger.debug("built %s table n=%d", strategy.label, n)
    return table


def build_standard_table(n: int) -> TwiddleTable:
    n = check_size(n)
    _, theta, wr, wi = _unit_circle(n)
    half = n // 2
    return _table(n, Strategy.STANDARD, theta, wr, wi,
                  multiplier=np.ones(half), ratio=np.zeros(half),
                  path=np.full(half, PATH_NONE), clamped=np.zeros(half, dtype=bool))


def build_linzer_feig_table(n: int, clamp_eps: float = 1e-7) -> TwiddleTable:
    """Sine-path table: multiplier omega_i, ratio cot(theta).

    omega_i == 0 (k = 0) is replaced by -clamp_eps before the division.
    """
    n = check_size(n)
    if not clamp_eps > 0:
        raise ValueError(f"clamp_eps must be > 0, got {clamp_eps}")
    _, theta, wr, wi = _unit_circle(n)
    clamped = wi == 0.0
    denom = np.where(clamped, -float(clamp_eps), wi)
    return _table(n, Strategy.LINZER_FEIG, theta, wr, wi,
                  multiplier=denom, ratio=wr / denom,
                  path=np.full(n // 2, PATH_SIN), clamped=clamped, clamp_eps=float(clamp_eps))


def build_cosine_table(n: int) -> TwiddleTable:
    """Cosine-path table: multiplier omega_r, ratio tan(theta). Never clamped."""
    n = check_size(n)
    _, theta, wr, wi = _unit_circle(n)
    with np.errstate(divide="ignore"):
        ratio = wi / wr
    return _table(n, Strategy.COSINE, theta, wr, wi,
                  multiplier=wr, ratio=ratio,
                  path=np.full(n // 2, PATH_COS), clamped=np.zeros(n // 2, dtype=bool))


def build_dual_select_table(n: int) -> TwiddleTable:
    """Per twiddle, keep the factorization whose outer multiplier is larger.

    Ties (|omega_r| == |omega_i|) go to the cosine path, so |ratio| <= 1.
    """
    n = check_size(n)
    _, theta, wr, wi = _unit_circle(n)
    cos_path = np.abs(wr) >= np.abs(wi)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(cos_path, wi / wr, wr / wi)
    return _table(n, Strategy.DUAL_SELECT, theta, wr, wi,
                  multiplier=np.where(cos_path, wr, wi), ratio=ratio,
                  path=np.where(cos_path, PATH_COS, PATH_SIN),
                  clamped=np.zeros(n // 2, dtype=bool))


def build_table(n: int, strategy: Union[str, Strategy], clamp_eps: Optional[float] = None) -> TwiddleTable:
    strategy = parse_strategy(strategy)
    if strategy is Strategy.STANDARD:
        return build_standard_table(n)
    if strategy is Strategy.LINZER_FEIG:
        if clamp_eps is None:
            clamp_eps = load_settings().twiddle.clamp_eps
        return build_linzer_feig_table(n, clamp_eps=clamp_eps)
    if strategy is Strategy.COSINE:
        return build_cosine_table(n)
    return build_dual_select_table(n)


def table_stats(table: TwiddleTable) -> RatioStats:
    usable = ~table.clamped
    mags = np.where(usable, np.abs(table.ratio), -np.inf)
    if usable.any():
        argmax_k = int(np.argmax(mags))
        t_max = float(mags[argmax_k])
    else:
        argmax_k, t_max = -1, 0.0
    return RatioStats(
        strategy=table.strategy,
        n=table.n,
        t_max=t_max,
        argmax_k=argmax_k,
        singular_count=int(table.clamped.sum()),
        cos_path_count=int((table.path == PATH_COS).sum()),
        sin_path_count=int((table.path == PATH_SIN).sum()),
    )


def singular_indices(n: int, strategy: Union[str, Strategy]) -> List[int]:
    """Indices where the factorization's exact denominator vanishes."""
    n = check_size(n)
    strategy = parse_strategy(strategy)
    if strategy is Strategy.LINZER_FEIG:
        return [0]           # sin(0) = 0
    if strategy is Strategy.COSINE and n >= 4:
        return [n // 4]      # cos(-pi/2) = 0
    return []


def storage_footprint(n: int, precision: Union[str, Precision], strategy: Union[str, Strategy]) -> StorageFootprint:
    """Bytes for the (multiplier, ratio) pairs plus the one-bit path flags."""
    n = check_size(n)
    p = parse_precision(precision)
    strategy = parse_strategy(strategy)
    entries = n // 2
    flag_bytes = math.ceil(entries / 8) if strategy is Strategy.DUAL_SELECT else 0
    return StorageFootprint(table_bytes=entries * 2 * p.itemsize, flag_bytes=flag_bytes)


def table_frame(table: TwiddleTable) -> pd.DataFrame:
    path = pd.Series(table.path).map({PATH_COS: "COS", PATH_SIN: "SIN"}).fillna("")
    return pd.DataFrame({
        "k": np.arange(len(table)),
        "theta": table.theta,
        "omega_r": table.omega_r,
        "omega_i": table.omega_i,
        "path": path,
        "multiplier": table.multiplier,
        "ratio": table.ratio,
        "clamped": np.where(table.clamped, "true", "false"),
    }, columns=CSV_COLUMNS)
