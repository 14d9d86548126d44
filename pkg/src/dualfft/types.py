from __future__ import annotations
from dataclasses import dataclass
from enum import Enum
from typing import Generic, TypeVar, Union

import numpy as np


class DualFftError(ValueError):
    """Base class for invalid arguments to the library."""

    kind = "invalid_argument"


class InvalidSizeError(DualFftError):
    kind = "invalid_size"


class UnknownStrategyError(DualFftError):
    kind = "unknown_strategy"


class UnknownPrecisionError(DualFftError):
    kind = "unknown_precision"


class LengthMismatchError(DualFftError):
    kind = "length_mismatch"


class ZeroReferenceError(DualFftError):
    kind = "zero_reference"


class Strategy(str, Enum):
    STANDARD = "standard"
    LINZER_FEIG = "lf"
    COSINE = "cosine"
    DUAL_SELECT = "dual"

    @classmethod
    def _missing_(cls, value: object):
        if isinstance(value, str):
            key = value.strip().lower().replace("-", "_")
            return _STRATEGY_ALIASES.get(key)
        return None

    @property
    def label(self) -> str:
        return _STRATEGY_LABELS[self]

    @property
    def uses_fma(self) -> bool:
        return self is not Strategy.STANDARD


_STRATEGY_ALIASES = {
    "standard": Strategy.STANDARD,
    "lf": Strategy.LINZER_FEIG,
    "linzer_feig": Strategy.LINZER_FEIG,
    "linzerfeig": Strategy.LINZER_FEIG,
    "cos": Strategy.COSINE,
    "cosine": Strategy.COSINE,
    "dual": Strategy.DUAL_SELECT,
    "dual_select": Strategy.DUAL_SELECT,
    "dualselect": Strategy.DUAL_SELECT,
}

_STRATEGY_LABELS = {
    Strategy.STANDARD: "Standard",
    Strategy.LINZER_FEIG: "LinzerFeig",
    Strategy.COSINE: "Cosine",
    Strategy.DUAL_SELECT: "DualSelect",
}


def parse_strategy(value: Union[str, Strategy]) -> Strategy:
    try:
        return Strategy(value)
    except ValueError:
        raise UnknownStrategyError(f"unknown strategy: {value!r}") from None


class TwiddlePath(str, Enum):
    COS = "COS"   # (omega_r, omega_i/omega_r)
    SIN = "SIN"   # (omega_i, omega_r/omega_i)


# integer codes used in table columns
PATH_NONE = -1
PATH_COS = 0
PATH_SIN = 1

PATH_BY_CODE = {PATH_COS: TwiddlePath.COS, PATH_SIN: TwiddlePath.SIN}


class Metric(str, Enum):
    ROUNDTRIP = "roundtrip"
    FORWARD_VS_ORACLE = "forward_vs_oracle"

    @classmethod
    def _missing_(cls, value: object):
        if isinstance(value, str) and value.strip().lower() == "forward":
            return cls.FORWARD_VS_ORACLE
        return None


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"
    HUMAN = "human"


Real = TypeVar("Real", float, np.ndarray)


@dataclass(frozen=True)
class ComplexSample(Generic[Real]):
    """One complex value, or a batch of them when re/im are arrays."""
    re: Real
    im: Real


@dataclass(frozen=True)
class SampleBuffer:
    re: np.ndarray
    im: np.ndarray

    def __post_init__(self) -> None:
        re = np.ascontiguousarray(self.re, dtype=np.float64)
        im = np.ascontiguousarray(self.im, dtype=np.float64)
        if re.ndim != 1 or re.shape != im.shape:
            raise LengthMismatchError(f"re/im shapes differ: {re.shape} vs {im.shape}")
        object.__setattr__(self, "re", re)
        object.__setattr__(self, "im", im)

    def __len__(self) -> int:
        return int(self.re.shape[0])

    @classmethod
    def from_complex(cls, values) -> "SampleBuffer":
        z = np.asarray(values, dtype=np.complex128).ravel()
        return cls(re=z.real.copy(), im=z.imag.copy())

    @classmethod
    def zeros(cls, n: int) -> "SampleBuffer":
        return cls(re=np.zeros(n), im=np.zeros(n))

    def to_complex(self) -> np.ndarray:
        return self.re + 1j * self.im

    def conj(self) -> "SampleBuffer":
        return SampleBuffer(re=self.re, im=-self.im)
