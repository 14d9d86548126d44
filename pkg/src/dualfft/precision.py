"""Rounded arithmetic at FP16, FP32 and FP64 carried on float64.

Every value lives widened in a float64 carrier and is re-rounded into the
working format after each operation. Operations accept scalars or numpy
arrays; arrays are processed elementwise and counted per element.
"""
from __future__ import annotations
from dataclasses import dataclass, replace
from enum import Enum
from typing import Tuple, Union

import numpy as np

from .types import UnknownPrecisionError

ArrayLike = Union[float, np.ndarray]

# Veltkamp splitting constant for float64: 2**27 + 1
_SPLITTER = 134217729.0
# operands above this may overflow the split; they take the plain carrier path
_SPLIT_LIMIT = 2.0 ** 995


class Precision(str, Enum):
    FP16 = "fp16"
    FP32 = "fp32"
    FP64 = "fp64"

    @classmethod
    def _missing_(cls, value: object):
        if isinstance(value, str):
            key = value.strip().lower()
            for member in cls:
                if key in (member.value, member.name.lower(), _ALIASES.get(member)):
                    return member
        return None

    @property
    def dtype(self) -> type:
        return _DTYPES[self]

    @property
    def significand_bits(self) -> int:
        return _SIGNIFICAND_BITS[self]

    @property
    def machine_epsilon(self) -> float:
        """Unit roundoff: half the gap between 1 and the next value."""
        return 2.0 ** -self.significand_bits

    @property
    def itemsize(self) -> int:
        return np.dtype(self.dtype).itemsize


_DTYPES = {Precision.FP16: np.float16, Precision.FP32: np.float32, Precision.FP64: np.float64}
_SIGNIFICAND_BITS = {Precision.FP16: 11, Precision.FP32: 24, Precision.FP64: 53}
_ALIASES = {Precision.FP16: "half", Precision.FP32: "single", Precision.FP64: "double"}


def parse_precision(value: Union[str, Precision]) -> Precision:
    try:
        return Precision(value)
    except ValueError:
        raise UnknownPrecisionError(f"unknown precision: {value!r}") from None


@dataclass
class OpCounter:
    fma_count: int = 0
    add_count: int = 0
    mul_count: int = 0

    def reset(self) -> None:
        self.fma_count = 0
        self.add_count = 0
        self.mul_count = 0

    def snapshot(self) -> "OpCounter":
        return replace(self)

    def since(self, earlier: "OpCounter") -> "OpCounter":
        return OpCounter(
            fma_count=self.fma_count - earlier.fma_count,
            add_count=self.add_count - earlier.add_count,
            mul_count=self.mul_count - earlier.mul_count,
        )


def _carrier(x: ArrayLike) -> np.ndarray:
    return np.asarray(x, dtype=np.float64)


def _unwrap(out: np.ndarray, *inputs: ArrayLike) -> ArrayLike:
    if any(isinstance(v, np.ndarray) and v.ndim > 0 for v in inputs):
        return out
    return np.float64(out)


def _round_array(x: np.ndarray, p: Precision) -> np.ndarray:
    if p is Precision.FP64:
        return x
    with np.errstate(over="ignore", invalid="ignore", under="ignore"):
        return x.astype(p.dtype).astype(np.float64)


def round_to(x: ArrayLike, p: Union[str, Precision]) -> ArrayLike:
    """Round to nearest, ties to even, into ``p``; returned widened to float64.

    Overflow gives signed infinity, subnormals are kept, NaN stays NaN.
    """
    p = parse_precision(p)
    return _unwrap(_round_array(_carrier(x), p), x)


def _two_sum(a: np.ndarray, b: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    s = a + b
    bb = s - a
    err = (a - (s - bb)) + (b - bb)
    return s, err


def _split(a: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


def _two_product(a: np.ndarray, b: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    err = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, err


def _to_odd(s: np.ndarray, err: np.ndarray) -> np.ndarray:
    """Turn round-to-nearest ``s`` (exact value s + err) into round-to-odd."""
    s = np.atleast_1d(s)
    even = (s.view(np.int64) & 1) == 0
    bump = (err != 0) & even & np.isfinite(s)
    toward = np.where(err > 0, np.inf, -np.inf)
    return np.where(bump, np.nextafter(s, toward), s)


def _fma_array(a: np.ndarray, b: np.ndarray, c: np.ndarray, p: Precision) -> np.ndarray:
    a, b, c = np.broadcast_arrays(np.atleast_1d(a), np.atleast_1d(b), np.atleast_1d(c))
    with np.errstate(all="ignore"):
        plain = a * b + c
        finite = np.isfinite(a) & np.isfinite(b) & np.isfinite(c) & np.isfinite(plain)
        if p is Precision.FP64:
            finite &= (np.abs(a) < _SPLIT_LIMIT) & (np.abs(b) < _SPLIT_LIMIT)
            uh, ul = _two_product(a, b)
            th, tl = _two_sum(c, uh)
            vs, ve = _two_sum(tl, ul)
            exact = th + _to_odd(vs, ve)
        else:
            # operands carry at most 24 significand bits: the product is exact
            s, err = _two_sum(a * b, c)
            exact = _round_array(_to_odd(s, err), p)
        out = np.where(finite, exact, _round_array(plain, p))
    return out


class ArithmeticContext:
    """Rounded add/sub/mul/FMA at one precision with operation counters.

    Single-owner: counters mutate on every call.
    """

    def __init__(self, precision: Union[str, Precision]) -> None:
        self.precision = parse_precision(precision)
        self.counters = OpCounter()

    def __repr__(self) -> str:
        return f"ArithmeticContext({self.precision.value}, {self.counters})"

    def round(self, x: ArrayLike) -> ArrayLike:
        """Uncounted conversion into the working format."""
        return _unwrap(_round_array(_carrier(x), self.precision), x)

    def _binary(self, a: ArrayLike, b: ArrayLike, op) -> np.ndarray:
        with np.errstate(all="ignore"):
            exact = op(_carrier(a), _carrier(b))
        return _round_array(exact, self.precision)

    def add(self, a: ArrayLike, b: ArrayLike) -> ArrayLike:
        out = self._binary(a, b, np.add)
        self.counters.add_count += int(out.size)
        return _unwrap(out, a, b)

    def sub(self, a: ArrayLike, b: ArrayLike) -> ArrayLike:
        out = self._binary(a, b, np.subtract)
        self.counters.add_count += int(out.size)
        return _unwrap(out, a, b)

    def mul(self, a: ArrayLike, b: ArrayLike) -> ArrayLike:
        out = self._binary(a, b, np.multiply)
        self.counters.mul_count += int(out.size)
        return _unwrap(out, a, b)

    def fma(self, a: ArrayLike, b: ArrayLike, c: ArrayLike) -> ArrayLike:
        """a*b + c with a single rounding."""
        out = _fma_array(_carrier(a), _carrier(b), _carrier(c), self.precision)
        self.counters.fma_count += int(out.size)
        if any(isinstance(v, np.ndarray) and v.ndim > 0 for v in (a, b, c)):
            return out
        return np.float64(out[0])


def fma_rounded(a: ArrayLike, b: ArrayLike, c: ArrayLike, ctx: ArithmeticContext) -> ArrayLike:
    return ctx.fma(a, b, c)


def add_rounded(a: ArrayLike, b: ArrayLike, ctx: ArithmeticContext) -> ArrayLike:
    return ctx.add(a, b)


def sub_rounded(a: ArrayLike, b: ArrayLike, ctx: ArithmeticContext) -> ArrayLike:
    return ctx.sub(a, b)


def mul_rounded(a: ArrayLike, b: ArrayLike, ctx: ArithmeticContext) -> ArrayLike:
    return ctx.mul(a, b)
