"""Bessel functions of the first kind: values, derivatives, and zeros.

Evaluation is delegated to scipy.special (integer order, real argument),
which meets the 1e-13 accuracy contract over the supported range.  Zeros
are located here by interlacing brackets refined with Brent's method:
the n-th zeros of consecutive orders strictly interlace, so each row of
zeros brackets the next order's row.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq
from scipy.special import jv

__all__ = ["BesselEval", "BesselRangeError", "bessel_j", "bessel_zero", "jn_table", "jn_signed"]

MAX_ORDER = 60
MAX_ARG = 1.0e3
MAX_ZERO_INDEX = 20


class BesselRangeError(ValueError):
    """Raised for orders or arguments outside the supported range."""


@dataclass(frozen=True)
class BesselEval:
    """J_k(x) together with its derivative at the same point."""

    order: int
    argument: float
    value: float
    derivative: float


def jn_table(kmax: int, x: np.ndarray) -> np.ndarray:
    """J_k(x) for k = 0..kmax as a (kmax+1, len(x)) array."""
    orders = np.arange(kmax + 1)
    return jv(orders[:, None], np.asarray(x, dtype=float)[None, :])


def jn_signed(k: int, x) -> np.ndarray:
    """J_k for signed integer order via J_{-k} = (-1)^k J_k."""
    ka = abs(k)
    sign = 1.0 if (k >= 0 or ka % 2 == 0) else -1.0
    return sign * jv(ka, x)


def bessel_j(k: int, x: float) -> BesselEval:
    """Evaluate J_k(x) and J_k'(x) for integer k, x >= 0.

    The derivative uses J_k' = (J_{k-1} - J_{k+1}) / 2, which is exact
    for all integer orders.
    """
    if abs(k) > MAX_ORDER or not (0.0 <= x <= MAX_ARG):
        raise BesselRangeError(f"unsupported range: order {k}, argument {x}")
    value = float(jn_signed(k, x))
    deriv = 0.5 * float(jn_signed(k - 1, x) - jn_signed(k + 1, x))
    return BesselEval(order=k, argument=float(x), value=value, derivative=deriv)


def _refine_zero(k: int, lo: float, hi: float) -> float:
    root = brentq(lambda t: jv(k, t), lo, hi, xtol=1e-14, rtol=4e-16)
    # one Newton polish with the exact derivative
    d = 0.5 * (jn_signed(k - 1, root) - jn_signed(k + 1, root))
    if d != 0.0:
        step = jv(k, root) / d
        if abs(step) < 0.5 * (hi - lo):
            root -= step
    return float(root)


@lru_cache(maxsize=None)
def _zero_row(k: int) -> tuple[float, ...]:
    """Positive zeros of J_k, enough to seed the interlacing recursion."""
    count = MAX_ZERO_INDEX + (MAX_ORDER - k) + 1
    if k == 0:
        zeros = []
        x, fx = 0.5, float(jv(0, 0.5))
        while len(zeros) < count:
            x1 = x + 0.5
            f1 = float(jv(0, x1))
            if fx == 0.0:
                zeros.append(x)
            elif fx * f1 < 0.0:
                zeros.append(_refine_zero(0, x, x1))
            x, fx = x1, f1
        return tuple(zeros)
    prev = _zero_row(k - 1)
    return tuple(_refine_zero(k, prev[i], prev[i + 1]) for i in range(count))


def bessel_zero(k: int, n: int) -> float:
    """n-th positive zero j_{k,n} of J_k (n = 1 is the first)."""
    if not (0 <= k <= MAX_ORDER and 1 <= n <= MAX_ZERO_INDEX):
        raise BesselRangeError(f"unsupported range: order {k}, zero index {n}")
    return _zero_row(k)[n - 1]
