from __future__ import annotations

import threading
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import List, Tuple

from engine.errors import DepthError
from engine.exact_values import GaussianRat

__all__ = ["MAX_INDEX", "bernoulli_number", "bernoulli_poly_coefficients", "bernoulli_poly_eval"]

MAX_INDEX = 256

# B_0..B_k, grown under the lock; entries are never rewritten once appended.
_numbers: List[Fraction] = [Fraction(1)]
_lock = threading.Lock()


def _check_index(n: int) -> None:
    if n < 0:
        raise DepthError(f"Bernoulli index must be >= 0, got {n}")
    if n > MAX_INDEX:
        raise DepthError(f"Bernoulli index {n} exceeds the supported maximum {MAX_INDEX}")


def bernoulli_number(n: int) -> Fraction:
    """
    Exact B_n from  sum_{k=0}^{n} C(n+1, k) B_k = 0,  B_0 = 1.
    Convention: B_1 = -1/2, so that B_n(0) = B_n.
    """
    _check_index(n)
    if n < len(_numbers):
        return _numbers[n]
    with _lock:
        for m in range(len(_numbers), n + 1):
            s = sum((comb(m + 1, k) * _numbers[k] for k in range(m)), Fraction(0))
            _numbers.append(-s / (m + 1))
    return _numbers[n]


@lru_cache(maxsize=None)
def bernoulli_poly_coefficients(n: int) -> Tuple[Fraction, ...]:
    """Coefficients of B_n(x), index k holding the coefficient of x^k."""
    _check_index(n)
    # B_n(x) = sum_k C(n, k) B_k x^(n-k)
    return tuple(comb(n, n - k) * bernoulli_number(n - k) for k in range(n + 1))


@lru_cache(maxsize=65536)
def _eval_cached(n: int, z: GaussianRat) -> GaussianRat:
    coeffs = bernoulli_poly_coefficients(n)
    acc = GaussianRat(coeffs[n])
    for k in range(n - 1, -1, -1):
        acc = acc * z + coeffs[k]
    return acc


def bernoulli_poly_eval(n: int, z) -> GaussianRat:
    """Exact B_n(z) for a Gaussian rational (or plain rational) z, via Horner."""
    _check_index(n)
    return _eval_cached(n, GaussianRat.coerce(z))
