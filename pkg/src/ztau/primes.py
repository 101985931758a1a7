"""Incremental prime sieve and bounded trial-division factorization.

The sieve grows on demand and is cached at module level.  Coordinates of
multi-indices are 1-based: coordinate k corresponds to the k-th prime.
"""

from __future__ import annotations

import bisect

from .errors import FactorizationLimit, NonPositiveRational

DEFAULT_PRIME_BOUND = 10**6

_primes: list[int] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
_sieved_below = 30


def _extend_sieve(limit: int) -> None:
    """Grow the cached prime list to cover [2, limit)."""
    global _sieved_below
    if limit <= _sieved_below:
        return
    sieve = bytearray([1]) * limit
    sieve[0:2] = b"\x00\x00"
    for p in range(2, int(limit**0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    _primes.clear()
    _primes.extend(i for i in range(2, limit) if sieve[i])
    _sieved_below = limit


def nth_prime(k: int) -> int:
    """The k-th prime, 1-based: nth_prime(1) == 2."""
    if k < 1:
        raise ValueError(f"prime index must be >= 1, got {k}")
    while len(_primes) < k:
        _extend_sieve(max(2 * _sieved_below, 64))
    return _primes[k - 1]


def primes_list(count: int) -> list[int]:
    """The first ``count`` primes."""
    nth_prime(max(count, 1))
    return _primes[:count]


def prime_coordinate(p: int) -> int:
    """Inverse of nth_prime for a known prime; raises if p is not prime."""
    while _sieved_below <= p:
        _extend_sieve(max(2 * _sieved_below, 2 * p))
    i = bisect.bisect_left(_primes, p)
    if i == len(_primes) or _primes[i] != p:
        raise ValueError(f"{p} is not prime")
    return i + 1


def factorize(n: int, bound: int = DEFAULT_PRIME_BOUND) -> dict[int, int]:
    """Factor a positive integer by trial division against the sieve.

    Returns {prime: exponent}.  Raises FactorizationLimit if a cofactor
    survives all primes below ``bound``: desk-scale inputs are expected to
    have small prime support, so no general-purpose factoring is attempted.
    """
    if n <= 0:
        raise NonPositiveRational(f"cannot factor non-positive integer {n}")
    out: dict[int, int] = {}
    if n == 1:
        return out
    k = 1
    while n > 1:
        p = nth_prime(k)
        if p * p > n:
            # remaining cofactor is prime
            if n >= bound:
                raise FactorizationLimit(
                    f"prime factor {n} exceeds bound {bound}", factor=n, bound=bound
                )
            out[n] = out.get(n, 0) + 1
            return out
        if p >= bound:
            raise FactorizationLimit(
                f"unfactored cofactor {n} with no prime below bound {bound}",
                factor=n,
                bound=bound,
            )
        while n % p == 0:
            n //= p
            out[p] = out.get(p, 0) + 1
        k += 1
    return out
