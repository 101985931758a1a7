"""Finitely supported integer multi-indices and the prime-logarithm order.

An index n = (n_1, ..., n_k, 0, 0, ...) in Z^infinity is ordered by its
ordinal tau(n) = sum_k n_k * log(p_k), where p_k is the k-th prime.  Unique
factorization makes q = prod p_k^{n_k} an exact positive rational carrying
tau(n) = log q, so all order decisions reduce to exact big-integer
cross-multiplication.  Floating tau is provided for numerics but is never
used for ordering.
"""

from __future__ import annotations

import enum
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, NamedTuple

from mpmath import mp

from . import primes
from .errors import NonPositiveRational


class MultiIndex:
    """Immutable canonical multi-index: sparse (coordinate, exponent) pairs.

    Coordinates are 1-based and strictly increasing; exponents are nonzero.
    Total order (<, <=, ...) is the prime-logarithm order.
    """

    __slots__ = ("_entries", "_hash")

    def __init__(self, entries: Iterable[tuple[int, int]] = ()):
        ent = tuple((int(k), int(v)) for k, v in entries)
        last = 0
        for k, v in ent:
            if k <= last:
                raise ValueError(f"coordinates must be strictly increasing, got {ent}")
            if v == 0:
                raise ValueError(f"zero exponent stored at coordinate {k}")
            last = k
        self._entries = ent
        self._hash = hash(ent)

    @classmethod
    def from_dense(cls, values: Iterable[int]) -> "MultiIndex":
        """Build from a dense sequence like [2, -1, 1]; zeros are dropped."""
        return cls((k, v) for k, v in enumerate(values, start=1) if v != 0)

    @classmethod
    def zero(cls) -> "MultiIndex":
        return _ZERO

    @classmethod
    def delta(cls, k: int) -> "MultiIndex":
        """The unit index with 1 at coordinate k."""
        return cls(((k, 1),))

    @property
    def entries(self) -> tuple[tuple[int, int], ...]:
        return self._entries

    @property
    def is_zero(self) -> bool:
        return not self._entries

    def coords(self) -> tuple[int, ...]:
        return tuple(k for k, _ in self._entries)

    def get(self, k: int) -> int:
        for kk, v in self._entries:
            if kk == k:
                return v
        return 0

    def dense(self, length: int | None = None) -> list[int]:
        n = self._entries[-1][0] if self._entries else 0
        if length is not None:
            n = max(n, length)
        out = [0] * n
        for k, v in self._entries:
            out[k - 1] = v
        return out

    def __add__(self, other: "MultiIndex") -> "MultiIndex":
        acc = dict(self._entries)
        for k, v in other._entries:
            s = acc.get(k, 0) + v
            if s == 0:
                acc.pop(k, None)
            else:
                acc[k] = s
        return MultiIndex(sorted(acc.items()))

    def __neg__(self) -> "MultiIndex":
        return MultiIndex((k, -v) for k, v in self._entries)

    def __sub__(self, other: "MultiIndex") -> "MultiIndex":
        return self + (-other)

    def __eq__(self, other) -> bool:
        return isinstance(other, MultiIndex) and self._entries == other._entries

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "MultiIndex") -> bool:
        return compare(self, other) < 0

    def __le__(self, other: "MultiIndex") -> bool:
        return compare(self, other) <= 0

    def __gt__(self, other: "MultiIndex") -> bool:
        return compare(self, other) > 0

    def __ge__(self, other: "MultiIndex") -> bool:
        return compare(self, other) >= 0

    def __repr__(self) -> str:
        return f"MultiIndex.from_dense({self.dense()})"

    def __str__(self) -> str:
        return "[" + ",".join(str(v) for v in self.dense()) + "]"


_ZERO = MultiIndex()


class IndexClass(enum.Enum):
    """Position of an index relative to the two positive semigroups."""

    ZPLUS = "in_zplus"            # every coordinate >= 0
    TAU_PLUS_ONLY = "in_ztau_plus_only"  # ordinal >= 1 but some coordinate < 0
    NEGATIVE = "negative"         # ordinal < 1


class TauValue(NamedTuple):
    value: float
    error_bound: float


def ordinal(n: MultiIndex) -> Fraction:
    """The exact rational q = prod p_k^{n_k} with log q = tau(n).

    q == 1 exactly when n == 0; by unique factorization the map is injective.
    """
    num = 1
    den = 1
    for k, v in n.entries:
        p = primes.nth_prime(k)
        if v > 0:
            num *= p**v
        else:
            den *= p ** (-v)
    return Fraction(num, den)


def compare(n: MultiIndex, m: MultiIndex) -> int:
    """-1, 0, +1 as tau(n) <, ==, > tau(m); exact integer cross-multiplication."""
    if n.entries == m.entries:
        return 0
    qn = ordinal(n)
    qm = ordinal(m)
    if qn == qm:
        return 0
    return -1 if qn < qm else 1

def abs_index(n: MultiIndex) -> MultiIndex:
    """The index with ordinal max(q, 1/q): n itself if tau(n) >= 0, else -n."""
    return -n if compare(n, _ZERO) < 0 else n


def add(n: MultiIndex, m: MultiIndex) -> MultiIndex:
    return n + m


def negate(n: MultiIndex) -> MultiIndex:
    return -n


def classify(n: MultiIndex) -> IndexClass:
    if all(v >= 0 for _, v in n.entries):
        return IndexClass.ZPLUS
    if ordinal(n) >= 1:
        return IndexClass.TAU_PLUS_ONLY
    return IndexClass.NEGATIVE


@lru_cache(maxsize=65536)
def _tau_mpf_cached(entries: tuple[tuple[int, int], ...], precision_bits: int):
    with mp.workprec(precision_bits + 10):
        t = mp.mpf(0)
        for k, v in entries:
            t += v * mp.log(primes.nth_prime(k))
        return t


def tau_mpf(n: MultiIndex, precision_bits: int = 128):
    """tau(n) as an mpmath float carrying at least ``precision_bits`` bits."""
    return _tau_mpf_cached(n.entries, precision_bits)


def tau_float(n: MultiIndex, precision_bits: int = 128) -> TauValue:
    """tau(n) rounded to binary64, with an a-priori absolute error bound.

    The bound covers the high-precision log-sum (one rounding per prime log
    plus the additions, each below 2^(1-precision_bits) relative) and the
    final rounding to double.  Exact zero is returned for n == 0.
    """
    if precision_bits < 53:
        raise ValueError("precision_bits must be >= 53")
    if n.is_zero:
        return TauValue(0.0, 0.0)
    t = tau_mpf(n, precision_bits)
    val = float(t)
    mag = sum(abs(v) * float(mp.log(primes.nth_prime(k))) for k, v in n.entries)
    bound = mag * (2.0 ** (1 - precision_bits)) * (2 + len(n.entries)) + abs(val) * 2.0**-53
    return TauValue(val, bound)


def from_positive_rational(q, prime_bound: int = primes.DEFAULT_PRIME_BOUND) -> MultiIndex:
    """The unique index n with ordinal(n) == q, by factoring numerator and denominator."""
    q = Fraction(q)
    if q <= 0:
        raise NonPositiveRational(f"expected a positive rational, got {q}")
    exps: dict[int, int] = {}
    for p, e in primes.factorize(q.numerator, prime_bound).items():
        exps[primes.prime_coordinate(p)] = e
    for p, e in primes.factorize(q.denominator, prime_bound).items():
        k = primes.prime_coordinate(p)
        exps[k] = exps.get(k, 0) - e
    return MultiIndex(sorted(exps.items()))
