"""Bohr correspondence between analytic series and general Dirichlet series.

A tau-analytic Fourier series sum a_n gamma_n maps term-by-term to the
general Dirichlet series sum b_q q^{-s} over positive rationals q >= 1, with
b at q = ordinal(n) equal to a_n.  Frequencies are stored as exact rationals,
never as floating log q: distinct rationals can have arbitrarily close
logarithms, so term identity must stay exact.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping

from mpmath import mp

from . import primes
from .errors import NotAnalytic
from .multiindex import from_positive_rational, ordinal
from .series import FourierSeries


class DirichletSeries:
    """Immutable sparse map q -> b_q with exact rational q >= 1."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Fraction, complex] | Iterable[tuple[Fraction, complex]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Fraction, complex] = {}
        for q, b in items:
            q = Fraction(q)
            if q < 1:
                raise ValueError(f"Dirichlet frequency q must satisfy q >= 1, got {q}")
            b = complex(b)
            if b != 0:
                acc[q] = acc.get(q, 0) + b
        self._terms = {q: b for q, b in acc.items() if b != 0}

    def coeff(self, q) -> complex:
        return self._terms.get(Fraction(q), 0j)

    def items(self) -> list[tuple[Fraction, complex]]:
        return list(self._terms.items())

    def sorted_items(self) -> list[tuple[Fraction, complex]]:
        return sorted(self._terms.items(), key=lambda kv: kv[0])

    def frequencies(self) -> set[Fraction]:
        return set(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, DirichletSeries) and self._terms == other._terms

    def __repr__(self) -> str:
        body = ", ".join(f"{q}: {b:.6g}" for q, b in self.sorted_items()[:6])
        more = "" if len(self) <= 6 else f", ... ({len(self)} terms)"
        return f"DirichletSeries({{{body}{more}}})"


def to_dirichlet(f: FourierSeries) -> DirichletSeries:
    """b at ordinal(n) = a_n for every term; requires every ordinal >= 1."""
    acc = {}
    for n, a in f.items():
        q = ordinal(n)
        if q < 1:
            raise NotAnalytic(f"index {n} has ordinal {q} < 1", index=n)
        acc[q] = a
    return DirichletSeries(acc)


def from_dirichlet(D: DirichletSeries, prime_bound: int = primes.DEFAULT_PRIME_BOUND) -> FourierSeries:
    """Exact inverse of to_dirichlet, factoring each frequency."""
    return FourierSeries({from_positive_rational(q, prime_bound): b for q, b in D.items()})


def evaluate_halfplane(D: DirichletSeries, s: complex, precision_bits: int = 128) -> complex:
    """sum_q b_q q^{-s} at s = sigma + it with sigma >= 0.

    The sum is finite so it converges everywhere; log q is taken at
    ``precision_bits`` so the oscillatory factor e^{-it log q} keeps full
    phase accuracy.  Re(s) = +inf returns the constant term b_1.
    """
    s = complex(s)
    if math.isinf(s.real):
        return complex(D.coeff(Fraction(1)))
    out = 0j
    with mp.workprec(precision_bits + 10):
        for q, b in D.items():
            lq = mp.log(q.numerator) - mp.log(q.denominator)
            mag = float(mp.exp(-s.real * lq))
            theta = -s.imag * lq
            out += b * mag * complex(mp.cos(theta), mp.sin(theta))
    return out


def is_classical(D: DirichletSeries) -> bool:
    """True when every frequency is an integer (ordinary Dirichlet series)."""
    return all(q.denominator == 1 for q in D.frequencies())
