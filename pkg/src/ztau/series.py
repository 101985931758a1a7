"""Sparse Fourier series on the infinite torus.

A series is a finite map MultiIndex -> complex coefficient, i.e. a
trigonometric polynomial f = sum_n a_n gamma_n with gamma_n(x) = e^{i n.x}.
Products are coefficient convolutions; analytic projections, evaluation at
points sigma.lambda of the maximal-ideal disk, Cesaro means and tensor-grid
quadrature for norms and log-integrals all live here.

Grid conventions
----------------
Quadrature identifies the d active coordinates of a series with T^d and uses
the uniform tensor grid theta_j = 2*pi*j/M.  Evaluation on that grid is an
inverse FFT of the coefficient array (exact at the nodes), and the uniform
trapezoid rule on a periodic grid is the plain mean, which is spectrally
accurate for smooth integrands.  Reading coefficients back off a grid
resolves |n_k| <= M/2 - 1; the Nyquist row is reported as unresolved.
"""

from __future__ import annotations

import cmath
import enum
import math
from typing import Iterable, Mapping

import numpy as np
from mpmath import mp

from . import primes
from .errors import (
    DimensionTooLarge,
    NotRealSymmetric,
    TermBudgetExceeded,
    WeightNearZero,
)
from .multiindex import MultiIndex, IndexClass, classify, ordinal, tau_mpf

DEFAULT_TERM_BUDGET = 10**6
DEFAULT_GRID_POINTS = 256
DEFAULT_MAX_DIMS = 6
DEFAULT_WEIGHT_FLOOR = 1e-12
# hard cap on total grid cells so a large max_dims cannot exhaust memory
GRID_CELL_BUDGET = 1 << 26


class FourierSeries:
    """Immutable sparse series; zero coefficients are never stored."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[MultiIndex, complex] | Iterable[tuple[MultiIndex, complex]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[MultiIndex, complex] = {}
        for n, a in items:
            if not isinstance(n, MultiIndex):
                raise TypeError(f"series keys must be MultiIndex, got {type(n).__name__}")
            a = complex(a)
            if a != 0:
                acc[n] = acc.get(n, 0) + a
        self._terms = {n: a for n, a in acc.items() if a != 0}

    @classmethod
    def constant(cls, c) -> "FourierSeries":
        return cls({MultiIndex.zero(): c})

    @classmethod
    def character(cls, n: MultiIndex, c=1.0) -> "FourierSeries":
        return cls({n: c})

    def coeff(self, n: MultiIndex) -> complex:
        return self._terms.get(n, 0j)

    def support(self) -> set[MultiIndex]:
        return set(self._terms)

    def items(self) -> list[tuple[MultiIndex, complex]]:
        return list(self._terms.items())

    def sorted_items(self) -> list[tuple[MultiIndex, complex]]:
        """Terms ascending in the prime-logarithm order (deterministic output)."""
        return sorted(self._terms.items(), key=lambda kv: ordinal(kv[0]))

    def active_coords(self) -> tuple[int, ...]:
        out: set[int] = set()
        for n in self._terms:
            out.update(n.coords())
        return tuple(sorted(out))

    def l2_norm(self) -> float:
        return math.sqrt(sum(abs(a) ** 2 for a in self._terms.values()))

    def l1_coeff_norm(self) -> float:
        return sum(abs(a) for a in self._terms.values())

    def prune(self, threshold: float = 0.0) -> "FourierSeries":
        """Drop coefficients with |a| <= threshold.  Never applied implicitly."""
        return FourierSeries({n: a for n, a in self._terms.items() if abs(a) > threshold})

    def is_real_symmetric(self, tol: float = 1e-10) -> bool:
        """True when conj(a(-n)) matches a(n) within tol and a(0) is near-real."""
        z = self.coeff(MultiIndex.zero())
        if abs(z.imag) > tol:
            return False
        for n, a in self._terms.items():
            if abs(a - self._terms.get(-n, 0j).conjugate()) > tol:
                return False
        return True

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, FourierSeries) and self._terms == other._terms

    def __add__(self, other: "FourierSeries") -> "FourierSeries":
        acc = dict(self._terms)
        for n, a in other._terms.items():
            acc[n] = acc.get(n, 0) + a
        return FourierSeries(acc)

    def __sub__(self, other: "FourierSeries") -> "FourierSeries":
        return self + other.scale(-1)

    def scale(self, c) -> "FourierSeries":
        return FourierSeries({n: c * a for n, a in self._terms.items()})

    def __mul__(self, other: "FourierSeries") -> "FourierSeries":
        return multiply(self, other)

    def __repr__(self) -> str:
        body = ", ".join(f"{n}: {a:.6g}" for n, a in self.sorted_items()[:6])
        more = "" if len(self) <= 6 else f", ... ({len(self)} terms)"
        return f"FourierSeries({{{body}{more}}})"


def multiply(f: FourierSeries, g: FourierSeries, term_budget: int = DEFAULT_TERM_BUDGET) -> FourierSeries:
    """Coefficient convolution; support(fg) lies in support(f) + support(g)."""
    acc: dict[MultiIndex, complex] = {}
    for n, a in f.items():
        for m, b in g.items():
            k = n + m
            acc[k] = acc.get(k, 0) + a * b
        # 2x headroom: exact cancellations may still prune the final support
        if len(acc) > 2 * term_budget:
            raise TermBudgetExceeded(
                f"intermediate product reached {len(acc)} terms, budget {term_budget}"
            )
    out = FourierSeries(acc)
    if len(out) > term_budget:
        raise TermBudgetExceeded(f"{len(out)} product terms exceed budget {term_budget}")
    return out


def conjugate(f: FourierSeries) -> FourierSeries:
    """Complex conjugate of the function: coefficients conjugated, indices negated."""
    return FourierSeries({-n: a.conjugate() for n, a in f.items()})


def exp_truncated(f: FourierSeries, order: int, term_budget: int = DEFAULT_TERM_BUDGET) -> FourierSeries:
    """Partial sum sum_{k<=order} f^k / k! of the series exponential."""
    out = FourierSeries.constant(1.0)
    term = FourierSeries.constant(1.0)
    for k in range(1, order + 1):
        term = multiply(term, f, term_budget).scale(1.0 / k)
        out = out + term
    return out


class Region(enum.Enum):
    """Support regions used by analytic projections."""

    TAU_NONNEG = "tau_nonneg"        # ordinal >= 1
    TAU_POSITIVE = "tau_positive"    # ordinal > 1
    ZPLUS = "zplus"                  # every coordinate >= 0
    ZPLUS_SYM = "zplus_union_minus"  # all coordinates >= 0 or all <= 0


def _in_region(n: MultiIndex, region: Region) -> bool:
    if region is Region.TAU_NONNEG:
        return ordinal(n) >= 1
    if region is Region.TAU_POSITIVE:
        return ordinal(n) > 1
    if region is Region.ZPLUS:
        return classify(n) is IndexClass.ZPLUS
    if region is Region.ZPLUS_SYM:
        vals = [v for _, v in n.entries]
        return all(v >= 0 for v in vals) or all(v <= 0 for v in vals)
    raise ValueError(f"unknown region {region!r}")


def project(f: FourierSeries, region: Region) -> FourierSeries:
    """Restriction of the terms of f to the given support region."""
    return FourierSeries({n: a for n, a in f.items() if _in_region(n, region)})


def is_analytic(f: FourierSeries) -> bool:
    """True when every support index has ordinal >= 1 (tau-analytic)."""
    return all(ordinal(n) >= 1 for n in f.support())


def herglotz_completion(u: FourierSeries, tol: float = 1e-10) -> FourierSeries:
    """Analytic completion A = a(0) + 2*sum_{tau(n)>0} a(n) gamma_n of a real series.

    The real part of A, as a series (A + conj(A))/2, reproduces u exactly on
    coefficients.  Requires u real-symmetric within tol.
    """
    if not u.is_real_symmetric(tol):
        raise NotRealSymmetric("completion input is not a real-symmetric series")
    zero = MultiIndex.zero()
    acc: dict[MultiIndex, complex] = {}
    z = u.coeff(zero)
    if z != 0:
        acc[zero] = complex(z.real)
    for n, a in u.items():
        if not n.is_zero and ordinal(n) > 1:
            acc[n] = 2 * a
    return FourierSeries(acc)


class DiskPoint:
    """A point sigma.lambda of the maximal-ideal disk.

    ``sigma`` in [0, inf] is the radial parameter (r_k = p_k^{-sigma});
    ``phases`` maps coordinates to unit-modulus lambda_k, defaulting to 1.
    """

    __slots__ = ("sigma", "phases")

    def __init__(self, sigma: float, phases: Mapping[int, complex] | None = None):
        sigma = float(sigma)
        if sigma < 0 or math.isnan(sigma):
            raise ValueError(f"sigma must lie in [0, inf], got {sigma}")
        ph = {}
        for k, lam in (phases or {}).items():
            lam = complex(lam)
            if abs(abs(lam) - 1.0) > 1e-12:
                raise ValueError(f"phase at coordinate {k} is not unit modulus: {lam}")
            ph[int(k)] = lam
        self.sigma = sigma
        self.phases = ph

    def phase(self, k: int) -> complex:
        return self.phases.get(k, 1.0 + 0j)

    def __repr__(self) -> str:
        return f"DiskPoint(sigma={self.sigma}, phases={self.phases})"


def kronecker_point(sigma: float, t: float, coords: Iterable[int], precision_bits: int = 128) -> DiskPoint:
    """The flow point sigma.(p^{-it}): lambda_k = exp(-i t log p_k).

    Prime logarithms and the angle reduction are done at ``precision_bits``
    so large |t| does not lose phase accuracy.
    """
    phases = {}
    with mp.workprec(precision_bits + 10):
        for k in coords:
            theta = -t * mp.log(primes.nth_prime(int(k)))
            phases[int(k)] = complex(mp.cos(theta), mp.sin(theta))
    return DiskPoint(sigma, phases)


def evaluate(f: FourierSeries, pt: DiskPoint, precision_bits: int = 128) -> complex:
    """sum_n a_n e^{-sigma tau(n)} prod_k lambda_k^{n_k}.

    At sigma = inf this is the mean coefficient a(0).  The radial multiplier
    uses tau at ``precision_bits``; its relative error is below
    sigma * 2^(-precision_bits+8) per term.
    """
    if math.isinf(pt.sigma):
        return complex(f.coeff(MultiIndex.zero()))
    out = 0j
    for n, a in f.items():
        if pt.sigma != 0.0 and not n.is_zero:
            with mp.workprec(precision_bits + 10):
                radial = float(mp.exp(-pt.sigma * tau_mpf(n, precision_bits)))
        else:
            radial = 1.0
        ph = 1.0 + 0j
        for k, v in n.entries:
            ph *= pt.phase(k) ** v
        out += a * radial * ph
    return out


def translate(f: FourierSeries, shifts: Mapping[int, float]) -> FourierSeries:
    """Translate by t (angles per coordinate): coefficient a(n) picks up e^{i n.t}."""
    out = {}
    for n, a in f.items():
        angle = sum(v * shifts.get(k, 0.0) for k, v in n.entries)
        out[n] = a * cmath.exp(1j * angle)
    return FourierSeries(out)


def cesaro_mean(f: FourierSeries, x: float, precision_bits: int = 128) -> FourierSeries:
    """Weighted partial sum: term n scaled by (1 - |tau(n)|/x), dropped when |tau(n)| >= x.

    Defined through |tau| so the same operator acts on two-sided series; on
    analytic series this is the plain (1 - tau(n)/x) summation method.
    """
    if not (x > 0):
        raise ValueError(f"Cesaro parameter x must be positive, got {x}")
    acc = {}
    for n, a in f.items():
        t = abs(float(tau_mpf(n, precision_bits)))
        if t < x:
            acc[n] = a * (1.0 - t / x)
    return FourierSeries(acc)


# ---------------------------------------------------------------------------
# Tensor-grid quadrature over the active coordinates
# ---------------------------------------------------------------------------

def _check_grid(d: int, grid_points: int, max_dims: int) -> None:
    if d > max_dims:
        raise DimensionTooLarge(f"series touches {d} coordinates, max_dims is {max_dims}")
    if grid_points < 2:
        raise ValueError(f"grid_points must be >= 2, got {grid_points}")
    if d > 0 and grid_points**d > GRID_CELL_BUDGET:
        raise DimensionTooLarge(
            f"grid of {grid_points}^{d} cells exceeds the {GRID_CELL_BUDGET} cell cap"
        )


def grid_values(
    f: FourierSeries,
    grid_points: int = DEFAULT_GRID_POINTS,
    max_dims: int = DEFAULT_MAX_DIMS,
    coords: tuple[int, ...] | None = None,
) -> tuple[np.ndarray, tuple[int, ...]]:
    """Values of f on the uniform tensor grid of its active coordinates.

    Returns (values, coords); values has shape (grid_points,)*d and entry
    values[j1,...,jd] = f at angles theta_i = 2*pi*j_i/grid_points.  Exact at
    the nodes (characters restricted to the grid are computed by inverse FFT).
    """
    if coords is None:
        coords = f.active_coords()
    d = len(coords)
    _check_grid(d, grid_points, max_dims)
    if d == 0:
        return np.array(complex(f.coeff(MultiIndex.zero()))).reshape(()), coords
    pos = {k: i for i, k in enumerate(coords)}
    c = np.zeros((grid_points,) * d, dtype=complex)
    for n, a in f.items():
        key = [0] * d
        for k, v in n.entries:
            key[pos[k]] = v % grid_points
        c[tuple(key)] += a
    values = np.fft.ifftn(c) * grid_points**d
    return values, coords


def grid_coefficients(
    values: np.ndarray, tol: float = 0.0, coords: tuple[int, ...] | None = None
) -> tuple[dict[MultiIndex, complex], list[MultiIndex]]:
    """Discrete Fourier coefficients of grid samples, mapped back to indices.

    Bin j of an M-point axis is assigned frequency j for j <= M/2 - 1 and
    j - M above; the Nyquist row (frequency -M/2, even M) cannot distinguish
    +-M/2 and is returned separately as unresolved.  Only coefficients with
    |c| > tol are kept.
    """
    d = values.ndim
    m = values.shape[0] if d else 1
    coeff_arr = np.fft.fftn(values) / values.size
    coeffs: dict[MultiIndex, complex] = {}
    unresolved: list[MultiIndex] = []
    if d == 0:
        c = complex(coeff_arr)
        if abs(c) > tol:
            coeffs[MultiIndex.zero()] = c
        return coeffs, unresolved
    if coords is None:
        coords = tuple(range(1, d + 1))
    nyquist = -(m // 2) if m % 2 == 0 else None
    for bins in np.argwhere(np.abs(coeff_arr) > tol):
        c = complex(coeff_arr[tuple(bins)])
        freqs = [int(b) if b <= (m - 1) // 2 else int(b) - m for b in bins]
        idx = MultiIndex((coords[i], v) for i, v in enumerate(freqs) if v != 0)
        if nyquist is not None and any(v == nyquist for v in freqs):
            unresolved.append(idx)
        else:
            coeffs[idx] = c
    return coeffs, unresolved


def lp_norm(
    f: FourierSeries,
    p,
    grid_points: int = DEFAULT_GRID_POINTS,
    max_dims: int = DEFAULT_MAX_DIMS,
) -> float:
    """L^p norm for p in {1, 2, inf}.

    p = 2 is the exact Parseval value sqrt(sum |a_n|^2); p = 1 and p = inf are
    tensor-grid estimates (periodic trapezoid = mean, resp. grid maximum).
    """
    if p == 2:
        return f.l2_norm()
    if p not in (1, math.inf):
        raise ValueError(f"p must be 1, 2 or inf, got {p}")
    values, coords = grid_values(f, grid_points, max_dims)
    mags = np.abs(values)
    if not coords:
        return float(mags)
    return float(mags.max()) if p == math.inf else float(mags.mean())


def log_integral(
    w: FourierSeries,
    grid_points: int = DEFAULT_GRID_POINTS,
    max_dims: int = DEFAULT_MAX_DIMS,
    floor: float = DEFAULT_WEIGHT_FLOOR,
) -> float:
    """Trapezoid estimate of the mean of log w over the active-coordinate torus.

    The input must be a real-symmetric series whose grid values stay above
    ``floor``; weights that graze zero are rejected (WeightNearZero) because
    log-integrability cannot be certified from grid samples.
    """
    if not w.is_real_symmetric(1e-9):
        raise NotRealSymmetric("log_integral input must be a real-symmetric series")
    values, coords = grid_values(w, grid_points, max_dims)
    real = np.real(values) if coords else np.array([float(np.real(values))])
    lo = float(real.min())
    if lo <= floor:
        raise WeightNearZero(
            f"grid minimum {lo:.3e} is at or below the floor {floor:.1e}", minimum=lo
        )
    return float(np.log(real).mean())
