"""Poisson smoothing, its Gram matrices, and the half-plane Cauchy realization.

The smoothing family acts on a series as the Fourier multiplier
e^{-sigma |tau(n)|}; it is a contraction semigroup in sigma.  Finite sections
of the multiplier produce real symmetric positive matrices whose determinant
telescopes in the consecutive order gaps.  On the half-plane the same family
is realized by the Cauchy density sigma / (pi (sigma^2 + (t - t0)^2)), whose
oscillatory moments are computed by truncated trapezoid quadrature with an
explicit arctangent tail bound.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, NamedTuple

import numpy as np
from mpmath import mp

from .errors import DuplicateIndices, NotAnalytic, ToleranceUnachievable
from .multiindex import MultiIndex, tau_mpf
from .series import (
    DEFAULT_TERM_BUDGET,
    DiskPoint,
    FourierSeries,
    evaluate,
    exp_truncated,
    is_analytic,
    multiply,
)

MAX_QUADRATURE_SAMPLES = 1 << 27


def smoothing_multiplier(n: MultiIndex, sigma: float, precision_bits: int = 128) -> float:
    """e^{-sigma |tau(n)|}, the Fourier coefficient of the smoothing family at n."""
    if n.is_zero or sigma == 0.0:
        return 1.0
    if math.isinf(sigma):
        return 0.0
    with mp.workprec(precision_bits + 10):
        return float(mp.exp(-sigma * abs(tau_mpf(n, precision_bits))))


def smooth(f: FourierSeries, sigma: float, precision_bits: int = 128) -> FourierSeries:
    """Multiply each coefficient by e^{-sigma |tau(n)|}.

    sigma = 0 is the identity and sigma = inf collapses to the mean term; the
    multiplier never vanishes for finite sigma, so the support is unchanged.
    """
    sigma = float(sigma)
    if sigma < 0 or math.isnan(sigma):
        raise ValueError(f"sigma must lie in [0, inf], got {sigma}")
    if sigma == 0.0:
        return f
    if math.isinf(sigma):
        return FourierSeries.constant(f.coeff(MultiIndex.zero()))
    return FourierSeries(
        {n: a * smoothing_multiplier(n, sigma, precision_bits) for n, a in f.items()}
    )


# ---------------------------------------------------------------------------
# Positive-definite sections
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PoissonMatrix:
    """Dense section M[j,k] = e^{-sigma |tau(n_j - n_k)|} over sorted indices."""

    indices: tuple[MultiIndex, ...]
    sigma: float
    matrix: np.ndarray

    def numeric_det(self) -> float:
        return float(np.linalg.det(self.matrix))

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.matrix)[0])


def _sorted_unique(indices: Iterable[MultiIndex]) -> list[MultiIndex]:
    idx = list(indices)
    if len(set(idx)) != len(idx):
        raise DuplicateIndices("index set contains duplicates")
    return sorted(idx)


def _tau_array(indices: list[MultiIndex], precision_bits: int) -> np.ndarray:
    return np.array([float(tau_mpf(n, precision_bits)) for n in indices])


def poisson_matrix(indices: Iterable[MultiIndex], sigma: float, precision_bits: int = 128) -> PoissonMatrix:
    """Assemble the section matrix; tau additivity gives M[j,k] = e^{-sigma |tau_j - tau_k|}."""
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    idx = _sorted_unique(indices)
    tau = _tau_array(idx, precision_bits)
    m = np.exp(-sigma * np.abs(tau[:, None] - tau[None, :]))
    return PoissonMatrix(tuple(idx), float(sigma), m)


def poisson_matrix_det(indices: Iterable[MultiIndex], sigma: float, precision_bits: int = 128) -> float:
    """Closed-form determinant of the section matrix.

    With rho_k = e^{-sigma tau(n_{k+1} - n_k)} over consecutive sorted gaps,
    det = e^{-sigma tau(n_N - n_0)} * prod_k (1/rho_k - rho_k): row reduction
    leaves one off-band entry per row and the product telescopes.
    """
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    idx = _sorted_unique(indices)
    if len(idx) <= 1:
        return 1.0
    tau = _tau_array(idx, precision_bits)
    det = math.exp(-sigma * (tau[-1] - tau[0]))
    for k in range(len(idx) - 1):
        rho = math.exp(-sigma * (tau[k + 1] - tau[k]))
        det *= 1.0 / rho - rho
    return det


# ---------------------------------------------------------------------------
# Half-plane Cauchy realization
# ---------------------------------------------------------------------------

def cauchy_density(sigma: float, t0: float = 0.0) -> Callable[[float], float]:
    """The density t -> sigma / (pi (sigma^2 + (t - t0)^2)); total mass 1."""
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")

    def density(t):
        return sigma / (math.pi * (sigma**2 + (t - t0) ** 2))

    return density


def cauchy_tail_bound(T: float, sigma: float) -> float:
    """Exact mass of the density outside [t0 - T, t0 + T]: 1 - (2/pi) arctan(T/sigma)."""
    return 1.0 - 2.0 * math.atan(T / sigma) / math.pi


def choose_truncation(sigma: float, tol: float) -> float:
    """Smallest convenient T with tail mass below tol/2 (about 0.45 tol)."""
    return 4.5 * sigma / (math.pi * tol)


class CauchyMoment(NamedTuple):
    value: complex
    tail_bound: float
    step: float
    samples: int
    step_error: float


def cauchy_moment(
    u: float,
    sigma: float,
    t0: float = 0.0,
    T: float | None = None,
    tol: float = 1e-6,
    max_refinements: int = 3,
) -> CauchyMoment:
    """Oscillatory moment int e^{-iut} dP over the truncated window [t0-T, t0+T].

    Evaluates 2 int_0^T cos(us) g(s) ds with g the centered density, by
    uniform trapezoid.  The integrand extends to a function analytic in the
    strip |Im s| < sigma, so the trapezoid aliasing error decays like
    e^{-sigma (2 pi / h - |u|)}; the initial step is chosen from that bound
    and then verified against the step-doubled sum, refining if needed.  The
    window tail carries the exact arctangent mass bound.  The result is
    within tol of e^{-sigma |u|} e^{-i u t0}.
    """
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    if T is None:
        T = choose_truncation(sigma, tol)
    tail = cauchy_tail_bound(T, sigma)
    if tail >= tol / 2:
        raise ToleranceUnachievable(
            f"window T={T:.3g} leaves tail mass {tail:.3g} >= tol/2", tail_bound=tail
        )
    # aliasing budget tol/4 at the doubled step, so the h vs 2h comparison
    # is itself an error estimate at the tol/4 scale
    h = 2.0 * math.pi / (2.0 * abs(u) + 2.0 * math.log(4.0 / tol) / sigma)
    coef = sigma / math.pi
    for _ in range(max_refinements + 1):
        n = int(math.ceil(T / h))
        n += n % 2
        if n > MAX_QUADRATURE_SAMPLES:
            break
        step = T / n
        total = 0.0
        even_total = 0.0
        chunk = 1 << 20
        for j0 in range(0, n + 1, chunk):
            j = np.arange(j0, min(j0 + chunk, n + 1), dtype=float)
            s = j * step
            vals = np.cos(u * s) * (coef / (sigma**2 + s * s))
            total += float(vals.sum())
            even_total += float(vals[::2].sum())
        v0 = coef / sigma**2
        vn = math.cos(u * T) * (coef / (sigma**2 + T**2))
        fine = 2.0 * step * (total - 0.5 * (v0 + vn))
        coarse = 4.0 * step * (even_total - 0.5 * (v0 + vn))
        step_error = abs(fine - coarse)
        if step_error <= tol / 2:
            value = cmath.exp(-1j * u * t0) * fine
            return CauchyMoment(value, tail, step, n + 1, step_error)
        h /= 2.0
    raise ToleranceUnachievable(
        f"quadrature did not verify to tol={tol:g} within the sample cap", tol=tol
    )


# ---------------------------------------------------------------------------
# Kronecker-flow ergodic averages
# ---------------------------------------------------------------------------

class ErgodicAverage(NamedTuple):
    value: complex
    closed_form: bool


def ergodic_average(
    f: FourierSeries,
    N: float,
    quadrature_points: int | None = None,
    precision_bits: int = 128,
) -> ErgodicAverage:
    """(1/2N) int_{-N}^{N} f(p^{-it}) dt.

    The flow evaluates each character to e^{-it tau(n)}, so the average is
    exactly sum_n a_n sinc(N tau(n)) with sinc(x) = sin(x)/x, sinc(0) = 1.
    Passing ``quadrature_points`` (an odd count) switches to a composite
    Simpson cross-check of the same integral, independent of the closed form.
    """
    if not N > 0:
        raise ValueError(f"averaging length N must be positive, got {N}")
    taus = np.array([float(tau_mpf(n, precision_bits)) for n, _ in f.items()])
    coeffs = np.array([a for _, a in f.items()])
    if quadrature_points is None:
        # np.sinc is the normalized sin(pi x)/(pi x); rescale to sin(x)/x
        sinc = np.sinc(N * taus / np.pi)
        return ErgodicAverage(complex(np.sum(coeffs * sinc)), True)
    m = int(quadrature_points)
    if m < 3 or m % 2 == 0:
        raise ValueError("quadrature_points must be an odd integer >= 3")
    t = np.linspace(-N, N, m)
    vals = np.exp(-1j * np.outer(t, taus)) @ coeffs
    w = np.ones(m)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    integral = (2.0 * N / (m - 1)) / 3.0 * np.sum(w * vals)
    return ErgodicAverage(complex(integral / (2.0 * N)), False)


# ---------------------------------------------------------------------------
# Homomorphism and exponential-commutation checks
# ---------------------------------------------------------------------------

def homomorphism_check(
    f: FourierSeries,
    g: FourierSeries,
    sigma: float,
    phases: Mapping[int, complex],
    precision_bits: int = 128,
) -> float:
    """Residual of multiplicativity of smoothing followed by evaluation.

    For analytic f, g the smoothed product evaluates to the product of the
    smoothed evaluations at any phase point; returns the absolute defect.
    """
    for name, h in (("f", f), ("g", g)):
        if not is_analytic(h):
            raise NotAnalytic(f"{name} has support with ordinal < 1")
    pt = DiskPoint(0.0, phases)
    lhs = evaluate(smooth(multiply(f, g), sigma, precision_bits), pt, precision_bits)
    rhs = evaluate(smooth(f, sigma, precision_bits), pt, precision_bits) * evaluate(
        smooth(g, sigma, precision_bits), pt, precision_bits
    )
    return abs(lhs - rhs)


class ExpCommutesResult(NamedTuple):
    residual: float
    tail_bound: float


def exp_commutes_check(
    f: FourierSeries,
    sigma: float,
    truncation_order: int,
    term_budget: int = DEFAULT_TERM_BUDGET,
) -> ExpCommutesResult:
    """Compare smoothing of the truncated exponential against the exponential of the smoothed series.

    Both routes agree term-by-term on analytic polynomials (the multiplier is
    multiplicative along the semigroup), so the residual is floating noise
    bounded by the factorial tail 2 c^(K+1) / (K+1)! with c the coefficient
    l1 norm, plus machine rounding.
    """
    if truncation_order < 1:
        raise ValueError("truncation_order must be >= 1")
    if not is_analytic(f):
        raise NotAnalytic("exponential commutation requires an analytic polynomial")
    lhs = smooth(exp_truncated(f, truncation_order, term_budget), sigma)
    rhs = exp_truncated(smooth(f, sigma), truncation_order, term_budget)
    diff = lhs - rhs
    residual = max((abs(a) for _, a in diff.items()), default=0.0)
    c = f.l1_coeff_norm()
    tail = 2.0 * c ** (truncation_order + 1) / math.factorial(truncation_order + 1)
    return ExpCommutesResult(residual, tail)
