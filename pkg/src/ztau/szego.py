"""Weights, geometric means, finite-section infima and outer factorization.

The extremal problem min over p of int |1 - p|^2 w dm, with p an analytic
polynomial without constant term supported on a finite index set S, reduces
to Hermitian normal equations in the Fourier coefficients of w:

    G c = b,   G[j,k] = w_hat(n_j - n_k),   b[j] = w_hat(n_j),

and the minimum is w_hat(0) - Re(b* c).  Sign conventions are anchored by
the one-variable weight |1 - 0.5 z|^2 with S = {delta_1}, whose value is
1.05 exactly.  The geometric mean exp(mean of log w) bounds every section
value from below, and for weights of squared outer polynomials the section
values descend to it.

Outer factorization follows the smoothed-kernel construction: take the grid
Fourier coefficients of log w (legal only when they sit on indices with all
coordinates of one sign), damp them with the smoothing multiplier at
sigma0, complete analytically, and exponentiate half of the completion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import (
    DuplicateIndices,
    NotOuter,
    SupportConditionViolated,
    WeightNearZero,
)
from .multiindex import IndexClass, MultiIndex, classify, ordinal
from .series import (
    DEFAULT_GRID_POINTS,
    DEFAULT_MAX_DIMS,
    DEFAULT_TERM_BUDGET,
    DEFAULT_WEIGHT_FLOOR,
    FourierSeries,
    conjugate,
    exp_truncated,
    grid_coefficients,
    grid_values,
    herglotz_completion,
    log_integral,
    multiply,
)
from .poisson import smooth

SINGULAR_GRAM_RCOND = 1e-12


@dataclass(frozen=True)
class Weight:
    """Real-symmetric series interpreted as a nonnegative weight.

    ``root`` records provenance when the weight was built as |f|^2 from a
    polynomial f; it enables the outer shortcut for the geometric mean.
    """

    series: FourierSeries
    root: FourierSeries | None = None

    def __post_init__(self):
        if not self.series.is_real_symmetric(1e-10):
            raise ValueError("weight series must be real-symmetric")

    def coeff(self, n: MultiIndex) -> complex:
        return self.series.coeff(n)

    def mean(self) -> float:
        return self.series.coeff(MultiIndex.zero()).real


def weight_from_polynomial(f: FourierSeries) -> Weight:
    """The weight w = f conj(f); symmetrized so w_hat(-n) == conj(w_hat(n)) exactly."""
    w = multiply(f, conjugate(f))
    sym = FourierSeries(
        {n: 0.5 * (a + w.coeff(-n).conjugate()) for n, a in w.items()}
    )
    return Weight(sym, root=f)


def geometric_mean(
    w: Weight,
    method: str = "grid",
    grid_points: int = DEFAULT_GRID_POINTS,
    max_dims: int = DEFAULT_MAX_DIMS,
    floor: float = DEFAULT_WEIGHT_FLOOR,
    tol: float = 1e-8,
) -> float:
    """exp of the mean of log w.

    method "grid" integrates log w on the tensor grid; method "outer" uses
    |f_hat(0)|^2 for provenance root f, valid once f verifies as outer.
    """
    if method == "grid":
        return math.exp(log_integral(w.series, grid_points, max_dims, floor))
    if method == "outer":
        if w.root is None:
            raise NotOuter("weight has no polynomial provenance for the outer shortcut")
        check = outer_check(w.root, grid_points, max_dims, floor, tol)
        if not check.is_outer:
            raise NotOuter(
                f"provenance polynomial is not outer: exp-mean-log {check.lhs:.6g} "
                f"vs |mean| {check.rhs:.6g}"
            )
        return abs(w.root.coeff(MultiIndex.zero())) ** 2
    raise ValueError(f"unknown geometric mean method {method!r}")


# ---------------------------------------------------------------------------
# Finite sections
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SzegoResult:
    value: float
    minimizer: FourierSeries
    singular: bool
    mode: str


def _validate_section(support: list[MultiIndex], mode: str) -> None:
    if len(set(support)) != len(support):
        raise DuplicateIndices("section support contains duplicates")
    if mode == "zplus":
        for n in support:
            if n.is_zero or classify(n) is not IndexClass.ZPLUS:
                raise ValueError(
                    f"zplus section requires nonzero indices with all coordinates >= 0, got {n}"
                )
    elif mode == "tau":
        for n in support:
            if ordinal(n) <= 1:
                raise ValueError(f"tau section requires indices with ordinal > 1, got {n}")
    else:
        raise ValueError(f"unknown section mode {mode!r}")


def szego_infimum(w: Weight, support: Iterable[MultiIndex], mode: str = "zplus") -> SzegoResult:
    """Minimize int |1 - p|^2 w dm over p supported on the given index set.

    Solves the normal equations G c = b above; returns the minimum
    w_hat(0) - Re(b* c) and the minimizing polynomial.  A Gram matrix with
    eigenvalues below SINGULAR_GRAM_RCOND (relative) is solved by
    pseudo-inverse and flagged ``singular``.
    """
    sup = list(support)
    _validate_section(sup, mode)
    w0 = w.mean()
    if not sup:
        return SzegoResult(w0, FourierSeries(), False, mode)
    m = len(sup)
    gram = np.empty((m, m), dtype=complex)
    for j, nj in enumerate(sup):
        for k, nk in enumerate(sup):
            gram[j, k] = w.coeff(nj - nk)
    b = np.array([w.coeff(nj) for nj in sup])
    eig = np.linalg.eigvalsh(gram)
    singular = eig[0] <= SINGULAR_GRAM_RCOND * max(eig[-1], 1.0)
    if singular:
        c = np.linalg.pinv(gram, rcond=SINGULAR_GRAM_RCOND) @ b
    else:
        c = np.linalg.solve(gram, b)
    value = w0 - float(np.real(np.vdot(b, c)))
    minimizer = FourierSeries({n: c[j] for j, n in enumerate(sup)})
    return SzegoResult(value, minimizer, bool(singular), mode)


@dataclass(frozen=True)
class GapRow:
    section_size: int
    infimum: float
    geometric_mean: float
    gap: float


def szego_gap_table(
    w: Weight,
    supports: Iterable[Iterable[MultiIndex]],
    mode: str = "zplus",
    gmean_method: str = "grid",
    grid_points: int = DEFAULT_GRID_POINTS,
    max_dims: int = DEFAULT_MAX_DIMS,
) -> list[GapRow]:
    """Section values against the geometric mean for a growing support chain."""
    gm = geometric_mean(w, gmean_method, grid_points, max_dims)
    rows = []
    for sup in supports:
        sup = list(sup)
        res = szego_infimum(w, sup, mode)
        rows.append(GapRow(len(sup), res.value, gm, res.value - gm))
    return rows


# ---------------------------------------------------------------------------
# Outerness and the support condition
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OuterCheck:
    is_outer: bool
    lhs: float  # exp of the mean of log |f|
    rhs: float  # |f_hat(0)|


def outer_check(
    f: FourierSeries,
    grid_points: int = DEFAULT_GRID_POINTS,
    max_dims: int = DEFAULT_MAX_DIMS,
    floor: float = DEFAULT_WEIGHT_FLOOR,
    tol: float = 1e-8,
) -> OuterCheck:
    """Compare exp(mean log |f|) with |mean f|; equality characterizes outer f."""
    wseries = weight_from_polynomial(f).series
    lhs = math.exp(0.5 * log_integral(wseries, grid_points, max_dims, floor))
    rhs = abs(f.coeff(MultiIndex.zero()))
    return OuterCheck(abs(lhs - rhs) <= tol * max(1.0, rhs), lhs, rhs)


@dataclass(frozen=True)
class SupportCondition:
    holds: bool
    violations: tuple[MultiIndex, ...]
    unresolved: tuple[MultiIndex, ...]
    tolerance: float
    grid_points: int


def support_condition_check(
    w: Weight,
    grid_points: int = DEFAULT_GRID_POINTS,
    max_dims: int = DEFAULT_MAX_DIMS,
    tol: float = 1e-8,
    floor: float = DEFAULT_WEIGHT_FLOOR,
) -> SupportCondition:
    """Check that every significant coefficient of log w has single-sign coordinates.

    Coefficients come from the grid transform of log w; the grid resolves
    |n_k| <= grid_points/2 - 1 and Nyquist-row mass is reported as unresolved
    rather than as a violation.
    """
    coeffs, unresolved = _log_coefficients(w, grid_points, max_dims, tol, floor)
    violations = []
    for n in coeffs:
        vals = [v for _, v in n.entries]
        if not (all(v >= 0 for v in vals) or all(v <= 0 for v in vals)):
            violations.append(n)
    violations.sort()
    return SupportCondition(
        not violations, tuple(violations), tuple(unresolved), tol, grid_points
    )


def _log_coefficients(
    w: Weight, grid_points: int, max_dims: int, tol: float, floor: float
) -> tuple[dict[MultiIndex, complex], list[MultiIndex]]:
    values, coords = grid_values(w.series, grid_points, max_dims)
    real = np.real(values)
    lo = float(real.min()) if coords else float(real)
    if lo <= floor:
        raise WeightNearZero(
            f"grid minimum {lo:.3e} is at or below the floor {floor:.1e}", minimum=lo
        )
    return grid_coefficients(np.log(real if coords else real.reshape(())), tol, coords)


def outer_factor(
    w: Weight,
    sigma0: float = 2.0,
    grid_points: int = DEFAULT_GRID_POINTS,
    max_dims: int = DEFAULT_MAX_DIMS,
    truncation: int = 16,
    coeff_tol: float = 1e-13,
    support_tol: float = 1e-8,
    floor: float = DEFAULT_WEIGHT_FLOOR,
    term_budget: int = DEFAULT_TERM_BUDGET,
) -> FourierSeries:
    """Smoothed outer factor of w: exp of half the completed, damped log w.

    Pipeline: grid transform of log w -> smoothing multiplier at sigma0 ->
    analytic completion A with Re A equal to the damped log w -> exp(A/2)
    truncated at ``truncation``.  The constant coefficient of A is kept real,
    so the result has positive mean (outer factors are unique only up to a
    unimodular constant).  Requires the support condition and sigma0 >= 1.
    """
    if sigma0 < 1:
        raise ValueError(f"sigma0 must be >= 1, got {sigma0}")
    cond = support_condition_check(w, grid_points, max_dims, support_tol, floor)
    if not cond.holds:
        raise SupportConditionViolated(
            f"log-weight support leaves the single-sign cone at {list(map(str, cond.violations))}",
            violations=cond.violations,
        )
    coeffs, _ = _log_coefficients(w, grid_points, max_dims, coeff_tol, floor)
    logw = FourierSeries(coeffs)
    logw = FourierSeries(
        {n: 0.5 * (a + logw.coeff(-n).conjugate()) for n, a in logw.items()}
    )
    damped = smooth(logw, sigma0)
    completion = herglotz_completion(damped)
    return exp_truncated(completion.scale(0.5), truncation, term_budget)
