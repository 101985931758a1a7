"""Shared generators and independent oracles.

Oracles here deliberately avoid the library code paths they are used to
check: convolution works on dense tuples, Szego values come from weighted
least squares on explicit grid sums, and quadrature references use mpmath.
"""

from __future__ import annotations

import random

import numpy as np
import pytest

from ztau import FourierSeries, MultiIndex, ordinal


# ---------------------------------------------------------------------------
# random generators
# ---------------------------------------------------------------------------

def random_multiindex(rng: random.Random, max_coord=8, max_exp=6, max_support=8) -> MultiIndex:
    support = rng.randint(0, max_support)
    coords = rng.sample(range(1, max_coord + 1), min(support, max_coord))
    entries = []
    for k in sorted(coords):
        e = rng.randint(-max_exp, max_exp)
        if e != 0:
            entries.append((k, e))
    return MultiIndex(entries)


def random_zplus_index(rng: random.Random, max_coord=5, max_exp=3) -> MultiIndex:
    entries = []
    for k in range(1, max_coord + 1):
        if rng.random() < 0.4:
            e = rng.randint(1, max_exp)
            entries.append((k, e))
    return MultiIndex(entries)


def random_series(rng: random.Random, nterms=6, index_gen=random_multiindex, **kw) -> FourierSeries:
    terms = {}
    for _ in range(nterms):
        n = index_gen(rng, **kw)
        terms[n] = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
    return FourierSeries(terms)


def random_analytic_series(rng: random.Random, nterms=6) -> FourierSeries:
    """Series with every ordinal >= 1: Z+ indices plus the occasional tau-positive mixed one."""
    terms = {MultiIndex.zero(): complex(rng.uniform(-1, 1), rng.uniform(-1, 1))}
    while len(terms) < nterms:
        n = random_multiindex(rng, max_coord=5, max_exp=3, max_support=4)
        if ordinal(n) >= 1:
            terms[n] = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
    return FourierSeries(terms)


def random_outer_polynomial(rng: random.Random, nvars=1, extra_terms=3) -> FourierSeries:
    """1 + p with coefficient l1 norm of p at most 0.5, hence invertible and outer."""
    terms = {MultiIndex.zero(): 1.0 + 0j}
    budget = 0.5
    for _ in range(extra_terms):
        entries = []
        for k in range(1, nvars + 1):
            e = rng.randint(0, 2)
            if e:
                entries.append((k, e))
        n = MultiIndex(entries)
        if n.is_zero or n in terms:
            continue
        mag = rng.uniform(0, budget / extra_terms)
        phase = rng.uniform(0, 2 * np.pi)
        terms[n] = mag * complex(np.cos(phase), np.sin(phase))
    return FourierSeries(terms)


# ---------------------------------------------------------------------------
# independent oracles
# ---------------------------------------------------------------------------

def dense_key(n: MultiIndex) -> tuple[int, ...]:
    return tuple(n.dense())


def naive_convolution(f: FourierSeries, g: FourierSeries) -> dict[tuple[int, ...], complex]:
    """Convolution oracle over dense tuples, independent of MultiIndex arithmetic."""
    out: dict[tuple[int, ...], complex] = {}
    for n, a in f.items():
        for m, b in g.items():
            dn, dm = n.dense(), m.dense()
            length = max(len(dn), len(dm))
            dn = dn + [0] * (length - len(dn))
            dm = dm + [0] * (length - len(dm))
            s = tuple(x + y for x, y in zip(dn, dm))
            while s and s[-1] == 0:
                s = s[:-1]
            out[s] = out.get(s, 0) + a * b
    return {k: v for k, v in out.items() if v != 0}


def grid_eval_direct(f: FourierSeries, coords: tuple[int, ...], m: int) -> np.ndarray:
    """Direct character-sum evaluation on the tensor grid (no FFT)."""
    theta = 2 * np.pi * np.arange(m) / m
    vals = np.zeros((m,) * len(coords), dtype=complex)
    pos = {k: i for i, k in enumerate(coords)}
    for n, a in f.items():
        term = np.array(a, dtype=complex)
        shape = [1] * len(coords)
        for k, v in n.entries:
            axis_shape = shape.copy()
            axis_shape[pos[k]] = m
            term = term * np.exp(1j * v * theta).reshape(axis_shape)
        vals = vals + term
    return vals


def szego_value_lstsq_oracle(w_series: FourierSeries, support, m: int = 128) -> float:
    """Weighted least squares on explicit grid sums: independent Szego value.

    On an m^d grid the integrand |1 - p|^2 w is a trigonometric polynomial,
    so the grid mean is the exact integral once m exceeds the index spread.
    """
    coords = set(w_series.active_coords())
    for n in support:
        coords.update(n.coords())
    coords = tuple(sorted(coords)) or (1,)
    wvals = np.real(grid_eval_direct(w_series, coords, m)).ravel()
    assert wvals.min() > -1e-9
    wvals = np.clip(wvals, 0.0, None)
    theta = 2 * np.pi * np.arange(m) / m
    mesh = np.meshgrid(*([theta] * len(coords)), indexing="ij")
    cols = []
    pos = {k: i for i, k in enumerate(coords)}
    for n in support:
        phase = np.zeros_like(mesh[0])
        for k, v in n.entries:
            phase = phase + v * mesh[pos[k]]
        cols.append(np.exp(1j * phase).ravel())
    sqw = np.sqrt(wvals)
    y = sqw.astype(complex)
    if not cols:
        return float(np.mean(wvals))
    a = np.stack(cols, axis=1) * sqw[:, None]
    c, *_ = np.linalg.lstsq(a, y, rcond=None)
    resid = y - a @ c
    return float(np.vdot(resid, resid).real / wvals.size)


def enumerate_torus_sup(f: FourierSeries, m: int = 2048) -> float:
    """Fine-grid supremum of |f| over the active torus (1 or 2 variables)."""
    coords = f.active_coords()
    assert len(coords) <= 2
    if not coords:
        return abs(f.coeff(MultiIndex.zero()))
    return float(np.abs(grid_eval_direct(f, coords, m)).max())


@pytest.fixture
def rng() -> random.Random:
    return random.Random(0xC0FFEE)
