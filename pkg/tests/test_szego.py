import math

import pytest

from ztau import (
    DuplicateIndices,
    FourierSeries,
    MultiIndex,
    NotOuter,
    SupportConditionViolated,
    Weight,
    WeightNearZero,
    geometric_mean,
    outer_check,
    outer_factor,
    smooth,
    support_condition_check,
    szego_gap_table,
    szego_infimum,
    translate,
    weight_from_polynomial,
)

from conftest import random_outer_polynomial, szego_value_lstsq_oracle

D1 = MultiIndex.delta(1)
ZERO = MultiIndex.zero()
ONE = FourierSeries.constant(1.0)


def one_var_weight(a: float) -> Weight:
    return weight_from_polynomial(FourierSeries({ZERO: 1.0, D1: -a}))


def closed_form_value(a: float, N: int) -> float:
    # section value for |1 - a z|^2 on {delta_1, ..., N delta_1}
    return (1 - a ** (2 * (N + 2))) / (1 - a ** (2 * (N + 1)))


class TestWeightFromPolynomial:
    def test_constant(self):
        assert weight_from_polynomial(ONE).series == ONE

    def test_hand_convolution(self):
        w = weight_from_polynomial(FourierSeries({ZERO: 1.0, D1: 0.5}))
        assert w.series.coeff(ZERO) == pytest.approx(1.25)
        assert w.series.coeff(D1) == pytest.approx(0.5)
        assert w.series.coeff(-D1) == pytest.approx(0.5)

    def test_character_gives_unit_weight(self):
        w = weight_from_polynomial(FourierSeries.character(MultiIndex.from_dense([0, 2])))
        assert w.series == ONE

    def test_exact_symmetry(self, rng):
        f = FourierSeries({ZERO: 1.0, D1: 0.3 + 0.2j, MultiIndex.from_dense([2]): -0.1j})
        w = weight_from_polynomial(f)
        for n, a in w.series.items():
            assert w.series.coeff(-n) == a.conjugate()

    def test_rejects_asymmetric_direct_weight(self):
        with pytest.raises(ValueError):
            Weight(FourierSeries.character(D1))


class TestGeometricMean:
    def test_unit_weight(self):
        assert geometric_mean(Weight(ONE)) == pytest.approx(1.0)

    def test_inner_radius_both_methods(self):
        w = one_var_weight(0.5)
        assert geometric_mean(w, "grid") == pytest.approx(1.0, abs=1e-6)
        assert geometric_mean(w, "outer") == pytest.approx(1.0, abs=1e-12)

    def test_outer_radius_grid_only(self):
        w = one_var_weight(2.0)
        assert geometric_mean(w, "grid") == pytest.approx(4.0, abs=1e-6)
        with pytest.raises(NotOuter):
            geometric_mean(w, "outer")

    def test_shortcut_needs_provenance(self):
        with pytest.raises(NotOuter):
            geometric_mean(Weight(ONE), "outer")


class TestSzegoInfimum:
    def test_unit_weight(self):
        res = szego_infimum(Weight(ONE), [D1, MultiIndex.from_dense([2])])
        assert res.value == pytest.approx(1.0)
        assert len(res.minimizer) == 0

    def test_anchor_value(self):
        # convention anchor: a = 0.5, S = {delta_1} gives exactly 1.05
        res = szego_infimum(one_var_weight(0.5), [D1])
        assert res.value == pytest.approx(1.05, abs=1e-12)
        assert res.minimizer.coeff(D1) == pytest.approx(-0.4, abs=1e-12)

    def test_closed_form_sections(self):
        w = one_var_weight(0.5)
        for N in range(0, 21):
            sup = [MultiIndex(((1, k),)) for k in range(1, N + 1)]
            res = szego_infimum(w, sup)
            assert res.value == pytest.approx(closed_form_value(0.5, N), abs=1e-9)

    def test_against_grid_lstsq_oracle(self, rng):
        for _ in range(20):
            f = random_outer_polynomial(rng, nvars=2, extra_terms=3)
            w = weight_from_polynomial(f)
            sup = [D1, MultiIndex.from_dense([0, 1]), MultiIndex.from_dense([1, 1])]
            res = szego_infimum(w, sup)
            oracle = szego_value_lstsq_oracle(w.series, sup, m=32)
            assert res.value == pytest.approx(oracle, abs=1e-9)

    def test_monotone_in_support(self, rng):
        f = random_outer_polynomial(rng, nvars=1, extra_terms=3)
        w = weight_from_polynomial(f)
        chain = [MultiIndex(((1, k),)) for k in range(1, 7)]
        values = [szego_infimum(w, chain[:k]).value for k in range(len(chain) + 1)]
        for prev, nxt in zip(values, values[1:]):
            assert nxt <= prev + 1e-12

    def test_lower_bound_geometric_mean(self, rng):
        for _ in range(20):
            f = random_outer_polynomial(rng, nvars=1, extra_terms=3)
            w = weight_from_polynomial(f)
            gm = geometric_mean(w, "grid")
            sup = [MultiIndex(((1, k),)) for k in range(1, 5)]
            assert szego_infimum(w, sup).value >= gm - 1e-6

    def test_tau_mode_allows_mixed_indices(self):
        w = Weight(ONE)
        mixed = MultiIndex.from_dense([-1, 1])  # ordinal 3/2 > 1
        res = szego_infimum(w, [mixed], mode="tau")
        assert res.value == pytest.approx(1.0)
        with pytest.raises(ValueError):
            szego_infimum(w, [mixed], mode="zplus")
        with pytest.raises(ValueError):
            szego_infimum(w, [MultiIndex.from_dense([1, -1])], mode="tau")

    def test_duplicates_rejected(self):
        with pytest.raises(DuplicateIndices):
            szego_infimum(Weight(ONE), [D1, D1])

    def test_singular_gram_flagged(self):
        # w = 1 + z + conj(z) has Gram [[1, 1], [1, 1]] on {d1, 2 d1}
        w = Weight(FourierSeries({ZERO: 1.0, D1: 1.0, -D1: 1.0}))
        res = szego_infimum(w, [D1, MultiIndex.from_dense([2])])
        assert res.singular


class TestGapTable:
    def test_unit_weight_all_zero_gaps(self):
        chains = [[MultiIndex(((1, k),)) for k in range(1, n + 1)] for n in range(4)]
        rows = szego_gap_table(Weight(ONE), chains)
        assert all(abs(r.gap) < 1e-9 for r in rows)

    def test_closed_form_gaps(self):
        w = one_var_weight(0.5)
        chains = [[MultiIndex(((1, k),)) for k in range(1, n + 1)] for n in range(8)]
        rows = szego_gap_table(w, chains)
        for n, row in enumerate(rows):
            assert row.gap == pytest.approx(closed_form_value(0.5, n) - 1.0, abs=1e-6)
        assert rows[-1].gap < rows[0].gap

    def test_gap_decay_rate_vs_lstsq_oracle(self):
        # gap descends at a^(2(N+1)) (1-a^2) / (1-a^(2(N+1))); cross-checked
        # against the independent grid least-squares value
        a = 0.5
        w = one_var_weight(a)
        for n in (1, 3, 5):
            sup = [MultiIndex(((1, k),)) for k in range(1, n + 1)]
            rate = a ** (2 * (n + 1)) * (1 - a**2) / (1 - a ** (2 * (n + 1)))
            oracle = szego_value_lstsq_oracle(w.series, sup, m=64)
            assert oracle - 1.0 == pytest.approx(rate, abs=1e-9)
            assert szego_infimum(w, sup).value - 1.0 == pytest.approx(rate, abs=1e-9)

    def test_single_frequency_reduction(self):
        # |1 + 0.4 gamma_(1,1)|^2 sections on multiples of (1,1) follow the
        # same one-variable recursion with a = 0.4
        f = FourierSeries({ZERO: 1.0, MultiIndex.from_dense([1, 1]): 0.4})
        w = weight_from_polynomial(f)
        chains = [
            [MultiIndex.from_dense([k, k]) for k in range(1, n + 1)] for n in range(6)
        ]
        rows = szego_gap_table(w, chains)
        for n, row in enumerate(rows):
            assert row.infimum == pytest.approx(closed_form_value(0.4, n), abs=1e-9)


class TestOuterCheck:
    def test_inner_radius_outer(self):
        res = outer_check(FourierSeries({ZERO: 1.0, D1: -0.5}))
        assert res.is_outer
        assert res.lhs == pytest.approx(1.0, abs=1e-8)
        assert res.rhs == pytest.approx(1.0)

    def test_outer_radius_not_outer(self):
        res = outer_check(FourierSeries({ZERO: 1.0, D1: -2.0}))
        assert not res.is_outer
        assert res.lhs == pytest.approx(2.0, abs=1e-6)
        assert res.rhs == pytest.approx(1.0)

    def test_constant(self):
        res = outer_check(FourierSeries.constant(0.7 - 0.2j))
        assert res.is_outer

    def test_vanishing_rejected(self):
        with pytest.raises(WeightNearZero):
            outer_check(FourierSeries({ZERO: 1.0, D1: -1.0}))


class TestSupportCondition:
    def test_single_variable_holds(self):
        cond = support_condition_check(one_var_weight(0.5))
        assert cond.holds and not cond.violations

    def test_log_coefficients_match_taylor_oracle(self):
        # grid transform of log|1-az|^2 against the -a^k/k expansion
        from ztau.szego import _log_coefficients

        a = 0.5
        coeffs, unresolved = _log_coefficients(one_var_weight(a), 256, 6, 1e-12, 1e-12)
        assert not unresolved
        for k in range(1, 10):
            for sign in (1, -1):
                got = coeffs[MultiIndex(((1, sign * k),))]
                assert got == pytest.approx(-(a**k) / k, abs=1e-10)

    def test_mixed_sign_violation(self):
        f = FourierSeries({ZERO: 1.0, MultiIndex.from_dense([1, -1]): 0.4})
        cond = support_condition_check(weight_from_polynomial(f))
        assert not cond.holds
        assert MultiIndex.from_dense([1, -1]) in cond.violations
        assert MultiIndex.from_dense([-1, 1]) in cond.violations

    def test_unit_weight_holds(self):
        cond = support_condition_check(Weight(ONE))
        assert cond.holds and not cond.violations

    def test_translation_transforms_log_coefficients(self):
        # translating the weight multiplies each log-coefficient by the
        # character value at the shift
        a, t = 0.5, 0.9
        w = one_var_weight(a)
        wt = Weight(translate(w.series, {1: t}))
        from ztau.szego import _log_coefficients

        base, _ = _log_coefficients(w, 256, 6, 1e-10, 1e-12)
        moved, _ = _log_coefficients(wt, 256, 6, 1e-10, 1e-12)
        for n, c in base.items():
            angle = sum(v * t for k, v in n.entries)
            assert moved[n] == pytest.approx(c * complex(math.cos(angle), math.sin(angle)), abs=1e-8)


class TestOuterFactor:
    def test_one_variable_anchor(self):
        g = outer_factor(one_var_weight(0.5), 2.0, truncation=12)
        expected = FourierSeries({ZERO: 1.0, D1: -0.125})
        worst = max(abs(a) for _, a in (g - expected).items())
        assert worst < 1e-6

    def test_unit_weight(self):
        g = outer_factor(Weight(ONE), 2.0)
        assert max((abs(a) for _, a in (g - ONE).items()), default=0.0) < 1e-12

    def test_two_variable_single_frequency(self):
        n = MultiIndex.from_dense([1, 1])
        w = weight_from_polynomial(FourierSeries({ZERO: 1.0, n: -0.3}))
        g = outer_factor(w, 2.0)
        expected = FourierSeries({ZERO: 1.0, n: -0.3 / 36})
        worst = max(abs(a) for _, a in (g - expected).items())
        assert worst < 1e-6

    def test_result_passes_outer_check(self, rng):
        for _ in range(5):
            f = random_outer_polynomial(rng, nvars=1, extra_terms=2)
            g = outer_factor(weight_from_polynomial(f), 2.0)
            assert outer_check(g.prune(1e-12)).is_outer

    def test_modulus_matches_smoothed_weight(self):
        # |result|^2 should reproduce the weight built from the smoothed root
        w = one_var_weight(0.5)
        g = outer_factor(w, 2.0)
        target = weight_from_polynomial(smooth(FourierSeries({ZERO: 1.0, D1: -0.5}), 2.0))
        diff = weight_from_polynomial(g.prune(1e-12)).series - target.series
        assert max(abs(a) for _, a in diff.items()) < 1e-9

    def test_mixed_support_rejected(self):
        f = FourierSeries({ZERO: 1.0, MultiIndex.from_dense([1, -1]): 0.4})
        with pytest.raises(SupportConditionViolated):
            outer_factor(weight_from_polynomial(f), 2.0)

    def test_sigma_below_one_rejected(self):
        with pytest.raises(ValueError):
            outer_factor(one_var_weight(0.5), 0.5)
