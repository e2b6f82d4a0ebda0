from fractions import Fraction

import numpy as np
import pytest

from sumfree.core import IntegerSet, indicator_vector, interval_signal, rng_from_seed
from sumfree.spectral import (
    autocorrelation,
    difference_counts,
    fourier_decompose,
    pollard_check,
    popular_differences,
    spectrum,
    t_count,
    t_stability_gap,
    u2_group_norm,
    u2_group_norm_direct,
    u2_norm,
    u2_norm_direct,
)

POW2 = IntegerSet((1, 2, 4, 8))


class TestTCount:
    def test_frozen_small_interval(self):
        # ordered pairs (n, n') in {1..4}^2 with n + n' <= 4: six of them
        assert t_count([1.0, 1.0, 1.0, 1.0]) == pytest.approx(6 / 16, abs=1e-15)

    def test_frozen_decade(self):
        f = indicator_vector(IntegerSet(tuple(range(1, 11))), 10)
        assert t_count(f) == pytest.approx(0.45, abs=1e-12)

    def test_sum_free_vanishes(self):
        f = indicator_vector(IntegerSet((1, 3, 5, 7, 9)), 10)
        assert abs(t_count(f)) <= 1e-12

    def test_matches_direct_triple_sum(self):
        rng = rng_from_seed(90, "tcount")
        for _ in range(25):
            n = int(rng.integers(2, 28))
            f = rng.uniform(-1, 1, n)
            direct = 0.0
            for i in range(1, n + 1):
                for j in range(1, n + 1):
                    if i + j <= n:
                        direct += f[i - 1] * f[j - 1] * f[i + j - 1]
            assert t_count(f) == pytest.approx(direct / n**2, abs=1e-12)

    def test_rejects_bad_shapes(self):
        with pytest.raises(ValueError):
            t_count([])
        with pytest.raises(ValueError):
            t_count(np.ones((3, 3)))


class TestU2:
    def test_interval_indicator_norm_is_one(self):
        for n in (3, 17, 100):
            sig = interval_signal(np.ones(n))
            assert u2_norm(sig) == pytest.approx(1.0, abs=1e-13)

    def test_parseval(self):
        rng = rng_from_seed(90, "parseval")
        v = rng.uniform(-1, 1, 37)
        sig = interval_signal(v)
        coeffs = spectrum(sig)
        lhs = float(np.sum(np.abs(coeffs) ** 2))
        rhs = float(np.mean(np.abs(sig.values) ** 2))
        assert lhs == pytest.approx(rhs, abs=1e-13)

    def test_fft_matches_direct(self):
        rng = rng_from_seed(90, "u2-direct")
        for _ in range(6):
            n = int(rng.integers(2, 22))
            sig = interval_signal(rng.uniform(-1, 1, n))
            assert u2_group_norm(sig) == pytest.approx(
                u2_group_norm_direct(sig), abs=1e-9
            )
            assert u2_norm(sig) == pytest.approx(u2_norm_direct(sig), abs=1e-9)

    def test_embedding_independence(self):
        rng = rng_from_seed(90, "u2-embed")
        v = rng.uniform(-1, 1, 19)
        a = u2_norm(interval_signal(v))
        b = u2_norm(interval_signal(v, n_prime=512))
        assert a == pytest.approx(b, abs=1e-6)

    def test_direct_cap(self):
        sig = interval_signal(np.ones(200), n_prime=1024)
        with pytest.raises(ValueError):
            u2_group_norm_direct(sig)


class TestDifferences:
    def test_frozen_counts(self):
        counts = difference_counts(POW2, 8)
        assert counts.tolist() == [4, 1, 1, 1, 1, 0, 1, 1]

    def test_difference_set_size(self):
        counts = difference_counts(POW2, 8)
        size = sum(2 for c in counts[1:] if c > 0) + 1
        assert size == 13

    def test_autocorrelation_even(self):
        g = autocorrelation(POW2, 8)
        assert len(g) == 15
        assert np.allclose(g, g[::-1])
        assert g[7] == pytest.approx(4 / 8)

    def test_popular_frozen(self):
        assert popular_differences(POW2, 8, Fraction(1, 4)) == [0]

    def test_popular_monotone_and_contained(self):
        counts = difference_counts(POW2, 8)
        loose = popular_differences(POW2, 8, Fraction(1, 8))
        tight = popular_differences(POW2, 8, Fraction(1, 2))
        assert set(tight) <= set(loose)
        for d in loose:
            assert counts[abs(d)] > 0

    def test_threshold_validated(self):
        for bad in (0, Fraction(-1, 2), 2):
            with pytest.raises(ValueError):
                popular_differences(POW2, 8, bad)


class TestPollard:
    def test_integer_tau_always_holds(self):
        rng = rng_from_seed(90, "pollard")
        for _ in range(60):
            p = int(rng.choice([5, 7, 11, 13]))
            s1 = [int(x) for x in rng.choice(p, size=int(rng.integers(1, p)), replace=False)]
            s2 = [int(x) for x in rng.choice(p, size=int(rng.integers(1, p)), replace=False)]
            k = int(rng.integers(0, min(len(s1), len(s2)) + 1))
            rep = pollard_check(s1, s2, p, Fraction(k, p))
            assert rep.holds, rep

    def test_real_t_counterexample(self):
        rep = pollard_check((0,), (0,), 5, Fraction(1, 10))
        assert rep.lhs == Fraction(1, 50)
        assert rep.rhs == Fraction(3, 100)
        assert not rep.holds

    def test_validation(self):
        with pytest.raises(ValueError):
            pollard_check((0,), (1,), 6, 0)  # composite modulus
        with pytest.raises(ValueError):
            pollard_check((0, 0), (1,), 5, 0)  # duplicates
        with pytest.raises(ValueError):
            pollard_check((5,), (1,), 5, 0)  # out of range
        with pytest.raises(ValueError):
            pollard_check((0,), (1, 2), 5, Fraction(2, 5))  # t beyond min size

    def test_json_shape(self):
        d = pollard_check((0, 1), (2,), 5, Fraction(1, 5)).to_json_dict()
        assert set(d) == {"p", "t", "lhs", "rhs", "holds"}
        assert d["t"] == "1/5"


class TestStability:
    def test_gap_bound(self):
        rng = rng_from_seed(90, "stability")
        for _ in range(40):
            n = int(rng.integers(4, 200))
            f = rng.uniform(-1, 1, n)
            g = np.clip(f + rng.uniform(-0.2, 0.2, n), -1, 1)
            rep = t_stability_gap(f, g)
            assert rep.t_gap <= 7 * rep.l1_gap + 1e-12

    def test_identical_inputs(self):
        f = np.linspace(-1, 1, 50)
        rep = t_stability_gap(f, f)
        assert rep.t_gap == 0.0 and rep.l1_gap == 0.0

    def test_range_enforced(self):
        with pytest.raises(ValueError):
            t_stability_gap([2.0], [0.0])
        with pytest.raises(ValueError):
            t_stability_gap([0.0, 0.0], [0.0])


class TestDecomposition:
    def test_reconstruction_and_invariants(self):
        rng = rng_from_seed(90, "decompose")
        v = rng.uniform(-1, 1, 30)
        sig = interval_signal(v)
        tau = 0.05
        pair = fourier_decompose(sig, tau)
        total = pair.f_structured.values + pair.f_residual.values
        assert np.allclose(total, sig.values, atol=1e-12)
        resid = np.abs(spectrum(pair.f_residual))
        assert resid.max() < tau + 1e-12
        mean_sq = float(np.mean(np.abs(sig.values) ** 2))
        assert pair.frequency_count * tau**2 <= mean_sq + 1e-12
        assert u2_group_norm(pair.f_residual) <= tau**0.5 * mean_sq**0.25 + 1e-12

    def test_huge_tau_leaves_nothing(self):
        sig = interval_signal(np.ones(10))
        pair = fourier_decompose(sig, 10.0)
        assert pair.frequency_count == 0
        assert np.allclose(pair.f_structured.values, 0.0)

    def test_tau_validated(self):
        with pytest.raises(ValueError):
            fourier_decompose(interval_signal(np.ones(4)), 0.0)
