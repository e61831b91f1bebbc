import numpy as np
import pytest

from pairrank import (
    ComparisonData,
    NotConverged,
    SolverSpec,
    convergence_factor,
    convergence_factor_max,
    convergence_factor_zermelo,
    convergence_report,
    dlambda_dalpha,
    fit,
    reference_fit,
)

from oracles import random_connected_instance

ALPHA_GRID = (0.0, 0.25, 0.5, 1.0, 2.0)


@pytest.fixture
def two_player_hat(two_player):
    return two_player, np.array([np.sqrt(3), 1 / np.sqrt(3)])


# five players, fitted factors at alpha=0 include negative entries
NEGATIVE_LAMBDA_WINS = {
    (0, 1): 4.0, (0, 2): 3.0, (0, 3): 2.0, (0, 4): 5.0,
    (1, 0): 1.0, (1, 3): 1.0, (1, 4): 4.0,
    (2, 0): 5.0, (2, 1): 3.0, (2, 3): 1.0, (2, 4): 4.0,
    (3, 0): 2.0, (3, 1): 5.0, (3, 2): 1.0, (3, 4): 5.0,
    (4, 0): 2.0, (4, 1): 4.0, (4, 2): 5.0, (4, 3): 3.0,
}


def connected_with_reference(gen, **kwargs):
    data = random_connected_instance(gen, **kwargs)
    return data, reference_fit(data, SolverSpec())


class TestClosedFormTwoPlayer:
    def test_classic_rule_factors(self, two_player_hat):
        data, hat = two_player_hat
        assert convergence_factor_zermelo(data, hat, 0) == pytest.approx(0.75)
        assert convergence_factor_zermelo(data, hat, 1) == pytest.approx(0.25)
        assert convergence_factor(data, hat, 0, 1.0) == pytest.approx(0.75, abs=1e-7)
        assert convergence_factor(data, hat, 1, 1.0) == pytest.approx(0.25, abs=1e-7)

    def test_fast_rule_factors_vanish(self, two_player_hat):
        # with two players the fast update does not depend on own strength
        data, hat = two_player_hat
        assert convergence_factor(data, hat, 0, 0.0) == pytest.approx(0.0, abs=1e-8)
        assert convergence_factor(data, hat, 1, 0.0) == pytest.approx(0.0, abs=1e-8)
        assert convergence_factor_max(data, hat, 0.0) == pytest.approx(0.0, abs=1e-8)
        assert convergence_factor_max(data, hat, 1.0) == pytest.approx(0.75, abs=1e-7)

    def test_alpha_sensitivity_hand_value(self, two_player_hat):
        data, hat = two_player_hat
        assert dlambda_dalpha(data, hat, 0, 1.0) == pytest.approx(3 / 16, abs=1e-6)


class TestAgainstClosedForm:
    def test_finite_difference_matches_closed_form(self):
        gen = np.random.default_rng(97)
        for _ in range(20):
            data, ref = connected_with_reference(gen)
            for i in range(data.n_players):
                fd = convergence_factor(data, ref.pi, i, 1.0)
                cf = convergence_factor_zermelo(data, ref.pi, i)
                assert fd == pytest.approx(cf, abs=1e-5)
                assert cf > 0  # strictly positive on strongly connected data


class TestOrderings:
    def test_lambda_increasing_in_alpha(self):
        gen = np.random.default_rng(89)
        for _ in range(10):
            data, ref = connected_with_reference(gen)
            for i in range(data.n_players):
                lam = [convergence_factor(data, ref.pi, i, a) for a in ALPHA_GRID]
                assert all(b > a for a, b in zip(lam, lam[1:]))

    def test_slower_than_classic_above_alpha_one(self):
        gen = np.random.default_rng(93)
        for _ in range(10):
            data, ref = connected_with_reference(gen)
            assert convergence_factor_max(data, ref.pi, 2.0) > convergence_factor_max(
                data, ref.pi, 1.0
            )

    def test_contraction_below_one(self):
        gen = np.random.default_rng(91)
        for _ in range(10):
            data, ref = connected_with_reference(gen)
            for alpha in (0.0, 0.5, 1.0, 2.0):
                assert convergence_factor_max(data, ref.pi, alpha) < 1.0

    def test_negative_factors_happen_for_small_alpha(self):
        data = ComparisonData([str(k) for k in range(5)], NEGATIVE_LAMBDA_WINS)
        ref = reference_fit(data, SolverSpec())
        report = convergence_report(data, ref.pi, 0.0)
        assert np.any(report.lambda_i < 0)
        assert np.all(np.abs(report.lambda_i) < 1.0)
        assert report.lambda_max == np.max(np.abs(report.lambda_i))


class TestAlphaSensitivity:
    def test_strictly_positive(self):
        gen = np.random.default_rng(87)
        for _ in range(10):
            data, ref = connected_with_reference(gen)
            for i in range(data.n_players):
                for alpha in ALPHA_GRID:
                    assert dlambda_dalpha(data, ref.pi, i, alpha) > 0

    def test_matches_finite_difference_in_alpha(self):
        gen = np.random.default_rng(83)
        h = 1e-3
        for _ in range(8):
            data, ref = connected_with_reference(gen, n_hi=8)
            for i in range(data.n_players):
                for alpha in (0.25, 0.5, 1.0, 2.0):
                    slope = (
                        convergence_factor(data, ref.pi, i, alpha + h)
                        - convergence_factor(data, ref.pi, i, alpha - h)
                    ) / (2 * h)
                    assert dlambda_dalpha(data, ref.pi, i, alpha) == pytest.approx(
                        slope, rel=1e-4, abs=1e-8
                    )


class TestGuards:
    def test_not_converged_rejected(self, two_player):
        with pytest.raises(NotConverged):
            convergence_factor(two_player, np.array([1.0, 1.0]), 0, 1.0)

    def test_report_shape(self, two_player_hat):
        data, hat = two_player_hat
        report = convergence_report(data, hat, 1.0)
        assert report.alpha == 1.0
        assert report.lambda_i.shape == (2,)
        np.testing.assert_allclose(report.at, hat)


class TestEmpiricalDecay:
    def test_rms_contraction_tracks_lambda_max(self):
        # dense instance: every pair plays, so the sweep dynamics stay close
        # to the single-coordinate picture
        gen = np.random.default_rng(2)
        n = 8
        wins = {
            (i, j): float(gen.integers(2, 8)) for i in range(n) for j in range(n) if i != j
        }
        data = ComparisonData([str(k) for k in range(n)], wins)
        ref = reference_fit(data, SolverSpec())
        for alpha in (0.5, 1.0, 2.0):
            lam = convergence_factor_max(data, ref.pi, alpha)
            result = fit(
                data,
                SolverSpec(algorithm="alpha", alpha=alpha, init="logistic", seed=3, tolerance=1e-14),
            )
            rms = result.trace.rms_p1
            window = np.where((rms > 1e-11) & (rms < 1e-4))[0]
            assert len(window) >= 3
            ratios = rms[window[1:]] / rms[window[:-1]]
            observed = float(np.exp(np.mean(np.log(ratios))))
            assert lam / 2 < observed < lam * 2
