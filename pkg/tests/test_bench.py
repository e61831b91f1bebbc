import numpy as np
import pytest

from pairrank import (
    BenchSpec,
    MaxSweepsExceeded,
    PairRankError,
    SolverSpec,
    Strengths,
    fit,
    gradient_residual,
    iterations_to_convergence,
    reference_fit,
    rms_p1_deviation,
    run_bench,
    trace_run,
)


class TestReferenceFit:
    def test_two_player_closed_form(self, two_player):
        ref = reference_fit(two_player, SolverSpec())
        np.testing.assert_allclose(ref.pi, [np.sqrt(3), 1 / np.sqrt(3)], atol=1e-12)

    def test_invariant_to_initialization_seed(self, triangle):
        a = reference_fit(triangle, SolverSpec(init="logistic", seed=1))
        b = reference_fit(triangle, SolverSpec(init="logistic", seed=99))
        c = reference_fit(triangle, SolverSpec(init="ones"))
        np.testing.assert_allclose(a.pi, b.pi, atol=1e-10)
        np.testing.assert_allclose(a.pi, c.pi, atol=1e-10)

    def test_gradient_residuals_tiny(self, triangle):
        ref = reference_fit(triangle, SolverSpec())
        wins_out = triangle.wins_out_total
        for i in range(triangle.n_players):
            assert abs(gradient_residual(triangle, ref.pi, i)) * ref.pi[i] / wins_out[i] < 1e-10

    def test_classic_spec_maps_to_fast_ties_rule(self, ties_symmetric):
        ref = reference_fit(ties_symmetric, SolverSpec(ties_model="davidson"))
        np.testing.assert_allclose(ref.pi, [1.0, 1.0], atol=1e-12)
        assert ref.nu == pytest.approx(1.0, abs=1e-12)


class TestIterationsToConvergence:
    def test_zero_when_starting_at_reference(self, triangle):
        ref = reference_fit(triangle, SolverSpec())
        n = iterations_to_convergence(triangle, SolverSpec(), ref, initial=Strengths(ref.pi))
        assert n == 0

    def test_fast_rule_needs_no_more_sweeps(self, triangle):
        ref = reference_fit(triangle, SolverSpec())
        spec_fast = SolverSpec(algorithm="newman", init="logistic", seed=11)
        spec_classic = SolverSpec(algorithm="zermelo", init="logistic", seed=11)
        fast = iterations_to_convergence(triangle, spec_fast, ref)
        classic = iterations_to_convergence(triangle, spec_classic, ref)
        assert fast <= classic

    def test_sweep_budget_enforced(self, triangle):
        ref = reference_fit(triangle, SolverSpec())
        with pytest.raises(MaxSweepsExceeded):
            iterations_to_convergence(
                triangle,
                SolverSpec(algorithm="zermelo", init="logistic", seed=1, max_sweeps=1),
                ref,
            )


class TestRmsP1Deviation:
    def test_identical_vectors(self):
        pi = np.array([0.3, 2.0, 5.0])
        assert rms_p1_deviation(pi, pi) == 0.0

    def test_hand_value(self):
        assert rms_p1_deviation(np.array([1.0, 1.0]), np.array([3.0, 1 / 3])) == pytest.approx(
            0.25
        )

    def test_length_mismatch(self):
        with pytest.raises(PairRankError):
            rms_p1_deviation(np.ones(3), np.ones(4))

    def test_monotone_over_late_trace(self, triangle):
        result = fit(triangle, SolverSpec(algorithm="zermelo", init="logistic", seed=13))
        rms = result.trace.rms_p1
        late = rms[len(rms) // 2 :]
        assert np.all(np.diff(late) <= 1e-15)


class TestTraceRun:
    def test_shared_start_and_monotone_objective(self, triangle):
        specs = [
            SolverSpec(algorithm="newman"),
            SolverSpec(algorithm="zermelo"),
            SolverSpec(algorithm="alpha", alpha=0.5),
        ]
        table = trace_run(triangle, specs, n_sweeps=25, seed=5)
        assert table.labels() == ["newman", "zermelo", "alpha=0.5"]
        first_rows = {
            label: (obj[0], rms[0])
            for label in table.labels()
            for _, obj, rms in [table.for_algorithm(label)]
        }
        # same family, same initialization: identical sweep-0 rows
        assert len(set(first_rows.values())) == 1
        for label in table.labels():
            sweeps, obj, rms = table.for_algorithm(label)
            assert sweeps[0] == 0 and sweeps[-1] == 25
            assert np.all(np.diff(obj) >= -1e-12 * np.abs(obj[:-1]))

    def test_fast_rule_leads_after_ten_sweeps(self, bench_scale):
        specs = [SolverSpec(algorithm="newman"), SolverSpec(algorithm="zermelo")]
        table = trace_run(bench_scale.data, specs, n_sweeps=10, seed=3)
        _, _, rms_fast = table.for_algorithm("newman")
        _, _, rms_classic = table.for_algorithm("zermelo")
        assert rms_fast[-1] < rms_classic[-1]


class TestRunBench:
    def test_aggregation_matches_raw_counts(self, triangle):
        bench = BenchSpec(
            algorithms=(SolverSpec(algorithm="newman"), SolverSpec(algorithm="zermelo")),
            replicates=6,
            seed_base=40,
        )
        report = run_bench(triangle, bench)
        fast = report.for_label("newman")
        classic = report.for_label("zermelo")
        for entry in (fast, classic):
            assert entry.iterations.shape == (6,)
            assert entry.mean == pytest.approx(np.mean(entry.iterations))
            assert entry.std == pytest.approx(np.std(entry.iterations, ddof=1))
        assert classic.speed_up_vs_zermelo == pytest.approx(1.0)
        assert fast.speed_up_vs_zermelo == pytest.approx(classic.mean / fast.mean)

    def test_no_classic_baseline_means_no_speed_up(self, triangle):
        report = run_bench(
            triangle, BenchSpec(algorithms=(SolverSpec(algorithm="newman"),), replicates=2)
        )
        assert report.for_label("newman").speed_up_vs_zermelo is None

    def test_deterministic(self, triangle):
        bench = BenchSpec(
            algorithms=(SolverSpec(algorithm="newman"),), replicates=4, seed_base=9
        )
        a = run_bench(triangle, bench)
        b = run_bench(triangle, bench)
        np.testing.assert_array_equal(
            a.for_label("newman").iterations, b.for_label("newman").iterations
        )

    def test_reference_tolerance_must_be_far_below_criterion(self):
        with pytest.raises(PairRankError):
            BenchSpec(
                algorithms=(SolverSpec(),), criterion_tol=1e-6, reference_tol=1e-7
            )
