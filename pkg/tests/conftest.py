import pytest

from pairrank import (
    ComparisonData,
    SolverSpec,
    Strengths,
    SynthResult,
    SynthSpec,
    generate_tournament,
    generate_tournament_ties,
    reference_fit,
)


@pytest.fixture
def two_player() -> ComparisonData:
    """w_ab = 3, w_ba = 1; closed-form MLE pi = (sqrt(3), 1/sqrt(3))."""
    return ComparisonData.from_pairs([("a", "b", 3), ("b", "a", 1)])


@pytest.fixture
def triangle() -> ComparisonData:
    """Small strongly connected three-player instance."""
    return ComparisonData.from_pairs(
        [("a", "b", 3), ("b", "a", 1), ("b", "c", 2), ("c", "b", 2), ("c", "a", 4), ("a", "c", 1)]
    )


@pytest.fixture
def ties_symmetric() -> ComparisonData:
    """w_ab = w_ba = 1, t_ab = 2: fixed point pi = (1, 1), nu = 1."""
    return ComparisonData.from_pairs([("a", "b", 1), ("b", "a", 1)], [("a", "b", 2)])


# The 1000-player / 50 000-game synthetic workload is shared session-wide:
# generating it and solving it to reference precision is the expensive part
# of the benchmark-protocol tests.


@pytest.fixture(scope="session")
def bench_scale() -> SynthResult:
    return generate_tournament(SynthSpec(n_players=1000, n_games=50_000, seed=1))


@pytest.fixture(scope="session")
def bench_scale_ties() -> SynthResult:
    return generate_tournament_ties(
        SynthSpec(n_players=1000, n_games=50_000, ties=True, nu_true=0.5, seed=2)
    )


@pytest.fixture(scope="session")
def bench_scale_mle_reference(bench_scale) -> Strengths:
    return reference_fit(bench_scale.data, SolverSpec())


@pytest.fixture(scope="session")
def bench_scale_map_reference(bench_scale) -> Strengths:
    return reference_fit(bench_scale.data, SolverSpec(mode="map"))


@pytest.fixture(scope="session")
def bench_scale_ties_reference(bench_scale_ties) -> Strengths:
    return reference_fit(bench_scale_ties.data, SolverSpec(ties_model="newman-ties"))
