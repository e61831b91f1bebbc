"""Synthetic tournament generation.

Players get latent logistic scores, game opponents are drawn uniformly at
random, and outcomes follow the model itself.  Instances whose interaction
digraph is not strongly connected are discarded wholesale and redrawn, so
every generated instance admits a maximum-likelihood fit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ComparisonData, PairRankError, RedrawLimitExceeded
from .graph import _scc_csr


@dataclass(frozen=True)
class SynthSpec:
    """Tournament shape: players, total games, optional tie generation."""

    n_players: int
    n_games: int
    ties: bool = False
    nu_true: float = 0.5
    seed: int = 0
    max_redraws: int = 100

    def __post_init__(self):
        if self.n_players < 2:
            raise PairRankError("need at least two players")
        if self.n_games < 1:
            raise PairRankError("need at least one game")
        if self.ties and not (np.isfinite(self.nu_true) and self.nu_true >= 0):
            raise PairRankError("true tie odds must be finite and >= 0")


@dataclass(frozen=True)
class SynthResult:
    data: ComparisonData
    true_scores: np.ndarray
    true_nu: float | None
    redraws: int


def _logistic_from(rng: np.random.Generator, n: int) -> np.ndarray:
    u = rng.random(n)
    while np.any(u == 0.0):  # measure-zero guard; keeps log finite
        redo = u == 0.0
        u[redo] = rng.random(int(np.sum(redo)))
    return np.log(u / (1.0 - u))


def sample_logistic_scores(n: int, seed: int) -> np.ndarray:
    """n i.i.d. logistic scores via inverse CDF: s = log(u/(1-u)), u uniform."""
    if n < 1:
        raise PairRankError("need at least one sample")
    return _logistic_from(np.random.default_rng(seed), n)


def _player_ids(n: int) -> list[str]:
    width = max(4, len(str(n - 1)))
    return [f"p{k:0{width}d}" for k in range(n)]


def _draw_pairs(rng: np.random.Generator, n: int, m: int) -> tuple[np.ndarray, np.ndarray]:
    # uniform over ordered pairs, rejecting i == j position by position
    a = rng.integers(0, n, size=m)
    b = rng.integers(0, n, size=m)
    clash = a == b
    while np.any(clash):
        k = int(np.sum(clash))
        a[clash] = rng.integers(0, n, size=k)
        b[clash] = rng.integers(0, n, size=k)
        clash = a == b
    return a, b


def _pair_counts(first: np.ndarray, second: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    codes, counts = np.unique(first.astype(np.int64) * n + second, return_counts=True)
    return codes // n, codes % n, counts.astype(np.float64)


def _connected(n: int, src: np.ndarray, dst: np.ndarray) -> bool:
    order = np.argsort(src, kind="stable")
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.add.at(indptr, src + 1, 1)
    np.cumsum(indptr, out=indptr)
    return len(_scc_csr(n, indptr, dst[order])) == 1


def generate_tournament(spec: SynthSpec) -> SynthResult:
    """Generate a decisive-outcome tournament (no ties) plus its true scores."""
    if spec.ties:
        raise PairRankError("spec requests ties; use generate_tournament_ties")
    rng = np.random.default_rng(spec.seed)
    scores = _logistic_from(rng, spec.n_players)
    pi = np.exp(scores)
    n = spec.n_players

    for attempt in range(spec.max_redraws + 1):
        a, b = _draw_pairs(rng, n, spec.n_games)
        p_a = pi[a] / (pi[a] + pi[b])
        a_wins = rng.random(spec.n_games) < p_a
        wi, wj, wc = _pair_counts(np.where(a_wins, a, b), np.where(a_wins, b, a), n)
        if not _connected(n, wi, wj):
            continue
        wins = {(int(i), int(j)): float(c) for i, j, c in zip(wi, wj, wc)}
        data = ComparisonData(_player_ids(n), wins)
        return SynthResult(data, scores, None, attempt)
    raise RedrawLimitExceeded(
        f"no strongly connected instance in {spec.max_redraws + 1} draws; "
        "the tournament is too sparse or too lopsided"
    )


def generate_tournament_ties(spec: SynthSpec) -> SynthResult:
    """Generate a tournament with ties drawn from the tie-aware model.

    Per game the outcome is {first player wins, tie, second player wins} with
    the model's probabilities at ``nu_true``.  Tie edges count in both
    directions for the connectivity redraw check.
    """
    if not spec.ties:
        raise PairRankError("spec does not request ties; use generate_tournament")
    rng = np.random.default_rng(spec.seed)
    scores = _logistic_from(rng, spec.n_players)
    pi = np.exp(scores)
    n = spec.n_players
    nu = float(spec.nu_true)

    for attempt in range(spec.max_redraws + 1):
        a, b = _draw_pairs(rng, n, spec.n_games)
        denom = pi[a] + pi[b] + 2.0 * nu * np.sqrt(pi[a] * pi[b])
        p_a = pi[a] / denom
        q = 2.0 * nu * np.sqrt(pi[a] * pi[b]) / denom
        u = rng.random(spec.n_games)
        a_wins = u < p_a
        tied = (~a_wins) & (u < p_a + q)
        b_wins = ~(a_wins | tied)

        wi, wj, wc = _pair_counts(
            np.concatenate([a[a_wins], b[b_wins]]),
            np.concatenate([b[a_wins], a[b_wins]]),
            n,
        )
        ti, tj, tc = _pair_counts(
            np.minimum(a[tied], b[tied]), np.maximum(a[tied], b[tied]), n
        )
        src = np.concatenate([wi, ti, tj])
        dst = np.concatenate([wj, tj, ti])
        if not _connected(n, src, dst):
            continue
        wins = {(int(i), int(j)): float(c) for i, j, c in zip(wi, wj, wc)}
        ties = {(int(i), int(j)): float(c) for i, j, c in zip(ti, tj, tc)}
        data = ComparisonData(_player_ids(n), wins, ties)
        return SynthResult(data, scores, nu, attempt)
    raise RedrawLimitExceeded(
        f"no strongly connected instance in {spec.max_redraws + 1} draws; "
        "the tournament is too sparse or too lopsided"
    )
