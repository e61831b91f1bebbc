"""Shared domain types: comparison data, strength vectors, solver settings.

Everything downstream (likelihood evaluation, solvers, benchmarking) works in
terms of the types defined here.  ``ComparisonData`` is immutable after
construction and may be shared freely across concurrent fits.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from types import MappingProxyType
from typing import Iterable, Mapping

import numpy as np


class PairRankError(Exception):
    """Base class for all model/validation errors raised by this package."""


class SelfMatch(PairRankError):
    """A player was recorded as playing against itself."""


class NegativeCount(PairRankError):
    """A win or tie count was negative or non-finite."""


class InvalidStrengths(PairRankError):
    """A strength vector (or tie parameter) was non-positive or non-finite."""


class NotStronglyConnected(PairRankError):
    """MLE requested but the interaction digraph is not strongly connected.

    Attributes:
        components: partition of player indices into strongly connected
            components, ordered by smallest member.
    """

    def __init__(self, message: str, components: list[list[int]]):
        super().__init__(message)
        self.components = components


class DegenerateStrength(PairRankError):
    """An update drove a strength to 0 or infinity (player index attached)."""

    def __init__(self, message: str, player: int):
        super().__init__(message)
        self.player = player


class DegenerateNu(PairRankError):
    """The tie-parameter update diverged (e.g. every recorded game was a tie)."""


class MaxSweepsExceeded(PairRankError):
    """An iteration hit its sweep limit before meeting its tolerance."""


class RedrawLimitExceeded(PairRankError):
    """Synthetic generation could not produce a strongly connected instance."""


class NotConverged(PairRankError):
    """A convergence-rate query was made at a point that is not a fitted optimum."""


class ParseError(PairRankError):
    """A comparison file could not be parsed (carries the line number)."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ModelMismatchWarning(UserWarning):
    """A ties model was requested for data that contains no ties."""


def _as_count(value: float) -> float:
    v = float(value)
    if not np.isfinite(v) or v < 0:
        raise NegativeCount(f"counts must be finite and >= 0, got {value!r}")
    return v


@dataclass(frozen=True)
class PairTable:
    """Flat arrays over interacting unordered pairs, i < j row-wise.

    ``wins_ij`` holds wins of ``i`` over ``j``, ``wins_ji`` the reverse, and
    ``ties`` the symmetric tie count for the pair.
    """

    i: np.ndarray
    j: np.ndarray
    wins_ij: np.ndarray
    wins_ji: np.ndarray
    ties: np.ndarray


@dataclass(frozen=True)
class Adjacency:
    """CSR neighbour lists: for player ``p`` the slice indptr[p]:indptr[p+1].

    ``wins_out[k]`` is w(p, nbr[k]), ``wins_in[k]`` is w(nbr[k], p) and
    ``ties[k]`` the symmetric tie count.
    """

    indptr: np.ndarray
    nbr: np.ndarray
    wins_out: np.ndarray
    wins_in: np.ndarray
    ties: np.ndarray


class ComparisonData:
    """Sparse decisive-win and tie counts over a fixed set of players.

    Player identifiers are opaque strings; their position in ``ids`` is the
    dense index used everywhere else.  Win counts are directed (w_ij = wins of
    i over j); tie counts are symmetric and stored once per unordered pair.
    Counts are non-negative reals so that half-win tie preprocessing composes
    with every solver.

    Self-matches are rejected at construction: they are meaningless under the
    model and almost always indicate corrupt input.
    """

    def __init__(
        self,
        ids: Iterable[str],
        wins: Mapping[tuple[int, int], float],
        ties: Mapping[tuple[int, int], float] | None = None,
    ):
        self._ids = tuple(str(x) for x in ids)
        n = len(self._ids)
        if n == 0:
            raise PairRankError("need at least one player")
        if len(set(self._ids)) != n:
            raise PairRankError("player ids must be unique")

        w: dict[tuple[int, int], float] = {}
        for (i, j), c in wins.items():
            i, j = int(i), int(j)
            if i == j:
                raise SelfMatch(f"self-match for player index {i}")
            if not (0 <= i < n and 0 <= j < n):
                raise PairRankError(f"win index ({i}, {j}) out of range for {n} players")
            c = _as_count(c)
            if c > 0:
                w[(i, j)] = w.get((i, j), 0.0) + c

        t: dict[tuple[int, int], float] = {}
        for (i, j), c in (ties or {}).items():
            i, j = int(i), int(j)
            if i == j:
                raise SelfMatch(f"self-tie for player index {i}")
            if not (0 <= i < n and 0 <= j < n):
                raise PairRankError(f"tie index ({i}, {j}) out of range for {n} players")
            c = _as_count(c)
            if c > 0:
                key = (min(i, j), max(i, j))
                t[key] = t.get(key, 0.0) + c

        self._wins = dict(sorted(w.items()))
        self._ties = dict(sorted(t.items()))

    @classmethod
    def from_pairs(
        cls,
        win_rows: Iterable[tuple[str, str, float]],
        tie_rows: Iterable[tuple[str, str, float]] = (),
        extra_ids: Iterable[str] = (),
    ) -> "ComparisonData":
        """Build from (id, id, count) rows; indices follow sorted id order.

        Duplicate win rows for the same ordered pair are summed, as are
        duplicate tie rows for the same unordered pair.  Sorting the ids makes
        the dense index mapping reproducible across runs.
        """
        win_rows = [(str(a), str(b), c) for a, b, c in win_rows]
        tie_rows = [(str(a), str(b), c) for a, b, c in tie_rows]
        names = {a for a, _, _ in win_rows} | {b for _, b, _ in win_rows}
        names |= {a for a, _, _ in tie_rows} | {b for _, b, _ in tie_rows}
        names |= set(str(x) for x in extra_ids)
        ids = sorted(names)
        index = {name: k for k, name in enumerate(ids)}
        wins: dict[tuple[int, int], float] = {}
        for a, b, c in win_rows:
            key = (index[a], index[b])
            wins[key] = wins.get(key, 0.0) + _as_count(c)
        ties: dict[tuple[int, int], float] = {}
        for a, b, c in tie_rows:
            ia, ib = index[a], index[b]
            if ia == ib:
                raise SelfMatch(f"self-tie for player {a!r}")
            key = (min(ia, ib), max(ia, ib))
            ties[key] = ties.get(key, 0.0) + _as_count(c)
        return cls(ids, wins, ties)

    @property
    def n_players(self) -> int:
        return len(self._ids)

    @property
    def ids(self) -> tuple[str, ...]:
        return self._ids

    @property
    def wins(self) -> Mapping[tuple[int, int], float]:
        return MappingProxyType(self._wins)

    @property
    def ties(self) -> Mapping[tuple[int, int], float]:
        """Tie counts keyed by (i, j) with i < j; symmetric by definition."""
        return MappingProxyType(self._ties)

    def index_of(self, player_id: str) -> int:
        return self._index[player_id]

    @cached_property
    def _index(self) -> dict[str, int]:
        return {name: k for k, name in enumerate(self._ids)}

    def win_count(self, i: int, j: int) -> float:
        return self._wins.get((i, j), 0.0)

    def tie_count(self, i: int, j: int) -> float:
        return self._ties.get((min(i, j), max(i, j)), 0.0)

    @property
    def total_wins(self) -> float:
        return sum(self._wins.values())

    @property
    def total_ties(self) -> float:
        return sum(self._ties.values())

    @property
    def total_games(self) -> float:
        return self.total_wins + self.total_ties

    @cached_property
    def pair_table(self) -> PairTable:
        pairs: dict[tuple[int, int], int] = {}
        for (i, j) in self._wins:
            key = (min(i, j), max(i, j))
            pairs.setdefault(key, len(pairs))
        for key in self._ties:
            pairs.setdefault(key, len(pairs))
        order = sorted(pairs)
        m = len(order)
        pi = np.empty(m, dtype=np.int64)
        pj = np.empty(m, dtype=np.int64)
        wij = np.zeros(m, dtype=np.float64)
        wji = np.zeros(m, dtype=np.float64)
        tie = np.zeros(m, dtype=np.float64)
        for k, (i, j) in enumerate(order):
            pi[k] = i
            pj[k] = j
            wij[k] = self._wins.get((i, j), 0.0)
            wji[k] = self._wins.get((j, i), 0.0)
            tie[k] = self._ties.get((i, j), 0.0)
        return PairTable(pi, pj, wij, wji, tie)

    @cached_property
    def adjacency(self) -> Adjacency:
        t = self.pair_table
        rows = np.concatenate([t.i, t.j])
        cols = np.concatenate([t.j, t.i])
        wout = np.concatenate([t.wins_ij, t.wins_ji])
        win = np.concatenate([t.wins_ji, t.wins_ij])
        ties = np.concatenate([t.ties, t.ties])
        order = np.lexsort((cols, rows))
        rows = rows[order]
        indptr = np.zeros(self.n_players + 1, dtype=np.int64)
        np.add.at(indptr, rows + 1, 1)
        np.cumsum(indptr, out=indptr)
        return Adjacency(indptr, cols[order], wout[order], win[order], ties[order])

    @cached_property
    def wins_out_total(self) -> np.ndarray:
        """Per-player total number of wins, Σ_j w_ij."""
        total = np.zeros(self.n_players)
        for (i, _), c in self._wins.items():
            total[i] += c
        return total

    def win_matrix(self) -> np.ndarray:
        """Dense w_ij matrix; intended for small instances and test oracles."""
        m = np.zeros((self.n_players, self.n_players))
        for (i, j), c in self._wins.items():
            m[i, j] = c
        return m

    def tie_matrix(self) -> np.ndarray:
        m = np.zeros((self.n_players, self.n_players))
        for (i, j), c in self._ties.items():
            m[i, j] = c
            m[j, i] = c
        return m

    def with_half_win_ties(self) -> "ComparisonData":
        """Fold each tie into half a win for both players and clear the ties."""
        wins = dict(self._wins)
        for (i, j), c in self._ties.items():
            wins[(i, j)] = wins.get((i, j), 0.0) + 0.5 * c
            wins[(j, i)] = wins.get((j, i), 0.0) + 0.5 * c
        return ComparisonData(self._ids, wins, {})

    def __repr__(self) -> str:
        return (
            f"ComparisonData(n_players={self.n_players}, "
            f"win_pairs={len(self._wins)}, tie_pairs={len(self._ties)})"
        )


def _check_positive_vector(pi: np.ndarray) -> np.ndarray:
    pi = np.asarray(pi, dtype=np.float64)
    if pi.ndim != 1 or pi.size == 0:
        raise InvalidStrengths("strength vector must be 1-D and non-empty")
    if not np.all(np.isfinite(pi)) or np.any(pi <= 0):
        raise InvalidStrengths("strengths must be finite and strictly positive")
    return pi


@dataclass(frozen=True)
class Strengths:
    """Positive strength vector, plus the tie parameter when a ties model is active.

    Derived quantities: score s = log(pi) and p1 = pi/(pi+1), the probability
    of beating a strength-1 (average) player.
    """

    pi: np.ndarray
    nu: float | None = None

    def __post_init__(self):
        pi = _check_positive_vector(self.pi)
        pi.setflags(write=False)
        object.__setattr__(self, "pi", pi)
        if self.nu is not None:
            nu = float(self.nu)
            if not np.isfinite(nu) or nu < 0:
                raise InvalidStrengths(f"tie parameter must be finite and >= 0, got {nu}")
            object.__setattr__(self, "nu", nu)

    @property
    def n(self) -> int:
        return self.pi.shape[0]

    def scores(self) -> np.ndarray:
        return np.log(self.pi)

    def p1(self) -> np.ndarray:
        return self.pi / (self.pi + 1.0)


def normalize_geometric_mean(pi: np.ndarray) -> np.ndarray:
    """Rescale a positive vector so its geometric mean is 1.

    Ratios pi_i/pi_j are preserved; this fixes the model's global scale
    freedom.  Idempotent up to floating error.
    """
    pi = _check_positive_vector(pi)
    return pi * np.exp(-np.mean(np.log(pi)))


_ALGORITHMS = ("newman", "zermelo", "alpha")
_MODES = ("mle", "map")
_TIES_MODELS = ("none", "davidson", "newman-ties", "half-win")
_INITS = ("ones", "logistic")


@dataclass(frozen=True)
class SolverSpec:
    """Algorithm selection, mode, stopping rule, and initialization for a fit.

    ``algorithm`` is ``"newman"`` (the fast rule, alpha = 0), ``"zermelo"``
    (the classic rule, alpha = 1) or ``"alpha"`` with an explicit ``alpha``
    value.  The stopping rule is the max per-player change of p1 = pi/(pi+1)
    between sweeps, a bounded scale on which 1e-10 is a conservative default.
    """

    algorithm: str = "newman"
    alpha: float = 0.0
    mode: str = "mle"
    ties_model: str = "none"
    init: str = "ones"
    seed: int = 0
    tolerance: float = 1e-10
    max_sweeps: int = 100_000

    def __post_init__(self):
        if self.algorithm not in _ALGORITHMS:
            raise PairRankError(f"unknown algorithm {self.algorithm!r}")
        if self.mode not in _MODES:
            raise PairRankError(f"unknown mode {self.mode!r}")
        if self.ties_model not in _TIES_MODELS:
            raise PairRankError(f"unknown ties model {self.ties_model!r}")
        if self.init not in _INITS:
            raise PairRankError(f"unknown init {self.init!r}")
        if self.algorithm == "alpha" and not (np.isfinite(self.alpha) and self.alpha >= 0):
            raise PairRankError("alpha must be finite and >= 0")
        if self.tolerance <= 0:
            raise PairRankError("tolerance must be positive")
        if self.max_sweeps < 1:
            raise PairRankError("max_sweeps must be at least 1")
        if self.mode == "map":
            if self.ties_model in ("davidson", "newman-ties"):
                raise PairRankError("MAP mode supports only ties_model 'none' or 'half-win'")
            if self.algorithm == "alpha" and self.alpha not in (0.0, 1.0):
                raise PairRankError("MAP mode defines updates only for alpha 0 (newman) and 1 (zermelo)")

    @property
    def effective_alpha(self) -> float:
        if self.algorithm == "newman":
            return 0.0
        if self.algorithm == "zermelo":
            return 1.0
        return float(self.alpha)

    def label(self) -> str:
        """Short human-readable name, e.g. for trace/bench report rows."""
        if self.ties_model in ("davidson", "newman-ties"):
            return self.ties_model
        base = self.algorithm if self.algorithm != "alpha" else f"alpha={self.alpha:g}"
        if self.mode == "map":
            base = f"map-{base}"
        if self.ties_model == "half-win":
            base = f"{base}+half-win"
        return base


@dataclass(frozen=True)
class FitTrace:
    """Per-sweep diagnostics; index k is the state after k sweeps (0 = initial)."""

    objective: np.ndarray
    rms_p1: np.ndarray


@dataclass(frozen=True)
class FitResult:
    strengths: Strengths
    sweeps_used: int
    trace: FitTrace
    terminated: str  # "converged" | "max_sweeps" | "degenerate"
    data: ComparisonData | None = field(repr=False, compare=False, default=None)

    def ranking(self) -> list[int]:
        """Player indices sorted by strength, best first; ties broken by id."""
        ids = self.data.ids if self.data is not None else tuple(map(str, range(self.strengths.n)))
        order = sorted(range(self.strengths.n), key=lambda k: (-self.strengths.pi[k], ids[k]))
        return order


def validate(data: ComparisonData, spec: SolverSpec) -> None:
    """Check that a fit of ``spec`` on ``data`` is well posed.

    MLE modes require the interaction digraph (edge i -> j iff w_ij > 0, with
    a tie contributing edges both ways) to be strongly connected, otherwise
    the likelihood has no maximum.  MAP mode always passes: the prior keeps
    every strength finite.

    Raises:
        NotStronglyConnected: for MLE on a disconnected instance, carrying the
            component partition.
    """
    if spec.mode == "map":
        return
    from . import graph  # local import: graph depends on core

    working = data.with_half_win_ties() if spec.ties_model == "half-win" else data
    if working.total_games <= 0:
        raise NotStronglyConnected(
            "maximum-likelihood fit needs at least one recorded game",
            [[i] for i in range(working.n_players)],
        )
    components = graph.strongly_connected_components(working)
    if len(components) > 1:
        sizes = sorted((len(c) for c in components), reverse=True)
        raise NotStronglyConnected(
            f"interaction digraph has {len(components)} strongly connected components "
            f"(sizes {sizes}); the maximum-likelihood estimate does not exist",
            components,
        )
