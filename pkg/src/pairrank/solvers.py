"""Coordinate update rules, the asynchronous sweep engine, and the fit loop.

All rules share one shape: a single player's strength is replaced by a ratio
of neighbour sums, players are updated one by one in index order (each update
seeing all previously updated values), and one sweep touches every player
once.  The family is parameterized so that alpha = 1 is the classic fixed
point iteration and alpha = 0 the fast variant; MAP and tie-aware rules are
their direct generalizations.

The inner loops are compiled with numba: a sweep is O(number of recorded
pairings) and the benchmark protocol runs tens of thousands of sweeps.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from numba import njit

from .core import (
    ComparisonData,
    DegenerateNu,
    DegenerateStrength,
    FitResult,
    FitTrace,
    InvalidStrengths,
    ModelMismatchWarning,
    PairRankError,
    SolverSpec,
    Strengths,
    _check_positive_vector,
    normalize_geometric_mean,
    validate,
)
from .likelihood import Objective
from .synth import sample_logistic_scores

# Strengths outside these bounds mean the iteration is running away to a
# boundary (a player the data cannot pin down), not converging.
_GUARD_LO = 1e-280
_GUARD_HI = 1e280

_RULE_KINDS = ("alpha", "map-newman", "map-zermelo", "davidson", "newman-ties")


@dataclass(frozen=True)
class UpdateRule:
    """A concrete coordinate update: the family member and its parameter."""

    kind: str
    alpha: float = 0.0

    def __post_init__(self):
        if self.kind not in _RULE_KINDS:
            raise PairRankError(f"unknown update rule {self.kind!r}")
        if not (np.isfinite(self.alpha) and self.alpha >= 0):
            raise PairRankError("alpha must be finite and >= 0")

    @property
    def uses_ties(self) -> bool:
        return self.kind in ("davidson", "newman-ties")

    @property
    def is_map(self) -> bool:
        return self.kind in ("map-newman", "map-zermelo")


def rule_for(spec: SolverSpec) -> UpdateRule:
    """Map a solver spec to the concrete update rule it runs."""
    if spec.ties_model == "davidson":
        return UpdateRule("davidson")
    if spec.ties_model == "newman-ties":
        return UpdateRule("newman-ties")
    if spec.mode == "map":
        return UpdateRule("map-newman" if spec.effective_alpha == 0.0 else "map-zermelo")
    return UpdateRule("alpha", spec.effective_alpha)


def objective_for(spec: SolverSpec, data: ComparisonData) -> Objective:
    rule = rule_for(spec)
    if rule.uses_ties:
        return Objective("ties", data)
    return Objective("map" if rule.is_map else "mle", data)


# --- compiled single-coordinate updates -----------------------------------
#
# Each takes the CSR row of player i; division by a zero denominator yields
# inf/nan under the numpy error model and is caught by the range guard in the
# callers.


@njit(cache=True, error_model="numpy")
def _one_alpha(pi, i, alpha, indptr, nbr, wout, win):
    num = 0.0
    den = 0.0
    for k in range(indptr[i], indptr[i + 1]):
        j = nbr[k]
        s = pi[i] + pi[j]
        num += wout[k] * (alpha * pi[i] + pi[j]) / s
        den += (alpha * wout[k] + win[k]) / s
    return num / den


@njit(cache=True, error_model="numpy")
def _one_map_newman(pi, i, indptr, nbr, wout, win):
    prior = 1.0 / (pi[i] + 1.0)
    num = prior
    den = prior
    for k in range(indptr[i], indptr[i + 1]):
        j = nbr[k]
        s = pi[i] + pi[j]
        num += wout[k] * pi[j] / s
        den += win[k] / s
    return num / den


@njit(cache=True, error_model="numpy")
def _one_map_zermelo(pi, i, indptr, nbr, wout, win):
    num = 1.0
    den = 2.0 / (pi[i] + 1.0)
    for k in range(indptr[i], indptr[i + 1]):
        j = nbr[k]
        num += wout[k]
        den += (wout[k] + win[k]) / (pi[i] + pi[j])
    return num / den


@njit(cache=True, error_model="numpy")
def _one_davidson(pi, nu, i, indptr, nbr, wout, win, tie):
    num = 0.0
    den = 0.0
    for k in range(indptr[i], indptr[i + 1]):
        j = nbr[k]
        a_out = wout[k] + 0.5 * tie[k]
        a_in = win[k] + 0.5 * tie[k]
        d = pi[i] + pi[j] + 2.0 * nu * np.sqrt(pi[i] * pi[j])
        num += a_out
        den += (a_out + a_in) * (1.0 + nu * np.sqrt(pi[j] / pi[i])) / d
    return num / den


@njit(cache=True, error_model="numpy")
def _one_newman_ties(pi, nu, i, indptr, nbr, wout, win, tie):
    num = 0.0
    den = 0.0
    for k in range(indptr[i], indptr[i + 1]):
        j = nbr[k]
        a_out = wout[k] + 0.5 * tie[k]
        a_in = win[k] + 0.5 * tie[k]
        g = np.sqrt(pi[i] * pi[j])
        d = pi[i] + pi[j] + 2.0 * nu * g
        num += a_out * (pi[j] + nu * g) / d
        den += a_in * (1.0 + nu * g / pi[i]) / d
    return num / den


@njit(cache=True, error_model="numpy")
def _sweep_alpha(pi, alpha, indptr, nbr, wout, win):
    for i in range(pi.shape[0]):
        v = _one_alpha(pi, i, alpha, indptr, nbr, wout, win)
        if not (_GUARD_LO < v < _GUARD_HI):
            return i
        pi[i] = v
    return -1


@njit(cache=True, error_model="numpy")
def _sweep_map(pi, newman_variant, indptr, nbr, wout, win):
    for i in range(pi.shape[0]):
        if newman_variant:
            v = _one_map_newman(pi, i, indptr, nbr, wout, win)
        else:
            v = _one_map_zermelo(pi, i, indptr, nbr, wout, win)
        if not (_GUARD_LO < v < _GUARD_HI):
            return i
        pi[i] = v
    return -1


@njit(cache=True, error_model="numpy")
def _sweep_ties(pi, nu, davidson_variant, indptr, nbr, wout, win, tie):
    for i in range(pi.shape[0]):
        if davidson_variant:
            v = _one_davidson(pi, nu, i, indptr, nbr, wout, win, tie)
        else:
            v = _one_newman_ties(pi, nu, i, indptr, nbr, wout, win, tie)
        if not (_GUARD_LO < v < _GUARD_HI):
            return i
        pi[i] = v
    return -1


# --- public single-coordinate updates --------------------------------------


def _checked(data: ComparisonData, pi: np.ndarray) -> np.ndarray:
    pi = _check_positive_vector(pi)
    if pi.shape[0] != data.n_players:
        raise InvalidStrengths(
            f"strength vector has {pi.shape[0]} entries for {data.n_players} players"
        )
    return pi


def _guarded(value: float, i: int, what: str) -> float:
    if not (_GUARD_LO < value < _GUARD_HI):
        raise DegenerateStrength(
            f"{what} drove player {i} to a degenerate strength "
            "(no recorded win or no recorded loss keeps it away from 0/infinity)",
            player=i,
        )
    return float(value)


def update_alpha(data: ComparisonData, pi: np.ndarray, i: int, alpha: float) -> float:
    """One update of pi_i under the alpha family, other coordinates fixed.

    Returns (sum_j w_ij (alpha pi_i + pi_j)/(pi_i + pi_j)) /
    (sum_j (alpha w_ij + w_ji)/(pi_i + pi_j)).
    """
    pi = _checked(data, pi)
    if not (np.isfinite(alpha) and alpha >= 0):
        raise PairRankError("alpha must be finite and >= 0")
    adj = data.adjacency
    v = _one_alpha(pi, int(i), float(alpha), adj.indptr, adj.nbr, adj.wins_out, adj.wins_in)
    return _guarded(v, i, f"alpha={alpha:g} update")


def update_map(data: ComparisonData, pi: np.ndarray, i: int, variant: str = "newman") -> float:
    """One posterior-ascent update of pi_i; strictly positive for any input."""
    pi = _checked(data, pi)
    adj = data.adjacency
    if variant == "newman":
        v = _one_map_newman(pi, int(i), adj.indptr, adj.nbr, adj.wins_out, adj.wins_in)
    elif variant == "zermelo":
        v = _one_map_zermelo(pi, int(i), adj.indptr, adj.nbr, adj.wins_out, adj.wins_in)
    else:
        raise PairRankError(f"unknown MAP variant {variant!r}")
    return _guarded(v, i, f"map-{variant} update")


def update_ties_pi(
    data: ComparisonData, pi: np.ndarray, nu: float, i: int, variant: str = "newman"
) -> float:
    """One update of pi_i under the tie-aware model at the current nu."""
    pi = _checked(data, pi)
    if not (np.isfinite(nu) and nu >= 0):
        raise InvalidStrengths(f"tie parameter must be finite and >= 0, got {nu}")
    adj = data.adjacency
    args = (float(nu), int(i), adj.indptr, adj.nbr, adj.wins_out, adj.wins_in, adj.ties)
    if variant == "davidson":
        v = _one_davidson(pi, *args)
    elif variant == "newman":
        v = _one_newman_ties(pi, *args)
    else:
        raise PairRankError(f"unknown ties variant {variant!r}")
    return _guarded(v, i, f"{variant} ties update")


def update_ties_nu(data: ComparisonData, pi: np.ndarray, nu: float, variant: str = "newman") -> float:
    """One update of the tie parameter with all strengths fixed."""
    pi = _checked(data, pi)
    if data.total_ties == 0:
        warnings.warn(
            "data contains no ties; the tie parameter stays fixed at 0",
            ModelMismatchWarning,
            stacklevel=2,
        )
        return 0.0
    if not (np.isfinite(nu) and nu > 0):
        raise InvalidStrengths(f"tie parameter must be positive, got {nu}")
    t = data.pair_table
    g = np.sqrt(pi[t.i] * pi[t.j])
    d = pi[t.i] + pi[t.j] + 2.0 * nu * g
    if variant == "davidson":
        sym = t.wins_ij + t.wins_ji + t.ties  # a_ij + a_ji
        value = data.total_ties / float(np.sum(sym * 2.0 * g / d))
    elif variant == "newman":
        total_decisive = float(np.sum(t.wins_ij + t.wins_ji))
        if total_decisive == 0:
            raise DegenerateNu("every recorded game is a tie; the tie-odds estimate diverges")
        num = float(np.sum(t.ties * (pi[t.i] + pi[t.j]) / d))
        value = num / float(np.sum((t.wins_ij + t.wins_ji) * 2.0 * g / d))
    else:
        raise PairRankError(f"unknown ties variant {variant!r}")
    if not (0.0 < value < _GUARD_HI):
        raise DegenerateNu(f"tie parameter update produced {value}")
    return value


# --- sweeps and the fit loop ------------------------------------------------


def sweep(data: ComparisonData, state: Strengths, rule: UpdateRule) -> Strengths:
    """One full pass: update every player in index order, then nu if applicable.

    Updates are asynchronous (each sees all previously updated strengths).
    Maximum-likelihood rules renormalize to geometric mean 1 afterwards; MAP
    rules never renormalize because the posterior fixes the scale.
    """
    pi = state.pi.copy()
    adj = data.adjacency
    nu = state.nu

    if rule.kind == "alpha":
        err = _sweep_alpha(pi, rule.alpha, adj.indptr, adj.nbr, adj.wins_out, adj.wins_in)
    elif rule.is_map:
        err = _sweep_map(
            pi, rule.kind == "map-newman", adj.indptr, adj.nbr, adj.wins_out, adj.wins_in
        )
    else:
        if nu is None:
            raise InvalidStrengths(f"{rule.kind} sweep needs a tie parameter")
        err = _sweep_ties(
            pi,
            float(nu),
            rule.kind == "davidson",
            adj.indptr,
            adj.nbr,
            adj.wins_out,
            adj.wins_in,
            adj.ties,
        )
    if err >= 0:
        raise DegenerateStrength(
            f"sweep drove player {err} ({data.ids[err]!r}) to a degenerate strength; "
            "the data likely is not strongly connected",
            player=err,
        )

    if rule.uses_ties and data.total_ties > 0:
        variant = "davidson" if rule.kind == "davidson" else "newman"
        nu = update_ties_nu(data, pi, nu, variant)

    if not rule.is_map:
        pi = normalize_geometric_mean(pi)
    return Strengths(pi, nu)


def _initial_state(data: ComparisonData, spec: SolverSpec, rule: UpdateRule) -> Strengths:
    n = data.n_players
    if spec.init == "ones":
        pi = np.ones(n)
    else:
        pi = np.exp(sample_logistic_scores(n, spec.seed))
    nu = None
    if rule.uses_ties:
        nu = 1.0 if data.total_ties > 0 else 0.0
    return prepare_initial_state(Strengths(pi, nu), rule)


def prepare_initial_state(state: Strengths, rule: UpdateRule) -> Strengths:
    """Put an arbitrary starting state on the scale the rule iterates on."""
    if rule.is_map:
        return state
    return Strengths(normalize_geometric_mean(state.pi), state.nu)


def fit(
    data: ComparisonData,
    spec: SolverSpec,
    initial: Strengths | None = None,
    record_trace: bool = True,
) -> FitResult:
    """Fit strengths (and the tie parameter, if applicable) to the data.

    Sweeps until the largest per-player change of p1 = pi/(pi+1) in one sweep
    (and the change of nu, when ties are modelled) drops below the spec's
    tolerance, or until ``max_sweeps`` is reached, in which case the last
    (best) state is returned flagged as ``max_sweeps``.

    The recorded trace holds the objective value and, retrospectively, the
    RMS deviation of p1 from the final state for every sweep.

    Identical data, spec, and initial state give a bit-identical result.
    """
    validate(data, spec)
    working = data.with_half_win_ties() if spec.ties_model == "half-win" else data
    rule = rule_for(spec)
    objective = objective_for(spec, working)

    if rule.uses_ties and working.total_ties == 0:
        warnings.warn(
            "ties model requested but the data contains no ties; "
            "fitting with the tie parameter pinned at 0",
            ModelMismatchWarning,
            stacklevel=2,
        )

    if initial is not None:
        if initial.pi.shape[0] != working.n_players:
            raise InvalidStrengths("initial state has the wrong number of players")
        if rule.uses_ties and initial.nu is None:
            raise InvalidStrengths("ties rules need an initial tie parameter")
        state = prepare_initial_state(initial, rule)
    else:
        state = _initial_state(working, spec, rule)

    p1 = state.p1()
    snapshots = [p1] if record_trace else None
    objectives = [objective.value(state)] if record_trace else None

    terminated = "max_sweeps"
    sweeps_used = spec.max_sweeps
    for k in range(1, spec.max_sweeps + 1):
        new_state = sweep(working, state, rule)
        new_p1 = new_state.p1()
        delta = float(np.max(np.abs(new_p1 - p1)))
        if rule.uses_ties and working.total_ties > 0:
            delta = max(delta, abs(new_state.nu - state.nu))
        state, p1 = new_state, new_p1
        if record_trace:
            snapshots.append(p1)
            objectives.append(objective.value(state))
        if delta < spec.tolerance:
            terminated = "converged"
            sweeps_used = k
            break

    if record_trace:
        rms = np.sqrt(np.array([np.mean((s - p1) ** 2) for s in snapshots]))
        trace = FitTrace(objective=np.array(objectives), rms_p1=rms)
    else:
        trace = FitTrace(objective=np.empty(0), rms_p1=np.empty(0))
    return FitResult(
        strengths=state,
        sweeps_used=sweeps_used,
        trace=trace,
        terminated=terminated,
        data=working,
    )
