"""Objective functions: log-likelihood, log-posterior, ties log-likelihood.

These are the oracles against which the iterative solvers are checked: every
coordinate update must not decrease the matching objective, and every fixed
point must zero the matching gradient residual.

All evaluations are vectorized over the interacting pairs and accumulated
with numpy's pairwise summation, which keeps traces meaningful out to the
tenth significant digit even for large instances.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ComparisonData, InvalidStrengths, Strengths, _check_positive_vector


def _check_pi(data: ComparisonData, pi: np.ndarray) -> np.ndarray:
    pi = _check_positive_vector(pi)
    if pi.shape[0] != data.n_players:
        raise InvalidStrengths(
            f"strength vector has {pi.shape[0]} entries for {data.n_players} players"
        )
    return pi


def log_likelihood(data: ComparisonData, pi: np.ndarray) -> float:
    """Log-probability of the observed wins: sum_ij w_ij log(pi_i/(pi_i+pi_j)).

    Invariant under rescaling pi -> c*pi, so only differences are meaningful.
    """
    pi = _check_pi(data, pi)
    t = data.pair_table
    log_pi = np.log(pi)
    log_s = np.log(pi[t.i] + pi[t.j])
    return float(
        np.sum(t.wins_ij * (log_pi[t.i] - log_s) + t.wins_ji * (log_pi[t.j] - log_s))
    )


def gradient_residual(data: ComparisonData, pi: np.ndarray, i: int) -> float:
    """Partial derivative of the log-likelihood with respect to pi_i.

    Equals (1/pi_i) sum_j w_ij - sum_j (w_ij + w_ji)/(pi_i + pi_j); zero at
    any fixed point of any member of the update family.
    """
    pi = _check_pi(data, pi)
    adj = data.adjacency
    lo, hi = adj.indptr[i], adj.indptr[i + 1]
    nbr = adj.nbr[lo:hi]
    s = pi[i] + pi[nbr]
    return float(
        np.sum(adj.wins_out[lo:hi]) / pi[i]
        - np.sum((adj.wins_out[lo:hi] + adj.wins_in[lo:hi]) / s)
    )


def log_posterior(data: ComparisonData, pi: np.ndarray) -> float:
    """Log-posterior under an independent logistic prior on each score.

    The prior contributes log(pi_i) - 2 log(pi_i + 1) per player, which is
    exactly the log-likelihood of one fictitious win and one fictitious loss
    against a strength-1 opponent.  The unobservable additive constant is
    fixed to zero, so only differences should ever be asserted.
    """
    pi = _check_pi(data, pi)
    return log_likelihood(data, pi) + float(np.sum(np.log(pi) - 2.0 * np.log(pi + 1.0)))


def gradient_residual_map(data: ComparisonData, pi: np.ndarray, i: int) -> float:
    """Partial derivative of the log-posterior with respect to pi_i."""
    pi = _check_pi(data, pi)
    return gradient_residual(data, pi, i) + 1.0 / pi[i] - 2.0 / (pi[i] + 1.0)


def _tie_terms(pi: np.ndarray, nu: float, t) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    # a_ij = w_ij + t_ij/2, and the shared pair denominator with the tie term.
    a_ij = t.wins_ij + 0.5 * t.ties
    a_ji = t.wins_ji + 0.5 * t.ties
    denom = pi[t.i] + pi[t.j] + 2.0 * nu * np.sqrt(pi[t.i] * pi[t.j])
    return a_ij, a_ji, denom


def log_likelihood_ties(data: ComparisonData, pi: np.ndarray, nu: float) -> float:
    """Log-likelihood of wins and ties under the tie-aware model.

    With a_ij = w_ij + t_ij/2 this is
    sum_ij a_ij log pi_i + (1/2) log(2 nu) sum_ij t_ij
    - sum_ij a_ij log(pi_i + pi_j + 2 nu sqrt(pi_i pi_j)),
    the sums running over ordered pairs with t_ij symmetric.  Invariant under
    pi -> c*pi.  nu = 0 is accepted only for data without ties, where the
    expression reduces term by term to the plain log-likelihood.
    """
    pi = _check_pi(data, pi)
    nu = float(nu)
    total_ties = data.total_ties
    if not np.isfinite(nu) or nu < 0 or (nu == 0 and total_ties > 0):
        raise InvalidStrengths(f"tie parameter must be positive, got {nu}")
    t = data.pair_table
    a_ij, a_ji, denom = _tie_terms(pi, nu, t)
    log_pi = np.log(pi)
    log_d = np.log(denom)
    value = float(np.sum(a_ij * (log_pi[t.i] - log_d) + a_ji * (log_pi[t.j] - log_d)))
    if total_ties > 0:
        # ordered-pair tie total is twice the unordered store
        value += 0.5 * np.log(2.0 * nu) * 2.0 * total_ties
    return value


def gradient_residual_ties(data: ComparisonData, pi: np.ndarray, nu: float, i: int) -> float:
    """Partial derivative of the ties log-likelihood with respect to pi_i."""
    pi = _check_pi(data, pi)
    adj = data.adjacency
    lo, hi = adj.indptr[i], adj.indptr[i + 1]
    nbr = adj.nbr[lo:hi]
    a_out = adj.wins_out[lo:hi] + 0.5 * adj.ties[lo:hi]
    a_in = adj.wins_in[lo:hi] + 0.5 * adj.ties[lo:hi]
    root = np.sqrt(pi[nbr] / pi[i])
    denom = pi[i] + pi[nbr] + 2.0 * nu * np.sqrt(pi[i] * pi[nbr])
    return float(np.sum(a_out) / pi[i] - np.sum((a_out + a_in) * (1.0 + nu * root) / denom))


def stationarity_residual_nu(data: ComparisonData, pi: np.ndarray, nu: float) -> float:
    """Derivative of the ties log-likelihood with respect to the tie parameter."""
    pi = _check_pi(data, pi)
    if nu <= 0:
        raise InvalidStrengths(f"tie parameter must be positive, got {nu}")
    t = data.pair_table
    a_ij, a_ji, denom = _tie_terms(pi, nu, t)
    root = 2.0 * np.sqrt(pi[t.i] * pi[t.j])
    # both sums below are over ordered pairs, hence the doubling
    tie_total = 2.0 * data.total_ties
    return float(tie_total / (2.0 * nu) - np.sum((a_ij + a_ji) * root / denom))


@dataclass(frozen=True)
class Objective:
    """The objective a given solver is ascending, evaluatable on any state."""

    kind: str  # "mle" | "map" | "ties"
    data: ComparisonData

    def __post_init__(self):
        if self.kind not in ("mle", "map", "ties"):
            raise InvalidStrengths(f"unknown objective kind {self.kind!r}")

    def value(self, state: Strengths) -> float:
        if self.kind == "mle":
            return log_likelihood(self.data, state.pi)
        if self.kind == "map":
            return log_posterior(self.data, state.pi)
        if state.nu is None:
            raise InvalidStrengths("ties objective needs a tie parameter")
        return log_likelihood_ties(self.data, state.pi, state.nu)
