"""Asymptotic convergence rates of the update family at a fitted solution.

Near the optimum each coordinate's error shrinks geometrically per update by
the factor lambda_i(alpha), the derivative of the single-coordinate update
map at the fitted strengths.  The largest |lambda_i| governs the slowest
decaying coordinate and hence the tail of the RMS error curve.

lambda is computed by central finite differences of the update map, one code
path for every alpha; the known closed form at alpha = 1 serves as a guard in
the tests rather than a second implementation route.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ComparisonData, NotConverged
from .likelihood import gradient_residual
from .solvers import update_alpha

_RESIDUAL_TOL = 1e-8
_REL_STEP = 1e-6


def _check_converged(data: ComparisonData, pi_hat: np.ndarray) -> np.ndarray:
    pi_hat = np.asarray(pi_hat, dtype=np.float64)
    wins_out = data.wins_out_total
    for i in range(data.n_players):
        scale = wins_out[i] if wins_out[i] > 0 else 1.0
        if abs(gradient_residual(data, pi_hat, i)) * pi_hat[i] / scale > _RESIDUAL_TOL:
            raise NotConverged(
                f"strengths are not at a maximum-likelihood solution "
                f"(player {i} has a non-zero gradient residual)"
            )
    return pi_hat


def _factor(data: ComparisonData, pi_hat: np.ndarray, i: int, alpha: float) -> float:
    h = _REL_STEP * pi_hat[i]
    up = pi_hat.copy()
    down = pi_hat.copy()
    up[i] += h
    down[i] -= h
    return (update_alpha(data, up, i, alpha) - update_alpha(data, down, i, alpha)) / (2.0 * h)


def convergence_factor(data: ComparisonData, pi_hat: np.ndarray, i: int, alpha: float) -> float:
    """d(updated pi_i)/d(pi_i) at the fitted solution; may be negative."""
    pi_hat = _check_converged(data, pi_hat)
    return float(_factor(data, pi_hat, i, alpha))


def convergence_factor_zermelo(data: ComparisonData, pi_hat: np.ndarray, i: int) -> float:
    """Closed form of the factor for the classic (alpha = 1) rule.

    Equals (1/sum_j w_ij) sum_j (w_ij + w_ji) (pi_i/(pi_i + pi_j))^2 and is
    strictly positive on strongly connected data.
    """
    pi_hat = np.asarray(pi_hat, dtype=np.float64)
    adj = data.adjacency
    lo, hi = adj.indptr[i], adj.indptr[i + 1]
    nbr = adj.nbr[lo:hi]
    frac = pi_hat[i] / (pi_hat[i] + pi_hat[nbr])
    return float(
        np.sum((adj.wins_out[lo:hi] + adj.wins_in[lo:hi]) * frac**2)
        / np.sum(adj.wins_out[lo:hi])
    )


def convergence_factor_max(data: ComparisonData, pi_hat: np.ndarray, alpha: float) -> float:
    """max_i |lambda_i(alpha)|: the contraction rate of the slowest coordinate."""
    pi_hat = _check_converged(data, pi_hat)
    return max(abs(_factor(data, pi_hat, i, alpha)) for i in range(data.n_players))


def dlambda_dalpha(data: ComparisonData, pi_hat: np.ndarray, i: int, alpha: float) -> float:
    """Sensitivity of lambda_i to alpha; strictly positive at any valid optimum.

    Equals [sum_j w_ij/(pi_i+pi_j) / sum_j (alpha w_ij + w_ji)/(pi_i+pi_j)]
    * (1 - lambda_i(alpha)); positivity means the factor only grows with
    alpha, so larger alpha can never converge faster per coordinate.
    """
    pi_hat = _check_converged(data, pi_hat)
    adj = data.adjacency
    lo, hi = adj.indptr[i], adj.indptr[i + 1]
    nbr = adj.nbr[lo:hi]
    s = pi_hat[i] + pi_hat[nbr]
    ratio = float(
        np.sum(adj.wins_out[lo:hi] / s)
        / np.sum((alpha * adj.wins_out[lo:hi] + adj.wins_in[lo:hi]) / s)
    )
    return ratio * (1.0 - _factor(data, pi_hat, i, alpha))


@dataclass(frozen=True)
class RateReport:
    """Per-player convergence factors at a fitted solution, for one alpha."""

    alpha: float
    lambda_i: np.ndarray
    lambda_max: float
    at: np.ndarray


def convergence_report(data: ComparisonData, pi_hat: np.ndarray, alpha: float) -> RateReport:
    pi_hat = _check_converged(data, pi_hat)
    lam = np.array([_factor(data, pi_hat, i, alpha) for i in range(data.n_players)])
    return RateReport(
        alpha=float(alpha),
        lambda_i=lam,
        lambda_max=float(np.max(np.abs(lam))),
        at=pi_hat.copy(),
    )
