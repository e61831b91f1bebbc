"""Fit strengths to a small tournament and read off the ranking.

The model: player i beats j with probability pi_i/(pi_i + pi_j).  Strengths
are normalized to geometric mean 1, so pi_i is the odds of beating an average
player and p1 = pi/(pi+1) the probability of doing so.
"""

import numpy as np

from pairrank import ComparisonData, SolverSpec, fit

# A tiny round-robin: (winner, loser, number of wins)
games = [
    ("ada", "bob", 7), ("bob", "ada", 3),
    ("ada", "cyd", 4), ("cyd", "ada", 4),
    ("bob", "cyd", 2), ("cyd", "bob", 6),
    ("cyd", "dee", 5), ("dee", "cyd", 1),
    ("dee", "ada", 2), ("ada", "dee", 5),
]
data = ComparisonData.from_pairs(games)
print(f"{data.n_players} players, {data.total_games:.0f} games")

result = fit(data, SolverSpec(algorithm="newman"))
print(f"converged in {result.sweeps_used} sweeps ({result.terminated})\n")

print(f"{'rank':>4} {'player':<8} {'strength':>9} {'score':>7} {'p(beat avg)':>12}")
pi = result.strengths.pi
for rank, k in enumerate(result.ranking(), start=1):
    print(f"{rank:>4} {data.ids[k]:<8} {pi[k]:>9.4f} {np.log(pi[k]):>7.3f} {pi[k]/(pi[k]+1):>12.3f}")

# The classic fixed-point iteration reaches the identical solution, just in
# more sweeps.
classic = fit(data, SolverSpec(algorithm="zermelo"))
gap = np.max(np.abs(classic.strengths.pi - result.strengths.pi))
print(f"\nclassic rule: {classic.sweeps_used} sweeps, max strength gap {gap:.2e}")
