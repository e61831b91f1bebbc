"""Measuring iterations to convergence, the two-phase way.

Phase one solves the instance to near machine precision with the fast rule.
Phase two restarts each algorithm from shared random initializations and
counts the sweeps until every player's p1 is within 1e-6 of the reference.
Run it at full scale (1000 players, 50 000 games, 100 replicates) with:

    pairrank bench --players 1000 --games 50000 --seed 1 --replicates 100

The scaled-down version below finishes in a few seconds.
"""

from pairrank import BenchSpec, SolverSpec, SynthSpec, generate_tournament, run_bench

instance = generate_tournament(SynthSpec(n_players=250, n_games=12_000, seed=4))
print(f"instance: {instance.data.n_players} players, "
      f"{instance.data.total_games:.0f} games, {instance.redraws} redraws\n")

bench = BenchSpec(
    algorithms=(
        SolverSpec(algorithm="newman"),
        SolverSpec(algorithm="alpha", alpha=0.5),
        SolverSpec(algorithm="zermelo"),
        SolverSpec(algorithm="alpha", alpha=2.0),
    ),
    replicates=10,
    seed_base=1000,
)
report = run_bench(instance.data, bench)

print(f"{'algorithm':<12} {'mean sweeps':>12} {'std':>8} {'speed-up':>10}")
for entry in report.results:
    speed = f"x{entry.speed_up_vs_zermelo:.1f}" if entry.speed_up_vs_zermelo else "-"
    print(f"{entry.label:<12} {entry.mean:>12.1f} {entry.std:>8.1f} {speed:>10}")

print("\nwithin each replicate every algorithm starts from the same random "
      "state, so the counts compare update rules, not luck")
