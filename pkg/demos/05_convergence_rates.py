"""Why the fast rule is fast: per-player contraction factors.

Near the optimum, each update of pi_i shrinks its error by the factor
lambda_i(alpha) = d(pi_i')/d(pi_i) evaluated at the fitted strengths.  The
slowest coordinate, lambda_max = max |lambda_i|, sets the tail of the RMS
error decay.  lambda_i grows strictly with alpha, so larger alpha never
converges faster per coordinate; for small alpha the factors can even turn
negative (overshooting), which is harmless as long as |lambda_i| < 1.
"""

import numpy as np

from pairrank import (
    SolverSpec,
    SynthSpec,
    convergence_report,
    fit,
    generate_tournament,
    reference_fit,
)

instance = generate_tournament(SynthSpec(n_players=12, n_games=600, seed=23))
data = instance.data
hat = reference_fit(data, SolverSpec())

alphas = (0.0, 0.25, 0.5, 1.0, 2.0)
reports = {a: convergence_report(data, hat.pi, a) for a in alphas}

print("per-player contraction factors lambda_i(alpha):")
print(f"{'player':<8}" + "".join(f"{f'a={a:g}':>9}" for a in alphas))
for i in range(data.n_players):
    print(f"{data.ids[i]:<8}" + "".join(f"{reports[a].lambda_i[i]:>9.3f}" for a in alphas))
print(f"{'max |.|':<8}" + "".join(f"{reports[a].lambda_max:>9.3f}" for a in alphas))

# Predicted tail decay vs the decay actually observed in a run
print("\npredicted vs observed per-sweep RMS contraction:")
for a in (0.0, 1.0, 2.0):
    run = fit(data, SolverSpec(algorithm="alpha", alpha=a, init="logistic",
                               seed=9, tolerance=1e-14))
    rms = run.trace.rms_p1
    window = np.where((rms > 1e-11) & (rms < 1e-4))[0]
    observed = np.exp(np.mean(np.log(rms[window[1:]] / rms[window[:-1]])))
    print(f"  alpha={a:<4g} lambda_max = {reports[a].lambda_max:.3f}   "
          f"observed = {observed:.3f}   ({run.sweeps_used} sweeps to 1e-14)")
