"""Proximal solves of the information-relaxed problem.

The relaxed problem optimizes over policies on a finer map but subtracts a
penalty, lambda times the reach-weighted squared distance to the projection
onto the coarse map.  Alternating a proximal step with a projection yields
a non-decreasing penalized objective; with a large enough lambda the final
projected policy is a good implementable policy for the original problem.
"""

import numpy as np

from phide import (RelaxationProblem, best_response_value,
                   build_matching_pennies, is_implementable, random_policy,
                   rir_run, tables_for)

game, maps = build_matching_pennies()
coarse, fine = maps["original"], maps["relaxed"]
opt = best_response_value(game, coarse, 0)
print(f"optimal implementable value: {opt:.4f}")

rng = np.random.default_rng(1)
for lam in (0.05, 0.5, 5.0):
    problem = RelaxationProblem(game, coarse, fine, lam)
    mu0 = random_policy(game, fine, rng)
    mu, gamma, trace = rir_run(problem, mu0, iterations=30)
    worst_step = float(np.min(np.diff(trace)))
    value = tables_for(game, coarse).expected_reward(gamma)
    print(f"lambda={lam:<5} objective {trace[0]:+.4f} -> {trace[-1]:+.4f}  "
          f"worst step {worst_step:+.1e}  "
          f"projected value {value:.4f}  "
          f"implementable {is_implementable(game, coarse, gamma)}")
