"""Information maps and the projection onto implementable policies.

A policy defined on a fine information map generally uses information the
coarse map hides.  Projecting it takes a reach-weighted conditional
expectation of its local action distributions per coarse label.  The result
is always implementable on the coarse map, the operator is idempotent, and
a policy is a fixed point exactly when it was implementable to begin with.
"""

import numpy as np

from phide import (build_matching_pennies, is_implementable, project,
                   random_policy, tables_for, uniform_policy)

game, maps = build_matching_pennies()
coarse, fine = maps["original"], maps["relaxed"]
rng = np.random.default_rng(0)

# A random policy on the relaxed map lets Bob react to the Nature draw,
# which the original map hides from him.
mu = random_policy(game, fine, rng)
print("random relaxed policy implementable on the original map:",
      is_implementable(game, coarse, mu))

base = uniform_policy(game, fine)
gamma = project(game, coarse, fine, base, mu)
print("projected policy implementable:", is_implementable(game, coarse, gamma))

# Idempotence: projecting the projection changes nothing.
gamma2 = project(game, coarse, fine, base, gamma)
gap = max(float(np.max(np.abs(gamma.table[k] - gamma2.table[k])))
          for k in gamma.table)
print(f"idempotence gap: {gap:.2e}")

t = tables_for(game, coarse, fine)
print(f"payoff before projection: {t.expected_reward(mu):.4f}")
print(f"payoff after projection:  {t.expected_reward(gamma):.4f}")
