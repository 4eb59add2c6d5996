"""Regret accounting for a penalized learning run.

Two checks certify a finished run.  First, the regret of the auxiliary
penalized game is bounded by the sum of positive local regrets; the lower
bound on the left side is computed by exact best response against the
time-averaged penalized rewards.  Second, the time-averaged penalty mass is
bounded by the same local regrets plus twice the reward sup-norm, which is
what makes a large penalty weight force implementability.
"""

from phide import PenaltySchedule, build_matching_pennies, regret_report, run_ph

game, maps = build_matching_pennies()
run = run_ph(game, maps["original"], maps["relaxed"], 200,
             schedule=PenaltySchedule("constant", 0.5),
             learner="regret_matching", seed=11, randomize_init=True)
rep = regret_report(run)

print(f"iterations:                 {rep['iterations']}")
print(f"sum of positive local regrets: {rep['sum_pos_local']:.4f}")
print(f"auxiliary regret lower bound:  {rep['rT_lower_bound']:.4f}")
print(f"bounded by local regrets:      {rep['thm_bound_holds']}")
print(f"average penalty mass:          {rep['penalty_avg']:.4f}")
print(f"sizing bound (local + 2*|r|):  "
      f"{rep['sum_pos_local'] + 2 * rep['reward_inf_norm']:.4f}")
print(f"within sizing bound:           {rep['prop_bound_holds']}")
