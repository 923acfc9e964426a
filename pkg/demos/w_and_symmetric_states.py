"""W states, the symmetric family and the shifted PD threshold."""

import math

from eprgames import (
    GeneralSymmetric,
    InvertedW,
    MeasurementConfig,
    StateSpec,
    W,
    canonical_embedding,
    distribution,
    equilibria,
    payoff_mixed,
    pd_transition_threshold,
    prisoners_dilemma,
)

pd = prisoners_dilemma()
canon = canonical_embedding()

w = distribution(StateSpec(W()), MeasurementConfig.uniform(0.0, 0.0)).as_dict()
print("W at kappa = 0:", {k: round(v, 4) for k, v in w.items() if v > 1e-12})

for name, fam in (("W", W()), ("inverted W", InvertedW())):
    eq = equilibria(StateSpec(fam), pd)
    print(f"{name:10s} NE:", [(r.label, [round(float(p), 4) for p in r.payoffs]) for r in eq])

uniform = StateSpec(GeneralSymmetric(math.pi / 2, 2 * math.pi / 3, math.pi / 2))
print("uniform superposition pays", payoff_mixed(uniform, canon, pd, (0.2, 0.7, 0.4)))

for phi in (0.0, math.pi / 3, math.pi / 2, 2 * math.pi / 3):
    print(f"phi={phi:.3f}: (0,0,0) stops being an NE below cos gamma = {pd_transition_threshold(phi, 0.0):.4f}")
