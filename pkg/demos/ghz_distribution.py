"""Outcome statistics of GHZ states, from the algebra and from the oracle."""

import math

import numpy as np

from eprgames import GHZ, MeasurementConfig, StateSpec, distribution, oracle_distribution

for gamma in (0.0, math.pi / 4, math.pi / 2):
    spec = StateSpec(GHZ(gamma))
    cfg = MeasurementConfig.uniform(0.0, 0.0)
    ga = distribution(spec, cfg)
    ref = oracle_distribution(spec, cfg)
    nonzero = {k: round(v, 6) for k, v in ga.as_dict().items() if v > 1e-12}
    print(f"gamma={gamma:.4f}  {nonzero}  |GA - oracle| = {np.max(np.abs(ga.probs - ref.probs)):.1e}")

# tilted detectors spread the weight over all eight outcomes
cfg = MeasurementConfig(((0.3, 0.0), (1.1, 0.0), (-0.7, 0.0)), (1, 1, 1))
print({k: round(v, 4) for k, v in distribution(StateSpec(GHZ(math.pi / 2)), cfg).as_dict().items()})
