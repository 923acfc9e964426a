"""Cross-check the algebra engine against the complex state-vector oracle."""

import time

from eprgames.oracle import cross_validate

start = time.perf_counter()
report = cross_validate(trials=1000, seed=0)
print(f"{report.trials} random configurations in {time.perf_counter() - start:.1f} s")
print(f"max |P_GA - P_oracle| = {report.max_deviation:.2e}")
print(f"max |sum P - 1|       = {report.max_normalization_error:.2e}")
print("passed" if report.passed() else f"FAILED, worst trial {report.worst_trial}")
