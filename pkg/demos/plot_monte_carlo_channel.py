"""
Simulating the channel
======================

Run the protocol round by round and check the mutual information and noise
against their closed forms.
"""

import math

from cvdense import (
    ProtocolConfig,
    estimate_mi_gaussian,
    estimate_residual_variance,
    estimator_bias_report,
    h_dense,
    optimal_allocation,
    run_trials,
)

# Spend a budget of e*sinh(1) photons optimally: r = 1
r, sigma2 = optimal_allocation(math.e * math.sinh(1))
records = run_trials(ProtocolConfig(r, sigma2, trials=1_000_000, seed=7))

print(records[0])

est = estimate_mi_gaussian(records)
print(f"estimated MI {est.nats:.4f} +- {est.std_error:.4f} nats, analytic {h_dense(sigma2, r):.4f}")

res = estimate_residual_variance(records)
print(f"residual variance {res.re:.5f}, {res.im:.5f}  (expected {math.exp(-2 * r) / 2:.5f})")

# The estimate settles on the analytic value as trials grow
for row in estimator_bias_report(1.0, 1.0, [1_000, 10_000, 100_000], seed=1):
    print(f"{row.trials:>7d} trials: {row.estimate:.4f} vs {row.analytic:.4f} (gap {row.gap:.4f})")
