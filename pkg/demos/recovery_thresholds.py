"""Tabulate the magnitude thresholds that decide support recovery.

For a block K-sparse signal observed through a dictionary with order-(K+1)
isometry constant delta and noise of norm at most epsilon, recovery of the
support is guaranteed once every active block clears z1, and it can be
defeated below the necessary threshold. z2 is the looser guarantee this
work improves on. All three scale linearly in epsilon.
"""

import numpy as np

from bomp import BoundInputs, check_sufficient, necessary_bound, z1_sufficient_bound, z2_prior_bound


def table_for(K, epsilon=1.0):
    limit = 1.0 / np.sqrt(K + 1)
    print(f"K = {K}, epsilon = {epsilon}, delta must stay below {limit:.6f}")
    print(f"{'delta':>8} {'necessary':>12} {'z1':>12} {'z2':>12} {'z2-z1':>10}")
    for frac in (0.1, 0.3, 0.5, 0.7, 0.9):
        b = BoundInputs(K=K, delta=frac * limit, epsilon=epsilon)
        nec = necessary_bound(b)
        z1 = z1_sufficient_bound(b)
        z2 = z2_prior_bound(b)
        print(f"{b.delta:>8.4f} {nec:>12.6f} {z1:>12.6f} {z2:>12.6f} {z2 - z1:>10.6f}")
    print()


for K in (1, 2, 5, 10):
    table_for(K)

# the ordering necessary < z1 < z2 holds on the whole feasible range
b = BoundInputs(K=10, delta=0.04, epsilon=1.0)
print("spot check at K=10, delta=0.04, epsilon=1:")
print(f"  sufficient threshold z1 = {z1_sufficient_bound(b):.4f}")
print(f"  necessary threshold     = {necessary_bound(b):.4f}")
print(f"  gap                     = {z1_sufficient_bound(b) - necessary_bound(b):.4f}")
print()

verdict = check_sufficient(K=10, delta=0.04, epsilon=1.0, min_block_norm=2.5)
print("verdict for min block norm 2.5:", verdict.to_dict())
verdict = check_sufficient(K=10, delta=0.04, epsilon=1.0, min_block_norm=1.0)
print("verdict for min block norm 1.0:", verdict.to_dict())
