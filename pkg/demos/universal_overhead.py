"""Run catalogue machines through the universal table machine and report
how its step count compares with a cubic in the simulated run's size.

    python demos/universal_overhead.py [max_len]
"""

import sys

from diag_forge.machine import catalogue
from diag_forge.machine.interpreter import iter_inputs
from diag_forge.machine.universal import overhead_bound, simulate_via_universal, universal_machine

max_len = int(sys.argv[1]) if len(sys.argv) > 1 else 5
print(f"universal machine: {universal_machine().n_states} states")
print("machine\tinputs\tmax inner\tmax outer\tworst outer/(inner+|x|+|e|)^3")
for name, e in catalogue.base_indices().items():
    worst, inner_max, outer_max, count = 0.0, 0, 0, 0
    for x in iter_inputs(max_len):
        if not x:
            continue
        _, inner, outer = simulate_via_universal(e, x, 10**9)
        worst = max(worst, outer / overhead_bound(inner, x, e))
        inner_max, outer_max, count = max(inner_max, inner), max(outer_max, outer), count + 1
    print(f"{name}\t{count}\t{inner_max}\t{outer_max}\t{worst:.2f}")
