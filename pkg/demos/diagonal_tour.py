"""Build three theory levels and watch each diagonalizer outgrow the last.

    python demos/diagonal_tour.py [n_max]
"""

import sys

from diag_forge.diagonal import build_hierarchy, compute_F
from diag_forge.formal.closure import derivable_total_closure
from diag_forge.formal.proofs import provably_total

n_max = int(sys.argv[1]) if len(sys.argv) > 1 else 14
levels = build_hierarchy(2)

for t, h in levels:
    print(f"level {h.level}: diagonalizer index {h.index}")
    print(f"  first provably total machines: {provably_total(t, 12)}")

print()
print("n\t" + "\t".join(f"F{k}(n)" for k in range(len(levels))))
for n in range(n_max + 1):
    print(f"{n}\t" + "\t".join(str(compute_F(t, n, 10**6).F_value) for t, _ in levels))

# each diagonalizer is out of reach of its own theory, but not of the next one
for (t, h), (t_next, _) in zip(levels, levels[1:]):
    bound = max(h.index, 10**26)
    print(f"level {h.level} index in own closure: {h.index in derivable_total_closure(t, bound)}, "
          f"in next: {h.index in derivable_total_closure(t_next, bound)}")
