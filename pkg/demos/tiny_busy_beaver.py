"""Exhaustive Busy Beaver values for programs of at most N bits.

    python demos/tiny_busy_beaver.py [N_max] [fuel]
"""

import sys
from collections import Counter

from diag_forge.busy_beaver import bb_search, verify_certificate
from diag_forge.machine.codec import decode_machine
from diag_forge.machine.model import Machine

n_max = int(sys.argv[1]) if len(sys.argv) > 1 else 16
fuel = int(sys.argv[2]) if len(sys.argv) > 2 else 1000

print("N\tBB\thalted\tlooping\tundecided\tchampion")
last = None
for N in range(1, n_max + 1):
    r = bb_search(N, fuel, jobs=4)
    champ = r.witnesses[0] if r.witnesses else None
    print(f"{N}\t{r.lower_bound}\t{r.halted}\t{r.looping}\t{r.undecided}\t{champ}")
    last = r

kinds = Counter(c.kind for c in last.certificates.values())
print(f"\nloop certificates at N={n_max}: {dict(kinds)}")
print("all re-verify:", all(verify_certificate(c) for c in last.certificates.values()))

e = last.witnesses[0][0]
prog = decode_machine(e)
print(f"\nchampion {e}:")
print(prog.describe() if isinstance(prog, Machine) else prog)
