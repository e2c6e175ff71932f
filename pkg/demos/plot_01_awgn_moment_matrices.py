"""
Ranking BCH codes on an AWGN channel
====================================

With BPSK signalling a code becomes a real matrix ``A`` whose rows are the
transmitted waveforms.  One code beats another for *every* loss function
exactly when ``A A' - B B'`` is positive semidefinite.
"""

import numpy as np

from codecomp import bch, build_code, deficiency_bound, loewner_compare, real_code_matrix
from codecomp.oracle import packet_error_mc

# The (63,7) and (15,7) BCH codes both carry 7 bits, so both have 128 rows.
long_code = real_code_matrix(bch(6, 15))
short_code = real_code_matrix(bch(4, 2))
verdict = loewner_compare(long_code, short_code)
print("BCH(63,7) vs BCH(15,7):", verdict.relation.value)
print("  smallest eigenvalue of AA' - BB':", verdict.min_eigenvalue_forward)

# A Monte-Carlo look at the same claim, one message at a time.
noisy_long = real_code_matrix(bch(6, 15), sigma=2.5)
noisy_short = real_code_matrix(bch(4, 2), sigma=2.5)
for msg in (0, 5, 99):
    a = packet_error_mc(noisy_long, msg, 20_000, seed=msg)
    b = packet_error_mc(noisy_short, msg, 20_000, seed=msg)
    print(f"  message {msg:3d}: P_e long = {a.value:.4f}   short = {b.value:.4f}")

# Codes of unequal rate can be compared on a common message set.  The
# (31,6) code is set against the first 64 messages of the (15,7) code.
first, second = real_code_matrix(build_code("bch:5,7")), real_code_matrix(build_code("bch:4,2@6"))
v = loewner_compare(first, second)
print("\nBCH(31,6) vs 64-message subcode of BCH(15,7):", v.relation.value)
print("  eigenvalue extremes:", v.min_eigenvalue_forward, v.min_eigenvalue_backward)

# Neither is sufficient here.  Their ranges differ too, so the deficiency
# is the maximal value 2.
print("  deficiency:", deficiency_bound(first, second, seed=0).value)

# A weak antipodal code is not sufficient for a strong one; the deficiency
# bounds how much worse its error rate can be.
d = deficiency_bound(np.array([[1.0], [-1.0]]), np.array([[2.0], [-2.0]]), samples=200_000, seed=1)
print(f"\nweak vs strong antipodal pair: deficiency = {d.value:.4f} +- {d.std_error:.4f}")
