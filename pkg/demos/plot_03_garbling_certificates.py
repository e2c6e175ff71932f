"""
Garbling certificates from the linear program
=============================================

Sufficiency on a discrete channel means the better transfer matrix can be
post-processed into the worse one by a row-stochastic matrix ``M``.  The
LP returns that ``M`` when it exists.
"""

import numpy as np

from codecomp import bsc, repetition, transfer_matrix
from codecomp.majorize import compare_transfer_matrices, majorization_check_lp

np.set_printoptions(precision=4, suppress=True)

# Three uses of a BSC versus one: throwing away two symbols is a garbling.
T3 = transfer_matrix(repetition(3), bsc(0.1))
T1 = transfer_matrix(repetition(1), bsc(0.1))
verdict = compare_transfer_matrices(T3, T1)
print("rep(3) vs rep(1) over bsc(0.1):", verdict.relation.value)
print(verdict.certificate_forward.M)
print("residual:", verdict.certificate_forward.residual)

# bsc(0.1) followed by bsc(q) is bsc(0.2) when q = 0.125.
ok, cert = majorization_check_lp(bsc(0.1).matrix, bsc(0.2).matrix)
print("\nbsc(0.1) -> bsc(0.2) garbling:\n", cert.M)

# The reverse direction is impossible.
ok, _ = majorization_check_lp(bsc(0.2).matrix, bsc(0.1).matrix)
print("bsc(0.2) -> bsc(0.1) possible?", ok)
