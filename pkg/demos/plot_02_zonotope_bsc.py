"""
Per-bit zonotopes of BCH(15,7) over two binary symmetric channels
=================================================================

Fixing one information bit turns the code/channel pair into a dichotomy:
two distributions over the 2^15 received words.  Its zonotope upper
boundary is a concave curve from (0,0) to (1,1), and a higher curve means a
better channel for that bit.  The breakpoints are printed; pipe them into
any plotting tool.
"""

import numpy as np

from codecomp import Prior, bch, bsc, equivalent_bit_dichotomy, transfer_matrix
from codecomp.majorize import compare_dichotomies, zonotope_boundary
from codecomp.oracle import exact_bit_error_bsc

code = bch(4, 2)
prior = Prior.uniform(code.k)

curves = {}
for p in (0.1, 0.2):
    D = equivalent_bit_dichotomy(transfer_matrix(code, bsc(p)), prior, 1)
    curves[p] = (D, zonotope_boundary(D))
    print(f"bsc({p}): {len(curves[p][1].breakpoints)} breakpoints")

grid = np.linspace(0, 1, 11)
print("\n   x    beta_0.1  beta_0.2")
for x in grid:
    print(f"{x:5.2f}  {curves[0.1][1](x):8.5f}  {curves[0.2][1](x):8.5f}")

verdict = compare_dichotomies(curves[0.1][0], curves[0.2][0])
print("\nverdict:", verdict.relation.value)

# The verdict is checked against exact MAP decoding of the first bit.
for p in (0.1, 0.2):
    print(f"exact bit-1 MAP error at p={p}: {exact_bit_error_bsc(code, bsc(p), prior, 1).value:.7f}")
