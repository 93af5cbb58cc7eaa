"""
The Wigner (para-Bose) oscillator on a truncated Fock space
============================================================

Odd levels pick up an extra ``2 nu`` in the ladder matrix elements, which
is what makes the coupling intensity dependent.
"""

# %%
import numpy as np

from parabattery.oracle import DeformedFockSpace, check_wigner_algebra

s = DeformedFockSpace(nu=0.5, M=10)
print("a^dag a diagonal:", np.round(np.diag(s.adag @ s.a), 12))
print("intensity F(n):", np.round(np.diag(s.intensity), 6))

# %%
# [a, a^dag] = 1 + 2 nu R and {R, a} = 0 away from the truncation edge.
comm = s.a @ s.adag - s.adag @ s.a
print("diag [a, a^dag]:", np.round(np.diag(comm)[:8], 12))

for nu in (-0.4, 0.0, 0.5, 2.0):
    rep = check_wigner_algebra(nu, 12)
    print(f"nu={nu:+.1f}: worst violation {rep.max_violation:.1e}")
