"""
Three routes to the same amplitudes
====================================

The closed-form survival amplitude is checked against two independent
solvers: the memory-kernel integro-differential equation (reduced to three
ODEs because the kernel is a single exponential), and a brute-force
Schrodinger evolution with thousands of explicit reservoir modes.
"""

# %%
import numpy as np

from parabattery import CHARGER_FULL, SystemParams, TimeGrid, evolve
from parabattery.oracle import DiscretizedReservoir, solve_discretized, solve_volterra
from parabattery.validate import volterra_grid

p = SystemParams.compensated(-0.3, 0.4)

# %%
grid = volterra_grid(p, 20.0)
exact = evolve(p, CHARGER_FULL, grid)
volt = solve_volterra(p, CHARGER_FULL, grid)
print("Volterra sup error:", np.max(np.abs(exact.c2 - volt.c2)))

# %%
# The discretized reservoir truncates the Lorentzian at +-K lambda, so it
# carries a slightly smaller total weight; the error settles at that floor.
grid = TimeGrid(20.0, 401)
exact = evolve(p, CHARGER_FULL, grid)
for n in (500, 1000, 2000, 4000):
    res = DiscretizedReservoir.build(p, n_modes=n, cutoff=20.0)
    tr = solve_discretized(p, CHARGER_FULL, res, grid)
    drift = np.max(np.abs(tr.extra["norm"] - 1))
    print(f"N={n:5d}: error {np.max(np.abs(exact.c2 - tr.c2)):.2e}, norm drift {drift:.1e}")
