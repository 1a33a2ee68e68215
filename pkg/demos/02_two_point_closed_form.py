"""The one closed-form case: the centered coin on {0, 1}.

After centering by 1/2 and rescaling by sqrt(n)/2, the one-step map is
exactly z - 1/(nz).  Squaring the iterates telescopes: the n-th composed
map satisfies F^(n)(iy)^2 = (iy)^2 - 2 + (1/n^2) * sum of 1/iterates,
so the deviation from the arc-sine square decays like 1/n with an
explicit constant.  This is the engine behind the general convergence
proof, reproduced here numerically.
"""

import math

import numpy as np

import monoclt as mc
from monoclt import clt

m = mc.shift(mc.atomic([(0.0, 0.5), (1.0, 0.5)]), -0.5)

print("one-step closed form |F_scaled(z) - (z - 1/(nz))| at 5 sample points:")
rng = np.random.default_rng(0)
zs = rng.uniform(-3, 3, 5) + 1j * rng.uniform(0.2, 3, 5)
for n in (1, 10, 100):
    M = mc.scaled_monotone_power(m, 1, math.sqrt(n) / 2.0)
    dev = np.abs(mc.f_eval(M, zs) - (zs - 1.0 / (n * zs))).max()
    print(f"  n={n:<4} max deviation = {dev:.2e}")

print("\nsquared-iterate telescoping at z = -(10.5)^2:")
print(f"{'n':>6} {'|F^2 - (z-2)|':>14} {'5/n':>10} {'remainder sum':>24}")
for n in (100, 1000, 10_000):
    tr = clt.conjugacy_trace(m, n, -(10.5**2), math.sqrt(n) / 2.0)
    dev = abs(tr.telescoped - (-(10.5**2) - 2.0))
    print(f"{n:>6} {dev:>14.2e} {5.0/n:>10.0e} {tr.remainder_sum:>24.10f}")
print("the remainder sum tends to -2, which is exactly what turns z^2 into z^2 - 2.")
