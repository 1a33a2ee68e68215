"""The Boole transformation x -> x - 1/x as an infinite-measure system.

When the measure behind a half-plane transform is singular, the
boundary restriction of the transform preserves Lebesgue measure on the
line.  The classical example is x - 1/x, the boundary restriction of
z - 1/z.  This script checks measure preservation through the
branch-derivative identity, watches recurrence through occupation times
and the divergent recurrence sums, and runs a ratio-ergodic experiment:
Birkhoff-sum ratios of two integrable functions converge to the ratio
of their integrals even though the invariant measure is infinite.
"""

import math

import numpy as np

import monoclt as mc
from monoclt import ergodic as eg

T = eg.boole_map()
coin = mc.atomic([(-1.0, 0.5), (1.0, 0.5)])

print("Lebesgue preservation: sum of 1/T' over the preimages of y equals 1")
for y in (0.0, 1.5, -7.3):
    xs = eg.preimages(T, y)
    total = float((1.0 / eg.eval_dT(T, xs)).sum())
    print(f"  y={y:>5}: preimages {np.round(xs, 4)} -> sum 1/T' = {total:.12f}")

print("\noccupation of [-1, 1] keeps growing (recurrence):")
for N in (10_000, 100_000, 1_000_000):
    rec = eg.occupation_time(T, [0.3], N, (-1.0, 1.0))
    print(f"  N={N:<8} visits = {rec.visits[0]}")

print("\nrecurrence sums Im(-1/F^(n)(i)) diverge like sqrt(N) "
      "(conservative), but converge for a pure translation:")
s = eg.aaronson_sums(coin, 100_000)
for N in (100, 10_000, 100_000):
    print(f"  coin: s_{N:<7} = {s.partial_sums[N-1]:9.3f}   "
          f"s_N/sqrt(2N) = {s.partial_sums[N-1]/math.sqrt(2*N):.4f}")
sd = eg.aaronson_sums(mc.point_mass(1.0), 100_000)
print(f"  translation d_1: s_100000 = {sd.partial_sums[-1]:.6f} (bounded)")

print("\nHopf ratio experiment: f = 1/(1+x^2), g = exp(-x^2), 4 orbits of 1e6 steps")
rng = np.random.default_rng(1)
res = eg.hopf_ratio(T, "cauchy", "gauss", rng.uniform(-2, 2, 4), 1_000_000)
print(f"  checkpoints    : {list(res.checkpoints)}")
for i in range(4):
    print(f"  orbit {i}: ratios {np.round(res.ratios[:, i], 4)}")
print(f"  target integral ratio pi/sqrt(pi) = {res.target:.4f}")
