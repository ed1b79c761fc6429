"""A tour of the sensitivity threshold chi_star(k, n) and the exponent window.

The boundedness machinery applies whenever the chemotactic sensitivity chi
sits below

    chi_star(k, n) = -(k - 1)/2 + sqrt((k - 1)^2 + 8 k / n) / 2.

This script walks the threshold across the chemical diffusivity k and the
dimension n, shows the two k-limits, and then opens up the admissible
(p, r) window machinery for one concrete parameter point.
"""

import numpy as np

from chemolab import (
    admissible_window,
    admissibility_quadratic,
    center_ratio,
    chi_star,
    p_max,
)

print("=" * 72)
print("1. In two dimensions the threshold ignores k entirely")
print("=" * 72)
for k in (0.01, 0.1, 1.0, 10.0, 100.0):
    print(f"   chi_star(k={k:<6g}, n=2) = {chi_star(k, 2):.15f}")

print()
print("=" * 72)
print("2. For n >= 3 the threshold interpolates between 2/n (k large)")
print("   and 1 (k small); k = 1 gives sqrt(2/n)")
print("=" * 72)
print(f"   {'n':>3} {'k=1e-6':>12} {'k=0.1':>12} {'k=1':>12} {'k=10':>12} {'k=1e6':>12} {'2/n':>8}")
for n in range(3, 9):
    vals = [chi_star(k, n) for k in (1e-6, 0.1, 1.0, 10.0, 1e6)]
    print("   {:>3} {:>12.6f} {:>12.6f} {:>12.6f} {:>12.6f} {:>12.6f} {:>8.4f}".format(
        n, *vals, 2.0 / n))

print()
print("=" * 72)
print("3. Below the threshold, moment exponents p < p_max(chi, k) carry an")
print("   open window of weights r where integral(u^p v^-r) is controllable")
print("=" * 72)
chi, k = 0.5, 1.0
print(f"   chi = {chi}, k = {k}:  p_max = {p_max(chi, k):g}")
for p in (1.5, 2.0, 3.0, 3.9):
    w = admissible_window(p, chi, k)
    mid = (p - 1.0) * center_ratio(p, chi, k)
    print(
        f"   p = {p:<4g} window = ({w.r_minus:.6f}, {w.r_plus:.6f})"
        f"   midpoint = {w.midpoint:.6f} = (p-1)*ratio = {mid:.6f}"
    )

print()
print("   the quadratic driving the window is negative strictly inside:")
p = 2.0
w = admissible_window(p, chi, k)
for r in np.linspace(w.r_minus - 0.05, w.r_plus + 0.05, 9):
    f_val = admissibility_quadratic(float(r), p, chi, k)
    marker = "inside " if w.contains(float(r)) else "outside"
    print(f"   r = {r:+.4f}  f(r) = {f_val:+.6f}  ({marker})")
