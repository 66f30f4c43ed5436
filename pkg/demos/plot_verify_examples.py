"""
Checking closed-form values for five crystal classes
====================================================

Each class comes with closed forms for d_eff1, d_eff2 and lambda_max.  We
compare them with the solvers and the brute-force oracle; a few do not hold.
"""

from shgeff.claims import run_suite

for r in run_suite():
    if r.status == "DISPUTED":
        print(f"{r.crystal:>4} {r.params}: {r.quantity} closed form {r.claimed:.6f}, "
              f"computed {r.computed:.6f}, oracle {r.oracle:.6f}")

# class 6 with equal coefficients: type ee-o reaches sqrt(2), not 1
import math

from shgeff import build, d_eff2, grid_max_deff

t = build("6", {"chi11": 1.0, "chi22": 1.0})
print(d_eff2(t).value, grid_max_deff(t, "eeo", 256).value, math.sqrt(2))
