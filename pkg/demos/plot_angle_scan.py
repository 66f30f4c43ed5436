"""
Angular map of chi_eff
======================

Tabulate chi_eff over a (theta, phi) grid and write it to CSV for plotting.
"""

import numpy as np

from shgeff import angle_scan, build, d_eff1

t = build("6", {"chi11": 3.0, "chi22": 4.0})
grid = angle_scan(t, "ooe", 91, 180)

i, j = grid.argmax
print(f"grid max |chi_eff| = {grid.max_abs:.6f} at theta={np.degrees(grid.theta[i]):.1f},"
      f" phi={np.degrees(grid.phi[j]):.1f}")
print(f"exact maximum      = {d_eff1(t).value:.6f}")

# the map is 3-fold periodic in phi for class 6
row = grid.values[i]
print("shift by 120 deg changes the row by", np.abs(row - np.roll(row, 60)).max())

grid.to_csv("chi_eff_map.csv")

# plot with matplotlib if available
try:
    import matplotlib.pyplot as plt
except ImportError:
    plt = None
if plt is not None:
    plt.imshow(grid.values, origin="lower", aspect="auto",
               extent=[0, 360, 0, 180], cmap="RdBu_r")
    plt.xlabel("phi (deg)")
    plt.ylabel("theta (deg)")
    plt.colorbar(label="chi_eff")
    plt.savefig("chi_eff_map.png")
