"""Measured smoothing orders of the admittance approximation on the circle.

The regularizer replaces the exact admittance blocks by combinations of
S_kappa and N_kappa at a complex wavenumber.  On the circle the quality
of that replacement is exactly the decay rate of the per-mode symbol
differences, fitted here as log-log slopes over modes 16..64.
"""

import numpy as np

from tscat2d import (
    approx_admittance_symbols,
    circle_dtn_symbol,
    circle_operator_symbol,
    exact_admittance_symbols,
    smoothing_order,
)

R, K1, K2, NU, KAPPA = 1.0, 4.0, 8.0, 2.0, 4 + 2j
ns = np.arange(16, 65)

diffs = {tag: [] for tag in ("R11", "R12", "R21", "R22", "2N-Y1", "-2N-Y2")}
for n in ns:
    exact = exact_admittance_symbols(R, K1, K2, NU, n)
    approx = approx_admittance_symbols(R, KAPPA, NU, n)
    for tag, e, a in zip(("R11", "R12", "R21", "R22"), exact, approx):
        diffs[tag].append(abs(a - e))
    nk = circle_operator_symbol("N", R, KAPPA, n)
    diffs["2N-Y1"].append(abs(2 * nk - circle_dtn_symbol("exterior", R, K1, n)))
    diffs["-2N-Y2"].append(abs(-2 * nk - circle_dtn_symbol("interior", R, K2, n)))

expected = {"R11": -2, "R12": -3, "R21": -1, "R22": -2, "2N-Y1": -1, "-2N-Y2": -1}
print(f"circle R={R}, k1={K1}, k2={K2}, nu={NU}, kappa={KAPPA}")
print(f"{'block':>8s} {'fitted slope':>13s} {'expected':>9s}")
for tag, mags in diffs.items():
    slope = smoothing_order(list(zip(ns, mags)))
    print(f"{tag:>8s} {slope:13.3f} {expected[tag]:9d}")
