"""
Reliability curves of the CSP
=============================

Fraction of devices whose conditional success probability exceeds a target
reliability x, for three SIR thresholds. The exact curve comes from inverting
the imaginary moments; the cheap one matches a Beta law to the first two
moments.
"""

import numpy as np

from dualhop_meta import beta_shape, default_config, meta_curve

xs = np.round(np.arange(0.1, 0.91, 0.1), 2)

for theta_db in (-10, 0, 10):
    cfg = default_config(10 ** (theta_db / 10))
    exact = meta_curve(cfg, xs, method="gil-pelaez")
    approx = meta_curve(cfg, xs, method="beta")
    shape = beta_shape(cfg)
    print(f"\ntheta = {theta_db:+d} dB   Beta({shape.a:.3f}, {shape.beta_param:.3f})")
    print("   x    exact    beta")
    for (x, g), (_, b) in zip(exact.points, approx.points):
        print(f"  {x:.1f}  {g:.4f}  {b:.4f}")
    if exact.failures:
        print("  failed points:", [x for x, _ in exact.failures])
