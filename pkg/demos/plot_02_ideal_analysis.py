"""
Ideal-beam average rate under squint
====================================

Closed-form average SE of an ideal (rectangular) codebook, its per-beam
regimes, and the small/large squint approximations.
"""

import numpy as np

from beamsquint import (SystemConfig, enlarged_coverage_avg_rate, full_rate, ideal_avg_rate_beam,
                        ideal_total_avg_rate, large_eps_approx, small_eps_approx, squint_regime)

cfg = SystemConfig(n_antennas=128, codebook_size=128)
G = full_rate(cfg)
print("no-squint rate log2(1 + rho L) = %.4f" % G)

###############################################################################
# Beams further from broadside suffer more: regime labels per beam
c = cfg.with_squint(0.02)
for i in (1, 16, 32, 48, 64):
    print("beam %3d  regime %s  Rbar_i %.4f" % (i, squint_regime(c, i), ideal_avg_rate_beam(c, i)))

###############################################################################
# Total rate against eps, with the two approximations in their regimes
print("\n  eps   exact   approx  enlarged")
for eps in (0.005, 0.01, 0.015, 0.05, 0.1, 0.2):
    c = cfg.with_squint(eps)
    approx = small_eps_approx(c) if eps <= 2 / cfg.codebook_size else large_eps_approx(c)
    print("%5.3f  %.4f  %.4f  %.4f" % (eps, ideal_total_avg_rate(c) / G, approx / G,
                                       enlarged_coverage_avg_rate(c) / G))
