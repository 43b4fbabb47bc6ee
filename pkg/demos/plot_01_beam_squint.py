"""
Beam squint on a uniform linear array
=====================================

A wideband OFDM signal sees a different spatial angle on every subcarrier.
This script shows how a narrowband-matched beam loses gain at the band edges.
"""

import numpy as np

from beamsquint import (SystemConfig, beam_gain, equivalent_angle, steering_vector,
                        subcarrier_frequencies)

# 32 antennas, 128 subcarriers, 10 GHz of bandwidth around a 100 GHz carrier
cfg = SystemConfig(n_antennas=32, n_subcarriers=128, carrier_hz=100e9, bandwidth_hz=10e9)
print("squint factor eps =", cfg.squint_factor)

###############################################################################
# Equivalent angle per subcarrier for a user at phi = 0.8
phi = 0.8
print("first subcarrier sees", equivalent_angle(cfg, 1, phi))
scale = subcarrier_frequencies(cfg) / cfg.carrier_hz
varphi = scale * phi
print("equivalent angle spans [%.4f, %.4f]" % (varphi.min(), varphi.max()))

###############################################################################
# A matched steering beam at phi keeps full gain N only at the carrier
w = steering_vector(cfg, phi) / np.sqrt(cfg.n_antennas)
g = beam_gain(w, varphi)
print("gain at band centre %.2f, at edges %.2f / %.2f" % (g[len(g) // 2], g[0], g[-1]))

# the same beam seen by a user near broadside barely squints
g0 = beam_gain(steering_vector(cfg, 0.05) / np.sqrt(32), scale * 0.05)
print("near broadside: min gain %.2f of %d" % (g0.min(), cfg.n_antennas))
