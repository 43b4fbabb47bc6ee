"""
Normalized SE sweep over the squint factor
==========================================

Runs the scheme comparison at desk scale and prints the table that the
``beamsquint evaluate`` subcommand writes to ``sweep.csv``.
"""

from beamsquint import (CCCPConfig, EvalGrid, SystemConfig, codebook_scheme, design_codebook,
                        dft_codebook, enlarged_coverage_avg_rate, ideal_total_avg_rate,
                        sweep_normalized_se)

cfg = SystemConfig(n_antennas=32, codebook_size=32)
grid = EvalGrid()
ccfg = CCCPConfig()

schemes = {
    "ideal-traditional": ideal_total_avg_rate,
    "ideal-enlarged": enlarged_coverage_avg_rate,
    "dft": codebook_scheme(dft_codebook, grid),
    "proposed-analog": codebook_scheme(lambda c: design_codebook(c, ccfg, "analog"), grid),
    "proposed-hybrid": codebook_scheme(lambda c: design_codebook(c, ccfg, "hybrid2rf"), grid),
}
result = sweep_normalized_se(cfg, schemes, [0.0, 0.01, 0.02, 0.03, 0.04, 0.05])

###############################################################################
# One column per scheme, normalized by log2(1 + rho L)
names = list(schemes)
print("  eps  " + " ".join("%17s" % n for n in names))
for k, eps in enumerate(result.epsilons):
    print("%5.2f  " % eps + " ".join("%17.4f" % result.normalized(n)[k] for n in names))
