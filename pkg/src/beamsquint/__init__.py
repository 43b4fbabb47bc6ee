"""Beam squint analysis and squint-aware codebook design for wideband mmWave arrays."""
from .codebook import Codebook, dft_codebook, read_codebook, write_codebook
from .design import (CCCPConfig, DesignReport, WeightFunction, analog_project, beam_width,
                     cccp_design_beam, design_codebook, hybrid_decompose, sample_set,
                     solve_convex_subproblem, verify_weight_identity, weight_t)
from .ideal import (IdealCodebook, enlarged_coverage_avg_rate, full_rate, ideal_avg_rate_beam,
                    ideal_rate, ideal_total_avg_rate, large_eps_approx, small_eps_approx, squint_regime)
from .model import (BeamInterval, SystemConfig, beam_gain, beam_interval, equivalent_angle,
                    select_beam, spectrum_efficiency, steering_vector, subcarrier_frequencies,
                    subcarrier_frequency)
from .numeric import (EvalGrid, SweepResult, avg_rate_numeric, codebook_avg_se,
                      codebook_scheme, monte_carlo_avg_se, sweep_normalized_se)

__version__ = "0.1.0"
