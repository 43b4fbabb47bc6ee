"""Numeric ground truth: nested quadrature, Monte Carlo SE, and SE-vs-squint sweeps."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from .ideal import full_rate
from .model import SystemConfig, beam_gain, beam_interval, select_beams, subcarrier_frequencies

DEFAULT_SEED = 0x5EED


@dataclass(frozen=True)
class EvalGrid:
    """Resolution of the numeric evaluators.

    ``phi_samples``/``varphi_samples`` are Gauss-Legendre orders of the outer
    (user angle) and inner (equivalent angle) integrals.
    """

    phi_samples: int = 256
    varphi_samples: int = 256
    mc_draws: int = 100_000
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if min(self.phi_samples, self.varphi_samples, self.mc_draws) < 2:
            raise ValueError("all EvalGrid counts must be >= 2")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")


def _gauss(n: int, a: float, b: float):
    x, wts = np.polynomial.legendre.leggauss(n)
    return 0.5 * (b - a) * x + 0.5 * (b + a), 0.5 * (b - a) * wts


def _as_gain(w) -> Callable:
    if callable(w):
        return w
    w = np.asarray(w, dtype=complex)
    return lambda v: beam_gain(w, v)


def avg_rate_numeric(cfg: SystemConfig, w, i: int, grid: EvalGrid | None = None) -> float:
    """Average SE of users served by positive beam `i`, by nested Gauss-Legendre quadrature.

    Evaluates ``(L/(4 eps)) int_{phi_L}^{phi_R} (1/phi) int_{(1-eps)phi}^{(1+eps)phi}
    log2(1 + rho g(v)) dv dphi``. `w` is a beamforming vector or a callable
    gain ``g(varphi)``. Nodes are interior, so ``phi = 0`` is never touched.
    """
    grid = grid or EvalGrid()
    gain = _as_gain(w)
    beam = beam_interval(cfg, i)
    eps = cfg.squint_factor
    L = cfg.codebook_size
    phi, wphi = _gauss(grid.phi_samples, beam.left, beam.right)
    if eps == 0:
        inner = np.log2(1.0 + cfg.snr_linear * gain(phi))
    else:
        x, wx = np.polynomial.legendre.leggauss(grid.varphi_samples)
        # inner integral divided by its length 2*eps*phi, i.e. the subcarrier-mean rate
        v = phi[:, None] * (1.0 + eps * x[None, :])
        inner = np.log2(1.0 + cfg.snr_linear * gain(v)) @ wx / 2.0
    return float(L / 2.0 * np.dot(wphi, inner))


def codebook_avg_se(cfg: SystemConfig, codebook, grid: EvalGrid | None = None) -> float:
    """Codebook-average SE by quadrature over the positive half (mirror symmetry)."""
    total = sum(avg_rate_numeric(cfg, lambda v, i=i: codebook.gain(i, v), i, grid)
                for i in range(1, cfg.half_size + 1))
    return 2.0 / cfg.codebook_size * total


def monte_carlo_avg_se(cfg: SystemConfig, codebook, grid: EvalGrid | None = None,
                       return_stderr: bool = False, rng=None):
    """Sample-mean SE over uniformly drawn user angles with perfect beam selection.

    Users are drawn on ``(0, 1]``; the negative half is its mirror image. Each
    draw is served by ``select_beam`` and its SE summed over the actual
    ``M`` subcarriers. With ``return_stderr`` returns ``(mean, stderr)``.
    """
    grid = grid or EvalGrid()
    if codebook is None or len(codebook) == 0:
        raise ValueError("empty codebook")
    if len(codebook) != cfg.codebook_size:
        raise ValueError(f"codebook has {len(codebook)} beams, config expects {cfg.codebook_size}")
    rng = rng if rng is not None else np.random.default_rng(grid.seed)
    phi = 1.0 - rng.random(grid.mc_draws)
    beams = select_beams(cfg, phi)
    ratios = subcarrier_frequencies(cfg) / cfg.carrier_hz
    se = np.empty(grid.mc_draws)
    for i in np.unique(beams):
        sel = beams == i
        g = codebook.gain(int(i), phi[sel, None] * ratios)
        se[sel] = np.log2(1.0 + cfg.snr_linear * g).mean(axis=1)
    mean = float(se.mean())
    if return_stderr:
        return mean, float(se.std(ddof=1) / math.sqrt(se.size))
    return mean


@dataclass
class SweepResult:
    """Average SE per scheme over a list of squint factors.

    Missing entries (scheme failed at that eps) are NaN.
    """

    epsilons: list
    values: dict = field(default_factory=dict)
    normalization: float = 1.0

    def normalized(self, scheme: str) -> np.ndarray:
        return np.asarray(self.values[scheme], dtype=float) / self.normalization

    def rows(self):
        for k, eps in enumerate(self.epsilons):
            for scheme, vals in self.values.items():
                yield eps, scheme, vals[k], vals[k] / self.normalization

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["epsilon", "scheme", "avg_se", "normalized_se"])
            for eps, scheme, se, norm in self.rows():
                writer.writerow([f"{eps:.9g}", scheme, f"{se:.9g}", f"{norm:.9g}"])


def sweep_normalized_se(cfg_base: SystemConfig,
                        schemes: Mapping[str, Callable[[SystemConfig], float]],
                        epsilons: Sequence[float],
                        on_error: Callable[[str, float, Exception], None] | None = None
                        ) -> SweepResult:
    """Evaluate every scheme at every squint factor and normalize by ``log2(1 + rho L)``.

    A scheme is a callable mapping a :class:`SystemConfig` (with bandwidth
    already set to ``2 eps f_c``) to its average SE. Failures are recorded
    as NaN and reported through `on_error`; the sweep continues.
    """
    result = SweepResult(list(epsilons), {name: [] for name in schemes}, full_rate(cfg_base))
    for eps in epsilons:
        cfg = cfg_base.with_squint(eps)
        for name, evaluate in schemes.items():
            try:
                value = float(evaluate(cfg))
            except Exception as exc:  # noqa: BLE001 - any scheme failure is a missing point
                if on_error is not None:
                    on_error(name, eps, exc)
                value = float("nan")
            result.values[name].append(value)
    return result


def codebook_scheme(build: Callable[[SystemConfig], object], grid: EvalGrid | None = None,
                    method: str = "quadrature") -> Callable[[SystemConfig], float]:
    """Wrap a codebook generator into a sweep scheme evaluated numerically."""
    if method not in ("quadrature", "monte_carlo"):
        raise ValueError(f"unknown evaluation method {method!r}")

    def evaluate(cfg):
        codebook = build(cfg)
        if method == "quadrature":
            return codebook_avg_se(cfg, codebook, grid)
        return monte_carlo_avg_se(cfg, codebook, grid)

    return evaluate
