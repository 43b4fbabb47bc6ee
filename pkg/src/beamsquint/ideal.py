"""Closed-form average SE for ideal (flat, rectangular) beams under squint.

An ideal beam has constant gain over its coverage and zero elsewhere; by
Parseval, gain times coverage width equals 2. With traditional coverage every
beam has width ``2/L`` and gain ``L``. The subcarrier sum is replaced by an
integral over the equivalent-angle spread ``[(1-eps) phi, (1+eps) phi]``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .model import BeamInterval, SystemConfig, beam_interval

_SERIES_EPS = 1e-7


def full_rate(cfg: SystemConfig) -> float:
    """``log2(1 + rho L)``: SE of an ideal beam with no squint."""
    return math.log2(1.0 + cfg.snr_linear * cfg.codebook_size)


@dataclass(frozen=True)
class IdealBeam:
    interval: BeamInterval
    gain: float

    @property
    def width(self) -> float:
        return self.interval.right - self.interval.left


def traditional_beam(cfg: SystemConfig, i: int) -> IdealBeam:
    return IdealBeam(beam_interval(cfg, i), float(cfg.codebook_size))


def enlarged_beam(cfg: SystemConfig, i: int) -> IdealBeam:
    """Ideal beam stretched to cover every subcarrier of every user it serves."""
    eps = cfg.squint_factor
    nominal = beam_interval(cfg, i)
    cover = BeamInterval((1 - eps) * nominal.left, (1 + eps) * nominal.right, i)
    return IdealBeam(cover, cfg.codebook_size / (1 - eps + 2 * i * eps))


class IdealCodebook:
    """Rectangular-gain codebook, mirror symmetric about ``phi = 0``.

    Exposes the same ``gain(i, varphi)`` surface as real codebooks so the
    numeric evaluators can treat both alike.
    """

    def __init__(self, cfg: SystemConfig, enlarged: bool = False):
        make = enlarged_beam if enlarged else traditional_beam
        self.beams = [make(cfg, i) for i in range(1, cfg.half_size + 1)]
        self.architecture = "ideal-enlarged" if enlarged else "ideal-traditional"
        self.size = cfg.codebook_size

    def __len__(self):
        return self.size

    def gain(self, i: int, varphi):
        beam = self.beams[abs(i) - 1]
        v = np.asarray(varphi, dtype=float) * np.sign(i)
        lo, hi = beam.interval.left, beam.interval.right
        return np.where((v >= lo) & (v <= hi), beam.gain, 0.0)


@dataclass(frozen=True)
class RateCase:
    """Breakpoints where the lower/upper band edge leaves a beam's coverage."""

    lower: float  # phi_L / (1 - eps): below it the lowest subcarriers fall off
    upper: float  # phi_R / (1 + eps): above it the highest subcarriers fall off

    def label(self, phi: float) -> str:
        lower_cut = phi < self.lower
        upper_cut = phi > self.upper
        if lower_cut and upper_cut:
            return "d"
        if lower_cut:
            return "a"
        if upper_cut:
            return "b"
        return "c"


def rate_case(cfg: SystemConfig, i: int) -> RateCase:
    eps = cfg.squint_factor
    beam = beam_interval(cfg, i)
    return RateCase(beam.left / (1 - eps), beam.right / (1 + eps))


def ideal_rate(cfg: SystemConfig, i: int, phi: float) -> tuple[float, str]:
    """SE of a user at `phi` served by ideal traditional beam `i`, plus its case label.

    Only subcarriers whose equivalent angle stays inside the beam get the
    full rate; the others get nothing.
    """
    beam = beam_interval(cfg, i)
    if not (beam.left <= phi <= beam.right and phi > 0):
        raise ValueError(f"phi={phi} outside beam {i} coverage ({beam.left}, {beam.right}]")
    G = full_rate(cfg)
    eps = cfg.squint_factor
    if eps == 0:
        return G, "c"
    case = rate_case(cfg, i).label(phi)
    L = cfg.codebook_size
    if case == "a":
        rate = (1 + eps - beam.left / phi) * G / (2 * eps)
    elif case == "b":
        rate = (beam.right / phi - 1 + eps) * G / (2 * eps)
    elif case == "c":
        rate = G
    else:
        rate = G / (eps * phi * L)
    return rate, case


@dataclass(frozen=True)
class PiecewiseRate:
    phi: np.ndarray
    rate: np.ndarray
    case: tuple


def ideal_rate_profile(cfg: SystemConfig, i: int, n: int = 201) -> PiecewiseRate:
    """`ideal_rate` sampled on `n` interior points of beam `i`'s coverage."""
    beam = beam_interval(cfg, i)
    phis = np.linspace(beam.left, beam.right, n + 2)[1:-1]
    rates, cases = zip(*(ideal_rate(cfg, i, p) for p in phis))
    return PiecewiseRate(phis, np.array(rates), tuple(cases))


def _rbar_1(G, i, eps):
    if eps < _SERIES_EPS:
        # -ln(1-e)/e = 1 + e/2 + e^2/3 ; i ln(1-e^2)/e = -i (e + e^3/2)
        return 0.5 * G * (2 + eps / 2 + eps ** 2 / 3 - i * eps)
    return 0.5 * G * (1 - math.log1p(-eps) / eps + i * math.log1p(-eps * eps) / eps)


def _rbar_2(G, i, eps):
    return 0.5 * G * (1 - i + (1 - math.log((i - 1) / i)) / eps
                      + i / eps * math.log((1 + eps) * (i - 1) / i))


def _rbar_3(G, i, eps):
    return 0.5 * G * math.log(i / (i - 1)) / eps


def squint_regime(cfg: SystemConfig, i: int) -> str:
    """Which ordering of the four beam breakpoints holds for beam `i`.

    ``"1"``: the band fits the beam for central users; ``"2"``: no user
    gets every subcarrier; ``"3"``: the top users always lose both band edges;
    ``"4"``: every user loses both edges. ``"limit"`` when there is no squint.
    Boundaries are half-open on the upper side.
    """
    eps = cfg.squint_factor
    if eps == 0:
        return "limit"
    if eps < 1 / (2 * i - 1):
        return "1"
    if eps < 1 / i:
        return "2"
    if i == 1 or eps < 1 / (i - 1):
        return "3"
    return "4"


def ideal_avg_rate_beam(cfg: SystemConfig, i: int) -> float:
    """Average SE over users served by ideal traditional beam `i`."""
    beam_interval(cfg, i)
    G = full_rate(cfg)
    eps = cfg.squint_factor
    if eps == 0:
        return G
    regime = squint_regime(cfg, i)
    if regime in ("1", "2"):
        return _rbar_1(G, i, eps)
    if regime == "3":
        return _rbar_2(G, i, eps)
    return _rbar_3(G, i, eps)


def ideal_total_avg_rate(cfg: SystemConfig) -> float:
    """Codebook-average SE of ideal traditional beams."""
    total = sum(ideal_avg_rate_beam(cfg, i) for i in range(1, cfg.half_size + 1))
    return 2.0 / cfg.codebook_size * total


def small_eps_approx(cfg: SystemConfig) -> float:
    """Linear-in-eps approximation of :func:`ideal_total_avg_rate`, valid for ``eps <= 2/L``."""
    L = cfg.codebook_size
    eps = cfg.squint_factor
    if eps > 2 / L:
        warnings.warn(f"small_eps_approx used outside its regime (eps={eps} > 2/L={2 / L})",
                      stacklevel=2)
    return full_rate(cfg) * (1 - (0.25 + L / 8) * eps)


def large_eps_approx(cfg: SystemConfig) -> float:
    """Approximation of :func:`ideal_total_avg_rate` for ``eps > 2/L``."""
    L = cfg.codebook_size
    eps = cfg.squint_factor
    if eps <= 2 / L:
        raise ValueError(f"large_eps_approx requires eps > 2/L, got eps={eps}")
    return full_rate(cfg) / (eps * L) * (1.5 - eps / 2 + math.log(L * eps / 2))


def enlarged_coverage_avg_rate(cfg: SystemConfig) -> float:
    """Average SE when every ideal beam is widened to cover its whole squint spread."""
    L = cfg.codebook_size
    eps = cfg.squint_factor
    i = np.arange(1, cfg.half_size + 1)
    gains = cfg.snr_linear * L / (1 - eps + 2 * i * eps)
    return float(2.0 / L * np.log2(1.0 + gains).sum())
