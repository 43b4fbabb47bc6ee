"""Frequency-dependent ULA model for a wideband OFDM beamformer.

Spatial angles are the normalized variable ``phi`` in ``[-1, 1]``. Subcarrier
``m`` sees the *equivalent* angle ``f_m * phi / f_c``, which is where beam
squint comes from.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

SPEED_OF_LIGHT = 299_792_458.0

@dataclass(frozen=True)
class SystemConfig:
    """Carrier, bandwidth, array and codebook parameters.

    Args:
        n_antennas: Number of transmit antennas ``N_t``.
        n_subcarriers: Number of OFDM subcarriers ``M``.
        carrier_hz: Carrier frequency ``f_c``.
        bandwidth_hz: System bandwidth ``B``; must be below ``2 f_c``.
        codebook_size: Codebook size ``L`` (even).
        snr_linear: Normalized SNR ``rho`` (linear scale).
    """

    n_antennas: int = 32
    n_subcarriers: int = 128
    carrier_hz: float = 100e9
    bandwidth_hz: float = 0.0
    codebook_size: int = 32
    snr_linear: float = 1.0

    def __post_init__(self):
        if self.n_antennas < 1 or self.n_subcarriers < 1:
            raise ValueError("n_antennas and n_subcarriers must be positive")
        if self.codebook_size < 2 or self.codebook_size % 2:
            raise ValueError(f"codebook_size must be a positive even integer, got {self.codebook_size}")
        if not self.carrier_hz > 0:
            raise ValueError("carrier_hz must be positive")
        if not 0 <= self.bandwidth_hz < 2 * self.carrier_hz:
            raise ValueError("bandwidth_hz must lie in [0, 2*carrier_hz)")
        if not self.snr_linear > 0:
            raise ValueError("snr_linear must be positive")

    @property
    def squint_factor(self) -> float:
        """Beam squint factor ``B / (2 f_c)``."""
        return self.bandwidth_hz / (2.0 * self.carrier_hz)

    @property
    def antenna_spacing(self) -> float:
        """Half-wavelength spacing at the carrier, in meters."""
        return SPEED_OF_LIGHT / (2.0 * self.carrier_hz)

    @property
    def half_size(self) -> int:
        return self.codebook_size // 2

    def with_squint(self, epsilon: float) -> "SystemConfig":
        """Copy of this config with the bandwidth set so that the squint factor is `epsilon`."""
        return replace(self, bandwidth_hz=2.0 * epsilon * self.carrier_hz)


@dataclass(frozen=True)
class BeamInterval:
    """Nominal coverage ``(left, right]`` of positive beam `index`."""

    left: float
    right: float
    index: int

    @property
    def center(self) -> float:
        return 0.5 * (self.left + self.right)

    @property
    def width(self) -> float:
        return self.right - self.left

    def contains(self, phi) -> bool:
        return self.left < phi <= self.right


def beam_interval(cfg: SystemConfig, i: int) -> BeamInterval:
    if not 1 <= i <= cfg.half_size:
        raise ValueError(f"beam index {i} outside 1..{cfg.half_size}")
    L = cfg.codebook_size
    return BeamInterval(2.0 * (i - 1) / L, 2.0 * i / L, i)


def subcarrier_frequencies(cfg: SystemConfig) -> np.ndarray:
    m = np.arange(1, cfg.n_subcarriers + 1)
    M = cfg.n_subcarriers
    return cfg.carrier_hz + cfg.bandwidth_hz / M * (m - 1 - (M - 1) / 2)


def subcarrier_frequency(cfg: SystemConfig, m: int) -> float:
    """Frequency of subcarrier `m` (1-based), in Hz."""
    if not 1 <= m <= cfg.n_subcarriers:
        raise ValueError(f"subcarrier index {m} outside 1..{cfg.n_subcarriers}")
    M = cfg.n_subcarriers
    return cfg.carrier_hz + cfg.bandwidth_hz / M * (m - 1 - (M - 1) / 2)


def equivalent_angle(cfg: SystemConfig, m: int, phi):
    """Spatial angle seen by subcarrier `m` for a user at `phi`."""
    phi = np.asarray(phi, dtype=float)
    if np.any(np.abs(phi) > 1):
        raise ValueError("phi must lie in [-1, 1]")
    out = subcarrier_frequency(cfg, m) / cfg.carrier_hz * phi
    return float(out) if out.ndim == 0 else out


def steering_vector(cfg_or_n, varphi: float) -> np.ndarray:
    """Array response ``[1, e^{j pi varphi}, ..., e^{j pi (N-1) varphi}]``.

    `cfg_or_n` is either a :class:`SystemConfig` or the antenna count.
    """
    n = cfg_or_n.n_antennas if isinstance(cfg_or_n, SystemConfig) else int(cfg_or_n)
    return np.exp(1j * np.pi * np.arange(n) * varphi)


def steering_matrix(n_antennas: int, varphi) -> np.ndarray:
    """Rows are steering vectors at the (flattened) angles in `varphi`."""
    varphi = np.ravel(np.asarray(varphi, dtype=float))
    return np.exp(1j * np.pi * np.outer(varphi, np.arange(n_antennas)))


def beam_gain(w, varphi):
    """``|a(varphi)^H w|^2``, vectorized over any array of angles."""
    w = np.asarray(w, dtype=complex)
    varphi = np.asarray(varphi, dtype=float)
    # Horner on z = e^{-j pi varphi}: sum_k w_k z^k
    z = np.exp(-1j * np.pi * varphi)
    resp = np.full(varphi.shape, w[-1], dtype=complex)
    for coef in w[-2::-1]:
        resp *= z
        resp += coef
    out = resp.real ** 2 + resp.imag ** 2
    return float(out) if out.ndim == 0 else out


def spectrum_efficiency(cfg: SystemConfig, w, phi):
    """Per-user SE averaged over subcarriers, in bits/s/Hz.

    All subcarriers share `w`; `phi` may be a scalar or an array of user angles.
    """
    phi = np.asarray(phi, dtype=float)
    ratios = subcarrier_frequencies(cfg) / cfg.carrier_hz
    gains = beam_gain(w, phi[..., None] * ratios)
    out = np.log2(1.0 + cfg.snr_linear * gains).mean(axis=-1)
    return float(out) if out.ndim == 0 else out


def select_beam(cfg: SystemConfig, phi: float) -> int:
    """Index of the beam whose nominal coverage contains `phi`.

    Positive angles map to ``ceil(L phi / 2)``; negative angles to the mirrored
    negative index. ``phi == 0`` is assigned to beam 1.
    """
    if not -1 <= phi <= 1:
        raise ValueError("phi must lie in [-1, 1]")
    if phi < 0:
        return -select_beam(cfg, -phi)
    L = cfg.codebook_size
    i = math.ceil(L * phi / 2)
    # guard against rounding in L*phi/2 near interval edges
    if phi > 2 * i / L:
        i += 1
    elif i > 1 and phi <= 2 * (i - 1) / L:
        i -= 1
    return min(max(i, 1), cfg.half_size)


def select_beams(cfg: SystemConfig, phi) -> np.ndarray:
    """Vectorized :func:`select_beam` for ``phi`` in ``(0, 1]``."""
    phi = np.asarray(phi, dtype=float)
    L = cfg.codebook_size
    i = np.ceil(L * phi / 2).astype(int)
    i = np.where(phi > 2 * i / L, i + 1, i)
    i = np.where((i > 1) & (phi <= 2 * (i - 1) / L), i - 1, i)
    return np.clip(i, 1, cfg.half_size)
