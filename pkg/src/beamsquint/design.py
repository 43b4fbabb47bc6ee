"""Squint-aware codebook synthesis.

Each positive beam maximizes ``sum_k t(v_k) log(1 + rho |a(v_k)^H w|^2)`` over
samples ``v_k`` of the equivalent angles its users see. The weight ``t``
accounts for how often each equivalent angle occurs across users and
subcarriers. The non-convex gain terms are handled by the concave-convex
procedure: each round replaces ``|a^H w|^2`` by its tangent at the current
iterate and solves the resulting concave problem by projected gradient ascent.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .codebook import Codebook, mirror
from .model import BeamInterval, SystemConfig, beam_gain, beam_interval, steering_matrix

CONSTRAINTS = ("ball", "elementwise")


@dataclass(frozen=True)
class WeightFunction:
    """Weight of the beam gain at each equivalent angle, for beam `beam` at squint `epsilon`.

    Branch 1 (``eps <= 1/(2i-1)``) has a plateau ``ln((1+eps)/(1-eps))``;
    branch 2 has a plateau ``ln(phi_R/phi_L)``. For ``i = 1`` the rising
    piece is empty and the plateau starts at 0.
    """

    beam: BeamInterval
    epsilon: float

    def __post_init__(self):
        if not 0 < self.epsilon < 1:
            raise ValueError("weight function needs 0 < epsilon < 1")

    @property
    def branch(self) -> int:
        return 1 if self.epsilon <= 1 / (2 * self.beam.index - 1) else 2

    @property
    def support(self) -> tuple[float, float]:
        e = self.epsilon
        return (1 - e) * self.beam.left, (1 + e) * self.beam.right

    @property
    def breakpoints(self) -> tuple[float, ...]:
        e, lo, hi = self.epsilon, self.beam.left, self.beam.right
        inner = sorted({(1 + e) * lo, (1 - e) * hi})
        a, b = self.support
        return tuple([a] + [p for p in inner if a < p < b] + [b])

    def __call__(self, varphi):
        e, lo, hi = self.epsilon, self.beam.left, self.beam.right
        v = np.asarray(varphi, dtype=float)
        a, b = self.support
        with np.errstate(divide="ignore", invalid="ignore"):
            rise = np.log(v / a) if lo > 0 else np.zeros_like(v)
            fall = np.log(b / v)
        if self.branch == 1:
            plateau = math.log((1 + e) / (1 - e))
            conds = [(v > a) & (v < (1 + e) * lo),
                     (v >= (1 + e) * lo) & (v < (1 - e) * hi),
                     (v >= (1 - e) * hi) & (v < b)]
        else:
            plateau = math.log(hi / lo)
            conds = [(v > a) & (v < (1 - e) * hi),
                     (v >= (1 - e) * hi) & (v < (1 + e) * lo),
                     (v >= (1 + e) * lo) & (v < b)]
        out = np.select(conds, [rise, plateau, fall], 0.0)
        return float(out) if out.ndim == 0 else out


def weight_t(beam: BeamInterval, epsilon: float, varphi):
    return WeightFunction(beam, epsilon)(varphi)


@dataclass(frozen=True)
class SampleSet:
    points: np.ndarray
    weights: np.ndarray

    def __len__(self):
        return len(self.points)


def sample_set(beam: BeamInterval, epsilon: float, k: int) -> SampleSet:
    """`k` evenly spaced samples (cell midpoints) of the beam's equivalent-angle support.

    Without squint the support is the nominal interval with uniform weight.
    """
    if k < 8:
        raise ValueError("need at least 8 samples")
    if epsilon == 0:
        lo, hi = beam.left, beam.right
    else:
        lo, hi = WeightFunction(beam, epsilon).support
    step = (hi - lo) / k
    points = lo + step * (np.arange(k) + 0.5)
    weights = np.full(k, 1.0) if epsilon == 0 else weight_t(beam, epsilon, points)
    return SampleSet(points, np.asarray(weights, dtype=float))


def verify_weight_identity(cfg: SystemConfig, i: int, w, grid=None) -> tuple[float, float]:
    """Both sides of the reordered-integral identity for beam `i`.

    ``lhs`` is the nested double integral; ``rhs`` is
    ``(L/(4 eps)) int t(v) log2(1 + rho |a^H w|^2) dv``, integrated piecewise
    between the kinks of ``t``.
    """
    from .numeric import EvalGrid, avg_rate_numeric

    grid = grid or EvalGrid()
    eps = cfg.squint_factor
    lhs = avg_rate_numeric(cfg, w, i, grid)
    tw = WeightFunction(beam_interval(cfg, i), eps)
    x, wx = np.polynomial.legendre.leggauss(grid.varphi_samples)
    rhs = 0.0
    edges = tw.breakpoints
    for a, b in zip(edges[:-1], edges[1:]):
        v = 0.5 * (b - a) * x + 0.5 * (b + a)
        f = np.log2(1.0 + cfg.snr_linear * beam_gain(w, v))
        rhs += 0.5 * (b - a) * np.dot(wx, tw(v) * f)
    rhs *= cfg.codebook_size / (4 * eps)
    return lhs, float(rhs)


def _project(w, constraint):
    if constraint == "ball":
        norm = np.linalg.norm(w)
        return w / norm if norm > 1 else w
    cap = 1.0 / math.sqrt(w.shape[0])
    mag = np.abs(w)
    return np.where(mag > cap, w * (cap / np.maximum(mag, 1e-300)), w)


def _objective(A_conj, t, rho, w):
    resp = A_conj @ w
    return float(np.dot(t, np.log1p(rho * (resp.real ** 2 + resp.imag ** 2))))


def _kkt_residual(A, t, rho, w, constraint):
    """Relative projected-gradient norm of the true objective at `w`."""
    s = A.conj() @ w
    g = A.T @ (2 * t * rho / (1 + rho * np.abs(s) ** 2) * s)
    gn = np.linalg.norm(g)
    if gn == 0:
        return 0.0
    return float(np.linalg.norm(_project(w + g / gn, constraint) - w))


def solve_convex_subproblem(samples: SampleSet, w_prev, rho: float, tol: float = 1e-6,
                            constraint: str = "ball", max_iter: int = 500,
                            center: float | None = None) -> np.ndarray:
    """Maximize the linearized objective around `w_prev` by projected gradient ascent.

    Every gain ``|a_k^H w|^2`` is replaced by its tangent
    ``2 Re(s_k^* a_k^H w) - |s_k|^2`` with ``s_k = a_k^H w_prev``, which
    keeps the objective concave and below the true one. Stops once the
    relative projected-gradient step falls below `tol`.
    """
    if constraint not in CONSTRAINTS:
        raise ValueError(f"unknown constraint {constraint!r}")
    w_prev = np.asarray(w_prev, dtype=complex)
    n = w_prev.shape[0]
    t = samples.weights
    A = steering_matrix(n, samples.points)
    A_conj = A.conj()
    s = A_conj @ w_prev
    if np.max(np.abs(s)) ** 2 < 1e-12:
        # no gain anywhere in the support: pull the linearization point toward the beam
        c = center if center is not None else float(np.mean(samples.points))
        w_prev = _project(0.5 * w_prev + 0.5 * np.exp(1j * np.pi * np.arange(n) * c) / math.sqrt(n),
                          constraint)
        s = A_conj @ w_prev
    c2 = s.real ** 2 + s.imag ** 2

    def tangent(w):
        return 2 * np.real(np.conj(s) * (A_conj @ w)) - c2

    def value(w):
        arg = 1 + rho * tangent(w)
        if np.any(arg <= 0):
            return -np.inf
        return float(np.dot(t, np.log(arg)))

    def grad(w):
        return A.T @ (2 * t * rho / (1 + rho * tangent(w)) * s)

    w = _project(w_prev, constraint)
    f = value(w)
    if not np.isfinite(f):
        raise FloatingPointError("linearized objective is not finite at the starting point")
    g = grad(w)
    eta = 1.0 / max(np.linalg.norm(g), 1e-300)
    for _ in range(max_iter):
        gn = np.linalg.norm(g)
        if gn == 0:
            break
        while True:
            w_new = _project(w + eta * g, constraint)
            d = w_new - w
            f_new = value(w_new)
            if f_new >= f + np.real(np.vdot(g, d)) - np.vdot(d, d).real / (2 * eta):
                break
            eta *= 0.5
            if eta * gn < 1e-15:
                return w
        step = np.linalg.norm(d) / (eta * gn)
        w, f = w_new, f_new
        if step < tol:
            break
        g = grad(w)
        eta *= 2.0
    return w


@dataclass(frozen=True)
class CCCPConfig:
    max_iters: int = 100
    objective_tol: float = 1e-5
    k_samples: int = 64
    solver_tol: float = 1e-6
    restarts: int = 2
    seed: int = 0x5EED

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if not (self.objective_tol > 0 and self.solver_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.k_samples < 8 or self.restarts < 0:
            raise ValueError("k_samples must be >= 8 and restarts >= 0")


@dataclass
class DesignReport:
    """CCCP trace for one beam."""

    beam: int
    objectives: list = field(default_factory=list)
    grad_norms: list = field(default_factory=list)
    converged: bool = False
    attempts: int = 1
    pattern_varphi: np.ndarray | None = None
    pattern_gain: np.ndarray | None = None

    @property
    def iterations(self) -> int:
        return len(self.objectives) - 1

    def rows(self):
        for it, (obj, gn) in enumerate(zip(self.objectives, self.grad_norms)):
            yield self.beam, it, obj, gn


class DesignError(RuntimeError):
    def __init__(self, message, beam=None, report=None):
        super().__init__(message)
        self.beam = beam
        self.report = report


def _initial_beam(n, center, rng, constraint):
    w = np.exp(1j * np.pi * np.arange(n) * center) / math.sqrt(n)
    # noise with total norm about 0.05
    w = w + 0.05 * (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / math.sqrt(2 * n)
    if constraint == "ball":
        return w / np.linalg.norm(w)
    return _project(w, constraint)


def cccp_design_beam(cfg: SystemConfig, i: int, ccfg: CCCPConfig | None = None,
                     constraint: str = "ball") -> tuple[np.ndarray, DesignReport]:
    """Design positive beam `i` with the concave-convex procedure.

    `constraint` is ``"ball"`` (``||w|| <= 1``) or ``"elementwise"``
    (``|w_k| <= 1/sqrt(N_t)``, used for phase-only arrays). Returns the best
    iterate and its trace; the objective trace is nondecreasing.
    """
    ccfg = ccfg or CCCPConfig()
    beam = beam_interval(cfg, i)
    samples = sample_set(beam, cfg.squint_factor, ccfg.k_samples)
    n, rho = cfg.n_antennas, cfg.snr_linear
    A = steering_matrix(n, samples.points)
    A_conj = A.conj()
    t = samples.weights
    rng = np.random.default_rng([ccfg.seed, i])
    report = DesignReport(i)
    last_error = None
    for attempt in range(ccfg.restarts + 1):
        report = DesignReport(i, attempts=attempt + 1)
        w = _initial_beam(n, beam.center, rng, constraint)
        try:
            f = _objective(A_conj, t, rho, w)
            report.objectives.append(f)
            report.grad_norms.append(_kkt_residual(A, t, rho, w, constraint))
            for _ in range(ccfg.max_iters):
                w_new = solve_convex_subproblem(samples, w, rho, ccfg.solver_tol, constraint,
                                                center=beam.center)
                f_new = _objective(A_conj, t, rho, w_new)
                if not np.all(np.isfinite(w_new)) or not np.isfinite(f_new):
                    raise FloatingPointError("non-finite iterate")
                if f_new < f:
                    # the tangent bound only fails by rounding; keep the better point
                    report.converged = True
                    break
                gain = (f_new - f) / max(abs(f), 1e-300)
                w, f = w_new, f_new
                report.objectives.append(f)
                report.grad_norms.append(_kkt_residual(A, t, rho, w, constraint))
                if gain < ccfg.objective_tol:
                    report.converged = True
                    break
        except FloatingPointError as exc:
            last_error = exc
            continue
        report.pattern_varphi, report.pattern_gain = pattern(w)
        return w, report
    raise DesignError(f"beam {i}: all {ccfg.restarts + 1} attempts failed ({last_error})",
                      beam=i, report=report)


def hybrid_decompose(w_star) -> tuple[np.ndarray, np.ndarray]:
    """Split `w_star` into a phase-only ``N_t x 2`` matrix and a digital 2-vector.

    Each entry is the sum of two equal-modulus phasors,
    ``w_k = (d / sqrt(N)) (e^{j(arg w_k + delta_k)} + e^{j(arg w_k - delta_k)})``
    with ``delta_k = arccos(sqrt(N) |w_k| / (2 d))`` and
    ``d = max_k |w_k| sqrt(N) / 2``.
    """
    w_star = np.asarray(w_star, dtype=complex)
    n = w_star.shape[0]
    mag = np.abs(w_star)
    peak = mag.max() if n else 0.0
    if peak == 0:
        analog = np.tile([1.0, -1.0], (n, 1)).astype(complex) / math.sqrt(n)
        return analog, np.zeros(2, dtype=complex)
    d = peak * math.sqrt(n) / 2
    ratio = mag / peak
    # arccos amplifies ulp noise near 1; snapping costs at most 1e-12 relative error per entry
    ratio[ratio > 1 - 1e-12] = 1.0
    delta = np.arccos(ratio)
    theta = np.angle(w_star)
    analog = np.exp(1j * np.stack([theta + delta, theta - delta], axis=1)) / math.sqrt(n)
    return analog, np.array([d, d], dtype=complex)


def analog_project(w_star) -> np.ndarray:
    """Keep the phases of `w_star` and set every modulus to ``1/sqrt(N_t)``."""
    w_star = np.asarray(w_star, dtype=complex)
    if not np.any(w_star):
        raise ValueError("cannot phase-project a zero beamformer")
    return np.exp(1j * np.angle(w_star)) / math.sqrt(w_star.shape[0])


_ARCH_CONSTRAINT = {"unconstrained": "ball", "hybrid2rf": "ball", "analog": "elementwise"}


def design_codebook(cfg: SystemConfig, ccfg: CCCPConfig | None = None,
                    architecture: str = "unconstrained", return_reports: bool = False):
    """Design all `L` beams: CCCP per positive beam, architecture mapping, then mirroring.

    Negative beams are entrywise conjugates of the positive ones.
    """
    if architecture not in _ARCH_CONSTRAINT:
        raise ValueError(f"unknown architecture {architecture!r}")
    ccfg = ccfg or CCCPConfig()
    constraint = _ARCH_CONSTRAINT[architecture]
    positive, reports = [], []
    for i in range(1, cfg.half_size + 1):
        try:
            w, report = cccp_design_beam(cfg, i, ccfg, constraint)
        except DesignError:
            raise
        except Exception as exc:
            raise DesignError(f"beam {i}: {exc}", beam=i) from exc
        if architecture == "analog":
            w = analog_project(w)
        positive.append(w)
        reports.append(report)
    positive = np.array(positive)
    vectors = mirror(positive)
    analog = digital = None
    if architecture == "hybrid2rf":
        parts = [hybrid_decompose(w) for w in vectors]
        analog = np.array([p[0] for p in parts])
        digital = np.array([p[1] for p in parts])
    codebook = Codebook(vectors, architecture, cfg.squint_factor, analog, digital)
    if return_reports:
        return codebook, reports
    return codebook


def pattern(w, n: int = 2048, lo: float = -1.0, hi: float = 1.0):
    """``(varphi, gain)`` samples of the beam pattern."""
    varphi = np.linspace(lo, hi, n)
    return varphi, beam_gain(w, varphi)


def beam_width(w, threshold_db: float = -10.0, n: int = 16384,
               center: float | None = None) -> tuple[float, float]:
    """Edges of the contiguous region around the peak where gain stays within `threshold_db` of it.

    The pattern is periodic in ``varphi`` with period 2, so the region may run
    past ``+-1``; edges are reported unwrapped relative to the peak, or shifted
    by a whole period to sit closest to `center` when given.
    """
    step = 2.0 / n
    varphi = -1.0 + step * np.arange(n)
    g = beam_gain(w, varphi)
    peak = int(np.argmax(g))
    level = g[peak] * 10 ** (threshold_db / 10)
    if np.all(g >= level):
        return -1.0, 1.0
    left = 0
    while g[(peak - left - 1) % n] >= level:
        left += 1
    right = 0
    while g[(peak + right + 1) % n] >= level:
        right += 1
    lo, hi = varphi[peak] - left * step, varphi[peak] + right * step
    if center is not None:
        shift = 2.0 * round((center - 0.5 * (lo + hi)) / 2.0)
        lo, hi = lo + shift, hi + shift
    return float(lo), float(hi)
