"""Acceptance criteria, each at its stated tolerance and runtime budget.

Every test records a one-line PASS/FAIL verdict; the lines are printed in the
terminal summary (see ``conftest.pytest_terminal_summary``). Running this file
directly with ``python3 tests/test_acceptance.py`` prints the same lines.
"""
import filecmp
import math
import time

import numpy as np
import pytest
from scipy import integrate

from beamsquint import (CCCPConfig, beam_gain, beam_width, cccp_design_beam, codebook_avg_se,
                        design_codebook, dft_codebook, enlarged_coverage_avg_rate, full_rate,
                        ideal_avg_rate_beam, ideal_total_avg_rate, verify_weight_identity)
from beamsquint import cli

from conftest import make_cfg, random_unit
from oracles import rect_avg_rate_quad

VERDICTS = {}
EPS_GRID = (0.0, 0.01, 0.02, 0.03, 0.04, 0.05)
SLACK = 0.01


def verdict(key, ok, detail):
    VERDICTS[key] = f"{'PASS' if ok else 'FAIL'}  {key}: {detail}"
    assert ok, VERDICTS[key]


class Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0


def geq(a, b):
    """``a >= b`` with relative slack."""
    return a >= b * (1 - SLACK)


def test_1_closed_form_vs_oracle():
    worst = 0.0
    with Timer() as t:
        for L in (4, 8, 16):
            for eps in (0.01, 0.05, 0.1, 0.3):
                cfg = make_cfg(n=L, L=L, eps=eps)
                for i in range(1, L // 2 + 1):
                    want = rect_avg_rate_quad(cfg, i)
                    worst = max(worst, abs(ideal_avg_rate_beam(cfg, i) - want) / want)
    verdict("1 closed form vs 2-D quadrature", worst < 0.01 and t.elapsed < 30,
            f"max rel err {worst:.2e} (< 1e-2), {t.elapsed:.1f}s (< 30s)")


def test_2_parseval():
    rng = np.random.default_rng(2)
    worst = 0.0
    with Timer() as t:
        for _ in range(50):
            w = random_unit(rng, 32)
            val, _ = integrate.quad(lambda v: beam_gain(w, v), -1, 1, limit=400, epsabs=1e-12)
            worst = max(worst, abs(val - 2))
    verdict("2 Parseval", worst < 1e-6 and t.elapsed < 5,
            f"max |int - 2| {worst:.2e} (< 1e-6), {t.elapsed:.2f}s (< 5s)")


def test_3_small_eps_slope():
    L, h = 128, 1e-4
    cfg = make_cfg(n=L, L=L)
    target = -(0.25 + L / 8) * full_rate(cfg)
    errs = []
    with Timer() as t:
        for eps in (0.002, 0.004):
            up = ideal_total_avg_rate(cfg.with_squint(eps + h))
            dn = ideal_total_avg_rate(cfg.with_squint(eps - h))
            errs.append(abs((up - dn) / (2 * h) / target - 1))
    verdict("3 small-eps linear slope", max(errs) < 0.10 and t.elapsed < 10,
            f"rel err {', '.join(f'{e:.3f}' for e in errs)} (< 0.10), {t.elapsed:.2f}s (< 10s)")


def test_4_reordering_identity():
    rng = np.random.default_rng(4)
    cfg = make_cfg(n=32, L=32, eps=0.05)
    worst = 0.0
    with Timer() as t:
        for k in range(20):
            i = int(rng.integers(1, 17))
            lhs, rhs = verify_weight_identity(cfg, i, random_unit(rng, 32))
            worst = max(worst, abs(lhs - rhs) / lhs)
    verdict("4 weight reordering identity", worst < 5e-3 and t.elapsed < 60,
            f"max rel gap {worst:.2e} (< 5e-3), {t.elapsed:.1f}s (< 60s)")


def test_5_cccp_monotone():
    cfg = make_cfg(n=8, L=8, eps=0.05)
    worst, runs = 0.0, 0
    with Timer() as t:
        for seed in range(5):
            ccfg = CCCPConfig(seed=seed)
            for constraint in ("ball", "elementwise"):
                for i in range(1, 5):
                    _, rep = cccp_design_beam(cfg, i, ccfg, constraint)
                    obj = np.asarray(rep.objectives)
                    drop = np.max(-(np.diff(obj)) / np.maximum(1, np.abs(obj[:-1])), initial=0)
                    worst = max(worst, drop)
                    runs += 1
    tol = CCCPConfig().solver_tol
    verdict("5 CCCP monotonicity", worst <= tol and t.elapsed < 120,
            f"{runs} runs, max relative drop {worst:.1e} (<= {tol:g}), {t.elapsed:.1f}s (< 120s)")


@pytest.fixture(scope="module")
def desk():
    """Designed codebooks and normalized SE for every scheme on the desk grid."""
    base = make_cfg(n=32, L=32)
    norm = full_rate(base)
    designs, se = {}, {name: [] for name in cli.SCHEMES}
    t0 = time.perf_counter()
    for eps in EPS_GRID:
        cfg = base.with_squint(eps)
        for arch in ("analog", "hybrid2rf"):
            designs[arch, eps] = design_codebook(cfg, CCCPConfig(), arch)
        se["ideal-traditional"].append(ideal_total_avg_rate(cfg) / norm)
        se["ideal-enlarged"].append(enlarged_coverage_avg_rate(cfg) / norm)
        se["dft"].append(codebook_avg_se(cfg, dft_codebook(cfg)) / norm)
        se["proposed-analog"].append(codebook_avg_se(cfg, designs["analog", eps]) / norm)
        se["proposed-hybrid"].append(codebook_avg_se(cfg, designs["hybrid2rf", eps]) / norm)
    return designs, se, time.perf_counter() - t0


def test_6_hybrid_feasibility(desk):
    designs = desk[0]
    rec, modulus = 0.0, 0.0
    with Timer() as t:
        for (arch, eps), cb in designs.items():
            if arch != "hybrid2rf":
                continue
            n = cb.n_antennas
            for row in range(cb.size):
                w = cb.vectors[row]
                rec = max(rec, np.linalg.norm(cb.analog[row] @ cb.digital[row] - w))
                modulus = max(modulus, np.max(np.abs(np.abs(cb.analog[row]) - 1 / math.sqrt(n))))
    ok = rec <= 1e-9 and modulus <= 4 * np.finfo(float).eps and t.elapsed < 5
    verdict("6 hybrid feasibility", ok,
            f"max recon err {rec:.1e} (<= 1e-9), max ||W_A|-1/sqrt(N)| {modulus:.1e} (float ulp), "
            f"{t.elapsed:.2f}s (< 5s)")


def _fmt(values):
    return " ".join(f"{v:.3f}" for v in values)


def test_7a_traditional_decreasing_and_worst(desk):
    se, elapsed = desk[1], desk[2]
    trad = se["ideal-traditional"]
    decreasing = all(trad[k + 1] <= trad[k] * (1 + SLACK) for k in range(len(trad) - 1))
    worst = all(geq(se[name][k], trad[k]) for k, eps in enumerate(EPS_GRID) if eps >= 0.03
                for name in cli.SCHEMES)
    verdict("7a ideal-traditional decreasing and worst for eps >= 0.03",
            decreasing and worst and elapsed < 900,
            f"traditional [{_fmt(trad)}], design+eval {elapsed:.1f}s (< 900s)")


def test_7b_proposed_over_dft(desk):
    se = desk[1]
    h, a, d = (se[k][-1] for k in ("proposed-hybrid", "proposed-analog", "dft"))
    verdict("7b hybrid >= analog >= DFT at eps=0.05", geq(h, a) and geq(a, d),
            f"hybrid {h:.4f}, analog {a:.4f}, dft {d:.4f}")


def test_7c_enlarged_over_hybrid(desk):
    se = desk[1]
    enl, hyb = se["ideal-enlarged"], se["proposed-hybrid"]
    bad = [eps for k, eps in enumerate(EPS_GRID) if not geq(enl[k], hyb[k])]
    verdict("7c ideal-enlarged >= proposed-hybrid at all eps", not bad,
            f"enlarged [{_fmt(enl)}] hybrid [{_fmt(hyb)}], violated at eps {bad}")


def test_7_ordering_invariant(desk):
    """Full chain at moderate squint: enlarged >= hybrid >= analog >= DFT >= traditional."""
    se = desk[1]
    chain = ("ideal-enlarged", "proposed-hybrid", "proposed-analog", "dft", "ideal-traditional")
    bad = []
    for k, eps in enumerate(EPS_GRID):
        if eps >= 0.03:
            bad += [f"{hi}<{lo}@{eps:g}" for hi, lo in zip(chain, chain[1:])
                    if not geq(se[hi][k], se[lo][k])]
    verdict("7* ordering chain for eps >= 0.03", not bad, f"violations {bad or 'none'}")


def test_8_beam_broadening(desk):
    designs = desk[0]
    L = 32

    def widths(eps):
        cb = designs["hybrid2rf", eps]
        edges = [beam_width(cb.vector(i), center=(2 * i - 1) / L) for i in range(1, L // 2 + 1)]
        return np.array([hi - lo for lo, hi in edges])

    w05, w02 = widths(0.05), widths(0.02)
    inversions = int(np.sum(np.diff(w05) < 0))
    wider = bool(np.all(w05[L // 4 - 1:] > w02[L // 4 - 1:]))
    verdict("8 beam broadening", inversions <= 1 and wider,
            f"{inversions} inversion(s) (<= 1), eps=0.05 wider than 0.02 for i >= {L // 4}: {wider}")


def test_9_cli_determinism(tmp_path):
    dirs = [tmp_path / "run1", tmp_path / "run2"]
    for out in dirs:
        for cmd in ("analyze", "design", "evaluate"):
            assert cli.main([cmd, "--profile", "desk", "--out", str(out)]) == 0
    names = sorted(p.name for p in dirs[0].iterdir() if p.name != "effective_config.txt")
    same = all(filecmp.cmp(dirs[0] / n, dirs[1] / n, shallow=False) for n in names)
    verdict("9 CLI determinism", same and len(names) > 20,
            f"{len(names)} CSV/codebook files byte-identical: {same}")


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
