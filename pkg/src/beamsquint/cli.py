"""Command-line front end: ``analyze``, ``design``, ``evaluate`` and ``pattern``.

Configuration is a flat ``key = value`` file; lists are comma separated.
Precedence: profile defaults, then the config file, then ``--seed``/``--out``.
"""
from __future__ import annotations

import argparse
import csv
import math
import sys
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path

import numpy as np

from . import ideal
from .codebook import dft_codebook, read_codebook, write_codebook
from .design import CCCPConfig, DesignError, design_codebook, pattern
from .model import SystemConfig
from .numeric import EvalGrid, codebook_scheme, sweep_normalized_se

EXIT_CONFIG, EXIT_COMPUTE, EXIT_IO = 2, 3, 4
SCHEMES = ("ideal-traditional", "ideal-enlarged", "dft", "proposed-analog", "proposed-hybrid")
PROPOSED = {"proposed-analog": "analog", "proposed-hybrid": "hybrid2rf"}
PROFILES = {
    "desk": dict(n_antennas=32, codebook_size=32, n_subcarriers=128),
    "paper": dict(n_antennas=128, codebook_size=128, n_subcarriers=128),
}
PATTERN_SAMPLES = 2048
DB_FLOOR = "-999.0"


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    n_antennas: int = 32
    n_subcarriers: int = 128
    carrier_hz: float = 100e9
    bandwidth_hz: float = 0.0
    codebook_size: int = 32
    snr_linear: float = 1.0
    phi_samples: int = 256
    varphi_samples: int = 256
    mc_draws: int = 100_000
    seed: int = 0x5EED
    max_iters: int = 100
    objective_tol: float = 1e-5
    k_samples: int = 64
    solver_tol: float = 1e-6
    restarts: int = 2
    eval_method: str = "quadrature"
    schemes: tuple = SCHEMES
    epsilons: tuple = (0.0, 0.01, 0.02, 0.03, 0.04, 0.05)
    output_dir: str = "out"

    def system(self, epsilon: float | None = None) -> SystemConfig:
        cfg = SystemConfig(self.n_antennas, self.n_subcarriers, self.carrier_hz,
                           self.bandwidth_hz, self.codebook_size, self.snr_linear)
        return cfg if epsilon is None else cfg.with_squint(epsilon)

    def grid(self) -> EvalGrid:
        return EvalGrid(self.phi_samples, self.varphi_samples, self.mc_draws, self.seed)

    def cccp(self) -> CCCPConfig:
        return CCCPConfig(self.max_iters, self.objective_tol, self.k_samples, self.solver_tol,
                          self.restarts, self.seed)

    def validate(self):
        try:
            self.system()
            self.grid()
            self.cccp()
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        bad = [s for s in self.schemes if s not in SCHEMES]
        if bad:
            raise ConfigError(f"unknown scheme {bad[0]!r}; expected one of {', '.join(SCHEMES)}")
        if any(not 0 <= e < 1 for e in self.epsilons):
            raise ConfigError("epsilons must lie in [0, 1)")
        if self.eval_method not in ("quadrature", "monte_carlo"):
            raise ConfigError(f"eval_method must be quadrature or monte_carlo, got {self.eval_method!r}")
        return self


_FIELDS = {f.name: f for f in fields(RunConfig)}


def _parse_value(key, text):
    default = _FIELDS[key].default
    try:
        if key == "schemes":
            return tuple(s.strip() for s in text.split(",") if s.strip())
        if key == "epsilons":
            return tuple(float(s) for s in text.split(",") if s.strip())
        if isinstance(default, bool):
            raise ConfigError(f"unsupported key {key}")
        if isinstance(default, int):
            return int(text, 0)
        if isinstance(default, float):
            return float(text)
        return text
    except ValueError:
        raise ConfigError(f"bad value for {key}: {text!r}") from None


def parse_config(text: str, base: RunConfig | None = None) -> RunConfig:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _FIELDS:
            raise ConfigError(f"line {lineno}: unknown config key {key!r}")
        values[key] = _parse_value(key, value)
    return replace(base or RunConfig(), **values)


def format_config(cfg: RunConfig) -> str:
    lines = []
    for key, value in asdict(cfg).items():
        if isinstance(value, tuple):
            value = ",".join(repr(v) if isinstance(v, float) else str(v) for v in value)
        elif isinstance(value, float):
            value = repr(value)
        lines.append(f"{key} = {value}")
    return "\n".join(lines) + "\n"


def load_run_config(path=None, profile="desk", seed=None, out=None) -> RunConfig:
    cfg = RunConfig(**PROFILES[profile])
    if path is not None:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
        cfg = parse_config(text, cfg)
    if seed is not None:
        cfg = replace(cfg, seed=seed)
    if out is not None:
        cfg = replace(cfg, output_dir=str(out))
    return cfg.validate()


def _fmt(x) -> str:
    return f"{x:.9g}"


def eps_tag(eps: float) -> str:
    return format(eps, ".9g")


def codebook_path(out: Path, architecture: str, eps: float) -> Path:
    return out / f"codebook_{architecture}_eps{eps_tag(eps)}.txt"


def report_path(out: Path, architecture: str, eps: float) -> Path:
    return out / f"design_{architecture}_eps{eps_tag(eps)}.csv"


def _outdir(cfg: RunConfig) -> Path:
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "effective_config.txt").write_text(format_config(cfg))
    return out


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def cmd_analyze(cfg: RunConfig) -> list[Path]:
    out = _outdir(cfg)
    per_beam, totals = [], []
    L = cfg.codebook_size
    for eps in cfg.epsilons:
        sys_cfg = cfg.system(eps)
        for i in range(1, sys_cfg.half_size + 1):
            per_beam.append([_fmt(eps), i, _fmt(ideal.ideal_avg_rate_beam(sys_cfg, i)),
                             ideal.squint_regime(sys_cfg, i)])
        small = ideal.small_eps_approx(sys_cfg) if eps <= 2 / L else math.nan
        large = ideal.large_eps_approx(sys_cfg) if eps > 2 / L else math.nan
        totals.append([_fmt(eps), _fmt(ideal.ideal_total_avg_rate(sys_cfg)), _fmt(small), _fmt(large)])
    paths = [out / "ideal_analysis.csv", out / "ideal_total.csv"]
    _write_csv(paths[0], ["epsilon", "i", "Rbar_i", "case"], per_beam)
    _write_csv(paths[1], ["epsilon", "Rbar", "small_approx", "large_approx"], totals)
    return paths


def cmd_design(cfg: RunConfig) -> list[Path]:
    archs = [PROPOSED[s] for s in cfg.schemes if s in PROPOSED]
    if not archs:
        raise ConfigError("design needs proposed-analog or proposed-hybrid in schemes")
    out = _outdir(cfg)
    written = []
    try:
        for arch in archs:
            for eps in cfg.epsilons:
                codebook, reports = design_codebook(cfg.system(eps), cfg.cccp(), arch,
                                                    return_reports=True)
                path = codebook_path(out, arch, eps)
                written.append(path)
                write_codebook(path, codebook)
                rows = [[b, it, _fmt(obj), _fmt(gn)] for rep in reports for b, it, obj, gn in rep.rows()]
                path = report_path(out, arch, eps)
                written.append(path)
                _write_csv(path, ["beam", "iter", "objective", "grad_norm"], rows)
    except BaseException:
        for path in written:
            path.unlink(missing_ok=True)
        raise
    return written


def _schemes(cfg: RunConfig, out: Path):
    grid = cfg.grid()
    schemes = {}
    for name in cfg.schemes:
        if name == "ideal-traditional":
            schemes[name] = ideal.ideal_total_avg_rate
        elif name == "ideal-enlarged":
            schemes[name] = ideal.enlarged_coverage_avg_rate
        elif name == "dft":
            schemes[name] = codebook_scheme(dft_codebook, grid, cfg.eval_method)
        else:
            arch = PROPOSED[name]
            for eps in cfg.epsilons:
                path = codebook_path(out, arch, eps)
                if not path.exists():
                    raise FileNotFoundError(f"missing codebook file {path} (run `design` first)")
            load = lambda c, arch=arch: read_codebook(codebook_path(out, arch, c.squint_factor))
            schemes[name] = codebook_scheme(load, grid, cfg.eval_method)
    return schemes


def cmd_evaluate(cfg: RunConfig) -> Path:
    out = Path(cfg.output_dir)
    schemes = _schemes(cfg, out)
    out = _outdir(cfg)
    failures = []
    result = sweep_normalized_se(cfg.system(), schemes, cfg.epsilons,
                                 on_error=lambda name, eps, exc: failures.append((name, eps, exc)))
    for name, eps, exc in failures:
        print(f"warning: {name} failed at eps={eps}: {exc}", file=sys.stderr)
    path = out / "sweep.csv"
    result.to_csv(path)
    return path


def cmd_pattern(cfg: RunConfig, codebook_file, beam: int) -> Path:
    codebook = read_codebook(codebook_file)
    try:
        w = codebook.vector(beam)
    except IndexError as exc:
        raise ValueError(str(exc)) from None
    varphi, gain = pattern(w, PATTERN_SAMPLES)
    rows = []
    for v, g in zip(varphi, gain):
        rows.append([_fmt(v), _fmt(10 * np.log10(g)) if g > 0 else DB_FLOOR])
    out = _outdir(cfg)
    path = out / f"pattern_{beam}.csv"
    _write_csv(path, ["varphi", "gain_db"], rows)
    return path


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key=value configuration file")
    common.add_argument("--out", help="output directory (overrides output_dir)")
    common.add_argument("--seed", type=lambda s: int(s, 0), help="64-bit seed for design and Monte Carlo")
    common.add_argument("--profile", choices=sorted(PROFILES), default="desk")
    parser = argparse.ArgumentParser(prog="beamsquint", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("analyze", parents=[common], help="closed-form ideal-beam analysis")
    sub.add_parser("design", parents=[common], help="design proposed codebooks")
    sub.add_parser("evaluate", parents=[common], help="normalized SE sweep over eps")
    p = sub.add_parser("pattern", parents=[common], help="export one beam pattern")
    p.add_argument("codebook", help="codebook file")
    p.add_argument("beam", type=int, help="signed beam index")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_run_config(args.config, args.profile, args.seed, args.out)
        if args.command == "analyze":
            cmd_analyze(cfg)
        elif args.command == "design":
            cmd_design(cfg)
        elif args.command == "evaluate":
            cmd_evaluate(cfg)
        else:
            cmd_pattern(cfg, args.codebook, args.beam)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (DesignError, ValueError, ArithmeticError) as exc:
        print(f"compute error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    return 0


if __name__ == "__main__":
    sys.exit(main())
