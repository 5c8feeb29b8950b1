"""Configuration-driven command-line front end.

Subcommands:
  run      one quench, ledger printed as structured text
  sweep    parameter sweep with paired engine/oracle columns, CSV + summary
  audit    seeded random-Hamiltonian invariant suites, pass/fail report
  compare  engine-vs-oracle ledger diff on seeded random parameter grids

Configs are INI files (key = value with [section] headers).  Exit codes:
0 success, 1 invariant or tolerance failure, 2 config error.
"""

from __future__ import annotations

import argparse
import configparser
import sys
from dataclasses import dataclass, field

import numpy as np

from .audits import run_invariant_audit
from .operators import Operator
from .quench import (
    EQUILIBRATED,
    INTERACTION_QUENCH,
    SYSTEM_QUENCH,
    GENERAL_QUENCH,
    QuenchSpec,
    ThermoLedger,
    run_quench,
)
from .thermo import embed_reservoir, embed_system
from .twospin import (
    TwoSpinParams,
    interaction_quench_ledger,
    reservoir_hamiltonian,
    system_quench_ledger,
    two_spin_hamiltonian,
)

EXIT_OK = 0
EXIT_TOLERANCE = 1
EXIT_CONFIG = 2

DEFAULT_TOL = {
    "oracle_match_rel": 1e-8,
    "oracle_match_abs": 1e-10,
}

FMT = "%.17g"


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    mode: str
    model: str = "two_spin"
    quench: str = SYSTEM_QUENCH
    beta: float = 1.0
    seed: int = 1
    count: int = 100
    parameters: dict[str, float] = field(default_factory=dict)
    sweep_variable: str = ""
    sweep_start: float = 0.0
    sweep_stop: float = 0.0
    sweep_count: int = 0
    output_path: str = ""
    tolerances: dict[str, float] = field(default_factory=dict)
    matrices: dict[str, np.ndarray] = field(default_factory=dict)
    space: tuple[int, int] = (2, 2)


def _parse_matrix(text: str, side: int) -> np.ndarray:
    entries = [complex(tok.strip().replace(" ", "")) for tok in text.split(",")]
    if len(entries) != side * side:
        raise ConfigError(
            f"matrix needs {side * side} row-major entries, got {len(entries)}"
        )
    return np.array(entries, dtype=complex).reshape(side, side)


def load_config(path: str) -> RunConfig:
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise ConfigError(f"cannot read config file {path}")
    try:
        run = parser["run"]
        cfg = RunConfig(
            mode=run.get("mode", "run"),
            model=run.get("model", "two_spin"),
            quench=run.get("quench", SYSTEM_QUENCH),
            beta=run.getfloat("beta", 1.0),
            seed=run.getint("seed", 1),
            count=run.getint("count", 100),
        )
        if cfg.mode not in ("run", "sweep", "audit", "compare"):
            raise ConfigError(f"unknown mode {cfg.mode!r}")
        if cfg.model not in ("two_spin", "custom_matrix"):
            raise ConfigError(f"unknown model {cfg.model!r}")
        if cfg.quench not in (SYSTEM_QUENCH, INTERACTION_QUENCH, GENERAL_QUENCH):
            raise ConfigError(f"unknown quench kind {cfg.quench!r}")
        if cfg.beta <= 0:
            raise ConfigError(f"beta must be positive, got {cfg.beta}")

        if parser.has_section("parameters"):
            cfg.parameters = {
                k: parser.getfloat("parameters", k)
                for k in parser.options("parameters")
            }
        if parser.has_section("sweep"):
            sweep = parser["sweep"]
            cfg.sweep_variable = sweep.get("variable", "")
            cfg.sweep_start = sweep.getfloat("start", 0.0)
            cfg.sweep_stop = sweep.getfloat("stop", 0.0)
            cfg.sweep_count = sweep.getint("count", 0)
        if parser.has_section("output"):
            cfg.output_path = parser["output"].get("path", "")
        if parser.has_section("tolerances"):
            cfg.tolerances = {
                k: parser.getfloat("tolerances", k)
                for k in parser.options("tolerances")
            }
        if parser.has_section("space"):
            cfg.space = (
                parser.getint("space", "d_s"),
                parser.getint("space", "d_r"),
            )
        if parser.has_section("matrices"):
            d_s, d_r = cfg.space
            sides = {
                "h_s_a": d_s, "h_s_b": d_s, "h_s": d_s, "h_r": d_r,
                "v": d_s * d_r, "h_sur_a": d_s * d_r, "h_sur_b": d_s * d_r,
            }
            for key in parser.options("matrices"):
                if key not in sides:
                    raise ConfigError(f"unknown matrix key {key!r}")
                cfg.matrices[key] = _parse_matrix(
                    parser.get("matrices", key), sides[key]
                )
    except (ValueError, KeyError) as exc:
        raise ConfigError(f"bad config {path}: {exc}") from exc
    return cfg


def _require(cfg: RunConfig, *names: str) -> list[float]:
    out = []
    for name in names:
        if name not in cfg.parameters:
            raise ConfigError(f"missing parameter {name!r}")
        out.append(cfg.parameters[name])
    return out


def _two_spin_point(cfg: RunConfig, value: float):
    """Build (engine spec, oracle ledger) for one sweep point."""
    beta = cfg.beta
    if cfg.quench == SYSTEM_QUENCH:
        eps_a, alpha, gamma, chi = _require(cfg, "epsilon_a", "alpha", "gamma", "chi")
        p_a = TwoSpinParams(eps_a, alpha, gamma, chi, beta)
        p_b = TwoSpinParams(value, alpha, gamma, chi, beta)
        oracle = system_quench_ledger(p_a, value)
        kind = SYSTEM_QUENCH
    elif cfg.quench == INTERACTION_QUENCH:
        eps, alpha, chi_b = _require(cfg, "epsilon", "alpha", "chi_b")
        p_a = TwoSpinParams(eps, alpha, 0.0, 0.0, beta)
        p_b = TwoSpinParams(eps, alpha, value, chi_b, beta)
        oracle = interaction_quench_ledger(eps, alpha, value, chi_b, beta)
        kind = INTERACTION_QUENCH
    else:
        raise ConfigError(f"two_spin sweeps support system or interaction quenches")
    spec = QuenchSpec(
        two_spin_hamiltonian(p_a), two_spin_hamiltonian(p_b),
        reservoir_hamiltonian(p_a), beta, kind=kind, final_mode=EQUILIBRATED,
    )
    return spec, oracle


def _flag_columns(ledger: ThermoLedger) -> list[str]:
    flags = list(ledger.second_law_w) + list(ledger.second_law_q or ())
    return ["1" if f else "0" for f in flags]


def cmd_sweep(cfg: RunConfig) -> int:
    if cfg.model != "two_spin":
        raise ConfigError("sweep mode requires the two_spin model")
    if cfg.sweep_count < 2:
        raise ConfigError(f"sweep count must be >= 2, got {cfg.sweep_count}")
    if cfg.sweep_start == cfg.sweep_stop:
        raise ConfigError("sweep start and stop must differ")
    if not cfg.output_path:
        raise ConfigError("sweep mode needs an output path")
    tol = dict(DEFAULT_TOL)
    tol.update(cfg.tolerances)

    grid = np.linspace(cfg.sweep_start, cfg.sweep_stop, cfg.sweep_count)
    fields = ThermoLedger.FIELDS
    header = ["value"]
    for name in fields:
        header += [f"eng_{name}", f"ora_{name}"]
    header += [
        "flag_w_diff", "flag_w_hstar", "flag_w_estar",
        "flag_q_diff", "flag_q_hstar", "flag_q_estar",
    ]

    rows = []
    max_diff = {name: 0.0 for name in fields}
    min_diss = {"diss_diff": np.inf, "diss_hstar": np.inf, "diss_estar": np.inf}
    estar_violations: list[float] = []
    for value in grid:
        spec, oracle = _two_spin_point(cfg, float(value))
        ledger = run_quench(spec)
        eng = ledger.numeric_fields()
        ora = oracle.numeric_fields()
        row = [FMT % value]
        for name in fields:
            row += [FMT % eng[name], FMT % ora[name]]
            max_diff[name] = max(max_diff[name], abs(eng[name] - ora[name]))
        row += _flag_columns(ledger)
        rows.append(row)
        for name in min_diss:
            min_diss[name] = min(min_diss[name], eng[name])
        if eng["diss_estar"] < -1e-6:
            estar_violations.append(float(value))

    try:
        with open(cfg.output_path, "w") as fh:
            fh.write(",".join(header) + "\n")
            for row in rows:
                fh.write(",".join(row) + "\n")
    except OSError as exc:
        print(f"write failure: {exc}", file=sys.stderr)
        return EXIT_TOLERANCE

    summary = [f"sweep variable={cfg.sweep_variable or cfg.quench} "
               f"points={cfg.sweep_count} range=[{FMT % cfg.sweep_start},"
               f"{FMT % cfg.sweep_stop}]"]
    failed = False
    for name in fields:
        summary.append(f"max_abs_diff {name} = {FMT % max_diff[name]}")
    for name, v in min_diss.items():
        summary.append(f"min {name} = {FMT % v}")
    for lo, hi in _intervals(estar_violations, grid):
        summary.append(f"diss_estar_violation [{FMT % lo}, {FMT % hi}]")

    # oracle mismatch gate: each field must track the oracle on the whole grid
    scale = {name: max(
        (abs(float(r[1 + 2 * i + 1])) for r in rows), default=0.0
    ) for i, name in enumerate(fields)}
    for name in fields:
        limit = tol["oracle_match_abs"] + tol["oracle_match_rel"] * scale[name]
        if max_diff[name] > limit:
            summary.append(
                f"ORACLE MISMATCH {name}: {max_diff[name]:.3e} > {limit:.3e}"
            )
            failed = True

    summary_text = "\n".join(summary) + "\n"
    print(summary_text, end="")
    try:
        with open(cfg.output_path + ".summary.txt", "w") as fh:
            fh.write(summary_text)
    except OSError as exc:
        print(f"write failure: {exc}", file=sys.stderr)
        return EXIT_TOLERANCE
    return EXIT_TOLERANCE if failed else EXIT_OK


def _intervals(points: list[float], grid: np.ndarray):
    """Collapse sorted grid points into contiguous [lo, hi] runs."""
    if not points:
        return []
    step = abs(grid[1] - grid[0]) if len(grid) > 1 else 0.0
    runs = []
    lo = hi = points[0]
    for p in points[1:]:
        if abs(p - hi) <= 1.5 * step:
            hi = p
        else:
            runs.append((lo, hi))
            lo = hi = p
    runs.append((lo, hi))
    return runs


def cmd_audit(cfg: RunConfig) -> int:
    report = run_invariant_audit(cfg.seed, n_quenches=cfg.count or 200,
                                 tolerances=cfg.tolerances or None)
    text = "\n".join(report.lines()) + "\n"
    print(text, end="")
    if cfg.output_path:
        with open(cfg.output_path, "w") as fh:
            fh.write(text)
    return EXIT_OK if report.passed else EXIT_TOLERANCE


def cmd_compare(cfg: RunConfig) -> int:
    tol = dict(DEFAULT_TOL)
    tol.update(cfg.tolerances)
    rng = np.random.default_rng(cfg.seed)
    worst = 0.0
    worst_desc = ""
    n = cfg.count or 100
    for kind in (SYSTEM_QUENCH, INTERACTION_QUENCH):
        for _ in range(n):
            eps = float(rng.uniform(-2, 2))
            alpha = float(rng.uniform(-2, 2))
            gamma = float(rng.uniform(-1.5, 1.5))
            chi = float(rng.uniform(-1.5, 1.5))
            beta = float(rng.uniform(0.3, 2.0))
            if kind == SYSTEM_QUENCH:
                p_a = TwoSpinParams(eps, alpha, gamma, chi, beta)
                eps_b = float(rng.uniform(-2, 2))
                p_b = TwoSpinParams(eps_b, alpha, gamma, chi, beta)
                oracle = system_quench_ledger(p_a, eps_b)
            else:
                p_a = TwoSpinParams(eps, alpha, 0.0, 0.0, beta)
                p_b = TwoSpinParams(eps, alpha, gamma, chi, beta)
                oracle = interaction_quench_ledger(eps, alpha, gamma, chi, beta)
            spec = QuenchSpec(
                two_spin_hamiltonian(p_a), two_spin_hamiltonian(p_b),
                reservoir_hamiltonian(p_a), beta, kind=kind,
            )
            ledger = run_quench(spec)
            eng = ledger.numeric_fields()
            ora = oracle.numeric_fields()
            for name in ThermoLedger.FIELDS:
                limit = tol["oracle_match_abs"] + tol["oracle_match_rel"] * abs(ora[name])
                excess = abs(eng[name] - ora[name]) / limit
                if excess > worst:
                    worst = excess
                    worst_desc = f"{kind}:{name}"
    print(f"compare seed={cfg.seed} points={n} per kind")
    print(f"worst tolerance fraction = {FMT % worst} at {worst_desc}")
    status = worst <= 1.0
    print("RESULT " + ("PASS" if status else "FAIL"))
    return EXIT_OK if status else EXIT_TOLERANCE


def _custom_spec(cfg: RunConfig) -> QuenchSpec:
    d_s, d_r = cfg.space
    m = cfg.matrices

    def op(key, dims):
        if key not in m:
            raise ConfigError(f"custom_matrix model needs matrix {key!r}")
        return Operator(m[key], dims)

    h_r = op("h_r", (d_r,))
    if cfg.quench == SYSTEM_QUENCH:
        v = op("v", (d_s, d_r))
        h_a = embed_system(op("h_s_a", (d_s,)), d_r) + embed_reservoir(h_r, d_s) + v
        h_b = embed_system(op("h_s_b", (d_s,)), d_r) + embed_reservoir(h_r, d_s) + v
    elif cfg.quench == INTERACTION_QUENCH:
        v = op("v", (d_s, d_r))
        h_a = embed_system(op("h_s", (d_s,)), d_r) + embed_reservoir(h_r, d_s)
        h_b = h_a + v
    else:
        h_a = op("h_sur_a", (d_s, d_r))
        h_b = op("h_sur_b", (d_s, d_r))
    return QuenchSpec(h_a, h_b, h_r, cfg.beta, kind=cfg.quench)


def cmd_run(cfg: RunConfig) -> int:
    if cfg.model == "two_spin":
        if cfg.quench == SYSTEM_QUENCH:
            eps_b = _require(cfg, "epsilon_b")[0]
            spec, oracle = _two_spin_point(cfg, eps_b)
        else:
            gamma_b = _require(cfg, "gamma_b")[0]
            spec, oracle = _two_spin_point(cfg, gamma_b)
    else:
        spec = _custom_spec(cfg)
    ledger = run_quench(spec)
    lines = [f"{name} = {FMT % value}"
             for name, value in ledger.numeric_fields().items()]
    lines.append("second_law_w = " + " ".join(
        "1" if f else "0" for f in ledger.second_law_w))
    if ledger.second_law_q is not None:
        lines.append("second_law_q = " + " ".join(
            "1" if f else "0" for f in ledger.second_law_q))
    text = "\n".join(lines) + "\n"
    print(text, end="")
    if cfg.output_path:
        with open(cfg.output_path, "w") as fh:
            fh.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quenchtherm",
        description="strong-coupling quench thermodynamics toolbox",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("run", "sweep", "audit", "compare"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=(name != "audit"))
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--out", default=None)
        p.add_argument("--tol", action="append", default=[],
                       metavar="NAME=VALUE")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.config:
            cfg = load_config(args.config)
        else:
            cfg = RunConfig(mode="audit")
        if cfg.mode != args.command:
            cfg.mode = args.command
        if args.seed is not None:
            cfg.seed = args.seed
        if args.out is not None:
            cfg.output_path = args.out
        for item in args.tol:
            if "=" not in item:
                raise ConfigError(f"bad --tol override {item!r}")
            name, _, value = item.partition("=")
            cfg.tolerances[name] = float(value)
        handler = {
            "run": cmd_run, "sweep": cmd_sweep,
            "audit": cmd_audit, "compare": cmd_compare,
        }[args.command]
        return handler(cfg)
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
