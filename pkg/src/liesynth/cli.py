"""Command-line driver.

Subcommands: close | synth | errcurve | compare | fix-times | verify.
Configuration is a JSON file (complex entries as [re, im] pairs); reports
are JSON, schedules and error tables CSV.  Outputs are deterministic for a
fixed config (the similarity scan fallback is seeded), and nothing is
written until a command has fully succeeded.

Exit codes: 0 success, 2 malformed config or missing file, 3 unreachable
target, 4 search budget or root-order cap exhausted.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import systems
from .algebra import (
    BasisCatalog,
    catalog_to_dict,
    close_by_brackets,
    close_by_similarity,
    decompose,
    matrix_from_pairs,
)
from .combined import split_schedule, synthesize_combined
from .errors import (
    BranchPoint,
    InvalidInput,
    LieSynthError,
    MNotFound,
    ResidualTooLarge,
    SearchBudgetExceeded,
    TargetUnreachable,
)
from .linalg import AlgebraElement, expm, frob_norm, logm_principal, matrix_power, unitarity_defect
from .program import PulseSchedule, program_for, to_schedule
from .timefix import rewrite_schedule
from .trotter import error_curve, synthesize_trotter

log = logging.getLogger("liesynth.cli")

N_DOUBLING_CAP = 1_000_000_000


class ConfigError(LieSynthError):
    """Malformed configuration or input file (exit code 2)."""


@dataclass
class JobConfig:
    generators: List[AlgebraElement]
    method: str = "trotter"
    target_matrix: Optional[np.ndarray] = None
    target_coefficients: Optional[List[float]] = None
    target_catalog: str = "brackets"
    target_scale: float = 1.0
    n: Optional[int] = None
    error_goal: Optional[float] = None
    eps_timefix: float = 1e-3
    ordering: Optional[List[int]] = None
    ns: Optional[List[int]] = None
    t_candidates: Optional[List[float]] = None
    closure: str = "brackets"
    seed: int = 0
    fixture: Optional[str] = None
    output_dir: str = "."
    _catalogs: Dict[str, BasisCatalog] = field(default_factory=dict)

    def bracket_catalog(self) -> BasisCatalog:
        if "brackets" not in self._catalogs:
            self._catalogs["brackets"] = close_by_brackets(self.generators)
        return self._catalogs["brackets"]

    def similarity_catalog(self) -> BasisCatalog:
        if "similarity" not in self._catalogs:
            if self.fixture == "su2":
                self._catalogs["similarity"] = systems.su2_catalog()
            else:
                self._catalogs["similarity"] = close_by_similarity(
                    self.generators, t_candidates=self.t_candidates, seed=self.seed
                )
        return self._catalogs["similarity"]

    def combined_catalog(self) -> Tuple[BasisCatalog, Optional[List[int]]]:
        """Catalog and product ordering for the split method.

        The shipped so(4) fixture carries its own three-element catalog and
        ordering; everything else uses the full similarity closure.
        """
        if self.fixture == "so4" and self.ordering is None:
            return systems.so4_combined_catalog(), list(systems.SO4_COMBINED_ORDERING)
        return self.similarity_catalog(), self.ordering


def _require(cond: bool, message: str):
    if not cond:
        raise ConfigError(message)


def load_config(path: str, out_override: Optional[str], seed_override: Optional[int]) -> JobConfig:
    try:
        raw = json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}")
    _require(isinstance(raw, dict), "config must be a JSON object")

    fixture = raw.get("fixture")
    if fixture is not None:
        _require(fixture in systems.FIXTURES, f"unknown fixture {fixture!r}")
        generators = systems.FIXTURES[fixture]()
    else:
        gens_raw = raw.get("generators")
        _require(bool(gens_raw), "config needs 'generators' or 'fixture'")
        generators = []
        for i, g in enumerate(gens_raw):
            _require(isinstance(g, dict) and "matrix" in g, f"generator {i} needs a 'matrix'")
            try:
                generators.append(
                    AlgebraElement(matrix_from_pairs(g["matrix"]), label=g.get("label"))
                )
            except InvalidInput as exc:
                raise ConfigError(f"generator {i}: {exc}")

    cfg = JobConfig(generators=generators, fixture=fixture)
    cfg.method = raw.get("method", "trotter")
    _require(cfg.method in ("exact", "trotter", "combined"), f"unknown method {cfg.method!r}")

    target = raw.get("target")
    if target is not None:
        _require(isinstance(target, dict), "'target' must be an object")
        if "matrix" in target:
            try:
                cfg.target_matrix = matrix_from_pairs(target["matrix"])
            except InvalidInput as exc:
                raise ConfigError(f"target matrix: {exc}")
        elif "coefficients" in target:
            cfg.target_coefficients = [float(c) for c in target["coefficients"]]
            cfg.target_catalog = target.get("catalog", "brackets")
            _require(
                cfg.target_catalog in ("brackets", "similarity"),
                f"unknown target catalog {cfg.target_catalog!r}",
            )
            cfg.target_scale = float(target.get("scale", 1.0))
        else:
            raise ConfigError("'target' needs 'matrix' or 'coefficients'")

    cfg.n = int(raw["n"]) if raw.get("n") is not None else None
    cfg.error_goal = float(raw["error_goal"]) if raw.get("error_goal") is not None else None
    if cfg.method in ("trotter", "combined"):
        _require(
            (cfg.n is None) != (cfg.error_goal is None),
            "iterative methods need exactly one of 'n' or 'error_goal'",
        )
    if cfg.n is not None:
        _require(cfg.n >= 1, "'n' must be >= 1")
    cfg.eps_timefix = float(raw.get("eps_timefix", 1e-3))
    _require(cfg.eps_timefix > 0, "'eps_timefix' must be positive")
    if raw.get("ordering") is not None:
        cfg.ordering = [int(i) for i in raw["ordering"]]
    if raw.get("ns") is not None:
        cfg.ns = [int(v) for v in raw["ns"]]
        _require(all(v >= 1 for v in cfg.ns), "'ns' entries must be >= 1")
    if raw.get("t_candidates") is not None:
        cfg.t_candidates = [float(v) for v in raw["t_candidates"]]
    cfg.closure = raw.get("closure", "brackets")
    _require(cfg.closure in ("brackets", "similarity"), f"unknown closure {cfg.closure!r}")
    cfg.seed = int(raw.get("seed", 0))
    if seed_override is not None:
        cfg.seed = seed_override
    cfg.output_dir = out_override or raw.get("output_dir", ".")
    return cfg


def _target_log(cfg: JobConfig, catalog: BasisCatalog) -> AlgebraElement:
    """H with exp(H) = target; iterative methods drive toward exp(H)."""
    if cfg.target_coefficients is not None:
        _require(
            len(cfg.target_coefficients) == catalog.algebra_dim,
            f"need {catalog.algebra_dim} coefficients, got {len(cfg.target_coefficients)}",
        )
        mat = sum(
            c * e.mat for c, e in zip(cfg.target_coefficients, catalog.elements)
        )
        return AlgebraElement(mat * cfg.target_scale)
    _require(cfg.target_matrix is not None, "config needs a 'target'")
    try:
        return logm_principal(cfg.target_matrix)
    except BranchPoint as exc:
        raise TargetUnreachable(
            f"target sits on the log branch cut ({exc}); use method 'exact' "
            "or give algebra coefficients"
        )
    except InvalidInput as exc:
        raise ConfigError(f"target matrix: {exc}")


def _target_matrix(cfg: JobConfig, h: Optional[AlgebraElement]) -> np.ndarray:
    if cfg.target_matrix is not None:
        return np.asarray(cfg.target_matrix, dtype=complex)
    return expm(h, 1.0)


def _coeff_catalog(cfg: JobConfig) -> BasisCatalog:
    return (
        cfg.bracket_catalog()
        if cfg.target_catalog == "brackets"
        else cfg.similarity_catalog()
    )


def _write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _write_schedule_csv(path: Path, schedule: PulseSchedule) -> None:
    lines = ["step,gen,duration"]
    for i, (gen, dur) in enumerate(schedule.steps):
        lines.append(f"{i},{gen},{dur!r}")
    path.write_text("\n".join(lines) + "\n")


def _read_schedule_csv(path: str) -> PulseSchedule:
    try:
        lines = Path(path).read_text().strip().splitlines()
    except FileNotFoundError:
        raise ConfigError(f"schedule file not found: {path}")
    _require(bool(lines) and lines[0].strip() == "step,gen,duration",
             "schedule CSV must start with 'step,gen,duration'")
    steps = []
    for line in lines[1:]:
        parts = line.split(",")
        _require(len(parts) == 3, f"malformed schedule row: {line!r}")
        steps.append((int(parts[1]), float(parts[2])))
    return PulseSchedule(tuple(steps))


def _out_dir(cfg: JobConfig) -> Path:
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_close(args) -> int:
    cfg = load_config(args.config, args.out, args.seed)
    catalog = (
        cfg.bracket_catalog() if cfg.closure == "brackets" else cfg.similarity_catalog()
    )
    doc = catalog_to_dict(catalog)
    out = _out_dir(cfg)
    _write_json(out / "catalog.json", doc)
    print(
        f"closure={cfg.closure} dim_group={doc['dim_group']} "
        f"algebra_dim={doc['algebra_dim']} max_depth={max(catalog.depths)}"
    )
    return 0


def _synthesize_iterative(cfg: JobConfig):
    """Returns (n, error, single-repetition schedule)."""
    if cfg.method == "trotter":
        catalog = cfg.bracket_catalog()
        h = _target_log(cfg, _coeff_catalog(cfg))
        program = program_for(h, cfg.generators, catalog)

        def run(n):
            res = synthesize_trotter(h, n, cfg.generators, catalog=catalog, program=program)
            return res, to_schedule(program, 1.0 / n)

    else:
        catalog, ordering = cfg.combined_catalog()
        h = _target_log(cfg, _coeff_catalog(cfg))
        coeffs = decompose(h, catalog).coefficients

        def run(n):
            res = synthesize_combined(h, n, cfg.generators, catalog=catalog, ordering=ordering)
            return res, split_schedule(catalog, coeffs, 1.0 / n, ordering=ordering)

    if cfg.n is not None:
        res, schedule = run(cfg.n)
        return res.n, res.error, schedule
    n = 1
    while n <= N_DOUBLING_CAP:
        res, schedule = run(n)
        if res.error <= cfg.error_goal:
            return res.n, res.error, schedule
        n *= 2
    raise SearchBudgetExceeded(
        f"error goal {cfg.error_goal} not reached for n up to {N_DOUBLING_CAP}"
    )


def cmd_synth(args) -> int:
    cfg = load_config(args.config, args.out, args.seed)
    if cfg.method == "exact":
        from .exact import synthesize_exact

        x_f = _target_matrix(
            cfg, _target_log(cfg, _coeff_catalog(cfg)) if cfg.target_matrix is None else None
        )
        solution = synthesize_exact(
            x_f, cfg.generators, catalog=cfg.similarity_catalog(), ordering=cfg.ordering
        )
        n_or_m, error, schedule, n_reps = solution.M, solution.residual, solution.schedule, 1
    else:
        n_or_m, error, schedule = _synthesize_iterative(cfg)
        n_reps = n_or_m
    fixed, bound, replacements = rewrite_schedule(
        schedule, cfg.generators, cfg.eps_timefix, n_reps=n_reps
    )
    report = {
        "method": cfg.method,
        "n_or_M": n_or_m,
        "error_before_timefix": error,
        "certified_bound": bound,
        "factor_count": len(fixed),
    }
    out = _out_dir(cfg)
    _write_schedule_csv(out / "schedule.csv", fixed)
    _write_json(out / "report.json", report)
    _write_json(out / "timefix.json", {"certified_bound": bound, "replacements": replacements})
    print(
        f"method={cfg.method} n_or_M={n_or_m} error={error:.6g} "
        f"certified_timefix_bound={bound:.6g} factors={len(fixed)}"
    )
    return 0


def cmd_errcurve(args) -> int:
    cfg = load_config(args.config, args.out, args.seed)
    _require(cfg.ns is not None, "errcurve needs 'ns' in the config")
    h = _target_log(cfg, _coeff_catalog(cfg))
    rows = error_curve(h, cfg.ns, cfg.generators, catalog=cfg.bracket_catalog())
    out = _out_dir(cfg)
    lines = ["n,error"] + [f"{r.n},{r.error!r}" for r in rows]
    (out / "errcurve.csv").write_text("\n".join(lines) + "\n")
    for r in rows:
        print(f"n={r.n} error={r.error:.6g}")
    return 0


def cmd_compare(args) -> int:
    cfg = load_config(args.config, args.out, args.seed)
    _require(cfg.ns is not None, "compare needs 'ns' in the config")
    h = _target_log(cfg, _coeff_catalog(cfg))
    rows2 = error_curve(h, cfg.ns, cfg.generators, catalog=cfg.bracket_catalog())
    catalog, ordering = cfg.combined_catalog()
    rows3 = [
        synthesize_combined(h, n, cfg.generators, catalog=catalog, ordering=ordering)
        for n in cfg.ns
    ]
    out = _out_dir(cfg)
    lines = ["n,err_m2,err_m3"] + [
        f"{n},{a.error!r},{b.error!r}" for n, a, b in zip(cfg.ns, rows2, rows3)
    ]
    (out / "compare.csv").write_text("\n".join(lines) + "\n")
    for n, a, b in zip(cfg.ns, rows2, rows3):
        print(f"n={n} err_m2={a.error:.6g} err_m3={b.error:.6g}")
    return 0


def cmd_fix_times(args) -> int:
    cfg = load_config(args.config, args.out, args.seed)
    schedule = _read_schedule_csv(args.schedule)
    n_reps = cfg.n if (cfg.method != "exact" and cfg.n) else 1
    fixed, bound, replacements = rewrite_schedule(
        schedule, cfg.generators, cfg.eps_timefix, n_reps=n_reps
    )
    out = _out_dir(cfg)
    _write_schedule_csv(out / "fixed-schedule.csv", fixed)
    _write_json(out / "timefix.json", {"certified_bound": bound, "replacements": replacements})
    print(f"replaced={len(replacements)} certified_bound={bound:.6g}")
    return 0


def cmd_verify(args) -> int:
    cfg = load_config(args.config, args.out, args.seed)
    schedule = _read_schedule_csv(args.schedule)
    product = schedule.product(cfg.generators)
    reps = cfg.n if (cfg.method != "exact" and cfg.n) else 1
    achieved = matrix_power(product, reps) if reps > 1 else product
    h = None
    if cfg.target_matrix is None:
        h = _target_log(cfg, _coeff_catalog(cfg))
    target = _target_matrix(cfg, h)
    distance = frob_norm(target - achieved)
    defect = unitarity_defect(achieved)
    out = _out_dir(cfg)
    _write_json(out / "verify.json", {"distance": distance, "unitarity_defect": defect})
    print(f"distance={distance!r} unitarity_defect={defect!r}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="liesynth",
        description="Switching-schedule synthesis on compact matrix Lie groups",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", required=True, help="JSON job configuration")
        p.add_argument("--out", default=None, help="output directory")
        p.add_argument("--seed", type=int, default=None, help="seed override")

    p = sub.add_parser("close", help="build and report the algebra closure")
    common(p)
    p.set_defaults(func=cmd_close)

    p = sub.add_parser("synth", help="synthesize a schedule for the target")
    common(p)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("errcurve", help="iterated-product error vs n")
    common(p)
    p.set_defaults(func=cmd_errcurve)

    p = sub.add_parser("compare", help="iterated program vs split product errors")
    common(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("fix-times", help="replace negative durations in a schedule")
    common(p)
    p.add_argument("--schedule", required=True, help="schedule CSV to repair")
    p.set_defaults(func=cmd_fix_times)

    p = sub.add_parser("verify", help="multiply out a schedule and report distances")
    common(p)
    p.add_argument("--schedule", required=True, help="schedule CSV to verify")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    level = os.environ.get("LIESYNTH_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING))
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (TargetUnreachable, ResidualTooLarge) as exc:
        print(f"error: target unreachable: {exc}", file=sys.stderr)
        return 3
    except (SearchBudgetExceeded, MNotFound) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
