"""Command-line surface: scenario ingestion, single runs, parameter sweeps,
and reproducible result persistence.

Config files are YAML with dB/dBm units at the boundary; they are converted
to linear milliwatts once at ingestion.  Every run directory contains
record.json, pattern.csv and trace.csv; sweep outputs add summary.csv and
summary_median.csv at the sweep root.  All CSVs carry the seed and config
hash as leading comment lines.
"""
from __future__ import annotations

import argparse
import concurrent.futures
import copy
import hashlib
import json
import sys
import time
from pathlib import Path

import numpy as np
import yaml

from . import __version__
from .altmin import StopRule, design_transmit_beam
from .factorize import factorize
from .metrics import evaluate
from .model import Scenario, dbm_to_mw, db_to_linear, generate_channels
from .pattern import make_pattern_spec

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INFEASIBLE = 3
EXIT_NUMERICAL = 4


class ConfigError(Exception):
    """Invalid or missing configuration field; the message names it."""


_SCENARIO_DEFAULTS = {
    "n_t": 0,
    "p_t_dbm": 20.0,
    "noise_dbm": 0.0,
    "grid_size": 400,
    "objective_bands_deg": [[10.0, 30.0], [40.0, 60.0]],
    "nlos_paths_per_user": 2,
    "nlos_gain_variance": 0.01,
    "weights": None,
    "seed": 0,
}
_DESIGN_DEFAULTS = {"max_iters": 20, "relative_change_threshold": 1e-4,
                    "objective_threshold": None}
_FACTOR_DEFAULTS = {"max_iters": 50, "relative_change_threshold": 1e-6}
_REQUIRED = ("n_bs", "n_c", "user_angles_deg", "sinr_db")


def _require_number(cfg, key, kind=float):
    try:
        return kind(cfg[key])
    except (TypeError, ValueError):
        raise ConfigError(f"config field '{key}' must be a number") from None


def normalize_config(raw: dict) -> dict:
    """Fill defaults and canonicalize types; raises ConfigError naming the
    offending field.  The result round-trips through YAML unchanged."""
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a mapping")
    known = set(_SCENARIO_DEFAULTS) | set(_REQUIRED) | {"design", "factorization"}
    for key in raw:
        if key not in known:
            raise ConfigError(f"unknown config field '{key}'")
    for key in _REQUIRED:
        if key not in raw:
            raise ConfigError(f"missing config field '{key}'")

    cfg = dict(_SCENARIO_DEFAULTS)
    cfg.update({k: v for k, v in raw.items() if k not in ("design", "factorization")})

    out = {}
    out["n_bs"] = _require_number(cfg, "n_bs", int)
    out["n_c"] = _require_number(cfg, "n_c", int)
    out["n_t"] = _require_number(cfg, "n_t", int)
    out["p_t_dbm"] = _require_number(cfg, "p_t_dbm")
    out["noise_dbm"] = _require_number(cfg, "noise_dbm")
    angles = cfg["user_angles_deg"]
    if not isinstance(angles, (list, tuple)) or len(angles) != out["n_c"]:
        raise ConfigError("config field 'user_angles_deg' must list one angle per user")
    out["user_angles_deg"] = [float(a) for a in angles]
    sinr_raw = cfg["sinr_db"]
    if isinstance(sinr_raw, (int, float)):
        out["sinr_db"] = [float(sinr_raw)] * out["n_c"]
    elif isinstance(sinr_raw, (list, tuple)) and len(sinr_raw) == out["n_c"]:
        out["sinr_db"] = [float(g) for g in sinr_raw]
    else:
        raise ConfigError("config field 'sinr_db' must be a number or one value per user")
    out["grid_size"] = _require_number(cfg, "grid_size", int)
    bands = cfg["objective_bands_deg"]
    if not isinstance(bands, (list, tuple)) or not bands:
        raise ConfigError("config field 'objective_bands_deg' must be a non-empty list")
    try:
        out["objective_bands_deg"] = [[float(lo), float(hi)] for lo, hi in bands]
    except (TypeError, ValueError):
        raise ConfigError("config field 'objective_bands_deg' must hold [lower, upper] pairs") from None
    out["nlos_paths_per_user"] = _require_number(cfg, "nlos_paths_per_user", int)
    out["nlos_gain_variance"] = _require_number(cfg, "nlos_gain_variance")
    if cfg["weights"] is not None and not isinstance(cfg["weights"], (list, tuple)):
        raise ConfigError("config field 'weights' must be a list or null")
    out["weights"] = None if cfg["weights"] is None else [float(w) for w in cfg["weights"]]
    out["seed"] = _require_number(cfg, "seed", int)

    for section, defaults in (("design", _DESIGN_DEFAULTS), ("factorization", _FACTOR_DEFAULTS)):
        sec = dict(defaults)
        extra = raw.get(section) or {}
        if not isinstance(extra, dict):
            raise ConfigError(f"config field '{section}' must be a mapping")
        for k in extra:
            if k not in defaults:
                raise ConfigError(f"unknown config field '{section}.{k}'")
        sec.update(extra)
        out[section] = sec
    return out


def scenario_from_config(cfg: dict) -> Scenario:
    try:
        return Scenario(
            n_bs=cfg["n_bs"],
            n_c=cfg["n_c"],
            n_t=cfg["n_t"],
            user_angles_deg=tuple(cfg["user_angles_deg"]),
            sinr_thresholds=tuple(db_to_linear(g) for g in cfg["sinr_db"]),
            p_t=dbm_to_mw(cfg["p_t_dbm"]),
            noise_power=dbm_to_mw(cfg["noise_dbm"]),
            grid_size=cfg["grid_size"],
            objective_bands=tuple((lo, hi) for lo, hi in cfg["objective_bands_deg"]),
            weight_diag=None if cfg["weights"] is None else np.asarray(cfg["weights"], float),
            nlos_paths_per_user=cfg["nlos_paths_per_user"],
            nlos_gain_variance=cfg["nlos_gain_variance"],
            rng_seed=cfg["seed"],
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def load_config(path) -> dict:
    try:
        raw = yaml.safe_load(Path(path).read_text())
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except yaml.YAMLError as exc:
        raise ConfigError(f"config is not valid YAML: {exc}") from None
    return normalize_config(raw)


def serialize_config(cfg: dict) -> str:
    return yaml.safe_dump(cfg, sort_keys=True)


def config_hash(cfg: dict) -> str:
    return hashlib.sha256(json.dumps(cfg, sort_keys=True).encode()).hexdigest()[:16]


# -- output files ---------------------------------------------------------------

def _fmt(x) -> str:
    return format(float(x), ".12g")


def _write_csv(path: Path, meta: dict, header, rows):
    lines = [f"# {k}={v}" for k, v in meta.items()]
    lines.append(",".join(header))
    lines.extend(",".join(str(c) if isinstance(c, (str, int)) else _fmt(c) for c in row)
                 for row in rows)
    path.write_text("\n".join(lines) + "\n")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    return obj


def execute_run(cfg: dict, out_dir: Path) -> tuple[dict, int]:
    """Run the full pipeline for one normalized config; write the run files.

    Returns (record, exit_code).
    """
    scenario = scenario_from_config(cfg)
    chash = config_hash(cfg)
    meta = {"seed": cfg["seed"], "config_hash": chash}
    out_dir.mkdir(parents=True, exist_ok=True)

    rng = np.random.default_rng(cfg["seed"])
    record = {
        "version": __version__,
        "seed": cfg["seed"],
        "config_hash": chash,
        "config": cfg,
    }

    t0 = time.perf_counter()
    channels = generate_channels(scenario, rng)
    spec = make_pattern_spec(scenario)
    design_stop = StopRule(
        max_iters=cfg["design"]["max_iters"],
        objective_threshold=cfg["design"]["objective_threshold"],
        relative_change_threshold=cfg["design"]["relative_change_threshold"],
    )
    design = design_transmit_beam(scenario, channels, spec, design_stop, rng)
    t1 = time.perf_counter()
    record["status"] = design.status
    record["design"] = {
        "status": design.status,
        "iterations": design.iterations,
        "detail": design.detail,
        "trace": list(design.trace),
    }

    if design.status == "infeasible" or design.f_list.size == 0:
        record["timings_s"] = {"design": t1 - t0, "total": t1 - t0}
        _write_record(out_dir, record)
        return record, EXIT_INFEASIBLE if design.status == "infeasible" else EXIT_NUMERICAL

    factor_stop = StopRule(
        max_iters=cfg["factorization"]["max_iters"],
        relative_change_threshold=cfg["factorization"]["relative_change_threshold"],
    )
    factors = factorize(design.f_hat, scenario, factor_stop, rng)
    t2 = time.perf_counter()
    report = evaluate(design, factors, channels, spec, scenario)
    t3 = time.perf_counter()

    record["factorization"] = {
        "residual_trace": list(factors.residual_trace),
        "normalized": factors.normalized,
        "regularized": factors.regularized,
    }
    record["evaluation"] = {
        "per_user_sinr_db_design": report.sinr_db_design,
        "per_user_sinr_db_hybrid": report.sinr_db_hybrid,
        "mse_no_hbf": report.mse_no_hbf,
        "mse_hbf": report.mse_hbf,
        "feasible": report.feasible,
    }
    record["timings_s"] = {"design": t1 - t0, "factorize": t2 - t1,
                           "evaluate": t3 - t2, "total": t3 - t0}

    _write_record(out_dir, record)
    _write_csv(out_dir / "pattern.csv", meta,
               ["angle_deg", "objective_dBi", "dtb_dBi", "dtb_hbf_dBi"],
               zip(report.angle_deg, report.objective_dbi, report.dtb_dbi,
                   report.dtb_hbf_dbi))
    trace_rows = [("design", i + 1, v) for i, v in enumerate(design.trace)]
    trace_rows += [("factorization", i + 1, v) for i, v in enumerate(factors.residual_trace)]
    _write_csv(out_dir / "trace.csv", meta, ["stage", "step", "value"], trace_rows)

    code = EXIT_OK if design.status in ("converged", "max-iters") else EXIT_NUMERICAL
    return record, code


def _write_record(out_dir: Path, record: dict):
    (out_dir / "record.json").write_text(json.dumps(_jsonable(record), indent=2) + "\n")


# -- sweeps ---------------------------------------------------------------------

def load_sweep(path) -> dict:
    try:
        raw = yaml.safe_load(Path(path).read_text())
    except FileNotFoundError:
        raise ConfigError(f"sweep file not found: {path}") from None
    except yaml.YAMLError as exc:
        raise ConfigError(f"sweep config is not valid YAML: {exc}") from None
    if not isinstance(raw, dict):
        raise ConfigError("sweep config root must be a mapping")
    for key in ("base", "gamma_db_values", "n_bs_values", "seeds"):
        if key not in raw:
            raise ConfigError(f"missing sweep field '{key}'")
    for key in ("gamma_db_values", "n_bs_values", "seeds"):
        if not isinstance(raw[key], (list, tuple)) or not raw[key]:
            raise ConfigError(f"sweep field '{key}' must be a non-empty list")
    base = normalize_config(raw["base"])
    return {
        "base": base,
        "gamma_db_values": [float(g) for g in raw["gamma_db_values"]],
        "n_bs_values": [int(n) for n in raw["n_bs_values"]],
        "seeds": [int(s) for s in raw["seeds"]],
        "workers": int(raw.get("workers", 1)),
    }


def _point_config(base: dict, gamma_db: float, n_bs: int, seed: int) -> dict:
    cfg = copy.deepcopy(base)
    cfg["sinr_db"] = [gamma_db] * cfg["n_c"]
    cfg["n_bs"] = n_bs
    cfg["seed"] = seed
    return cfg


def _point_dir(gamma_db: float, n_bs: int, seed: int) -> str:
    return f"g{gamma_db:g}_n{n_bs}_s{seed}"


def _sweep_point(args) -> dict:
    cfg, out_dir = args
    t0 = time.perf_counter()
    try:
        record, code = execute_run(cfg, Path(out_dir))
    except Exception as exc:                      # per-point failures never stop a sweep
        return {"status": f"error: {exc}", "code": EXIT_NUMERICAL,
                "mse_no_hbf": None, "mse_hbf": None, "min_user_sinr_db": None,
                "iterations": 0, "runtime_s": time.perf_counter() - t0}
    ev = record.get("evaluation")
    return {
        "status": record["status"],
        "code": code,
        "mse_no_hbf": ev["mse_no_hbf"] if ev else None,
        "mse_hbf": ev["mse_hbf"] if ev else None,
        "min_user_sinr_db": min(ev["per_user_sinr_db_design"]) if ev else None,
        "iterations": record["design"]["iterations"],
        "runtime_s": time.perf_counter() - t0,
    }


def run_sweep(sweep_cfg: dict, out_dir: Path, workers: int | None = None) -> int:
    out_dir.mkdir(parents=True, exist_ok=True)
    points = [(g, n, s)
              for g in sweep_cfg["gamma_db_values"]
              for n in sweep_cfg["n_bs_values"]
              for s in sweep_cfg["seeds"]]
    jobs = [(_point_config(sweep_cfg["base"], g, n, s),
             str(out_dir / _point_dir(g, n, s))) for g, n, s in points]

    workers = workers or sweep_cfg.get("workers", 1)
    if workers > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_sweep_point, jobs))
    else:
        results = [_sweep_point(job) for job in jobs]

    meta = {"config_hash": config_hash(sweep_cfg["base"]),
            "seeds": ";".join(str(s) for s in sweep_cfg["seeds"])}
    rows = []
    for (g, n, s), res in zip(points, results):
        rows.append((_fmt(g), n, s, res["status"],
                     "" if res["mse_no_hbf"] is None else _fmt(res["mse_no_hbf"]),
                     "" if res["mse_hbf"] is None else _fmt(res["mse_hbf"]),
                     "" if res["min_user_sinr_db"] is None else _fmt(res["min_user_sinr_db"]),
                     res["iterations"], _fmt(res["runtime_s"])))
    _write_csv(out_dir / "summary.csv", meta,
               ["gamma_db", "n_bs", "seed", "status", "mse_no_hbf", "mse_hbf",
                "min_user_sinr_db", "iterations", "runtime_s"], rows)

    agg_rows = []
    for g in sweep_cfg["gamma_db_values"]:
        for n in sweep_cfg["n_bs_values"]:
            ok = [res for (pg, pn, _), res in zip(points, results)
                  if pg == g and pn == n and res["mse_no_hbf"] is not None]
            if ok:
                agg_rows.append((_fmt(g), n, len(ok),
                                 _fmt(float(np.median([r["mse_no_hbf"] for r in ok]))),
                                 _fmt(float(np.median([r["mse_hbf"] for r in ok])))))
            else:
                agg_rows.append((_fmt(g), n, 0, "", ""))
    _write_csv(out_dir / "summary_median.csv", meta,
               ["gamma_db", "n_bs", "n_runs", "median_mse_no_hbf", "median_mse_hbf"],
               agg_rows)
    return EXIT_OK


# -- entry point ----------------------------------------------------------------

def _apply_overrides(cfg: dict, args) -> dict:
    if getattr(args, "seed", None) is not None:
        cfg["seed"] = args.seed
    if getattr(args, "max_iters", None) is not None:
        cfg["design"]["max_iters"] = args.max_iters
    return cfg


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="isacbeam",
                                     description="Hybrid beamforming designer for mmWave ISAC")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="execute one design run from a config file")
    run.add_argument("config")
    run.add_argument("--out", default="isacbeam_out")
    run.add_argument("--seed", type=int, default=None)
    run.add_argument("--max-iters", type=int, default=None)

    sweep = sub.add_parser("sweep", help="execute a (gamma, n_bs, seed) sweep")
    sweep.add_argument("config")
    sweep.add_argument("--out", default="isacbeam_sweep")
    sweep.add_argument("--seed", type=int, default=None,
                       help="replace the sweep's seed list with this single seed")
    sweep.add_argument("--workers", type=int, default=None)
    sweep.add_argument("--max-iters", type=int, default=None)

    val = sub.add_parser("validate", help="check a run config file")
    val.add_argument("config")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "validate":
            try:
                raw = yaml.safe_load(Path(args.config).read_text())
            except FileNotFoundError:
                raise ConfigError(f"config file not found: {args.config}") from None
            except yaml.YAMLError as exc:
                raise ConfigError(f"config is not valid YAML: {exc}") from None
            if isinstance(raw, dict) and "base" in raw:
                sweep_cfg = load_sweep(args.config)
                scenario_from_config(sweep_cfg["base"])
                print(f"ok: {args.config} (sweep, "
                      f"config_hash={config_hash(sweep_cfg['base'])})")
            else:
                cfg = load_config(args.config)
                scenario_from_config(cfg)
                print(f"ok: {args.config} (config_hash={config_hash(cfg)})")
            return EXIT_OK
        if args.command == "run":
            cfg = _apply_overrides(load_config(args.config), args)
            scenario_from_config(cfg)
            record, code = execute_run(cfg, Path(args.out))
            print(f"status={record['status']} out={args.out}")
            return code
        if args.command == "sweep":
            sweep_cfg = load_sweep(args.config)
            if args.seed is not None:
                sweep_cfg["seeds"] = [args.seed]
            if args.max_iters is not None:
                sweep_cfg["base"]["design"]["max_iters"] = args.max_iters
            code = run_sweep(sweep_cfg, Path(args.out), args.workers)
            print(f"sweep written to {args.out}")
            return code
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:                      # surface numerical failures distinctly
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
