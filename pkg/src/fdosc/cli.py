"""Command-line front end.

Subcommands map one-to-one onto the library surface: `spectrum` tabulates
algebraic levels against the grid oracle, `state` dumps an occupation
distribution, `evolve` writes a phase-space/uncertainty time series,
`scan-alpha` sweeps t=0 variances over the coherent amplitude, and `verify`
runs the oracle suites.  One command per process; the output file is written
once, atomically (temp file in the target directory, then os.replace).

Config precedence: built-in defaults < command-line flags < --config FILE.
The JSON config mirrors the five blocks (model, state, task, grid, output)
and round-trips bit-identically through `canonical_json`.

Exit codes: 0 success, 2 configuration error, 3 numeric failure (including
any red row in `verify`).
"""

from __future__ import annotations

import argparse
import contextlib
import hashlib
import json
import math
import os
import sys
import tempfile
from typing import Any

import numpy as np

from .dynamics import default_time_grid, level_energies, scan_alpha, trajectory
from .gridsolver import fd_spectrum
from .models import DomainError, Harmonic, Model, ModifiedPT, Morse, TrigPT, is_bounded
from .operators import NumericsError
from .states import (
    ConvergenceError,
    build_state,
    cmath_from_polar,
    invert_alpha,
    mean_occupation,
    occupation_distribution,
)
from .verify import verify_suite

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3

_VARIANTS = ("morse", "mpt", "tpt", "harmonic")
_TASKS = ("spectrum", "state", "evolve", "scan-alpha", "verify")
#: tasks that construct a single coherent state and therefore need
#: exactly one of alpha_abs / target_mean_n
_STATE_TASKS = ("state", "evolve")


class ConfigError(ValueError):
    """Invalid or inconsistent run configuration."""


def default_config() -> dict[str, dict[str, Any]]:
    """The five-block run config with every knob at its default."""
    return {
        "model": {
            "variant": "morse",
            "n_bound": 22,
            "s": 10,
            "lam": 2.0,
            "omega": None,
            "a": 1.0,
            "mu": 1.0,
            "hbar": 1.0,
        },
        "state": {
            "kind": "docs",
            "alpha_abs": None,
            "alpha_phase": 0.0,
            "target_mean_n": None,
            "truncation": None,
            "renormalize": True,
        },
        "task": {"name": None},
        "grid": {
            "t_max": None,
            "t_steps": 4096,
            "alpha_max": 2.0,
            "alpha_steps": 41,
            "levels": None,
        },
        "output": {"path": None, "format": "csv", "precision": 12},
    }


def canonical_json(config: dict) -> str:
    """Key-sorted, separator-fixed serialization; loads() then dumps() of
    this string reproduces it byte for byte."""
    return json.dumps(config, sort_keys=True, separators=(",", ":"))


def config_digest(config: dict) -> str:
    """sha256 over the physics-identity blocks (model, state, task, grid).

    The output block is excluded so the same computation written to a
    different path or format keeps the same fingerprint.
    """
    ident = {k: config[k] for k in ("model", "state", "task", "grid")}
    return hashlib.sha256(canonical_json(ident).encode("ascii")).hexdigest()


def merge_config(base: dict, override: dict) -> dict:
    """Deep-merge `override` (a possibly partial config) over `base`."""
    out = {k: dict(v) for k, v in base.items()}
    for block, values in override.items():
        if block not in out:
            raise ConfigError(f"unknown config block {block!r}")
        if not isinstance(values, dict):
            raise ConfigError(f"config block {block!r} must be an object")
        for key, val in values.items():
            if key not in out[block]:
                raise ConfigError(f"unknown config key {block}.{key}")
            out[block][key] = val
    return out


def _as_int(block: str, key: str, value: Any) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{block}.{key} must be an integer, got {value!r}")
    if isinstance(value, float) and not value.is_integer():
        raise ConfigError(f"{block}.{key} must be an integer, got {value!r}")
    return int(value)


def _as_float(block: str, key: str, value: Any) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{block}.{key} must be a number, got {value!r}")
    return float(value)


def validate_config(config: dict) -> dict:
    """Normalize types in place and enforce the cross-field invariants."""
    m, s, t, g, o = (
        config["model"],
        config["state"],
        config["task"],
        config["grid"],
        config["output"],
    )
    task = t["name"]
    if task not in _TASKS:
        raise ConfigError(f"task must be one of {_TASKS}, got {task!r}")
    if m["variant"] is not None and m["variant"] not in _VARIANTS:
        raise ConfigError(f"model must be one of {_VARIANTS}, got {m['variant']!r}")
    if m["variant"] is None and task != "verify":
        raise ConfigError("a model variant is required for this task")

    m["n_bound"] = _as_int("model", "n_bound", m["n_bound"])
    m["s"] = _as_int("model", "s", m["s"])
    m["lam"] = _as_float("model", "lam", m["lam"])
    for key in ("a", "mu", "hbar"):
        m[key] = _as_float("model", key, m[key])
    if m["omega"] is not None:
        m["omega"] = _as_float("model", "omega", m["omega"])

    if s["kind"] not in ("aocs", "docs"):
        raise ConfigError(f"state.kind must be 'aocs' or 'docs', got {s['kind']!r}")
    if s["truncation"] not in (None, "bound", "block"):
        raise ConfigError(
            f"state.truncation must be 'bound' or 'block', got {s['truncation']!r}"
        )
    if not isinstance(s["renormalize"], bool):
        raise ConfigError("state.renormalize must be a boolean")
    if s["alpha_abs"] is not None:
        s["alpha_abs"] = _as_float("state", "alpha_abs", s["alpha_abs"])
        if s["alpha_abs"] < 0:
            raise ConfigError("state.alpha_abs must be >= 0")
    s["alpha_phase"] = _as_float("state", "alpha_phase", s["alpha_phase"])
    if s["target_mean_n"] is not None:
        s["target_mean_n"] = _as_float("state", "target_mean_n", s["target_mean_n"])
        if s["target_mean_n"] < 0:
            raise ConfigError("state.target_mean_n must be >= 0")

    given = (s["alpha_abs"] is not None) + (s["target_mean_n"] is not None)
    if task in _STATE_TASKS and given != 1:
        raise ConfigError(
            f"task {task!r} needs exactly one of state.alpha_abs / "
            f"state.target_mean_n, got {given}"
        )
    if task not in _STATE_TASKS and given:
        raise ConfigError(
            f"state.alpha_abs / state.target_mean_n are not used by task {task!r}"
        )

    if g["t_max"] is not None:
        g["t_max"] = _as_float("grid", "t_max", g["t_max"])
        if g["t_max"] <= 0:
            raise ConfigError("grid.t_max must be > 0")
    g["t_steps"] = _as_int("grid", "t_steps", g["t_steps"])
    if g["t_steps"] < 2:
        raise ConfigError("grid.t_steps must be at least 2")
    g["alpha_max"] = _as_float("grid", "alpha_max", g["alpha_max"])
    if g["alpha_max"] <= 0:
        raise ConfigError("grid.alpha_max must be > 0")
    g["alpha_steps"] = _as_int("grid", "alpha_steps", g["alpha_steps"])
    if g["alpha_steps"] < 2:
        raise ConfigError("grid.alpha_steps must be at least 2")
    if g["levels"] is not None:
        g["levels"] = _as_int("grid", "levels", g["levels"])
        if g["levels"] < 1:
            raise ConfigError("grid.levels must be at least 1")

    if o["format"] not in ("csv", "json"):
        raise ConfigError(f"output.format must be 'csv' or 'json', got {o['format']!r}")
    o["precision"] = _as_int("output", "precision", o["precision"])
    if not 1 <= o["precision"] <= 17:
        raise ConfigError("output.precision must lie in [1, 17]")
    if o["path"] is not None and not isinstance(o["path"], str):
        raise ConfigError("output.path must be a string path")
    return config


def build_model(mblock: dict) -> Model:
    variant = mblock["variant"]
    common = {"mu": mblock["mu"], "hbar": mblock["hbar"]}
    if variant == "morse":
        kw = {"n_bound": mblock["n_bound"], **common}
        if mblock["omega"] is not None:
            kw["omega"] = mblock["omega"]
        return Morse(**kw)
    if variant == "mpt":
        return ModifiedPT(
            s=mblock["s"], a=mblock["a"], omega=mblock["omega"], **common
        )
    if variant == "tpt":
        return TrigPT(lam=mblock["lam"], a=mblock["a"], omega=mblock["omega"], **common)
    if variant == "harmonic":
        kw = dict(common)
        if mblock["omega"] is not None:
            kw["omega"] = mblock["omega"]
        return Harmonic(**kw)
    raise ConfigError(f"unknown model variant {variant!r}")


def _resolve_alpha(model: Model, sblock: dict) -> complex:
    if sblock["alpha_abs"] is not None:
        mag = sblock["alpha_abs"]
    else:
        mag = invert_alpha(
            model,
            sblock["kind"],
            sblock["target_mean_n"],
            truncation=sblock["truncation"],
            renormalize=sblock["renormalize"],
        )
    return cmath_from_polar(mag, sblock["alpha_phase"])


# ---------------------------------------------------------------- rendering


def _fmt_float(value: float, precision: int) -> str:
    return f"%.{precision}g" % value


def _fmt_cell(value: Any, precision: int) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        f = float(value)
        if not math.isfinite(f):
            raise NumericsError(f"non-finite value {f!r} in output table")
        return _fmt_float(f, precision)
    return str(value)


def _json_cell(value: Any, precision: int) -> Any:
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        f = float(value)
        if not math.isfinite(f):
            raise NumericsError(f"non-finite value {f!r} in output table")
        return float(_fmt_float(f, precision))
    return value


def render_output(
    config: dict,
    columns: tuple[str, ...],
    rows: list[tuple],
    meta: dict[str, Any],
) -> str:
    task = config["task"]["name"]
    digest = config_digest(config)
    precision = config["output"]["precision"]
    meta = dict(meta)
    meta.setdefault("truncation", config["state"]["truncation"] or "default")
    meta.setdefault("renormalize", config["state"]["renormalize"])
    if config["output"]["format"] == "json":
        doc = {
            "task": task,
            "config_sha256": digest,
            "meta": {k: _json_cell(v, precision) for k, v in meta.items()},
            "columns": list(columns),
            "data": {
                col: [_json_cell(row[i], precision) for row in rows]
                for i, col in enumerate(columns)
            },
        }
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"
    lines = [f"# fdosc {task}", f"# config_sha256 = {digest}"]
    lines.extend(
        f"# {key} = {_fmt_cell(meta[key], precision)}" for key in sorted(meta)
    )
    lines.append(",".join(columns))
    lines.extend(",".join(_fmt_cell(v, precision) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def write_output(text: str, path: str | None) -> None:
    """Write once, atomically; stdout when no path is configured."""
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    target = os.path.abspath(path)
    fd, tmp = tempfile.mkstemp(
        dir=os.path.dirname(target), prefix=".fdosc-", suffix=".part"
    )
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        with contextlib.suppress(OSError):
            os.unlink(tmp)
        raise


# ------------------------------------------------------------------- tasks


def _default_levels(model: Model) -> int:
    return model.bound_dim if is_bounded(model) else 8


def cmd_spectrum(config: dict) -> tuple[str, int]:
    model = build_model(config["model"])
    levels = config["grid"]["levels"] or _default_levels(model)
    algebraic = level_energies(model, levels)
    grid_oracle = fd_spectrum(model, levels)
    rel = np.abs(algebraic - grid_oracle) / np.abs(algebraic)
    rows = [
        (n, algebraic[n], grid_oracle[n], rel[n]) for n in range(levels)
    ]
    meta = {"model": model.label, "levels": levels}
    text = render_output(config, ("n", "E_n", "E_n_fd", "rel_err"), rows, meta)
    return text, EXIT_OK


def cmd_state(config: dict) -> tuple[str, int]:
    model = build_model(config["model"])
    sblock = config["state"]
    alpha = _resolve_alpha(model, sblock)
    state = build_state(
        model,
        sblock["kind"],
        alpha,
        truncation=sblock["truncation"],
        renormalize=sblock["renormalize"],
    )
    probs = occupation_distribution(state)
    rows = [(n, probs[n]) for n in range(state.dim)]
    meta = {
        "model": model.label,
        "kind": sblock["kind"],
        "alpha_abs": abs(alpha),
        "alpha_phase": sblock["alpha_phase"],
        "mean_n": mean_occupation(state),
        "norm_kept": state.norm_kept,
    }
    text = render_output(config, ("n", "P_n"), rows, meta)
    return text, EXIT_OK


def cmd_evolve(config: dict) -> tuple[str, int]:
    model = build_model(config["model"])
    sblock, gblock = config["state"], config["grid"]
    alpha = _resolve_alpha(model, sblock)
    state = build_state(
        model,
        sblock["kind"],
        alpha,
        truncation=sblock["truncation"],
        renormalize=sblock["renormalize"],
    )
    if gblock["t_max"] is None:
        t = default_time_grid(model, gblock["t_steps"])
    else:
        t = np.linspace(0.0, gblock["t_max"], gblock["t_steps"])
    series = trajectory(model, state, t)
    rows = list(
        zip(
            series.t,
            series.mean_x,
            series.mean_p,
            series.var_x,
            series.var_p,
            series.delta_xp,
        )
    )
    meta = {
        "model": model.label,
        "kind": sblock["kind"],
        "alpha_abs": abs(alpha),
        "alpha_phase": sblock["alpha_phase"],
        "mean_n": mean_occupation(state),
        "norm_kept": state.norm_kept,
        "backend": series.backend,
    }
    columns = ("t", "x_mean", "p_mean", "var_x", "var_p", "delta_xp")
    text = render_output(config, columns, rows, meta)
    return text, EXIT_OK


def cmd_scan_alpha(config: dict) -> tuple[str, int]:
    model = build_model(config["model"])
    sblock, gblock = config["state"], config["grid"]
    mags = np.linspace(0.0, gblock["alpha_max"], gblock["alpha_steps"])
    scan = scan_alpha(
        model,
        sblock["kind"],
        mags,
        phase=sblock["alpha_phase"],
        truncation=sblock["truncation"],
    )
    rows = list(zip(scan.alpha_abs, scan.var_x, scan.var_p, scan.delta_xp))
    meta = {"model": model.label, "kind": sblock["kind"]}
    columns = ("alpha_abs", "var_x0", "var_p0", "delta_xp0")
    text = render_output(config, columns, rows, meta)
    return text, EXIT_OK


def cmd_verify(config: dict) -> tuple[str, int]:
    variant = config["model"]["variant"]
    if variant is None:
        suites = verify_suite()
    else:
        # verify the exact model the flags describe, not just the defaults
        from .verify import _SUITES

        suites = {variant: _SUITES[variant](build_model(config["model"]))}
    rows = []
    failed = 0
    for label, checks in suites.items():
        for c in checks:
            rows.append((label, c.name, c.value, c.threshold, c.direction, c.passed))
            failed += not c.passed
    meta = {
        "suites": ",".join(suites),
        "checks_total": len(rows),
        "checks_failed": failed,
    }
    columns = ("suite", "check", "value", "threshold", "direction", "passed")
    text = render_output(config, columns, rows, meta)
    return text, EXIT_OK if failed == 0 else EXIT_NUMERIC


_HANDLERS = {
    "spectrum": cmd_spectrum,
    "state": cmd_state,
    "evolve": cmd_evolve,
    "scan-alpha": cmd_scan_alpha,
    "verify": cmd_verify,
}


# ------------------------------------------------------------------ parser


def _add_model_flags(p: argparse.ArgumentParser, default_variant: str | None) -> None:
    p.add_argument(
        "--model",
        choices=_VARIANTS,
        default=default_variant,
        help="potential family (default: %(default)s)",
    )
    p.add_argument("--n-bound", type=int, default=22, metavar="N",
                   help="Morse: number of bound levels (default 22)")
    p.add_argument("--s", type=int, default=10, metavar="S",
                   help="MPT: depth integer (default 10)")
    p.add_argument("--lambda", dest="lam", type=float, default=2.0, metavar="LAM",
                   help="TPT: steepness parameter > 1/2 (default 2)")
    p.add_argument("--omega", type=float, default=None,
                   help="oscillator frequency (default: model convention)")
    p.add_argument("--a", type=float, default=1.0, help="potential length-scale")
    p.add_argument("--mu", type=float, default=1.0, help="particle mass")
    p.add_argument("--hbar", type=float, default=1.0)


def _add_output_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--output", default=None, metavar="PATH",
                   help="write here atomically (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--config", default=None, metavar="FILE",
                   help="JSON run config; overrides flags")


def _add_state_flags(p: argparse.ArgumentParser, with_alpha: bool = True) -> None:
    p.add_argument("--kind", choices=("aocs", "docs"), default="docs",
                   help="coherent-state construction (default docs)")
    if with_alpha:
        p.add_argument("--alpha-abs", type=float, default=None, metavar="R",
                       help="coherent amplitude magnitude")
        p.add_argument("--target-mean-n", type=float, default=None, metavar="NBAR",
                       help="solve for the amplitude giving this mean level")
    p.add_argument("--alpha-phase", type=float, default=0.0, metavar="PHI",
                   help="coherent amplitude phase in radians (default 0)")
    p.add_argument("--truncation", choices=("bound", "block"), default=None,
                   help="basis cutoff for finite models (default: model rule)")
    p.add_argument("--no-renormalize", action="store_true",
                   help="keep the raw truncated amplitudes")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="fdosc",
        description="Deformed-oscillator coherent states: spectra, occupation "
        "tables, phase-space trajectories, uncertainty scans, oracle checks.",
    )
    sub = ap.add_subparsers(dest="task", required=True)

    p = sub.add_parser("spectrum", help="energy levels vs the grid oracle")
    _add_model_flags(p, "morse")
    p.add_argument("--levels", type=int, default=None,
                   help="level count (default: all bound levels, or 8)")
    _add_output_flags(p)

    p = sub.add_parser("state", help="occupation distribution of one state")
    _add_model_flags(p, "morse")
    _add_state_flags(p)
    _add_output_flags(p)

    p = sub.add_parser("evolve", help="time series of moments and uncertainty")
    _add_model_flags(p, "morse")
    _add_state_flags(p)
    p.add_argument("--t-max", type=float, default=None,
                   help="grid end (default: model revival/period window)")
    p.add_argument("--t-steps", type=int, default=4096)
    _add_output_flags(p)

    p = sub.add_parser("scan-alpha", help="t=0 variances vs coherent amplitude")
    _add_model_flags(p, "morse")
    _add_state_flags(p, with_alpha=False)
    p.add_argument("--alpha-max", type=float, default=2.0)
    p.add_argument("--alpha-steps", type=int, default=41)
    _add_output_flags(p)

    p = sub.add_parser("verify", help="run the oracle suites")
    _add_model_flags(p, None)
    _add_output_flags(p)

    return ap


def config_from_args(args: argparse.Namespace) -> dict:
    cfg = default_config()
    cfg["task"]["name"] = args.task
    m = cfg["model"]
    m["variant"] = args.model
    m["n_bound"] = args.n_bound
    m["s"] = args.s
    m["lam"] = args.lam
    m["omega"] = args.omega
    m["a"] = args.a
    m["mu"] = args.mu
    m["hbar"] = args.hbar
    s = cfg["state"]
    s["kind"] = getattr(args, "kind", s["kind"])
    s["alpha_abs"] = getattr(args, "alpha_abs", None)
    s["alpha_phase"] = getattr(args, "alpha_phase", s["alpha_phase"])
    s["target_mean_n"] = getattr(args, "target_mean_n", None)
    s["truncation"] = getattr(args, "truncation", None)
    if getattr(args, "no_renormalize", False):
        s["renormalize"] = False
    g = cfg["grid"]
    g["t_max"] = getattr(args, "t_max", None)
    g["t_steps"] = getattr(args, "t_steps", g["t_steps"])
    g["alpha_max"] = getattr(args, "alpha_max", g["alpha_max"])
    g["alpha_steps"] = getattr(args, "alpha_steps", g["alpha_steps"])
    g["levels"] = getattr(args, "levels", None)
    o = cfg["output"]
    o["path"] = args.output
    o["format"] = args.format
    return cfg


def load_config_file(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path!r} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("config file must hold a JSON object")
    return doc


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = config_from_args(args)
        if args.config is not None:
            override = load_config_file(args.config)
            file_task = override.get("task", {}).get("name")
            if file_task is not None and file_task != args.task:
                raise ConfigError(
                    f"config file task {file_task!r} conflicts with "
                    f"subcommand {args.task!r}"
                )
            config = merge_config(config, override)
            config["task"]["name"] = args.task
        validate_config(config)
        text, code = _HANDLERS[config["task"]["name"]](config)
        write_output(text, config["output"]["path"])
        return code
    except (ConfigError, DomainError, KeyError, TypeError, ValueError) as exc:
        print(f"fdosc: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ConvergenceError, NumericsError) as exc:
        print(f"fdosc: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"fdosc: cannot write output: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
