"""Resolve an invocation into runner parameters, run it and write its artifacts."""
from pathlib import Path
from typing import Any, Callable, Dict, List, Literal, Optional
import logging

import click
import numpy as np
import pandas as pd
from pydantic import BaseModel, Field, ValidationError

from cli import __version__
from cli.utils import ensure_output_dir, format_table, print_error, print_panel, print_success, print_warning
from src.config import load_run_config, settings
from src.core.exceptions import DatasetMissing, InvalidParameter, KernelTooLarge, ReconstructionError
from src.core.serialization import dump_yaml
from src.cs import SolverConfig, numerical_support, solve_weighted_bp
from src.cs_analysis import dual_certificate, nullspace_check_1d
from src.harness import (
    a0_recovery_correspondence,
    complete_both,
    max_recovered_rank,
    run_a0_tracking,
    run_collab_filter,
    run_cs_phase_map,
    run_inpainting,
    run_mc_phase,
    synthetic_image,
)
from src.harness import io
from src.mc import WsstConfig, nnm_solve, wsst

logger = logging.getLogger(__name__)

Subcommand = Literal["cs-phase", "a0-track", "mc-phase", "inpaint", "collab", "certify", "complete"]

MANIFEST_NAME = "run-manifest.yaml"
# manifest entries that are not parameters
META_KEYS = {"subcommand", "version", "outputs", "output_dir"}

DEFAULTS: Dict[str, Dict[str, Any]] = {
    "cs-phase": {
        "n": 128, "s_grid": "2:40:2", "m_grid": "10:120:10", "reps": 20,
        "epsilon": 0.01, "k_weighted": 20, "eta": 1e-5,
    },
    "a0-track": {"n": 256, "m": 110, "s": 45, "reps": 10, "k_max": 30, "epsilon": 0.01},
    "mc-phase": {"n": 100, "rank_grid": "2:30:2", "sample_frac": 0.3, "reps": 5, "threshold": 1e-3},
    "inpaint": {"image": None, "size": 64, "rank": 5, "sample_frac": 0.3},
    "collab": {"data": None, "rank_cap": 200},
    "certify": {"problem": None, "weights": None, "signal": None},
    "complete": {"triplets": None, "solver": "both", "n_rows": None, "n_cols": None},
}
CS_COMMANDS = {"cs-phase", "a0-track", "certify"}
SOLVER_FIELDS = set(SolverConfig.model_fields)
WSST_FIELDS = set(WsstConfig.model_fields)


class CliInvocation(BaseModel):
    """A parsed command line: subcommand, config file, explicit flag values and run context."""

    subcommand: Subcommand
    config_path: Optional[Path] = None
    overrides: Dict[str, Any] = Field(default_factory=dict)
    output_dir: Path = Field(default_factory=lambda: settings.output_dir)
    seed: Optional[int] = None
    workers: Optional[int] = Field(default=None, ge=1)


def parse_grid(value: Any) -> List[int]:
    """Accept ``start:stop:step`` (inclusive), ``a,b,c`` or a list of ints."""
    if isinstance(value, (list, tuple)):
        return [int(v) for v in value]
    text = str(value).strip()
    try:
        if ":" in text:
            parts = [int(p) for p in text.split(":")]
            start, stop = parts[0], parts[1]
            step = parts[2] if len(parts) > 2 else 1
            if step <= 0:
                raise ValueError("step must be positive")
            return list(range(start, stop + 1, step))
        return [int(p) for p in text.split(",") if p.strip()]
    except ValueError as e:
        raise click.BadParameter(f"invalid grid {value!r}: {e}")


def resolve_parameters(inv: CliInvocation) -> Dict[str, Any]:
    """Defaults, then the config file, then explicit flags."""
    params = dict(DEFAULTS[inv.subcommand])
    from_file = load_run_config(str(inv.config_path)) if inv.config_path else {}
    known = set(params) | SOLVER_FIELDS | WSST_FIELDS | {"seed", "workers"}
    for key, value in from_file.items():
        if key in META_KEYS:
            continue
        if key not in known:
            logger.warning(f"ignoring unknown config key '{key}'")
            continue
        params[key] = value
    params.update(inv.overrides)
    if inv.seed is not None:
        params["seed"] = inv.seed
    params.setdefault("seed", 0)
    if inv.workers is not None:
        params["workers"] = inv.workers
    params.setdefault("workers", settings.workers)
    return params


def _solver_config(params: Dict[str, Any]) -> SolverConfig:
    return SolverConfig(**{k: v for k, v in params.items() if k in SOLVER_FIELDS})


def _wsst_config(params: Dict[str, Any]) -> WsstConfig:
    return WsstConfig(**{k: v for k, v in params.items() if k in WSST_FIELDS})


def _require(params: Dict[str, Any], key: str) -> Any:
    if params.get(key) is None:
        raise click.UsageError(f"--{key.replace('_', '-')} is required")
    return params[key]


# ---------------------------------------------------------------- handlers

def _cs_phase(params: Dict[str, Any], out: Path) -> List[Path]:
    result = run_cs_phase_map(
        N=int(params["n"]),
        s_grid=parse_grid(params["s_grid"]),
        m_grid=parse_grid(params["m_grid"]),
        reps=int(params["reps"]),
        epsilon=float(params["epsilon"]),
        k_weighted=int(params["k_weighted"]),
        eta=float(params["eta"]),
        seed=int(params["seed"]),
        cfg=_solver_config(params),
        workers=int(params["workers"]),
    )
    print_panel(
        f"plain recoveries:    {int(result.counts_plain.sum())}\n"
        f"weighted recoveries: {int(result.counts_weighted.sum())}\n"
        f"weighted >= plain:   {result.dominance_fraction():.1%} of cells",
        title="Recovery map",
    )
    return [io.write_frame(result.to_frame(), out / "recovery-map.csv")]


def _a0_track(params: Dict[str, Any], out: Path) -> List[Path]:
    traces = run_a0_tracking(
        N=int(params["n"]),
        m=int(params["m"]),
        s=int(params["s"]),
        reps=int(params["reps"]),
        K=int(params["k_max"]),
        epsilon=float(params["epsilon"]),
        seed=int(params["seed"]),
        cfg=_solver_config(params),
        workers=int(params["workers"]),
    )
    summary = a0_recovery_correspondence(traces)
    print_panel("\n".join(f"{k}: {v}" for k, v in summary.items()), title="Weight condition")

    return [
        io.write_frame(traces, out / "a0-track.csv"),
        io.write_frame(pd.DataFrame([summary]), out / "a0-summary.csv"),
    ]


def _mc_phase(params: Dict[str, Any], out: Path) -> List[Path]:
    records = run_mc_phase(
        n=int(params["n"]),
        rank_grid=parse_grid(params["rank_grid"]),
        sample_frac=float(params["sample_frac"]),
        reps=int(params["reps"]),
        cfg=_wsst_config(params),
        seed=int(params["seed"]),
        workers=int(params["workers"]),
    )
    best = max_recovered_rank(records, float(params["threshold"]))
    summary = (
        records.groupby(["solver", "rank"], sort=True)
        .agg(median_error=("relative_error", "median"), median_rank=("recovered_rank", "median"))
        .reset_index()
    )
    click.echo(format_table(
        [[solver, rank] for solver, rank in best.items()],
        ["solver", f"max rank (median error < {params['threshold']})"],
        title="Matrix completion phase transition",
    ))
    return [
        io.write_frame(records, out / "mc-phase.csv"),
        io.write_frame(summary, out / "mc-phase-summary.csv"),
    ]


def _inpaint(params: Dict[str, Any], out: Path) -> List[Path]:
    if params.get("image"):
        image = io.read_pgm(params["image"])
    else:
        image = synthetic_image(int(params["size"]), int(params["rank"]), int(params["seed"]))
    result = run_inpainting(
        image,
        truncate_rank=int(params["rank"]),
        sample_frac=float(params["sample_frac"]),
        cfg=_wsst_config(params),
        seed=int(params["seed"]),
    )
    written = [
        io.write_pgm(out / "ground-truth.pgm", result.ground_truth),
        io.write_pgm(out / "observed.pgm", result.observed_image()),
    ]
    for name, completion in result.completions.items():
        written.append(io.write_pgm(out / f"{name}.pgm", completion.matrix))
        written.append(io.write_difference_map(out / f"{name}-diff.pgm", result.difference_maps[name]))
    frame = result.to_frame()
    click.echo(format_table(frame.values.tolist(), list(frame.columns), title="Inpainting"))
    written.append(io.write_frame(frame, out / "inpainting.csv"))
    return written


def _collab(params: Dict[str, Any], out: Path) -> List[Path]:
    path = params.get("data") or settings.movielens_100k
    if path is None:
        raise DatasetMissing("no ratings file given (use --data or WSST_MOVIELENS_100K)")
    dataset = io.load_movielens(path)
    result = run_collab_filter(dataset, _wsst_config(params), seed=int(params["seed"]))
    frame = result.to_frame()
    click.echo(format_table(
        frame[["solver", "relative_error", "rank"]].values.tolist(),
        ["solver", "relative_error", "rank"],
        title="Collaborative filtering",
    ))
    return [io.write_frame(frame, out / "collab.csv")]


def _certify(params: Dict[str, Any], out: Path) -> List[Path]:
    problem = io.read_problem(_require(params, "problem"))
    weights = io.read_weights(_require(params, "weights"))
    if params.get("signal"):
        signal = io.read_vector(params["signal"], "x")
        source = "supplied"
    else:
        cfg = _solver_config(params)
        solution = solve_weighted_bp(problem, weights, cfg)
        signal = np.zeros(problem.N)
        support = numerical_support(solution.t, cfg.support_tol)
        signal[support] = solution.t[support]
        source = "weighted_bp"

    report = dual_certificate(problem.A, signal, weights)
    row = {"signal": source, **report.to_dict()}
    try:
        row["nullspace_condition"] = nullspace_check_1d(problem.A, signal, weights)
    except KernelTooLarge:
        row["nullspace_condition"] = None

    frame = pd.DataFrame([row])
    click.echo(format_table([[k, v] for k, v in row.items()], ["field", "value"], title="Dual certificate"))
    return [io.write_frame(frame, out / "certificate.csv")]


def _complete(params: Dict[str, Any], out: Path) -> List[Path]:
    shape = None
    if params.get("n_rows") is not None and params.get("n_cols") is not None:
        shape = (int(params["n_rows"]), int(params["n_cols"]))
    obs = io.read_triplets(_require(params, "triplets"), shape)
    cfg = _wsst_config(params)
    solver = params["solver"]
    if solver == "both":
        results = complete_both(obs, cfg)
    elif solver == "nnm":
        results = {"nnm": nnm_solve(obs, cfg)}
    elif solver == "wsst":
        results = {"wsst": wsst(obs, nnm_solve(obs, cfg), cfg)}
    else:
        raise click.BadParameter(f"unknown solver {solver!r} (nnm, wsst or both)")

    written, rows = [], []
    for name, result in results.items():
        if result.status != "ok":
            print_warning(f"{name}: {result.status}")
        written.append(io.write_matrix(out / f"completion-{name}.csv", result.matrix))
        rows.append({
            "solver": name,
            "rank": result.rank,
            "lambda_used": result.lambda_used,
            "inner_iterations": result.inner_iterations_total,
            "reweight_rounds": result.reweight_rounds,
            "status": result.status,
        })

    frame = pd.DataFrame(rows)
    click.echo(format_table(frame.values.tolist(), list(frame.columns), title="Completion"))
    written.append(io.write_frame(frame, out / "completion-summary.csv"))
    return written


HANDLERS: Dict[str, Callable[[Dict[str, Any], Path], List[Path]]] = {
    "cs-phase": _cs_phase,
    "a0-track": _a0_track,
    "mc-phase": _mc_phase,
    "inpaint": _inpaint,
    "collab": _collab,
    "certify": _certify,
    "complete": _complete,
}


def write_manifest(inv: CliInvocation, params: Dict[str, Any], outputs: List[Path]) -> Path:
    """Flat YAML with every resolved parameter; it can be passed back as --config."""
    resolved = _solver_config(params) if inv.subcommand in CS_COMMANDS else _wsst_config(params)
    payload = {
        **resolved.model_dump(exclude_none=True),
        **{k: v for k, v in params.items() if v is not None},
        "subcommand": inv.subcommand,
        "version": __version__,
        "outputs": [p.name for p in outputs],
    }
    return dump_yaml(payload, inv.output_dir / MANIFEST_NAME)


def dispatch(inv: CliInvocation) -> int:
    """
    Run an invocation.

    Returns:
        0 on success, 1 on a reconstruction error or missing input file,
        2 on a usage error (bad flags, config or parameter values, unwritable
        output directory)
    """
    try:
        out = ensure_output_dir(inv.output_dir)
        params = resolve_parameters(inv)
        outputs = HANDLERS[inv.subcommand](params, out)
        manifest = write_manifest(inv, params, outputs)
    except click.UsageError as e:
        print_error(f"Usage error: {e.format_message()}")
        print_error(f"Try 'wsst {inv.subcommand} --help'.")
        return 2
    except ValidationError as e:
        print_error(f"Invalid parameters: {e}")
        return 2
    except InvalidParameter as e:
        print_error(f"Invalid parameters: {e}")
        return 2
    except ReconstructionError as e:
        logger.error(f"{type(e).__name__}: {e}")
        print_error(f"{type(e).__name__}: {e}")
        return 1
    except RuntimeError as e:
        print_error(f"Invalid config: {e}")
        return 2
    except ValueError as e:
        # malformed values in a config file, e.g. int("abc")
        print_error(f"Invalid parameter value: {e}")
        return 2
    except FileNotFoundError as e:
        print_error(f"Error: {e}")
        return 1

    print_success(f"wrote {len(outputs)} files and {manifest.name} to {out}")
    return 0
