"""Deterministic command-line surface over the library.

Angle convention: every ``--gamma`` flag is the analytic-expectation angle,
the argument of ``objective_expectation``. Commands that actually prepare a
state (``sample``, ``eval --compare-statevector``) do so at ``-gamma`` with
mixing angle pi/4 unless overridden, and echo both angles.

All numeric output is rounded to 12 significant digits, every randomized
command carries an explicit seed (default 0, echoed), and files are written
atomically, so a fixed flag set reproduces byte-identical output. Exit
codes: 0 success, 2 invalid or infeasible input, 1 anything else.
"""

from __future__ import annotations

import csv
import functools
import io
import json
import math
import os
import tempfile
from dataclasses import dataclass

import click
import numpy as np

from . import analytic, sampler, schedule, typical
from .instance import (
    SIGN_MODES,
    InfeasibleError,
    ParseError,
    RetryExhaustedError,
    generate_random,
    parse,
    serialize,
)
from .statevector import AngleParams
from .statevector import expectation as sv_expectation
from .statevector import prepare as sv_prepare

#: Significant digits kept in every emitted float.
OUTPUT_DIGITS = 12


@dataclass(frozen=True)
class RunConfig:
    """Shared output/determinism knobs for one command invocation."""

    command: str
    fmt: str = "json"
    out: str | None = None
    seed: int = 0
    q_max: int | None = None
    n_max: int | None = None


def _clean(obj):
    """Round floats to OUTPUT_DIGITS and strip numpy scalar types."""
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(f"{float(obj):.{OUTPUT_DIGITS}g}")
    return obj


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.{OUTPUT_DIGITS}g}"
    return str(value)


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def _write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", text=True)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _emit(cfg: RunConfig, payload: dict, csv_body: str | None = None) -> None:
    if cfg.fmt == "csv" and csv_body is not None:
        text = csv_body
    else:
        text = json.dumps(_clean(payload), indent=2) + "\n"
    if cfg.out:
        _write_atomic(cfg.out, text)
        click.echo(f"wrote {cfg.out}")
    else:
        click.echo(text, nl=False)


def _load_instance(path: str):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        return parse(text)
    except ParseError as exc:
        raise click.UsageError(f"{path}: {exc}")


def _friendly(fn):
    """Map domain validation failures onto exit code 2."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (InfeasibleError, RetryExhaustedError, ParseError, ValueError) as exc:
            raise click.UsageError(str(exc))

    return wrapper


def _format_options(fn):
    fn = click.option(
        "-o",
        "--output",
        "out",
        type=click.Path(dir_okay=False, writable=True),
        default=None,
        help="write the report to a file (atomic) instead of stdout",
    )(fn)
    fn = click.option(
        "--format",
        "fmt",
        type=click.Choice(["json", "csv"]),
        default="json",
        show_default=True,
    )(fn)
    return fn


@click.group()
def main():
    """Evaluate, bound, and sample level-1 parity-constraint optimization."""


@main.command(name="gen")
@click.option("-n", "n", type=int, required=True, help="number of variables")
@click.option("-m", "m", type=int, required=True, help="number of equations")
@click.option(
    "-D",
    "--d-bound",
    "d_bound",
    type=int,
    required=True,
    help="occurrence slack: every variable appears in at most D+1 equations",
)
@click.option(
    "--sign-mode",
    type=click.Choice(list(SIGN_MODES)),
    default="uniform-random",
    show_default=True,
)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option(
    "-o",
    "--output",
    "out",
    type=click.Path(dir_okay=False, writable=True),
    required=True,
    help="instance file to write",
)
@_friendly
def cmd_gen(n, m, d_bound, sign_mode, seed, out):
    """Generate a random bounded-occurrence instance file."""
    inst = generate_random(n=n, m=m, d_bound=d_bound, sign_mode=sign_mode, seed=seed)
    _write_atomic(out, serialize(inst))
    payload = {
        "command": "gen",
        "path": out,
        "n": inst.n,
        "m": inst.m,
        "requested_d_bound": d_bound,
        "derived_d_bound": inst.d_bound,
        "sign_mode": sign_mode,
        "seed": seed,
    }
    click.echo(json.dumps(_clean(payload), indent=2))


@main.command(name="eval")
@click.argument("instance_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--gamma", type=float, required=True, help="analytic-convention angle")
@click.option(
    "--mode",
    type=click.Choice(["exact", "auto", "mc"]),
    default="auto",
    show_default=True,
)
@click.option("--mc-samples", type=int, default=100_000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--q-max", type=int, default=None, help="exact-enumeration support cap")
@click.option(
    "--compare-statevector",
    is_flag=True,
    help="also evaluate via dense state preparation at -gamma, beta=pi/4",
)
@click.option("--n-max", type=int, default=None, help="statevector qubit cap")
@_format_options
@_friendly
def cmd_eval(
    instance_path, gamma, mode, mc_samples, seed, q_max, compare_statevector, n_max, fmt, out
):
    """Per-clause and total objective expectation W(gamma)."""
    cfg = RunConfig(command="eval", fmt=fmt, out=out, seed=seed, q_max=q_max, n_max=n_max)
    inst = _load_instance(instance_path)
    report = analytic.objective_expectation(
        inst, gamma, mode=mode, q_max=q_max, mc_samples=mc_samples, seed=seed
    )
    payload = {
        "command": "eval",
        "instance": instance_path,
        "n": inst.n,
        "m": inst.m,
        "d_bound": inst.d_bound,
        "gamma": gamma,
        "mode": mode,
        "mc_samples": mc_samples,
        "seed": seed,
        "total": report.total,
        "stderr": report.stderr,
        "terms": [
            {
                "clause_index": t.clause_index,
                "value": t.value,
                "method": t.method,
                "stderr": t.stderr,
            }
            for t in report.terms
        ],
    }
    if compare_statevector:
        state = sv_prepare(inst, AngleParams(gamma=-gamma, beta=math.pi / 4), n_max=n_max)
        sv_value = sv_expectation(state, inst)
        payload["statevector"] = {
            "state_gamma": -gamma,
            "beta": math.pi / 4,
            "expectation": sv_value,
            "difference": abs(sv_value - report.total),
        }
    body = _csv_text(
        ("clause_index", "value", "method", "stderr"),
        [(t.clause_index, t.value, t.method, t.stderr) for t in report.terms],
    )
    _emit(cfg, payload, body)


@main.command(name="scan")
@click.argument("instance_path", type=click.Path(exists=True, dir_okay=False))
@click.option(
    "--mode",
    type=click.Choice(["exact", "auto", "mc"]),
    default="auto",
    show_default=True,
)
@click.option("--mc-samples", type=int, default=100_000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--q-max", type=int, default=None, help="exact-enumeration support cap")
@_format_options
@_friendly
def cmd_scan(instance_path, mode, mc_samples, seed, q_max, fmt, out):
    """Evaluate the full gamma grid and report the best node plus bounds."""
    cfg = RunConfig(command="scan", fmt=fmt, out=out, seed=seed, q_max=q_max)
    inst = _load_instance(instance_path)
    result = schedule.scan(
        inst, mode=mode, q_max=q_max, mc_samples=mc_samples, seed=seed
    )
    report = schedule.guarantee(inst.m, result.schedule.d_bound)
    payload = {
        "command": "scan",
        "instance": instance_path,
        "n": inst.n,
        "m": inst.m,
        "d_bound": inst.d_bound,
        "mode": mode,
        "mc_samples": mc_samples,
        "seed": seed,
        "schedule": {
            "d_bound": result.schedule.d_bound,
            "k": result.schedule.k,
            "gammas": list(result.schedule.gammas),
        },
        "curve": [
            {"r": p.r, "gamma": p.gamma, "value": p.value, "stderr": p.stderr}
            for p in result.points
        ],
        "best": {
            "r": result.best_r,
            "sign": result.best_sign,
            "gamma": result.best_gamma,
            "value": result.best_value,
        },
        "guarantee": {
            "m": report.m,
            "d_bound": report.d_bound,
            "k": report.k,
            "grid_bound": report.grid_bound,
            "grid_bound_vacuous": report.grid_bound_vacuous,
            "asymptotic_bound": report.asymptotic_bound,
            "asymptotic_note": report.asymptotic_note,
            "remainder_per_clause": report.remainder_per_clause,
        },
    }
    body = _csv_text(
        ("r", "gamma", "value", "stderr"),
        [(p.r, p.gamma, p.value, p.stderr) for p in result.points],
    )
    _emit(cfg, payload, body)


@main.command(name="sample")
@click.argument("instance_path", type=click.Path(exists=True, dir_okay=False))
@click.option(
    "--gamma",
    type=float,
    required=True,
    help="analytic-convention angle; the state is prepared at -gamma",
)
@click.option("--beta", type=float, default=math.pi / 4, help="mixing angle [default: pi/4]")
@click.option(
    "--samples",
    default="auto",
    show_default=True,
    help='shot count, or "auto" for ceil(m ln m)',
)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--n-max", type=int, default=None, help="statevector qubit cap")
@_format_options
@_friendly
def cmd_sample(instance_path, gamma, beta, samples, seed, n_max, fmt, out):
    """Measure shots and score satisfied equations per string."""
    cfg = RunConfig(command="sample", fmt=fmt, out=out, seed=seed, n_max=n_max)
    inst = _load_instance(instance_path)
    count = sampler.recommended_samples(inst.m) if samples == "auto" else int(samples)
    rep = sampler.run(inst, gamma=-gamma, beta=beta, samples=count, seed=seed, n_max=n_max)
    payload = {
        "command": "sample",
        "instance": instance_path,
        "n": inst.n,
        "m": inst.m,
        "d_bound": inst.d_bound,
        "gamma": gamma,
        "state_gamma": rep.gamma,
        "beta": rep.beta,
        "samples": rep.samples,
        "seed": rep.seed,
        "mean_satisfied": rep.mean_satisfied,
        "best_satisfied": rep.best_satisfied,
        "best_string": rep.best_string.to_string(),
        "predicted_mean": rep.predicted_mean,
    }
    header = (
        "gamma",
        "state_gamma",
        "beta",
        "samples",
        "seed",
        "mean_satisfied",
        "best_satisfied",
        "best_string",
        "predicted_mean",
    )
    row = (
        gamma,
        rep.gamma,
        rep.beta,
        rep.samples,
        rep.seed,
        rep.mean_satisfied,
        rep.best_satisfied,
        rep.best_string.to_string(),
        rep.predicted_mean,
    )
    _emit(cfg, payload, _csv_text(header, [row]))


@main.command(name="typical")
@click.argument("instance_path", type=click.Path(exists=True, dir_okay=False))
@click.option(
    "--gamma",
    default="auto",
    show_default=True,
    help='angle, or "auto" for 1/sqrt(3 D) at the derived occurrence bound',
)
@click.option(
    "--trials",
    type=int,
    default=0,
    show_default=True,
    help="Monte Carlo trials; 0 enumerates all sign assignments (m <= 20)",
)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--q-max", type=int, default=None, help="exact-enumeration support cap")
@_format_options
@_friendly
def cmd_typical(instance_path, gamma, trials, seed, q_max, fmt, out):
    """Sign-ensemble mean of W over the instance's triple collection."""
    cfg = RunConfig(command="typical", fmt=fmt, out=out, seed=seed, q_max=q_max)
    inst = _load_instance(instance_path)
    g = (
        typical.optimal_gamma_typical(max(1, inst.d_bound))
        if gamma == "auto"
        else float(gamma)
    )
    if trials == 0:
        rep = typical.ensemble_mean_exhaustive(inst.triples(), g, n=inst.n, q_max=q_max)
    else:
        rep = typical.ensemble_mean_mc(
            inst.triples(), g, trials, seed=seed, n=inst.n, q_max=q_max
        )
    payload = {
        "command": "typical",
        "instance": instance_path,
        "m": rep.m,
        "d_bound": rep.d_bound,
        "gamma": rep.gamma,
        "method": rep.method,
        "trials": rep.trials,
        "seed": seed,
        "mean_w": rep.mean_w,
        "stderr": rep.stderr,
        "variance": rep.variance,
        "closed_form_mean": rep.closed_form_mean,
        "lower_bound": rep.lower_bound,
        "upper_bound": rep.upper_bound,
        "variance_bound": rep.variance_bound,
    }
    header = (
        "m",
        "d_bound",
        "gamma",
        "method",
        "trials",
        "seed",
        "mean_w",
        "stderr",
        "variance",
        "closed_form_mean",
        "lower_bound",
        "upper_bound",
        "variance_bound",
    )
    row = (
        rep.m,
        rep.d_bound,
        rep.gamma,
        rep.method,
        rep.trials,
        seed,
        rep.mean_w,
        rep.stderr,
        rep.variance,
        rep.closed_form_mean,
        rep.lower_bound,
        rep.upper_bound,
        rep.variance_bound,
    )
    _emit(cfg, payload, _csv_text(header, [row]))


@main.command(name="bounds")
@click.option("-m", "m", type=int, required=True, help="number of equations")
@click.option("-D", "--d-bound", "d_bound", type=int, required=True)
@_format_options
@_friendly
def cmd_bounds(m, d_bound, fmt, out):
    """Worst-case and sign-ensemble guarantees for an (m, D) family."""
    cfg = RunConfig(command="bounds", fmt=fmt, out=out)
    report = schedule.guarantee(m, d_bound)
    t_gamma = typical.optimal_gamma_typical(d_bound)
    advantage = typical.typical_guarantee(m, d_bound)
    payload = {
        "command": "bounds",
        "m": m,
        "d_bound": d_bound,
        "k": report.k,
        "worst_case": {
            "label": "rigorous lower bound on the best grid-scan value",
            "grid_bound": report.grid_bound,
            "grid_bound_vacuous": report.grid_bound_vacuous,
            "remainder_per_clause": report.remainder_per_clause,
            "asymptotic_bound": report.asymptotic_bound,
            "asymptotic_note": report.asymptotic_note,
        },
        "typical": {
            "label": "sign-ensemble mean advantage at gamma = 1/sqrt(3 D)",
            "gamma": t_gamma,
            "advantage": advantage,
            "predicted_satisfied": m / 2.0 + advantage,
        },
    }
    header = (
        "m",
        "d_bound",
        "k",
        "grid_bound",
        "grid_bound_vacuous",
        "remainder_per_clause",
        "asymptotic_bound",
        "typical_gamma",
        "typical_advantage",
        "typical_predicted_satisfied",
    )
    row = (
        m,
        d_bound,
        report.k,
        report.grid_bound,
        report.grid_bound_vacuous,
        report.remainder_per_clause,
        report.asymptotic_bound,
        t_gamma,
        advantage,
        m / 2.0 + advantage,
    )
    _emit(cfg, payload, _csv_text(header, [row]))


if __name__ == "__main__":
    main()
