"""Command-line front end.

\b
Exit codes:
    0  success
    1  verification failure (verify)
    2  invalid input (bad state, bad arguments)
    3  optimizer did not converge (extremize --strict)
"""

import csv
import io
import json
import sys

import click
import numpy as np

from . import catalog, estimator, extremal, grover, moments
from .core import (
    InvalidStateError,
    canonical_phases,
    density_from_json,
    l2_coherence,
    matrix_to_json,
    phases_to_json,
    superposition_value,
)
from .rng import stream, uniform_phases
from .verify import verify_state

EXIT_VERIFY = 1
EXIT_INVALID = 2
EXIT_NOT_CONVERGED = 3

seed_option = click.option("--seed", type=int, default=0, show_default=True, envvar="PHASESUP_SEED",
                           help="RNG seed (env PHASESUP_SEED).")
format_option = click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json", show_default=True)
output_option = click.option("--output", "-o", type=click.Path(dir_okay=False), default=None,
                             help="Write here instead of stdout.")


def _input_options(func):
    func = click.option("--catalog", "catalog_name", default=None, help="Catalog entry, e.g. ghz or werner:0.5.")(func)
    func = click.option("--input", "input_path", type=click.Path(exists=True, dir_okay=False), default=None,
                        help='JSON state file {"d", "re", "im"}.')(func)
    return func


def _fail(code, message):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _load(input_path, catalog_name):
    if (input_path is None) == (catalog_name is None):
        _fail(EXIT_INVALID, "give exactly one of --input or --catalog")
    try:
        if catalog_name is not None:
            return catalog.from_name(catalog_name)
        with open(input_path, encoding="utf-8") as fh:
            rho = density_from_json(json.load(fh))
        return catalog.CatalogEntry(f"file:{input_path}", rho, {})
    except InvalidStateError as exc:
        _fail(EXIT_INVALID, f"invalid state (violated invariant '{exc.invariant}'): {exc}")
    except (ValueError, json.JSONDecodeError) as exc:
        _fail(EXIT_INVALID, str(exc))


def _parse_theta(spec, d):
    if spec in (None, "zero"):
        return np.zeros(d)
    if spec.startswith("random:"):
        return uniform_phases(stream(int(spec.split(":", 1)[1])), 1, d)[0]
    try:
        theta = canonical_phases([float(x) for x in spec.split(",")])
    except (ValueError, InvalidStateError) as exc:
        _fail(EXIT_INVALID, f"bad --theta {spec!r}: {exc}")
    if theta.size != d:
        _fail(EXIT_INVALID, f"--theta has {theta.size} entries, state has d={d}")
    return theta


def _emit(text, output):
    if not text.endswith("\n"):
        text += "\n"
    if output is None:
        click.echo(text, nl=False)
    else:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _json(obj):
    return json.dumps(obj, indent=2)


def _csv(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


@click.group(help=__doc__, context_settings={"help_option_names": ["-h", "--help"]})
def main():
    pass


@main.command("eval")
@_input_options
@click.option("--theta", default="zero", show_default=True, help="'zero', 'random:<seed>' or comma list.")
@format_option
@output_option
def eval_cmd(input_path, catalog_name, theta, fmt, output):
    """Evaluate S_theta and the moment identities for one state."""
    entry = _load(input_path, catalog_name)
    th = _parse_theta(theta, entry.d)
    lo, hi = extremal.z_orbit_bounds(entry.state)
    values = {
        "S_theta": superposition_value(entry.state, th),
        "l2_coherence": l2_coherence(entry.state),
        "mean_superposition": moments.mean_superposition(entry.state),
        "second_moment": moments.second_moment(entry.state),
        "z_orbit_min": lo,
        "z_orbit_max": hi,
        "eigen_bound": extremal.smax_eigen_bound(entry.state),
    }
    if fmt == "json":
        _emit(_json({"state": entry.name, "d": entry.d, "theta": phases_to_json(th), **values}), output)
    else:
        _emit(_csv(("quantity", "value"), [(k, repr(v)) for k, v in values.items()]), output)


@main.command()
@_input_options
@click.option("--mode", type=click.Choice(["min", "max"]), required=True)
@click.option("--method", type=click.Choice(["auto", "closed-form", "optimizer", "grid"]), default="auto", show_default=True)
@click.option("--restarts", type=int, default=32, show_default=True)
@click.option("--max-iterations", type=int, default=5000, show_default=True)
@click.option("--grid-points", type=int, default=200, show_default=True)
@click.option("--strict", is_flag=True, help="Exit 3 if no restart converged.")
@seed_option
@format_option
@output_option
def extremize(input_path, catalog_name, mode, method, restarts, max_iterations, grid_points, strict, seed, fmt, output):
    """Minimum or maximum of S_theta over all phases."""
    entry = _load(input_path, catalog_name)
    pure = entry.pure
    if pure is None and method in ("auto", "closed-form"):
        lam, vecs = np.linalg.eigh(entry.state)
        if lam[-1] > 1.0 - 1e-10:
            pure = vecs[:, -1]
    try:
        if method == "grid":
            res = extremal.grid_extremum(entry.state, mode, grid_points)
        elif method == "closed-form" or (method == "auto" and pure is not None):
            if pure is None:
                _fail(EXIT_INVALID, "closed form needs a rank-one state")
            res = extremal.smin_pure(pure) if mode == "min" else extremal.smax_pure(pure)
        else:
            cfg = extremal.OptimizerConfig(restarts=restarts, max_iterations=max_iterations, seed=seed)
            res = extremal.extremize_mixed(entry.state, mode, cfg)
    except ValueError as exc:
        _fail(EXIT_INVALID, str(exc))
    if fmt == "json":
        _emit(_json({"state": entry.name, "mode": mode, **res.to_json()}), output)
    else:
        phases = " ".join(repr(float(x)) for x in res.theta)
        _emit(_csv(("state", "mode", "value", "method", "converged", "restarts_used", "phases"),
                   [(entry.name, mode, repr(res.value), res.method, res.converged, res.restarts_used, phases)]), output)
    if strict and not res.converged:
        _fail(EXIT_NOT_CONVERGED, "optimizer did not converge on any restart")


@main.command()
@_input_options
@click.option("--target", type=click.Choice(estimator.TARGETS), required=True)
@click.option("--samples", type=int, default=100_000, show_default=True)
@seed_option
@format_option
@output_option
def estimate(input_path, catalog_name, target, samples, seed, fmt, output):
    """Monte-Carlo estimate over uniform random phases."""
    entry = _load(input_path, catalog_name)
    rho = entry.state
    if samples < 2:
        _fail(EXIT_INVALID, "--samples must be at least 2")
    if target == "channel":
        est = estimator.estimate_channel(rho, samples, seed)
        if fmt == "json":
            _emit(_json({"target": "channel", "d": entry.d, "samples": est.samples, "seed": est.seed,
                         "estimate": matrix_to_json(est.estimate),
                         "stderr": {"re": est.stderr_re.tolist(), "im": est.stderr_im.tolist()}}), output)
        else:
            rows = []
            for j in range(entry.d):
                for k in range(entry.d):
                    for part, val, se in (("re", est.estimate[j, k].real, est.stderr_re[j, k]),
                                          ("im", est.estimate[j, k].imag, est.stderr_im[j, k])):
                        rows.append((f"channel[{j}][{k}].{part}", entry.d, est.samples, repr(float(val)), repr(float(se)), seed))
            _emit(_csv(estimator.CSV_FIELDS, rows), output)
        return
    if target in ("gradient_sq", "hessian_sq"):
        g, h = estimator.estimate_gradient_identities(rho, samples, seed)
        reports = [g if target == "gradient_sq" else h]
    else:
        fn = {
            "mean": estimator.estimate_mean_superposition,
            "second_moment": estimator.estimate_second_moment,
            "coherence": estimator.estimate_coherence,
        }[target]
        reports = [fn(rho, samples, seed)]
    if fmt == "json":
        _emit(_json(reports[0].to_json()), output)
    else:
        _emit(estimator.reports_to_csv(reports), output)


@main.command("grover-sweep")
@click.option("--N", "n_items", type=int, required=True, help="Database size.")
@click.option("--M", "n_marked", type=int, default=1, show_default=True, help="Number of marked items.")
@click.option("--t-max", type=int, default=20, show_default=True)
@click.option("--beta", type=float, default=None, help="Generalized start angle (default: uniform start).")
@click.option("--phi", type=float, default=0.0, show_default=True)
@click.option("--marked", default=None, help="Comma list of marked indices (default 0..M-1).")
@format_option
@output_option
def grover_sweep(n_items, n_marked, t_max, beta, phi, marked, fmt, output):
    """Success probability and extremal superposition along Grover iterations."""
    try:
        marked_set = tuple(int(x) for x in marked.split(",")) if marked else None
        cfg = grover.GroverConfig(n_items, n_marked, marked_set, beta, phi)
        trace = grover.sweep(cfg, t_max)
    except ValueError as exc:
        _fail(EXIT_INVALID, str(exc))
    _emit(_json(trace.to_json()) if fmt == "json" else trace.to_csv(), output)


@main.group("catalog")
def catalog_group():
    """Paradigmatic states and their reference values."""


@catalog_group.command("list")
def catalog_list():
    for name in catalog.DEFAULT_NAMES:
        click.echo(name)


@catalog_group.command("emit")
@click.argument("name")
@output_option
def catalog_emit(name, output):
    try:
        entry = catalog.from_name(name)
    except (ValueError, InvalidStateError) as exc:
        _fail(EXIT_INVALID, str(exc))
    obj = {"name": entry.name, "state": matrix_to_json(entry.state), "reference": entry.reference,
           "notes": list(entry.notes)}
    _emit(_json(obj), output)


@main.command()
@_input_options
@click.option("--samples", type=int, default=100_000, show_default=True)
@seed_option
def verify(input_path, catalog_name, samples, seed):
    """Run the invariant suite on one state; exit 1 if any check fails."""
    entry = _load(input_path, catalog_name)
    checks = verify_state(entry, samples=samples, seed=seed)
    for chk in checks:
        click.echo(chk.line())
    failed = sum(not c.passed for c in checks)
    click.echo(f"{len(checks) - failed}/{len(checks)} checks passed for {entry.name}")
    if failed:
        sys.exit(EXIT_VERIFY)


if __name__ == "__main__":  # pragma: no cover
    main()
