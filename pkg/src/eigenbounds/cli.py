"""
Command-line interface

Machine formats (``csv`` and ``jsonl``) go to standard output or ``--out`` and are
byte-stable for a given configuration, logging goes to standard error.

Exit codes: 0 when every proven inequality holds, 1 for invalid input, 2 when a
proven inequality is violated beyond tolerance and 3 for numerical failures (a
diagnostic record is written to standard error). Violated conjectures are reported
as ``COUNTEREXAMPLE-CANDIDATE`` records and do not change the exit code.
"""
import json
import logging
import sys

import click
import pandas as pd
import tqdm.autonotebook as tqdman
from joblib import Parallel, delayed

from ._version import __version__
from .config import BOUNDARIES, FORMATS, RunConfig, read_config
from .constants import EXIT_NUMERIC, EXIT_OK, EXIT_USAGE, EXIT_VIOLATION
from .eigensolver import analytic_spectrum, extrapolate, solve
from .errors import (
    EigenboundsError,
    GridError,
    NumericalError,
    UnsupportedDomainError,
)
from .geometry import DOMAIN_FAMILIES, SHAPES, Ball, domain_family, domain_from_dict
from .inequalities import (
    REPORT_COLUMNS,
    REPORT_EXTRA_COLUMNS,
    reports_to_frame,
    run_battery,
)
from .proofcheck import replay_ball, replay_gap_bound
from .specfun import bessel_prime_zero, bessel_zero
from .utils import format_frame, format_records, to_record, write_output

logger = logging.getLogger(__name__)

_LOG_FORMAT = "%(asctime)s %(name)s %(levelname)s: %(message)s"


def diagnostic_record(exc):
    """
    Record describing an exception for the diagnostic stream
    """
    return to_record(
        {
            "error": type(exc).__name__,
            "message": str(exc),
            "diagnostics": getattr(exc, "diagnostics", {}),
        }
    )


class _ExitCodeGroup(click.Group):
    """
    Group mapping library errors and usage errors onto the exit-code contract
    """

    def main(self, *args, standalone_mode=True, **kwargs):  # pylint: disable=arguments-differ
        try:
            rv = super().main(*args, standalone_mode=False, **kwargs)
        except click.ClickException as exc:
            exc.show()
            code = EXIT_USAGE
        except click.Abort:
            click.echo("Aborted!", err=True)
            code = EXIT_USAGE
        except NumericalError as exc:
            logger.error("numerical failure: %s", exc)
            click.echo(json.dumps(diagnostic_record(exc), sort_keys=True), err=True)
            code = EXIT_NUMERIC
        except EigenboundsError as exc:
            click.echo("Error: {}".format(exc), err=True)
            code = EXIT_USAGE
        else:
            code = rv if isinstance(rv, int) else EXIT_OK

        if standalone_mode:
            sys.exit(code)

        return code


def _domain_options(func):
    options = [
        click.option(
            "--config",
            "config_path",
            type=click.Path(exists=True, dir_okay=False),
            help="INI configuration file with [run] and [domain:<label>] sections.",
        ),
        click.option("--shape", type=click.Choice(sorted(SHAPES)), help="Domain shape."),
        click.option("--dim", type=int, help="Ball dimension.", default=None),
        click.option("--radius", type=float, help="Ball or stadium cap radius."),
        click.option("--a", "a", type=float, help="First side or semi-axis."),
        click.option("--b", "b", type=float, help="Second side or semi-axis."),
        click.option("--r-in", "r_in", type=float, help="Annulus inner radius."),
        click.option("--r-out", "r_out", type=float, help="Annulus outer radius."),
        click.option("--length", type=float, help="Stadium straight length."),
        click.option("--vertices", help='Polygon vertices as "x y; x y; ...".'),
        click.option("--translation", help='Placement offset as "x, y".'),
        click.option("--rotation", type=float, help="Placement rotation in radians."),
    ]
    for option in reversed(options):
        func = option(func)

    return func


def _run_options(func):
    options = [
        click.option(
            "--h",
            "h",
            type=float,
            multiple=True,
            help="Grid spacing, repeat for extrapolation (strictly decreasing, ratio 2).",
        ),
        click.option("--k", type=int, default=None, help="Number of eigenpairs."),
        click.option("--tol", type=float, default=None, help="Solver tolerance."),
        click.option(
            "--format", "fmt", type=click.Choice(FORMATS), default=None, help="Output format."
        ),
        click.option("--out", type=click.Path(dir_okay=False), help="Output file."),
        click.option("--seed", type=int, default=None, help="Seed for start vectors."),
        click.option("--jobs", type=int, default=None, help="Worker processes (-1: all)."),
        click.option(
            "--numeric/--analytic",
            "numeric_balls",
            default=None,
            help="Solve balls on a grid instead of using their analytic spectrum.",
        ),
        click.option(
            "--boundary", type=click.Choice(BOUNDARIES), default=None, help="Boundary treatment."
        ),
    ]
    for option in reversed(options):
        func = option(func)

    return func


_SHAPE_KEYS = ("dim", "radius", "a", "b", "r_in", "r_out", "length", "vertices")


def _load_config(params, require_domain=True):
    overrides = {
        "h": params.pop("h") or None,
        "k": params.pop("k"),
        "tol": params.pop("tol"),
        "fmt": params.pop("fmt"),
        "out": params.pop("out"),
        "seed": params.pop("seed"),
        "jobs": params.pop("jobs"),
        "numeric_balls": params.pop("numeric_balls"),
        "boundary": params.pop("boundary"),
    }
    config_path = params.pop("config_path", None)
    shape = params.pop("shape", None)

    if config_path is not None:
        config = read_config(config_path, **overrides)
    else:
        config = RunConfig(**{k: v for k, v in overrides.items() if v is not None})

    if shape is not None:
        spec = {"shape": shape}
        spec.update({k: params[k] for k in _SHAPE_KEYS if params.get(k) is not None})
        for key in ("translation", "rotation"):
            if params.get(key) is not None:
                spec[key] = params[key]
        config.domains = [("domain", domain_from_dict(spec))]
    elif any(params.get(k) is not None for k in _SHAPE_KEYS):
        raise click.UsageError("shape parameters need --shape")

    if require_domain and not config.domains:
        raise click.UsageError("give a domain with --shape or --config")

    logger.info("%r", config)
    return config


def _emit(text, config):
    text = write_output(text, config.out)
    if text:
        click.echo(text, nl=False)


def _numeric_spectrum(domain, kind, k, config):
    if len(config.h) == 1:
        return solve(
            domain,
            kind,
            k=k,
            h=config.h[0],
            tol=config.tol,
            seed=config.seed,
            boundary=config.boundary,
        )

    return extrapolate(
        domain,
        kind,
        k,
        h_list=config.h,
        tol=config.tol,
        seed=config.seed,
        boundary=config.boundary,
    )


def dirichlet_spectrum(domain, config, k=None):
    """
    Dirichlet spectrum used by the checks, analytic for balls unless
    ``config.numeric_balls``
    """
    k = config.k if k is None else k
    if isinstance(domain, Ball) and not config.numeric_balls:
        return analytic_spectrum(domain, "dirichlet", k)

    return _numeric_spectrum(domain, "dirichlet", k, config)


def neumann_spectrum(domain, config, k=None):
    """
    Neumann spectrum used by the checks

    Analytic for balls, numeric for rectilinear domains aligned with the lattice and
    ``None`` (with an info message) where neither is available.
    """
    k = config.k if k is None else k
    if isinstance(domain, Ball):
        return analytic_spectrum(domain, "neumann", k)

    try:
        return _numeric_spectrum(domain, "neumann", k, config)
    except (UnsupportedDomainError, GridError) as exc:
        logger.info("no Neumann spectrum for %r: %s", domain, exc)
        return None


def check_domain(domain, config):
    """
    Run every applicable inequality on one domain

    Returns
    -------
    list of :obj:`InequalityReport`
    """
    config.require_eigenpairs(domain.dim + 1)
    dirichlet = dirichlet_spectrum(domain, config)
    neumann = neumann_spectrum(domain, config)

    return run_battery(domain, dirichlet, neumann, n=domain.dim)


def _candidates(reports, label):
    for report in reports:
        if report.counterexample_candidate:
            record = dict(report.to_dict(), label=label)
            click.echo(
                "COUNTEREXAMPLE-CANDIDATE {}".format(json.dumps(to_record(record), sort_keys=True)),
                err=True,
            )


def _exit_code(reports):
    violated = [r for r in reports if r.violated]
    for report in violated:
        logger.error("proven inequality %s violated (margin %s)", report.id, report.margin)

    return EXIT_VIOLATION if violated else EXIT_OK


@click.group(cls=_ExitCodeGroup)
@click.version_option(__version__, prog_name="eigenbounds")
@click.option("-v", "--verbose", count=True, help="More logging on standard error.")
def cli(verbose):
    """
    Eigenvalue inequalities of the Dirichlet Laplacian
    """
    if verbose:
        level = logging.INFO if verbose == 1 else logging.DEBUG
        logging.basicConfig(stream=sys.stderr, level=level, format=_LOG_FORMAT)


@cli.command()
@click.argument("order", type=float)
@click.argument("k", type=int)
@click.option("--format", "fmt", type=click.Choice(FORMATS), default="table")
def bessel(order, k, fmt):
    """
    Zeros of J_ORDER and its derivative up to index K
    """
    rows = [
        {
            "order": order,
            "k": m,
            "j_zero": bessel_zero(order, m),
            "jp_zero": bessel_prime_zero(order, m),
        }
        for m in range(1, k + 1)
    ]
    click.echo(format_frame(pd.DataFrame(rows), fmt), nl=False)

    return EXIT_OK


@cli.command()
@_domain_options
@_run_options
@click.option(
    "--kind",
    type=click.Choice(["dirichlet", "neumann"]),
    default="dirichlet",
    help="Boundary condition.",
)
def eigs(kind, **params):
    """
    Smallest eigenvalues with error estimates
    """
    config = _load_config(params)
    rows = []
    records = []
    for label, domain in config.domains:
        if kind == "dirichlet":
            spectrum = dirichlet_spectrum(domain, config)
        else:
            spectrum = neumann_spectrum(domain, config)
            if spectrum is None:
                raise UnsupportedDomainError(
                    "no Neumann spectrum for {!r}".format(domain)
                )

        finest = getattr(spectrum, "finest", spectrum)
        residuals = getattr(finest, "residuals", None)
        for i, value in enumerate(spectrum.eigenvalues):
            rows.append(
                {
                    "label": label,
                    "shape": domain.shape,
                    "kind": kind,
                    "index": i + 1,
                    "eigenvalue": value,
                    "error_estimate": spectrum.error_estimates[i],
                    "residual": None if residuals is None else residuals[i],
                    "h_min": spectrum.h_min,
                    "source": spectrum.source,
                }
            )
        records.append(dict(spectrum.to_dict(), label=label))

    if config.fmt == "jsonl":
        text = format_records(records)
    else:
        text = format_frame(pd.DataFrame(rows), config.fmt)
    _emit(text, config)

    return EXIT_OK


@cli.command()
@_domain_options
@_run_options
def check(**params):
    """
    Every applicable inequality on each domain
    """
    config = _load_config(params)
    frames = []
    reports = []
    for label, domain in config.domains:
        domain_reports = check_domain(domain, config)
        _candidates(domain_reports, label)
        reports.extend(domain_reports)
        frame = reports_to_frame(domain_reports)
        frame["label"] = label
        frames.append(frame)

    _emit(format_frame(pd.concat(frames, ignore_index=True), config.fmt), config)

    return _exit_code(reports)


def _replay_rows(label, replay):
    rows = [
        {"label": label, "item": "center_residual", "lhs": replay.center_residual},
        {"label": label, "item": "rotation_orthogonality", "lhs": replay.rotation_orthogonality},
    ]
    rows.extend(
        {"label": label, "item": "condition_{}_{}".format(i, j), "lhs": value}
        for i, j, value in replay.conditions
    )
    rows.extend(
        {
            "label": label,
            "item": "rayleigh_{}".format(g.k),
            "lhs": g.gap,
            "rhs": g.quotient,
            "holds": g.holds,
        }
        for g in replay.gaps
    )
    rows.extend(
        {"label": label, "item": s.name, "lhs": s.lhs, "rhs": s.rhs, "holds": s.holds}
        for s in replay.steps
    )
    rows.append(
        {
            "label": label,
            "item": "gap_sum_bound",
            "lhs": replay.lhs,
            "rhs": replay.rhs,
            "holds": replay.holds,
        }
    )

    return rows


@cli.command()
@_domain_options
@_run_options
def proofcheck(**params):
    """
    Replay the proof of the gap-sum bound step by step
    """
    config = _load_config(params)
    replays = []
    for label, domain in config.domains:
        if isinstance(domain, Ball) and not config.numeric_balls:
            replay = replay_ball(domain.dim, domain.radius)
        else:
            replay = replay_gap_bound(
                domain,
                h_list=config.h,
                tol=config.tol,
                seed=config.seed,
                boundary=config.boundary,
            )
        if not replay.holds:
            logger.error("proof replay failed on %s", label)
        replays.append((label, replay))

    if config.fmt == "jsonl":
        text = format_records(dict(r.to_dict(), label=label) for label, r in replays)
    else:
        rows = [row for label, r in replays for row in _replay_rows(label, r)]
        frame = pd.DataFrame(rows, columns=["label", "item", "lhs", "rhs", "holds"])
        text = format_frame(frame, config.fmt)
    _emit(text, config)

    return EXIT_OK if all(r.holds for _, r in replays) else EXIT_VIOLATION


_HIGHLIGHTED = ("gap_sum_bound", "gap_sum_conjecture")

SWEEP_COLUMNS = (
    REPORT_COLUMNS + REPORT_EXTRA_COLUMNS + ("family", "parameter", "minimum_margin")
)
"""tuple : columns of the sweep table, in order"""


def _sweep_frame(family, results):
    frames = []
    for param, domain_reports in results:
        frame = reports_to_frame(domain_reports)
        frame["family"] = family
        frame["parameter"] = param
        frames.append(frame)

    frame = pd.concat(frames, ignore_index=True)
    frame["minimum_margin"] = False
    for ident in _HIGHLIGHTED:
        selected = frame.index[frame["id"] == ident]
        if len(selected):
            frame.loc[frame.loc[selected, "margin"].idxmin(), "minimum_margin"] = True

    return frame[list(SWEEP_COLUMNS)]


@cli.command()
@_run_options
@click.option(
    "--family", type=click.Choice(DOMAIN_FAMILIES), default="rectangle", help="Domain family."
)
@click.option("--samples", type=int, default=15, help="Number of domains.")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False))
def sweep(family, samples, **params):
    """
    Check a one-parameter family of unit-area domains
    """
    config = _load_config(params, require_domain=False)
    domains = domain_family(family, samples, seed=config.seed)

    results = Parallel(n_jobs=config.jobs)(
        delayed(check_domain)(domain, config)
        for _, domain in tqdman.tqdm(domains, desc="domains", leave=False, file=sys.stderr)
    )
    reports = [r for domain_reports in results for r in domain_reports]
    for (param, _), domain_reports in zip(domains, results):
        _candidates(domain_reports, "{}={}".format(family, param))

    frame = _sweep_frame(
        family, [(param, res) for (param, _), res in zip(domains, results)]
    )
    for ident in _HIGHLIGHTED:
        row = frame[(frame["id"] == ident) & frame["minimum_margin"]]
        if len(row):
            logger.info(
                "minimum %s margin %s at %s=%s",
                ident,
                row["margin"].iloc[0],
                family,
                row["parameter"].iloc[0],
            )

    _emit(format_frame(frame, config.fmt), config)

    return _exit_code(reports)


def main(argv=None):
    """
    Console entry point
    """
    return cli.main(args=argv, prog_name="eigenbounds")
