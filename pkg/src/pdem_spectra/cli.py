"""pdem-spectra command line: tables, QES solutions, partners and verification reports."""
from __future__ import annotations

import csv
import io
import json
import os
import sys
import tempfile

import click
import numpy as np

from .families import FamilySpec, InadmissibleParameters, Kind, make_family
from .numerics import Grid, default_grid, verify_spectrum
from .pct import BEN_DANIEL_DUKE, AmbiguityParams
from .qes import qes_solve
from .susy import make_partner


def _fmt(v) -> str:
    return format(float(v), ".17g")


def _write(text: str, output: str | None):
    """Write to stdout or atomically to ``output`` (temp file + rename)."""
    if output is None:
        click.echo(text, nl=not text.endswith("\n"))
        return
    folder = os.path.dirname(os.path.abspath(output))
    fd, tmp = tempfile.mkstemp(dir=folder, prefix=".pdem-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, output)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([v if isinstance(v, str) else _fmt(v) for v in row])
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def family_options(f):
    opts = [
        click.option("--family", type=click.Choice([k.value for k in Kind]), help="Family kind."),
        click.option("--spec", "spec_path", type=click.Path(exists=True, dir_okay=False),
                     help="Family JSON file; wins over flags."),
        click.option("--q", type=float),
        click.option("--a", type=float),
        click.option("--b", type=float),
        click.option("--xi", type=float),
        click.option("--k", type=int),
        click.option("--v0", type=float),
    ]
    for opt in reversed(opts):
        f = opt(f)
    return f


def output_options(f):
    f = click.option("--output", "-o", type=click.Path(dir_okay=False), help="Write here instead of stdout.")(f)
    f = click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json", show_default=True)(f)
    return f


def grid_options(f):
    f = click.option("--n-points", type=int, help="Grid points.")(f)
    f = click.option("--x-max", type=float)(f)
    f = click.option("--x-min", type=float)(f)
    return f


def resolve_spec(family, spec_path, **flags) -> FamilySpec:
    """FamilySpec from --spec JSON or from flags; JSON wins on conflict."""
    given = {k: v for k, v in flags.items() if v is not None}
    try:
        if spec_path is not None:
            with open(spec_path) as fh:
                data = json.load(fh)
            if not isinstance(data, dict):
                raise ValueError("family spec JSON must be an object")
            if family is not None and family != data.get("family"):
                click.echo(f"warning: --family {family} ignored, spec file says {data.get('family')}", err=True)
            for key, val in given.items():
                if key in data and float(data[key]) != float(val):
                    click.echo(f"warning: --{key} {val} ignored, spec file says {data[key]}", err=True)
            return FamilySpec.from_dict(data)
        if family is None:
            raise click.UsageError("give --family or --spec")
        kind = Kind(family)
        extra = sorted(set(given) - set(FamilySpec._KEYS[kind]))
        if extra:
            raise ValueError(f"unknown field(s) for family {kind.value!r}: {', '.join(extra)}")
        return FamilySpec.from_dict({"family": family, **given})
    except (ValueError, TypeError, json.JSONDecodeError) as exc:
        raise click.UsageError(str(exc)) from None


def build(spec: FamilySpec):
    try:
        return make_family(spec)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from None


def sample_points(fam, xs, x_min, x_max, n_points, default_n=201):
    if xs:
        return np.array(xs, dtype=float)
    lo, hi = fam.default_grid_bounds()
    return np.linspace(lo if x_min is None else x_min, hi if x_max is None else x_max, n_points or default_n)


def _levels(fam, levels):
    if levels is None:
        return fam.n_levels if fam.n_levels is not None else 4
    return levels


@click.group()
@click.version_option(package_name="artifact")
def cli():
    """Solvable position-dependent-mass potentials and their verification."""


@cli.command("list")
@output_options
def list_cmd(fmt, output):
    """Known families, their parameters and admissible ranges."""
    rows = [
        ("jacobi_es", "q,a,b,v0", "sech^2(qx)", "a, b > -1/2"),
        ("laguerre_es", "q,a,v0", "exp(-qx)", "a > -1/2"),
        ("qes", "q,a,xi,k,v0", "exp(-qx)", "xi > 0, k >= 1, a < -2k + 3/2"),
    ]
    header = ("family", "parameters", "mass", "admissible")
    if fmt == "csv":
        _write(_csv(header, rows), output)
    else:
        _write(_json([dict(zip(header, r)) for r in rows]), output)


@cli.command("eval")
@family_options
@grid_options
@output_options
@click.option("--x", "xs", type=float, multiple=True, help="Sample point (repeatable).")
@click.option("--levels", type=int, default=1, show_default=True, help="Number of psi_n columns.")
@click.option("--alpha", type=float, default=BEN_DANIEL_DUKE.alpha, show_default=True)
@click.option("--beta", type=float, default=BEN_DANIEL_DUKE.beta, show_default=True)
def eval_cmd(family, spec_path, fmt, output, xs, levels, alpha, beta, x_min, x_max, n_points, **params):
    """Table of x, M, V_eff, V and normalized psi_n."""
    fam = build(resolve_spec(family, spec_path, **params))
    if fam.n_levels is not None and levels > fam.n_levels:
        raise click.UsageError(f"level outside QES window: {fam.n_levels} levels known")
    x = sample_points(fam, xs, x_min, x_max, n_points)
    amb = AmbiguityParams(alpha, beta)
    cols = {
        "x": x,
        "mass": fam.mass.value(x),
        "veff": fam.veff(x),
        "v": fam.initial_potential(amb, x),
    }
    for n in range(levels):
        cols[f"psi{n}"] = fam.level(n).normalized(x)
    if fmt == "csv":
        _write(_csv(list(cols), zip(*cols.values())), output)
    else:
        _write(_json({
            "family": fam.spec.to_dict(),
            "ordering": {"alpha": amb.alpha, "beta": amb.beta, "gamma": amb.gamma},
            "columns": {k: [float(v) for v in col] for k, col in cols.items()},
        }), output)


@cli.command()
@family_options
@output_options
@click.option("--levels", type=int, help="Number of levels (default 4, or all known QES levels).")
def spectrum(family, spec_path, fmt, output, levels, **params):
    """Closed-form energies E_n."""
    fam = build(resolve_spec(family, spec_path, **params))
    count = _levels(fam, levels)
    try:
        energies = [fam.energy(n) for n in range(count)]
    except ValueError as exc:
        raise click.UsageError(str(exc)) from None
    if fmt == "csv":
        _write(_csv(("n", "energy"), [(str(n), e) for n, e in enumerate(energies)]), output)
    else:
        _write(_json({"family": fam.spec.to_dict(), "levels": [{"n": n, "energy": e} for n, e in enumerate(energies)]}),
               output)


@cli.command("qes")
@click.option("--k", type=int, required=True)
@click.option("--a", type=float, required=True)
@click.option("--xi", type=float, required=True)
@output_options
def qes_cmd(k, a, xi, fmt, output):
    """Eigenvalues c and polynomial coefficients of the QES ansatz."""
    try:
        sol = qes_solve(k, a, xi)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from None
    if fmt == "csv":
        rows = [(str(n), lvl.c, " ".join(_fmt(c) for c in lvl.coeffs)) for n, lvl in enumerate(sol.levels)]
        _write(_csv(("n", "c", "coeffs"), rows), output)
    else:
        _write(_json(sol.to_dict()), output)


@cli.command()
@family_options
@grid_options
@output_options
@click.option("--x", "xs", type=float, multiple=True, help="Sample point (repeatable).")
@click.option("--closed-form", is_flag=True, help="Require the closed-form partner column.")
def partner(family, spec_path, fmt, output, xs, closed_form, x_min, x_max, n_points, **params):
    """Supersymmetric partner: V1 table, known levels, shifted parameters."""
    fam = build(resolve_spec(family, spec_path, **params))
    p = make_partner(fam)
    if closed_form and not p.has_closed_form:
        raise click.UsageError("no closed form in paper for QES k >= 3; use the generic construction")
    x = sample_points(fam, xs, x_min, x_max, n_points)
    cols = {"x": x, "v1_generic": p.veff(x)}
    if p.has_closed_form:
        cols["v1_closed"] = p.veff_closed(x)
    n_known = p.n_levels if p.n_levels is not None else 4
    levels = [{"n": n, "energy": p.energy(n), "source_level": n + 1} for n in range(n_known)]
    if fmt == "csv":
        _write(_csv(list(cols), zip(*cols.values())), output)
        return
    report = {
        "source": fam.spec.to_dict(),
        "tag": p.tag.value,
        "known_levels": levels,
        "table": {k: [float(v) for v in col] for k, col in cols.items()},
    }
    if p.shifted is not None:
        report["shifted"] = p.shifted.to_dict()
    _write(_json(report), output)


@cli.command()
@family_options
@grid_options
@output_options
@click.option("--levels", type=int, help="Number of levels (default 4, or all known QES levels).")
@click.option("--backend", type=click.Choice(["cython", "python"]), help="Kernel backend.")
def verify(family, spec_path, fmt, output, levels, backend, x_min, x_max, n_points, **params):
    """Closed-form spectrum against the finite-difference oracle; exit 1 on failure."""
    spec = resolve_spec(family, spec_path, **params)
    try:
        fam = make_family(spec)
    except InadmissibleParameters as exc:
        click.echo(f"verification failed: {exc}", err=True)
        sys.exit(1)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from None
    count = _levels(fam, levels)
    grid = default_grid(fam)
    if x_min is not None or x_max is not None or n_points is not None:
        grid = Grid(grid.x_min if x_min is None else x_min, grid.x_max if x_max is None else x_max,
                    n_points or grid.n_points)
    try:
        report = verify_spectrum(fam, count, grid, backend=backend)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from None
    if fmt == "csv":
        rows = [
            (str(n), e, num, err, kind, str(nd), str(bc).lower())
            for n, (e, num, err, kind, nd, bc) in enumerate(zip(
                report.analytic, report.numeric, report.rel_err, report.error_kind, report.nodes, report.boundary_ok))
        ]
        _write(_csv(("n", "analytic", "numeric", "error", "error_kind", "nodes", "boundary_ok"), rows), output)
    else:
        _write(_json({"family": spec.to_dict(), **report.to_dict()}), output)
    if not report.passed:
        for line in report.failures:
            click.echo(f"FAIL {line}", err=True)
        sys.exit(1)


def main():
    cli(prog_name="pdem-spectra")


if __name__ == "__main__":
    main()
