"""Command line interface: instance generation, orbital integrals on both
sides, verification reports, maximal-order reduction, and sweep tables.

Exit codes: 0 all verdicts pass, 1 some verdict fails, 2 error or guard hit.
"""

from __future__ import annotations

import json
import sys

import click

from .closed import verify_afl, verify_fl
from .errors import OrbflError
from .instances import REGIMES, dump_instance, generate, load_instance
from .lattice import ENUMERATION_GUARD
from .orbital import HeckeFunction, orbital_analytic, orbital_geometric
from .reduction import reduced_instance_data, verify_orbit_reduction
from .series import DEFAULT_PREC

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_ERROR = 2


def _read_instance(path):
    with open(path) as fh:
        return load_instance(fh.read())


def _emit_report(report, fmt):
    if fmt == "json":
        click.echo(json.dumps(report.to_json(), indent=2))
    else:
        for line in report.lines():
            click.echo(line)


def _exit_for(report):
    sys.exit(EXIT_PASS if report.passed else EXIT_FAIL)


@click.group()
def main():
    """Exact-arithmetic orbital integral computations over F_q((t))."""


def _common(fn):
    fn = click.option("--prec", type=int, default=DEFAULT_PREC,
                      show_default=True, help="series working precision")(fn)
    fn = click.option("--guard", type=int, default=ENUMERATION_GUARD,
                      show_default=True,
                      help="max quotient length for lattice enumeration")(fn)
    return fn


@main.command()
@click.option("--q", type=int, required=True, help="residue field size (odd prime)")
@click.option("--regime", type=click.Choice(REGIMES), required=True)
@click.option("--l-kind", "l_kind",
              type=click.Choice(["unramified", "ramified"]), required=True)
@click.option("--r", type=int, default=0, show_default=True,
              help="conductor of w")
@click.option("--v", type=int, default=None, help="v_L(z^2) (uniformizer regime)")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--prec", type=int, default=DEFAULT_PREC, show_default=True)
@click.option("-o", "--output", type=click.Path(dir_okay=False), default=None,
              help="write the instance JSON to a file instead of stdout")
def gen(q, regime, l_kind, r, v, seed, prec, output):
    """Generate a deterministic orbit instance."""
    try:
        inst = generate(q, regime, l_kind, r=r, v=v, seed=seed, prec=prec)
    except OrbflError as e:
        click.echo("error: %s" % e, err=True)
        sys.exit(EXIT_ERROR)
    text = dump_instance(inst)
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        click.echo(text)


@main.command()
@click.argument("instance", type=click.Path(exists=True, dir_okay=False))
@click.option("--hecke", default=None,
              help="Hecke word n,m1,m2,... for R_n * T_m1 * ... (default: unit)")
@_common
def analytic(instance, hecke, prec, guard):
    """Analytic-side orbital polynomial in u = -q^s."""
    try:
        inst = _read_instance(instance)
        f = None
        if hecke:
            parts = [int(x) for x in hecke.split(",")]
            f = HeckeFunction(parts[0], tuple(parts[1:]))
        poly = orbital_analytic(inst, f=f, guard=guard)
    except OrbflError as e:
        click.echo("error: %s" % e, err=True)
        sys.exit(EXIT_ERROR)
    out = poly.to_json()
    out["value_at_s0"] = poly.value_at_s0()
    out["afl_derivative"] = poly.afl_derivative()
    click.echo(json.dumps(out, indent=2))


@main.command()
@click.argument("instance", type=click.Path(exists=True, dir_okay=False))
@_common
def geometric(instance, prec, guard):
    """Geometric-side stable lattice orbit count."""
    try:
        inst = _read_instance(instance)
        count = orbital_geometric(inst, guard=guard)
    except OrbflError as e:
        click.echo("error: %s" % e, err=True)
        sys.exit(EXIT_ERROR)
    click.echo(json.dumps({"geometric_count": count}))


@main.command("verify-fl")
@click.argument("instance", type=click.Path(exists=True, dir_okay=False))
@click.option("--format", "fmt", type=click.Choice(["json", "tsv"]),
              default="tsv", show_default=True)
@_common
def verify_fl_cmd(instance, fmt, prec, guard):
    """Verify the matching identity on one instance."""
    try:
        inst = _read_instance(instance)
        report = verify_fl(inst, guard=guard)
    except OrbflError as e:
        click.echo("error: %s" % e, err=True)
        sys.exit(EXIT_ERROR)
    _emit_report(report, fmt)
    _exit_for(report)


@main.command("verify-afl")
@click.argument("instance", type=click.Path(exists=True, dir_okay=False))
@click.option("--format", "fmt", type=click.Choice(["json", "tsv"]),
              default="tsv", show_default=True)
@_common
def verify_afl_cmd(instance, fmt, prec, guard):
    """Verify the derivative identity on an odd-valuation instance."""
    try:
        inst = _read_instance(instance)
        report = verify_afl(inst, guard=guard)
    except OrbflError as e:
        click.echo("error: %s" % e, err=True)
        sys.exit(EXIT_ERROR)
    _emit_report(report, fmt)
    _exit_for(report)


@main.command()
@click.argument("instance", type=click.Path(exists=True, dir_okay=False))
@_common
def reduce(instance, prec, guard):
    """Emit the rank-2-over-L reduced datum of a conductor-0 instance."""
    try:
        inst = _read_instance(instance)
        data = reduced_instance_data(inst)
    except OrbflError as e:
        click.echo("error: %s" % e, err=True)
        sys.exit(EXIT_ERROR)
    click.echo(json.dumps(data, indent=2))


@main.command("verify-reduction")
@click.argument("instance", type=click.Path(exists=True, dir_okay=False))
@click.option("--format", "fmt", type=click.Choice(["json", "tsv"]),
              default="tsv", show_default=True)
@_common
def verify_reduction_cmd(instance, fmt, prec, guard):
    """Compare the rank-4 and rank-2-over-L orbital computations."""
    try:
        inst = _read_instance(instance)
        report = verify_orbit_reduction(inst, guard=guard)
    except OrbflError as e:
        click.echo("error: %s" % e, err=True)
        sys.exit(EXIT_ERROR)
    if fmt == "json":
        click.echo(json.dumps(report.to_json(), indent=2))
    else:
        for line in report.lines():
            click.echo(line)
    sys.exit(EXIT_PASS if report.passed else EXIT_FAIL)


@main.command()
@click.option("--q", "qs", type=int, multiple=True, default=(3,),
              show_default=True, help="residue field sizes (repeatable)")
@click.option("--regimes", default="small_w,uniformizer_w,unit_w",
              show_default=True)
@click.option("--r-max", type=int, default=2, show_default=True)
@click.option("--v-max", type=int, default=3, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@_common
def table(qs, regimes, r_max, v_max, seed, prec, guard):
    """Sweep instances and tabulate both sides with verdicts (TSV)."""
    wanted = [x.strip() for x in regimes.split(",") if x.strip()]
    rows = []
    any_fail = False
    any_error = False
    header = ("q", "regime", "L_kind", "r", "v", "u_coeffs",
              "value_at_s0", "geometric", "verdict")
    specs = []
    for q in qs:
        for regime in wanted:
            if regime == "small_w":
                for l_kind in ("unramified", "ramified"):
                    for r in range(r_max + 1):
                        specs.append((q, regime, l_kind, r, None))
            elif regime == "uniformizer_w":
                for v in range(1, v_max + 1, 2):
                    specs.append((q, regime, "ramified", 0, v))
            elif regime == "unit_w":
                for l_kind in ("unramified", "ramified"):
                    specs.append((q, regime, l_kind, 0, None))
    for q, regime, l_kind, r, v in specs:
        try:
            inst = generate(q, regime, l_kind, r=r, v=v, seed=seed, prec=prec)
            report = verify_fl(inst, guard=guard)
            verdict = "PASS" if report.passed else "FAIL"
            any_fail = any_fail or not report.passed
            rows.append((q, regime, l_kind, r, inst.v,
                         list(report.analytic.coeffs), report.value_at_s0,
                         report.geometric, verdict))
        except OrbflError as e:
            any_error = True
            rows.append((q, regime, l_kind, r, v, None, None, None,
                         "SKIPPED(%s)" % type(e).__name__))
    click.echo("\t".join(header))
    for row in rows:
        click.echo("\t".join(json.dumps(x) if isinstance(x, list) else str(x)
                             for x in row))
    sys.exit(EXIT_ERROR if any_error else EXIT_FAIL if any_fail else EXIT_PASS)


if __name__ == "__main__":
    main()
