#!/usr/bin/env python3
"""sullivanloops: exact string topology on Sullivan models of free loop spaces.

Entry point with Click CLI handling. Every command has a plain ``cmd_*``
counterpart that takes a Session and returns a CommandResult.
"""

from __future__ import annotations

import logging
import sys
from collections.abc import Callable

import click
from rich.console import Console
from rich.logging import RichHandler
from rich.markup import escape

from sullivanloops.algebra import validate_d_squared, verify_chain_map
from sullivanloops.cohomology import betti_numbers, verify_quasi_iso
from sullivanloops.config import resolve_run_config
from sullivanloops.errors import ConstructionError, SullivanError
from sullivanloops.loops import SeriesConvention, verify_word_length
from sullivanloops.modelfile import load_model
from sullivanloops.output import (
    CommandResult,
    cohomology_document,
    cohomology_table_text,
    format_coordinates,
    format_tensor,
    projection_document,
    render_table,
    reports_table,
    save_results,
)
from sullivanloops.reports import CheckReport
from sullivanloops.topology import (
    coproduct_sweep,
    euler_characteristic,
    euler_class_delta_in,
    symmetry_signs,
    verify_anticommutation,
    verify_hodge_respect,
    verify_image_inclusion,
    verify_proposition2,
    verify_zero_word_length,
)
from sullivanloops.workspace import Session

console = Console(highlight=False, soft_wrap=True)
err_console = Console(stderr=True)


def diagonal_report(session: Session) -> CheckReport:
    """μ(e_Δ) = χ(M)·ω with χ taken from the Betti numbers."""
    engine = session.engine
    chi = euler_characteristic(session.base_table, session.dimension)
    report = CheckReport(name="μ(e_Δ) = χ(M)·ω", checked_degree=session.dimension, checked=1)
    product = session.bundle.multiplication.apply(engine.diagonal)
    expected = session.fundamental.scale(chi)
    if product != expected:
        report.record("e_Δ", f"μ(e_Δ) = {product}, expected {expected}")
    return report


def cmd_validate(session: Session) -> CommandResult:
    """Run every verification suite; exit code 1 if any fails."""
    N = session.max_degree
    try:
        bundle = session.bundle
    except ConstructionError as exc:
        if exc.report is None:
            raise
        return _reports_result(session, "validate", [exc.report])

    reports = [validate_d_squared(A, N) for A in bundle.algebras]
    reports += [
        verify_word_length(A, N) for A in (bundle.loop, bundle.fiber_product, bundle.loop_square)
    ]
    reports += [verify_chain_map(phi, N) for phi in bundle.morphisms]
    reports.append(verify_quasi_iso(bundle.rho, N, session.mprime_table, session.loop_table))
    reports.append(verify_anticommutation(session.engine, N))
    reports.append(verify_proposition2(session.engine, N))
    reports.append(diagonal_report(session))
    reports.append(
        verify_image_inclusion(bundle, N, session.mprime_table, session.fiber_table)
    )
    reports.append(verify_zero_word_length(bundle, session.base_table, session.bigrading))
    return _reports_result(session, "validate", reports)


def _reports_result(session: Session, command: str, reports: list[CheckReport]) -> CommandResult:
    passed = all(r.passed for r in reports)
    document = {
        "model": session.name,
        "max_degree": session.max_degree,
        "passed": passed,
        "reports": [r.to_dict() for r in reports],
    }
    return CommandResult(
        command=command,
        model=session.name,
        document=document,
        tables=[reports_table(f"{command} {session.name} (N = {session.max_degree})", reports)],
        exit_code=0 if passed else 1,
    )


def cmd_cohomology(session: Session) -> CommandResult:
    """Labeled cohomology bases of the base, loop, M'_LM and fiber-product models."""
    lengths = session.bigrading.word_lengths
    tables = {
        "base": (session.base_table, None),
        "loop": (session.loop_table, lengths),
        "mprime": (session.mprime_table, None),
        "fiber_product": (session.fiber_table, None),
    }
    document = {
        "model": session.name,
        "max_degree": session.max_degree,
        "tables": {key: cohomology_document(t, wl) for key, (t, wl) in tables.items()},
        "betti": {key: betti_numbers(t) for key, (t, _) in tables.items()},
    }
    return CommandResult(
        command="cohomology",
        model=session.name,
        document=document,
        tables=[cohomology_table_text(t, wl) for t, wl in tables.values()],
    )


def _word_length_of(session: Session, degree: int, coordinates) -> int | None:
    lengths = {
        session.bigrading.word_lengths[(degree, i)] for i, c in enumerate(coordinates) if c
    }
    return lengths.pop() if len(lengths) == 1 else None


def cmd_coproduct(
    session: Session,
    label_u: str | None = None,
    label_v: str | None = None,
    all_pairs: bool = False,
) -> CommandResult:
    """Φ^∨ on one pair of basis classes, or on every pair within range."""
    engine = session.engine
    table = session.loop_table
    if all_pairs:
        entries = coproduct_sweep(engine)
        record = symmetry_signs(engine, entries)
        rows = []
        values = []
        for entry in entries:
            text = table.format(entry.value)
            values.append(
                {
                    "u": entry.u.label,
                    "v": entry.v.label,
                    "degree": entry.value.degree,
                    "coordinates": format_coordinates(entry.value.coordinates),
                    "class": text,
                }
            )
            rows.append((f"[{entry.u.label}]", f"[{entry.v.label}]", entry.value.degree, text))
        document = {
            "model": session.name,
            "max_degree": session.max_degree,
            "pairs": values,
            "symmetry": record.to_dict(),
        }
        symmetry_rows = [(key, sign) for key, sign in record.to_dict().items()]
        return CommandResult(
            command="coproduct",
            model=session.name,
            document=document,
            tables=[
                render_table(f"Φ^∨ on H*(L{session.name})", ("u", "v", "degree", "Φ^∨(u⊗v)"), rows),
                render_table("graded symmetry sign", ("p,q", "ε"), symmetry_rows),
            ],
        )

    if label_u is None or label_v is None:
        raise click.UsageError("give two class labels or --pairs all")
    value = engine.value_of_labels(label_u, label_v)
    representative = table.element(value)
    word_length = _word_length_of(session, value.degree, value.coordinates)
    document = {
        "model": session.name,
        "u": label_u,
        "v": label_v,
        **projection_document(table, value),
        "representative": str(representative),
        "word_length": word_length,
    }
    rows = [
        ("Φ^∨", f"[{label_u}] ⊗ [{label_v}]"),
        ("degree", value.degree),
        ("class", table.format(value)),
        ("coordinates", ", ".join(format_coordinates(value.coordinates)) or "-"),
        ("representative", str(representative)),
        ("word length", "-" if word_length is None else word_length),
    ]
    return CommandResult(
        command="coproduct",
        model=session.name,
        document=document,
        tables=[render_table(f"Φ^∨ on H*(L{session.name})", ("", "value"), rows)],
    )


def cmd_euler(session: Session) -> CommandResult:
    """Dual basis, diagonal class, χ(M) and the Euler class of δ_in."""
    engine = session.engine
    dual = session.dual
    chi = euler_characteristic(session.base_table, session.dimension)
    product = session.bundle.multiplication.apply(engine.diagonal)
    e_in = euler_class_delta_in(engine)
    document = {
        "model": session.name,
        "dimension": session.dimension,
        "fundamental": str(session.fundamental),
        "dual_basis": [
            {"class": cls.label, "degree": cls.degree, "dual": str(hat)}
            for cls, hat in zip(dual.classes, dual.duals)
        ],
        "diagonal_class": format_tensor(engine.diagonal),
        "euler_characteristic": chi,
        "diagonal_pullback": str(product),
        "euler_class_delta_in": projection_document(session.loop_table, e_in),
    }
    rows = [
        ("fundamental class", str(session.fundamental)),
        ("e_Δ", format_tensor(engine.diagonal)),
        ("χ(M)", chi),
        ("μ(e_Δ)", str(product)),
        ("e_δin", session.loop_table.format(e_in)),
    ]
    dual_rows = [(f"[{cls.label}]", cls.degree, str(hat)) for cls, hat in zip(dual.classes, dual.duals)]
    return CommandResult(
        command="euler",
        model=session.name,
        document=document,
        tables=[
            render_table(f"Euler classes of {session.name}", ("", "value"), rows),
            render_table("Poincaré dual basis", ("class", "degree", "dual"), dual_rows),
        ],
    )


def cmd_hodge(session: Session) -> CommandResult:
    """Word-length split of H*(LM) and the checks that Φ^∨ respects it."""
    bigrading = session.bigrading
    reports = [
        verify_zero_word_length(session.bundle, session.base_table, bigrading),
        verify_hodge_respect(session.engine, bigrading, session.max_degree),
    ]
    rows = []
    for n in range(session.loop_table.top + 1):
        split = bigrading.split(n)
        rows.append(
            (
                n,
                session.loop_table.dimension(n),
                ", ".join(f"H_({i}): {count}" for i, count in split.items()) or "-",
            )
        )
    passed = all(r.passed for r in reports)
    document = {
        "model": session.name,
        "max_degree": session.max_degree,
        "split": bigrading.to_dict(),
        "passed": passed,
        "reports": [r.to_dict() for r in reports],
    }
    return CommandResult(
        command="hodge",
        model=session.name,
        document=document,
        tables=[
            render_table(f"word-length split of H*(L{session.name})", ("degree", "dim", "split"), rows),
            reports_table("Hodge checks", reports),
        ],
        exit_code=0 if passed else 1,
    )


def _setup_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(message)s",
        handlers=[RichHandler(console=err_console, show_time=False, show_path=False)],
        force=True,
    )


def _emit(result: CommandResult, output_format: str) -> None:
    if output_format == "structured":
        console.out(result.json_text, highlight=False, end="")
    else:
        console.out(result.table_text, highlight=False, end="")


def _run(
    command: Callable[[Session], CommandResult],
    model: str,
    max_degree: int | None,
    output_format: str | None,
    negate_orientation: bool,
    output_dir: str | None,
    series: str,
) -> None:
    try:
        description = load_model(model)
        config = resolve_run_config(
            model,
            description.dimension,
            max_degree=max_degree,
            output_format=output_format,
            negate_orientation=negate_orientation,
            output_dir=output_dir,
        )
        session = Session(description, config, SeriesConvention(series))
        result = command(session)
        _emit(result, config.output_format)
        if config.output_dir is not None:
            json_path, text_path = save_results(config.output_dir, result)
            err_console.print(f"[dim]Wrote[/dim] {escape(str(json_path))}, {escape(str(text_path))}")
    except SullivanError as exc:
        console.print(f"[bold red]Error:[/bold red] {escape(str(exc))}")
        sys.exit(exc.exit_code)
    if result.exit_code:
        sys.exit(result.exit_code)


def _common_options(func):
    """Shared CLI options across commands."""
    func = click.option(
        "--series",
        type=click.Choice([c.value for c in SeriesConvention]),
        default=SeriesConvention.PATH_HALVES.value,
        help="Evaluation of the path-space series in M'_LM",
    )(func)
    func = click.option("--output-dir", "-o", default=None, help="Also write <model>_<command>.json/.txt here")(func)
    func = click.option("--negate-orientation", is_flag=True, help="Use -ω as the fundamental class")(func)
    func = click.option(
        "--format", "output_format", type=click.Choice(["table", "structured"]), default=None,
        help="Output format (default from the configuration file)",
    )(func)
    func = click.option("--max-degree", "-N", type=int, default=None, help="Top validated degree N (default 4m + 6)")(func)
    func = click.argument("model", type=click.Path(exists=True, dir_okay=False))(func)
    return func


@click.group()
@click.option("--verbose", "-v", is_flag=True, help="Log construction and verification progress")
def cli(verbose: bool) -> None:
    """sullivanloops: exact string topology on Sullivan models of free loop spaces."""
    _setup_logging(verbose)


@cli.command()
@_common_options
def validate(model, max_degree, output_format, negate_orientation, output_dir, series):
    """Check d² = 0, chain maps, ρ, the shriek map and the diagonal class."""
    _run(cmd_validate, model, max_degree, output_format, negate_orientation, output_dir, series)


@cli.command()
@_common_options
def cohomology(model, max_degree, output_format, negate_orientation, output_dir, series):
    """Cohomology of the base, loop, two-copy and fiber-product models."""
    _run(cmd_cohomology, model, max_degree, output_format, negate_orientation, output_dir, series)


@cli.command()
@_common_options
@click.argument("labels", nargs=-1)
@click.option("--pairs", type=click.Choice(["all"]), default=None, help="Evaluate every basis pair")
def coproduct(model, max_degree, output_format, negate_orientation, output_dir, series, labels, pairs):
    """Dual loop coproduct of two classes given by their labels."""
    if pairs is None and len(labels) != 2:
        raise click.UsageError("give exactly two class labels, or --pairs all")
    if pairs is not None and labels:
        raise click.UsageError("class labels cannot be combined with --pairs all")

    def command(session: Session) -> CommandResult:
        if pairs == "all":
            return cmd_coproduct(session, all_pairs=True)
        return cmd_coproduct(session, labels[0], labels[1])

    _run(command, model, max_degree, output_format, negate_orientation, output_dir, series)


@cli.command()
@_common_options
def hodge(model, max_degree, output_format, negate_orientation, output_dir, series):
    """Word-length decomposition of H*(LM) and its compatibility with Φ^∨."""
    _run(cmd_hodge, model, max_degree, output_format, negate_orientation, output_dir, series)


@cli.command()
@_common_options
def euler(model, max_degree, output_format, negate_orientation, output_dir, series):
    """Diagonal class, Euler characteristic and the Euler class of δ_in."""
    _run(cmd_euler, model, max_degree, output_format, negate_orientation, output_dir, series)


if __name__ == "__main__":
    cli()
