"""Result documents, plain-text tables and result-file writing for sullivanloops."""

from __future__ import annotations

import asyncio
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

import aiofiles
from rich import box
from rich.console import Console
from rich.table import Table
from rich.text import Text

from sullivanloops.algebra import Element, Origin
from sullivanloops.cohomology import CohomologyTable, Projection
from sullivanloops.reports import CheckReport


@dataclass
class CommandResult:
    """What a command produced: a structured document, its table rendering and an exit code."""

    command: str
    model: str
    document: dict[str, Any]
    tables: list[str] = field(default_factory=list)
    exit_code: int = 0

    @property
    def table_text(self) -> str:
        return "\n".join(self.tables)

    @property
    def json_text(self) -> str:
        return render_json(self.document)


def _default(value: Any) -> Any:
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, Element):
        return str(value)
    if isinstance(value, Path):
        return str(value)
    raise TypeError(f"cannot serialise {type(value).__name__}")


def render_json(document: dict[str, Any]) -> str:
    """Deterministic JSON text: sorted keys, rationals as "p/q" strings."""
    return json.dumps(document, indent=2, sort_keys=True, ensure_ascii=False, default=_default) + "\n"


def render_table(title: str, columns: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    """Render rows as an aligned plain-text table."""
    table = Table(title=title, box=box.ASCII, title_justify="left")
    for column in columns:
        table.add_column(column)
    for row in rows:
        table.add_row(*(Text(str(cell)) for cell in row))
    buffer = io.StringIO()
    console = Console(file=buffer, width=200, color_system=None, force_terminal=False, highlight=False)
    console.print(table)
    return buffer.getvalue()


def format_coordinates(coordinates: Sequence[Fraction]) -> list[str]:
    return [str(c) for c in coordinates]


def format_tensor(element: Element) -> str:
    """Write an element of M ⊗ M as a ⊗ b terms, copy suffixes removed."""
    if not element:
        return "0"
    ring = element.ring
    pieces: list[tuple[str, str]] = []
    for monomial in element:
        sides: dict[Origin, list[str]] = {Origin.COPY1: [], Origin.COPY2: []}
        for g, e in zip(ring.generators, monomial.exponents):
            if not e:
                continue
            name = g.name[:-1]
            sides[g.origin].append(name if e == 1 else f"{name}^{e}")
        left = "*".join(sides[Origin.COPY1]) or "1"
        right = "*".join(sides[Origin.COPY2]) or "1"
        coeff = monomial.coefficient
        magnitude = abs(coeff)
        body = f"{left}⊗{right}" if magnitude == 1 else f"{magnitude}*{left}⊗{right}"
        pieces.append(("-" if coeff < 0 else "+", body))
    text = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
    for sign, body in pieces[1:]:
        text += f" {sign} {body}"
    return text


def report_document(report: CheckReport) -> dict[str, Any]:
    return report.to_dict()


def _first_remark(report: CheckReport) -> str:
    witness = report.first_witness
    if witness is not None:
        return f"{witness.subject}: {witness.detail}"
    return report.notes[0] if report.notes else ""


def reports_table(title: str, reports: Sequence[CheckReport]) -> str:
    rows = []
    for report in reports:
        rows.append(
            (
                report.name,
                "pass" if report.passed else "FAIL",
                report.checked,
                report.checked_degree,
                _first_remark(report),
            )
        )
    return render_table(title, ("check", "status", "checked", "up to degree", "first witness or note"), rows)


def cohomology_document(
    table: CohomologyTable,
    word_lengths: dict[tuple[int, int], int] | None = None,
) -> dict[str, Any]:
    """Per-degree dimensions and labeled representatives; empty degrees are listed too."""
    degrees = []
    for n in range(table.top + 1):
        classes = []
        for cls in table.classes(n):
            entry: dict[str, Any] = {
                "label": cls.label,
                "representative": str(cls.representative),
            }
            if word_lengths is not None:
                entry["word_length"] = word_lengths[(n, cls.index)]
            classes.append(entry)
        degrees.append({"degree": n, "dimension": table.dimension(n), "classes": classes})
    return {"algebra": table.algebra.name, "top_degree": table.top, "degrees": degrees}


def cohomology_table_text(
    table: CohomologyTable,
    word_lengths: dict[tuple[int, int], int] | None = None,
) -> str:
    columns = ["degree", "dim", "classes"]
    if word_lengths is not None:
        columns.append("word lengths")
    rows = []
    for n in range(table.top + 1):
        classes = table.classes(n)
        row = [n, len(classes), ", ".join(f"[{c.label}]" for c in classes) or "-"]
        if word_lengths is not None:
            row.append(", ".join(str(word_lengths[(n, c.index)]) for c in classes) or "-")
        rows.append(row)
    return render_table(f"H*({table.algebra.name})", columns, rows)


def projection_document(table: CohomologyTable, value: Projection) -> dict[str, Any]:
    return {
        "degree": value.degree,
        "coordinates": format_coordinates(value.coordinates),
        "class": table.format(value),
    }


def output_paths(output_dir: Path, model: str, command: str) -> tuple[Path, Path]:
    """Deterministic result file names: <model>_<command>.json and .txt."""
    output_dir.mkdir(parents=True, exist_ok=True)
    prefix = f"{model}_{command}"
    return output_dir / f"{prefix}.json", output_dir / f"{prefix}.txt"


async def write_text(path: Path, text: str) -> None:
    async with aiofiles.open(path, "w", encoding="utf-8") as fh:
        await fh.write(text)


async def write_results(output_dir: Path, result: CommandResult) -> tuple[Path, Path]:
    """Write the structured document and the table text side by side."""
    json_path, text_path = output_paths(output_dir, result.model, result.command)
    await asyncio.gather(
        write_text(json_path, result.json_text),
        write_text(text_path, result.table_text),
    )
    return json_path, text_path


def save_results(output_dir: Path, result: CommandResult) -> tuple[Path, Path]:
    return asyncio.run(write_results(output_dir, result))


async def read_document(path: Path) -> dict[str, Any]:
    async with aiofiles.open(path, "r", encoding="utf-8") as fh:
        return json.loads(await fh.read())


def load_document(path: Path) -> dict[str, Any]:
    return asyncio.run(read_document(path))
