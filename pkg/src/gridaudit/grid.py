"""Workbook data model and ingestion.

A sheet is a sparse, immutable grid of cells.  Two textual workbook
formats are understood:

* CSV (RFC 4180): the field at row r, position c becomes cell (r, c).
* JSON: ``{"name": str, "cells": {"<A1>": str}}``, each value interpreted
  exactly like a CSV field.  A ``{"sheets": [...]}`` wrapper is accepted
  but must contain exactly one sheet.

A field starting with ``=`` is a formula (not parsed here), a field that
reads as a finite decimal number is a number, any other non-empty field is
text, and empty fields are simply absent from the sheet.
"""

from __future__ import annotations

import csv
import enum
import io
import json
import re
from dataclasses import dataclass
from typing import Iterable, NamedTuple

from gridaudit import _kernels as kernels
from gridaudit.errors import MalformedAddress, MalformedWorkbook, MultipleSheets

MAX_ROWS = kernels.MAX_ROWS
MAX_COLS = kernels.MAX_COLS

_NUMBER_RE = re.compile(r"[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?\Z")


class CellAddr(NamedTuple):
    """1-based grid coordinates; tuple order gives row-major sorting."""

    row: int
    col: int

    def a1(self) -> str:
        return kernels.rowcol_to_a1(self.row, self.col)

    def __repr__(self) -> str:
        return f"CellAddr({self.a1()})"


def parse_a1(text: str) -> CellAddr:
    """Parse an A1-style address, case-insensitively.

    Raises MalformedAddress unless the text matches ``[A-Z]+[1-9][0-9]*``
    within the grid limits.  Column letters decode bijectively:
    A=1, Z=26, AA=27.
    """
    try:
        row, col = kernels.a1_to_rowcol(text)
    except ValueError as exc:
        raise MalformedAddress(f"bad address {text!r}: {exc.args[0]}") from None
    return CellAddr(row, col)


class CellKind(enum.Enum):
    EMPTY = "empty"
    NUMBER = "number"
    TEXT = "text"
    FORMULA = "formula"


@dataclass(frozen=True)
class CellContent:
    """Payload of a non-empty cell.

    ``value`` is a float for numbers, the raw text for text cells and the
    full source (including the leading ``=``) for formulas.
    """

    kind: CellKind
    value: float | str

    def __post_init__(self):
        if self.kind is CellKind.FORMULA and not str(self.value).startswith("="):
            raise ValueError("formula source must start with '='")
        if self.kind is CellKind.EMPTY:
            raise ValueError("empty cells carry no content")


def classify_field(field: str) -> CellContent | None:
    """Interpret one CSV/JSON field; None means the cell is empty."""
    if field == "":
        return None
    if field.startswith("="):
        return CellContent(CellKind.FORMULA, field)
    if _NUMBER_RE.match(field):
        return CellContent(CellKind.NUMBER, float(field))
    return CellContent(CellKind.TEXT, field)


class Sheet:
    """Immutable single sheet: name, sparse cells, extent of non-empty cells."""

    def __init__(self, name: str, cells: dict[CellAddr, CellContent]):
        self.name = name
        self.cells = dict(cells)
        rows = cols = 0
        for addr in self.cells:
            if addr.row > rows:
                rows = addr.row
            if addr.col > cols:
                cols = addr.col
        self.extent = (rows, cols)

    def get(self, addr: CellAddr) -> CellContent | None:
        return self.cells.get(addr)

    def kind(self, addr: CellAddr) -> CellKind:
        content = self.cells.get(addr)
        return content.kind if content else CellKind.EMPTY

    def is_formula(self, addr: CellAddr) -> bool:
        content = self.cells.get(addr)
        return content is not None and content.kind is CellKind.FORMULA

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Sheet)
            and self.name == other.name
            and self.cells == other.cells
        )

    def __repr__(self) -> str:
        rows, cols = self.extent
        return f"Sheet({self.name!r}, {len(self.cells)} cells, extent {rows}x{cols})"


def _check_extent(addr: CellAddr) -> CellAddr:
    if addr.row > MAX_ROWS or addr.col > MAX_COLS:
        raise MalformedWorkbook(
            f"cell {addr.row},{addr.col} exceeds the {MAX_ROWS}x{MAX_COLS} grid limit"
        )
    return addr


def _from_fields(name: str, rows: Iterable[list[str]]) -> Sheet:
    cells: dict[CellAddr, CellContent] = {}
    for r, fields in enumerate(rows, start=1):
        for c, field in enumerate(fields, start=1):
            content = classify_field(field)
            if content is not None:
                cells[_check_extent(CellAddr(r, c))] = content
    return Sheet(name, cells)


def load_workbook(source: str, format: str, name: str = "sheet") -> Sheet:
    """Load a sheet from CSV or JSON text.

    Raises MalformedWorkbook on bad input and MultipleSheets when the JSON
    wrapper holds more than one sheet.
    """
    if format == "csv":
        try:
            rows = list(csv.reader(io.StringIO(source), strict=True))
        except csv.Error as exc:
            raise MalformedWorkbook(f"bad CSV: {exc}") from None
        return _from_fields(name, rows)
    if format == "json":
        try:
            data = json.loads(source)
        except json.JSONDecodeError as exc:
            raise MalformedWorkbook(f"bad JSON: {exc}") from None
        if isinstance(data, dict) and "sheets" in data:
            sheets = data["sheets"]
            if not isinstance(sheets, list) or not sheets:
                raise MalformedWorkbook("'sheets' must be a non-empty list")
            if len(sheets) > 1:
                raise MultipleSheets(f"workbook has {len(sheets)} sheets; analysis is single-sheet")
            data = sheets[0]
        if not isinstance(data, dict) or "cells" not in data:
            raise MalformedWorkbook("JSON workbook needs a 'cells' object")
        cell_map = data["cells"]
        if not isinstance(cell_map, dict):
            raise MalformedWorkbook("'cells' must map A1 addresses to field strings")
        cells: dict[CellAddr, CellContent] = {}
        for key, field in cell_map.items():
            try:
                addr = parse_a1(key)
            except MalformedAddress as exc:
                raise MalformedWorkbook(str(exc)) from None
            if not isinstance(field, str):
                raise MalformedWorkbook(f"cell {key}: field must be a string")
            content = classify_field(field)
            if content is not None:
                cells[_check_extent(addr)] = content
        return Sheet(str(data.get("name", name)), cells)
    raise MalformedWorkbook(f"unknown workbook format {format!r}")


def formula_cells(sheet: Sheet) -> list[CellAddr]:
    """All formula cells in row-major order (row, then column ascending)."""
    return sorted(
        addr for addr, content in sheet.cells.items() if content.kind is CellKind.FORMULA
    )


def render_field(content: CellContent | None) -> str:
    """Inverse of classify_field, up to number canonicalization."""
    if content is None:
        return ""
    if content.kind is CellKind.NUMBER:
        value = content.value
        if isinstance(value, float) and value.is_integer() and abs(value) < 1e16:
            return str(int(value))
        return repr(value)
    return str(content.value)


def dump_csv(sheet: Sheet) -> str:
    """Serialize to canonical CSV (extent-sized, RFC 4180, CRLF)."""
    rows, cols = sheet.extent
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\r\n")
    for r in range(1, rows + 1):
        writer.writerow(
            [render_field(sheet.get(CellAddr(r, c))) for c in range(1, cols + 1)]
        )
    return out.getvalue()
