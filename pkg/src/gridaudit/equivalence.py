"""Formula equivalence at three strictness levels, and logical areas.

Formulas are compared through canonical keys built from their
origin-normalized ASTs.  Each level masks more detail than the one
before, so the partitions refine each other: cells equal at ``copy`` are
equal at ``logical``, and those at ``structural``.

* ``copy``: identical up to copy-paste translation.  Relative references
  must have the same offsets, absolute references the same coordinates,
  literals the same values.
* ``logical``: same computation pattern.  Relative offsets still count,
  but absolute coordinates and literal values are masked.
* ``structural``: same operator and function skeleton.  Every cell
  reference matches every other, every range matches every range, and
  literals match by kind only.  Function names are never masked; a
  different function is a different structure.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple

from gridaudit.errors import InvalidParams, LevelMismatch, SheetMismatch
from gridaudit.formula import (
    Ast,
    BinOp,
    FuncCall,
    NumberLit,
    RangeRef,
    Ref,
    TextLit,
    UnaryOp,
    parse_all,
)
from gridaudit.grid import CellAddr, Sheet


class EqLevel(enum.IntEnum):
    """Ordered by coarseness; lower value = stricter match."""

    COPY = 0
    LOGICAL = 1
    STRUCTURAL = 2

    @property
    def label(self) -> str:
        return self.name.lower()


_LEVEL_NAMES = {
    "copy": EqLevel.COPY,
    "logical": EqLevel.LOGICAL,
    "structural": EqLevel.STRUCTURAL,
}


def level_from_name(name: str) -> EqLevel:
    try:
        return _LEVEL_NAMES[name]
    except KeyError:
        raise InvalidParams(
            f"unknown equivalence level {name!r}; expected copy, logical or structural"
        ) from None


class EqKey(NamedTuple):
    """Level plus the canonical fingerprint; equal keys = equivalent cells."""

    level: EqLevel
    fingerprint: str


def _ref_key(ref, level: EqLevel):
    if level is EqLevel.STRUCTURAL:
        return ("ref", "_")
    col = ("A", ref.col if level is EqLevel.COPY else "_") if ref.col_abs else ("R", ref.col)
    row = ("A", ref.row if level is EqLevel.COPY else "_") if ref.row_abs else ("R", ref.row)
    return ("ref", col, row)


def eq_key(ast: Ast, level: EqLevel) -> tuple:
    """Raw comparison key (a nested tuple); the fast path for grouping."""
    if isinstance(ast, NumberLit):
        return ("n", repr(ast.value) if level is EqLevel.COPY else "_")
    if isinstance(ast, TextLit):
        return ("t", ast.value if level is EqLevel.COPY else "_")
    if isinstance(ast, Ref):
        return _ref_key(ast.ref, level)
    if isinstance(ast, RangeRef):
        if level is EqLevel.STRUCTURAL:
            return ("range", "_")
        return ("range", _ref_key(ast.start, level), _ref_key(ast.end, level))
    if isinstance(ast, FuncCall):
        return ("call", ast.name, tuple(eq_key(a, level) for a in ast.args))
    if isinstance(ast, BinOp):
        return ("op", ast.op, eq_key(ast.lhs, level), eq_key(ast.rhs, level))
    if isinstance(ast, UnaryOp):
        return ("u", ast.op, eq_key(ast.operand, level))
    raise TypeError(f"not an AST node: {ast!r}")


def fingerprint(ast: Ast, level: EqLevel) -> EqKey:
    return EqKey(level, repr(eq_key(ast, level)))


def equivalent(a: Ast, b: Ast, level: EqLevel) -> bool:
    return eq_key(a, level) == eq_key(b, level)


@dataclass(frozen=True)
class LogicalArea:
    level: EqLevel
    key: EqKey
    members: tuple[CellAddr, ...]


def logical_areas(
    sheet: Sheet,
    level: EqLevel,
    parsed: dict[CellAddr, Ast] | None = None,
) -> list[LogicalArea]:
    """Partition formula cells into equivalence areas at one level.

    Areas are ordered by their row-major first member; members are
    row-major within each area.  Pass ``parsed`` to reuse ASTs from an
    earlier parse_all call.
    """
    if parsed is None:
        parsed = parse_all(sheet)
    groups: dict[tuple, list[CellAddr]] = {}
    for addr in sorted(parsed):
        groups.setdefault(eq_key(parsed[addr], level), []).append(addr)
    return [
        LogicalArea(
            level=level,
            key=EqKey(level, repr(raw)),
            members=tuple(members),
        )
        for raw, members in sorted(groups.items(), key=lambda kv: kv[1][0])
    ]


@dataclass(frozen=True)
class DiffEntry:
    """One coarse area and the finer areas it breaks into."""

    coarse: LogicalArea
    fine: tuple[LogicalArea, ...]
    flagged: bool


@dataclass(frozen=True)
class DiffReport:
    fine_level: EqLevel
    coarse_level: EqLevel
    entries: tuple[DiffEntry, ...]

    @property
    def hot_spots(self) -> tuple[DiffEntry, ...]:
        return tuple(e for e in self.entries if e.flagged)


def compare_partitions(
    fine: list[LogicalArea], coarse: list[LogicalArea]
) -> DiffReport:
    """Explain each coarse area as a union of fine areas.

    A coarse area that splits into two or more fine areas is flagged: the
    cells look alike at the coarse level but differ at the fine one,
    which is exactly where copy errors hide.  Requires fine.level <
    coarse.level and both partitions from the same sheet.
    """
    if not fine and not coarse:
        return DiffReport(
            fine_level=EqLevel.COPY, coarse_level=EqLevel.STRUCTURAL, entries=()
        )
    if not fine or not coarse:
        raise SheetMismatch("partitions cover different cell sets")
    fine_level = fine[0].level
    coarse_level = coarse[0].level
    if fine_level >= coarse_level:
        raise LevelMismatch(
            f"fine level {fine_level.label} must be strictly finer "
            f"than coarse level {coarse_level.label}"
        )
    owner: dict[CellAddr, int] = {}
    for i, area in enumerate(coarse):
        for addr in area.members:
            owner[addr] = i
    if sum(len(a.members) for a in fine) != len(owner):
        raise SheetMismatch("partitions cover different cell sets")
    split: dict[int, list[LogicalArea]] = {i: [] for i in range(len(coarse))}
    for area in fine:
        owners = {owner.get(addr) for addr in area.members}
        if len(owners) != 1 or None in owners:
            raise SheetMismatch("partitions cover different cell sets")
        split[owners.pop()].append(area)
    entries = tuple(
        DiffEntry(
            coarse=coarse[i],
            fine=tuple(split[i]),
            flagged=len(split[i]) >= 2,
        )
        for i in range(len(coarse))
    )
    return DiffReport(fine_level=fine_level, coarse_level=coarse_level, entries=entries)
