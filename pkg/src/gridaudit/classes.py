"""Semantic units and classes: grouping formula cells by computation pattern.

A semantic unit is a small block of cells that together carry one
instance of a computation (say, one table row).  A semantic class
collects all units with the same shape and the same formulas relative to
their anchor.  Units are found by growing all anchors of an equivalence
group in lockstep: an offset joins the shared shape only when every
anchor sees an equivalent formula there, and disagreement splits the
group before growth continues.
"""

from __future__ import annotations

import collections
from dataclasses import dataclass

from gridaudit import _kernels as kernels
from gridaudit.equivalence import EqKey, EqLevel, eq_key
from gridaudit.errors import InvalidParams, TooFewUnits
from gridaudit.formula import Ast, parse_all
from gridaudit.grid import CellAddr, CellKind, Sheet

Offset = tuple[int, int]


@dataclass(frozen=True)
class GeometryParams:
    """Gap tolerances for unit growth.

    ``d_h`` and ``d_v`` bound the column and row distance between
    connected cells (0 forbids any step on that axis); ``d_man`` bounds
    their Manhattan distance per step and defaults to ``d_h + d_v``.
    """

    d_h: int = 1
    d_v: int = 0
    d_man: int | None = None

    def __post_init__(self):
        if self.d_man is None:
            object.__setattr__(self, "d_man", self.d_h + self.d_v)
        if self.d_h < 0 or self.d_v < 0:
            raise InvalidParams("gap tolerances must be non-negative")
        if self.d_man < 1:
            raise InvalidParams("d_man must be at least 1 (some step must be possible)")
        if self.d_man > self.d_h + self.d_v:
            raise InvalidParams("d_man must not exceed d_h + d_v")

    def neighbor_deltas(self) -> list[Offset]:
        out = []
        for dr in range(-self.d_v, self.d_v + 1):
            for dc in range(-self.d_h, self.d_h + 1):
                if (dr or dc) and abs(dr) + abs(dc) <= self.d_man:
                    out.append((dr, dc))
        return out


def neighbor(a: CellAddr, b: CellAddr, g: GeometryParams) -> bool:
    """Whether two distinct cells are close enough to sit in one unit."""
    dc = abs(a.col - b.col)
    dr = abs(a.row - b.row)
    return dc <= g.d_h and dr <= g.d_v and dc + dr <= g.d_man


@dataclass(frozen=True)
class ClassParams:
    geometry: GeometryParams
    eq_start: EqLevel
    eq_rest: EqLevel


@dataclass(frozen=True)
class SemanticUnit:
    id: str
    anchor: CellAddr
    cells: tuple[CellAddr, ...]

    @property
    def shape(self) -> tuple[Offset, ...]:
        ar, ac = self.anchor
        return tuple((addr.row - ar, addr.col - ac) for addr in self.cells)


def shape_signature(unit: SemanticUnit) -> str:
    """Canonical shape text; equal signature = equal shape."""
    return ";".join(f"{dr},{dc}" for dr, dc in sorted(unit.shape))


@dataclass(frozen=True)
class SemanticClass:
    id: str
    shape: tuple[Offset, ...]
    units: tuple[SemanticUnit, ...]
    start_key: EqKey
    rest_keys: tuple[tuple[Offset, EqKey], ...]

    @property
    def singleton(self) -> bool:
        return len(self.units) == 1

    @property
    def cells(self) -> list[CellAddr]:
        return [addr for unit in self.units for addr in unit.cells]


def _offset(anchor: CellAddr, o: Offset) -> CellAddr:
    return CellAddr(anchor.row + o[0], anchor.col + o[1])


class _Grower:
    def __init__(self, params: ClassParams, parsed: dict[CellAddr, Ast]):
        self.deltas = params.geometry.neighbor_deltas()
        self.rest_raw = {
            addr: eq_key(ast, params.eq_rest) for addr, ast in parsed.items()
        }
        self.consumed: set[CellAddr] = set()
        # (anchors row-major, shape) per finished class, in freeze order
        self.frozen: list[tuple[list[CellAddr], frozenset[Offset]]] = []

    def _frontier(self, shape: set[Offset]) -> list[Offset]:
        """Offsets adjacent to the shape that keep the anchor top-left."""
        seen: set[Offset] = set()
        for sr, sc in shape:
            for dr, dc in self.deltas:
                o = (sr + dr, sc + dc)
                if o in shape or o in seen:
                    continue
                if o[0] > 0 or (o[0] == 0 and o[1] > 0):
                    seen.add(o)
        return sorted(seen)

    def _probe(self, cell: CellAddr, claimed: set[CellAddr]):
        """eq_rest key of a candidate cell, or None when it cannot join."""
        if not (1 <= cell.row <= kernels.MAX_ROWS and 1 <= cell.col <= kernels.MAX_COLS):
            return None
        if cell in self.consumed or cell in claimed:
            return None
        return self.rest_raw.get(cell)

    def grow(self, anchors: list[CellAddr], shape: set[Offset]) -> None:
        anchors = [a for a in anchors if a not in self.consumed]
        # sibling groups grown after a split may have absorbed cells this
        # group inherited; an instance that lost part of its shape reverts
        # to its anchor alone so no cell lands in two units
        keep = []
        for a in anchors:
            if any(_offset(a, s) in self.consumed for s in shape):
                self._freeze([a], {(0, 0)})
            else:
                keep.append(a)
        anchors = keep
        if not anchors:
            return
        if len(anchors) == 1:
            self._freeze(anchors, shape)
            return
        while True:
            grew = False
            for o in self._frontier(shape):
                claimed = {_offset(a, s) for a in anchors for s in shape}
                keys = [self._probe(_offset(a, o), claimed) for a in anchors]
                live = [k for k in keys if k is not None]
                if not live:
                    continue
                if len(live) == len(keys) and all(k == live[0] for k in live):
                    shape.add(o)
                    grew = True
                    break
                # disagreement: the group splits at this offset
                buckets: dict = collections.defaultdict(list)
                for anchor, key in zip(anchors, keys):
                    buckets[key].append(anchor)
                blocked = buckets.pop(None, [])
                if blocked:
                    self._freeze(blocked, shape)
                for _, sub in sorted(
                    buckets.items(), key=lambda kv: (-len(kv[1]), kv[1][0])
                ):
                    self.grow(sub, set(shape) | {o})
                return
            if not grew:
                self._freeze(anchors, shape)
                return

    def _freeze(self, anchors: list[CellAddr], shape: set[Offset]) -> None:
        self.frozen.append((list(anchors), frozenset(shape)))
        for anchor in anchors:
            for o in shape:
                self.consumed.add(_offset(anchor, o))


def grow_classes(
    sheet: Sheet,
    params: ClassParams,
    parsed: dict[CellAddr, Ast] | None = None,
) -> list[SemanticClass]:
    """Partition formula cells into semantic classes of lockstep-grown units.

    Every formula cell lands in exactly one unit.  Classes are ordered by
    the anchor of their first unit and numbered K1, K2, ...; units within
    a class are K<i>.U1, K<i>.U2, ... in row-major anchor order.
    """
    if parsed is None:
        parsed = parse_all(sheet)
    start_raw = {addr: eq_key(ast, params.eq_start) for addr, ast in parsed.items()}
    groups: dict[tuple, list[CellAddr]] = {}
    for addr in sorted(parsed):
        groups.setdefault(start_raw[addr], []).append(addr)

    grower = _Grower(params, parsed)
    for members in sorted(groups.values(), key=lambda m: m[0]):
        grower.grow(members, {(0, 0)})

    ordered = sorted(grower.frozen, key=lambda item: min(item[0]))
    out: list[SemanticClass] = []
    for k, (anchors, shape) in enumerate(ordered, start=1):
        shape_t = tuple(sorted(shape))
        first = min(anchors)
        units = tuple(
            SemanticUnit(
                id=f"K{k}.U{u}",
                anchor=anchor,
                cells=tuple(sorted(_offset(anchor, o) for o in shape_t)),
            )
            for u, anchor in enumerate(sorted(anchors), start=1)
        )
        out.append(
            SemanticClass(
                id=f"K{k}",
                shape=shape_t,
                units=units,
                start_key=EqKey(params.eq_start, repr(start_raw[first])),
                rest_keys=tuple(
                    (o, EqKey(params.eq_rest, repr(grower.rest_raw[_offset(first, o)])))
                    for o in shape_t
                    if o != (0, 0)
                ),
            )
        )
    return out


@dataclass(frozen=True)
class OutlierReport:
    """Irregularities in one class's placement pattern.

    ``stride`` is the dominant anchor spacing along ``axis`` when at
    least 80% of consecutive anchor gaps agree; ``breaks`` are the
    positions the stride predicts but no unit occupies.  ``holes`` are
    formula cells inside the class bounding box that belong to no unit
    of the class.
    """

    class_id: str
    axis: str | None
    stride: int | None
    breaks: tuple[CellAddr, ...]
    holes: tuple[CellAddr, ...]


def pattern_outliers(cls: SemanticClass, sheet: Sheet) -> OutlierReport:
    """Flag where a class deviates from its own layout pattern.

    Raises TooFewUnits below 3 units: no pattern basis.
    """
    if len(cls.units) < 3:
        raise TooFewUnits(
            f"class {cls.id} has {len(cls.units)} unit(s), need 3: no pattern basis"
        )
    anchors = [u.anchor for u in cls.units]

    axis = None
    series: list[int] = []
    if all(a.col == anchors[0].col for a in anchors):
        axis, series = "row", [a.row for a in anchors]
    elif all(a.row == anchors[0].row for a in anchors):
        axis, series = "col", [a.col for a in anchors]

    stride = None
    breaks: list[CellAddr] = []
    if axis is not None:
        deltas = [b - a for a, b in zip(series, series[1:])]
        modal = collections.Counter(deltas).most_common(1)[0][0]
        # a doubled gap is one missing anchor, so multiples of the modal
        # delta still count as agreeing with the stride
        votes = sum(1 for d in deltas if modal > 0 and d % modal == 0)
        if votes / len(deltas) >= 0.8 and modal > 0:
            stride = modal
            for prev, nxt in zip(series, series[1:]):
                expected = prev + stride
                while expected < nxt:
                    if axis == "row":
                        breaks.append(CellAddr(expected, anchors[0].col))
                    else:
                        breaks.append(CellAddr(anchors[0].row, expected))
                    expected += stride

    unit_cells = {addr for unit in cls.units for addr in unit.cells}
    rows = [addr.row for addr in unit_cells]
    cols = [addr.col for addr in unit_cells]
    holes = sorted(
        addr
        for addr, content in sheet.cells.items()
        if content.kind is CellKind.FORMULA
        and addr not in unit_cells
        and min(rows) <= addr.row <= max(rows)
        and min(cols) <= addr.col <= max(cols)
    )
    return OutlierReport(
        class_id=cls.id,
        axis=axis,
        stride=stride,
        breaks=tuple(breaks),
        holes=tuple(holes),
    )
