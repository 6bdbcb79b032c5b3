"""Set relation graphs: dependencies lifted from cells to units or modules.

A vertex stands for a set of cells (a semantic unit, a data module, or a
single cell).  An edge says some cell of the target set reads some cell
of the source set; each edge keeps one witness cell-level dependency,
the row-major first one, so every lifted edge can be justified on the
sheet.  The fish-eye operation opens one module vertex into its member
cells while the rest of the graph stays aggregated.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from gridaudit.classes import SemanticClass
from gridaudit.ddg import Ddg
from gridaudit.errors import (
    InvalidParams,
    NotAModuleVertex,
    SheetMismatch,
    UnknownModule,
)
from gridaudit.grid import CellAddr
from gridaudit.modules import DataModule, normalize_module_id


@dataclass(frozen=True)
class SrgVertex:
    id: str
    kind: str  # "unit" | "module" | "cell"
    cells: tuple[CellAddr, ...]
    result: CellAddr | None = None
    flags: tuple[str, ...] = ()


@dataclass(frozen=True)
class SrgEdge:
    src: str
    dst: str
    witness: tuple[CellAddr, CellAddr]


@dataclass(frozen=True)
class Srg:
    mode: str  # "units" | "modules"
    vertices: tuple[SrgVertex, ...]
    edges: tuple[SrgEdge, ...]
    fisheye: str | None = None
    curated_out: tuple[CellAddr, ...] = ()
    # stashed focus vertex while expanded, so collapse is exact
    collapsed_focus: SrgVertex | None = field(default=None, compare=False)

    def vertex(self, vertex_id: str) -> SrgVertex | None:
        for v in self.vertices:
            if v.id == vertex_id:
                return v
        return None


def _sort_edges(
    vertices: tuple[SrgVertex, ...], edges: list[SrgEdge]
) -> tuple[SrgEdge, ...]:
    index = {v.id: i for i, v in enumerate(vertices)}
    return tuple(sorted(edges, key=lambda e: (index[e.src], index[e.dst])))


def srg_of_units(
    classes: list[SemanticClass], ddg: Ddg, include_inputs: bool = True
) -> Srg:
    """Lift the dependency graph to semantic units.

    Cells outside every unit (inputs) appear as single-cell vertices when
    ``include_inputs`` is set, and only when adjacent to a unit.  Edges
    inside one unit are not emitted.
    """
    cell_to_unit: dict[CellAddr, str] = {}
    vertices: list[SrgVertex] = []
    for cls in classes:
        for unit in cls.units:
            vertices.append(
                SrgVertex(
                    id=unit.id,
                    kind="unit",
                    cells=unit.cells,
                    flags=("singleton",) if cls.singleton else (),
                )
            )
            for addr in unit.cells:
                cell_to_unit[addr] = unit.id
    if set(cell_to_unit) != set(ddg.formula_nodes):
        raise SheetMismatch("units and dependency graph come from different sheets")

    seen: set[tuple[str, str]] = set()
    edges: list[SrgEdge] = []
    input_cells: list[CellAddr] = []
    for a, b in ddg.edges():
        src = cell_to_unit.get(a)
        dst = cell_to_unit[b]
        if src is None:
            if not include_inputs:
                continue
            if a not in input_cells:
                input_cells.append(a)
            src = a.a1()
        elif src == dst:
            continue
        if (src, dst) not in seen:
            seen.add((src, dst))
            edges.append(SrgEdge(src=src, dst=dst, witness=(a, b)))

    for addr in sorted(input_cells):
        vertices.append(
            SrgVertex(id=addr.a1(), kind="cell", cells=(addr,), flags=("input",))
        )
    all_vertices = tuple(vertices)
    return Srg(
        mode="units", vertices=all_vertices, edges=_sort_edges(all_vertices, edges)
    )


def srg_of_modules(
    modules: list[DataModule],
    ddg: Ddg,
    curated_out: tuple[CellAddr, ...] = (),
) -> Srg:
    """Lift the dependency graph to data modules.

    Only result cells are referenced across module boundaries, so every
    edge's witness starts at the source module's result.
    """
    node_set = set(ddg.nodes)
    cell_to_module: dict[CellAddr, str] = {}
    vertices: list[SrgVertex] = []
    for module in modules:
        for addr in module.cells:
            if addr not in node_set:
                raise SheetMismatch(
                    "modules and dependency graph come from different sheets"
                )
            cell_to_module[addr] = module.id
        vertices.append(
            SrgVertex(
                id=module.id,
                kind="module",
                cells=module.cells,
                result=module.result,
                flags=("interior",) if module.promoted else ("sink",),
            )
        )

    candidates: list[tuple[CellAddr, CellAddr]] = []
    for module in modules:
        for succ in ddg.succs(module.result):
            target = cell_to_module.get(succ)
            if target is not None and target != module.id:
                candidates.append((module.result, succ))
    seen: set[tuple[str, str]] = set()
    edges: list[SrgEdge] = []
    for a, b in sorted(candidates):
        pair = (cell_to_module[a], cell_to_module[b])
        if pair not in seen:
            seen.add(pair)
            edges.append(SrgEdge(src=pair[0], dst=pair[1], witness=(a, b)))
    all_vertices = tuple(vertices)
    return Srg(
        mode="modules",
        vertices=all_vertices,
        edges=_sort_edges(all_vertices, edges),
        curated_out=tuple(sorted(curated_out)),
    )


def _find_module_vertex(srg: Srg, vertex_id: str) -> SrgVertex:
    vertex = srg.vertex(normalize_module_id(vertex_id))
    if vertex is None:
        vertex = srg.vertex(vertex_id)
    if vertex is None:
        raise UnknownModule(f"no vertex {vertex_id!r} in the graph")
    if vertex.kind != "module":
        raise NotAModuleVertex(f"{vertex_id!r} is a {vertex.kind} vertex, not a module")
    return vertex


def fisheye_expand(srg: Srg, focus_id: str, ddg: Ddg) -> Srg:
    """Open one module into its member cells, keeping the rest aggregated.

    Incoming edges re-attach to the member cells actually referenced;
    outgoing edges re-attach to the module's result cell.
    """
    if srg.fisheye is not None:
        raise InvalidParams("graph is already expanded; collapse it first")
    focus = _find_module_vertex(srg, focus_id)
    members = set(focus.cells)
    if not members <= set(ddg.nodes):
        raise SheetMismatch("module cells are absent from the dependency graph")

    vertices: list[SrgVertex] = []
    for v in srg.vertices:
        if v.id != focus.id:
            vertices.append(v)
            continue
        for addr in sorted(members):
            flags = ("member", "result") if addr == focus.result else ("member",)
            vertices.append(
                SrgVertex(id=addr.a1(), kind="cell", cells=(addr,), flags=flags)
            )

    edges: list[SrgEdge] = []
    for edge in srg.edges:
        if edge.dst == focus.id:
            # fan the edge out to the members its source really feeds
            source_result = edge.witness[0]
            for succ in ddg.succs(source_result):
                if succ in members:
                    edges.append(
                        SrgEdge(
                            src=edge.src, dst=succ.a1(), witness=(source_result, succ)
                        )
                    )
        elif edge.src == focus.id:
            assert focus.result is not None
            edges.append(replace(edge, src=focus.result.a1()))
        else:
            edges.append(edge)
    for addr in sorted(members):
        for succ in ddg.succs(addr):
            if succ in members:
                edges.append(
                    SrgEdge(src=addr.a1(), dst=succ.a1(), witness=(addr, succ))
                )

    all_vertices = tuple(vertices)
    return Srg(
        mode=srg.mode,
        vertices=all_vertices,
        edges=_sort_edges(all_vertices, edges),
        fisheye=focus.id,
        curated_out=srg.curated_out,
        collapsed_focus=focus,
    )


def fisheye_collapse(srg: Srg, ddg: Ddg) -> Srg:
    """Exact inverse of fisheye_expand."""
    if srg.fisheye is None or srg.collapsed_focus is None:
        raise InvalidParams("graph is not expanded")
    focus = srg.collapsed_focus

    vertices: list[SrgVertex] = []
    emitted = False
    for v in srg.vertices:
        if v.kind == "cell" and "member" in v.flags:
            if not emitted:
                vertices.append(focus)
                emitted = True
            continue
        vertices.append(v)

    member_ids = {addr.a1() for addr in focus.cells}
    best: dict[tuple[str, str], SrgEdge] = {}
    for edge in srg.edges:
        src = focus.id if edge.src in member_ids else edge.src
        dst = focus.id if edge.dst in member_ids else edge.dst
        if src == dst:
            continue
        key = (src, dst)
        candidate = SrgEdge(src=src, dst=dst, witness=edge.witness)
        if key not in best or candidate.witness < best[key].witness:
            best[key] = candidate
    all_vertices = tuple(vertices)
    return Srg(
        mode=srg.mode,
        vertices=all_vertices,
        edges=_sort_edges(all_vertices, list(best.values())),
        fisheye=None,
        curated_out=srg.curated_out,
    )


def fault_trace_step(
    modules: list[DataModule], srg: Srg, suspect: str
) -> list[tuple[str, CellAddr]]:
    """Predecessor modules to value-check when ``suspect``'s result is wrong.

    Each entry is (module id, its result cell); an empty list means the
    defect must sit inside the suspect module itself.
    """
    vertex = _find_module_vertex(srg, suspect)
    out: list[tuple[str, CellAddr]] = []
    for edge in srg.edges:
        if edge.dst == vertex.id:
            source = srg.vertex(edge.src)
            if source is not None and source.result is not None:
                out.append((source.id, source.result))
    return out


_AUDIT_STYLE = {
    "sink": 'style=filled, fillcolor="#bfdbfe"',
    "interior": 'style=filled, fillcolor="#fde68a"',
    "singleton": 'style=filled, fillcolor="#fecaca"',
    "input": 'shape=box, style=filled, fillcolor="#e5e7eb"',
    "member": "shape=box",
    "result": "shape=box, peripheries=2",
}


def _vertex_label(v: SrgVertex) -> str:
    if v.kind == "unit":
        return f"{v.id} [{' '.join(a.a1() for a in v.cells)}]"
    if v.kind == "module":
        return f"{v.id} ({len(v.cells)} cells)"
    return v.id


def to_dot(srg: Srg, style: str = "plain") -> str:
    """Graphviz text; ``audit`` style colors vertices by their role."""
    if style not in ("plain", "audit"):
        raise InvalidParams(f"unknown style {style!r}; expected plain or audit")
    if not srg.vertices and not srg.edges and not srg.curated_out:
        return "digraph srg {}\n"
    lines = ["digraph srg {"]
    for v in srg.vertices:
        attrs = [f'label="{_vertex_label(v)}"']
        if style == "audit":
            if "result" in v.flags:
                attrs.append(_AUDIT_STYLE["result"])
            elif v.flags and v.flags[0] in _AUDIT_STYLE:
                attrs.append(_AUDIT_STYLE[v.flags[0]])
        lines.append(f'  "{v.id}" [{", ".join(attrs)}];')
    if style == "audit":
        for addr in srg.curated_out:
            lines.append(
                f'  "{addr.a1()}" [label="{addr.a1()}", shape=box, '
                'style="dashed,filled", fillcolor="#f3f4f6"];'
            )
    for edge in srg.edges:
        lines.append(f'  "{edge.src}" -> "{edge.dst}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_json(srg: Srg) -> dict:
    return {
        "mode": srg.mode,
        "fisheye": srg.fisheye,
        "vertices": [
            {
                "id": v.id,
                "kind": v.kind,
                "cells": [a.a1() for a in v.cells],
                "result": v.result.a1() if v.result else None,
                "flags": list(v.flags),
            }
            for v in srg.vertices
        ],
        "edges": [
            {
                "from": e.src,
                "to": e.dst,
                "witness": [e.witness[0].a1(), e.witness[1].a1()],
            }
            for e in srg.edges
        ],
        "curated_out": [a.a1() for a in srg.curated_out],
    }
