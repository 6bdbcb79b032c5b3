"""Shared analysis pipeline behind the CLI and the HTTP service.

Both front ends call the same report builders, so a CLI run and an API
request over the same sheet and parameters produce the same JSON
document.  Every report carries the same envelope: schema version, input
digest, echoed parameters, the payload, diagnostics, and timings.
Everything except ``timings`` is deterministic for a given input.
"""

from __future__ import annotations

import hashlib
import time

from gridaudit.classes import (
    ClassParams,
    GeometryParams,
    SemanticClass,
    grow_classes,
    pattern_outliers,
    shape_signature,
)
from gridaudit.ddg import Ddg, build_ddg, check_acyclic
from gridaudit.ddg import to_dot as ddg_to_dot
from gridaudit.ddg import to_json as ddg_to_json
from gridaudit.equivalence import (
    DiffReport,
    EqLevel,
    LogicalArea,
    compare_partitions,
    logical_areas,
)
from gridaudit.errors import LevelMismatch, TooFewUnits
from gridaudit.formula import constants_in
from gridaudit.grid import CellAddr, CellKind, Sheet, dump_csv, render_field
from gridaudit.modules import (
    ModuleRecovery,
    SinkCuration,
    curate_init,
    exclude_sink,
    module_boundary_check,
    recover_modules,
)
from gridaudit.srg import (
    Srg,
    fault_trace_step,
    fisheye_expand,
    srg_of_modules,
    srg_of_units,
)
from gridaudit.srg import to_json as srg_to_json

SCHEMA_VERSION = 1

DEFAULT_CLASS_PARAMS = ClassParams(
    geometry=GeometryParams(d_h=1, d_v=0),
    eq_start=EqLevel.COPY,
    eq_rest=EqLevel.COPY,
)


def sheet_digest(sheet: Sheet) -> str:
    return "sha256:" + hashlib.sha256(dump_csv(sheet).encode()).hexdigest()


class Analysis:
    """One sheet with lazily computed, parameter-keyed analysis caches."""

    def __init__(self, sheet: Sheet):
        self.sheet = sheet
        self.digest = sheet_digest(sheet)
        self.parsed = None
        self._ddg: Ddg | None = None
        self._areas: dict[EqLevel, list[LogicalArea]] = {}
        self._classes: dict[ClassParams, list[SemanticClass]] = {}

    def _ensure_parsed(self):
        if self.parsed is None:
            from gridaudit.formula import parse_all

            self.parsed = parse_all(self.sheet)
        return self.parsed

    @property
    def ddg(self) -> Ddg:
        if self._ddg is None:
            self._ddg = build_ddg(self.sheet, self._ensure_parsed())
        return self._ddg

    def areas(self, level: EqLevel) -> list[LogicalArea]:
        if level not in self._areas:
            self._areas[level] = logical_areas(self.sheet, level, self._ensure_parsed())
        return self._areas[level]

    def classes(self, params: ClassParams) -> list[SemanticClass]:
        if params not in self._classes:
            self._classes[params] = grow_classes(
                self.sheet, params, self._ensure_parsed()
            )
        return self._classes[params]


def apply_exclusions(ddg: Ddg, cells: list[CellAddr]) -> SinkCuration:
    """Replay a batch of exclusions; fails fast on a non-current-sink."""
    cur = curate_init(ddg)
    for cell in cells:
        cur = exclude_sink(cur, ddg, cell)
    return cur


def _a1s(addrs) -> list[str]:
    return [a.a1() for a in addrs]


def _input_summary(analysis: Analysis) -> dict:
    sheet = analysis.sheet
    return {
        "name": sheet.name,
        "digest": analysis.digest,
        "extent": list(sheet.extent),
        "cells": len(sheet.cells),
        "formulas": sum(
            1 for c in sheet.cells.values() if c.kind is CellKind.FORMULA
        ),
    }


def _out_of_grid_diagnostics(ddg: Ddg) -> list[dict]:
    return [
        {"kind": "out_of_grid", "cell": addr.a1(), "message": message}
        for addr, message in ddg.out_of_grid
    ]


class _Timer:
    def __enter__(self):
        self._start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.total_ms = round((time.perf_counter() - self._start) * 1000, 3)
        return False


def _report(analysis, command, parameters, payload, diagnostics, timer) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "command": command,
        "input": _input_summary(analysis),
        "parameters": parameters,
        "payload": payload,
        "diagnostics": diagnostics,
        "timings": {"total_ms": timer.total_ms},
    }


def build_inspect_report(analysis: Analysis) -> dict:
    with _Timer() as timer:
        sheet = analysis.sheet
        ddg = analysis.ddg
        verdict = check_acyclic(ddg)
        counts = {"cells": len(sheet.cells), "formulas": 0, "numbers": 0, "text": 0}
        for content in sheet.cells.values():
            if content.kind is CellKind.FORMULA:
                counts["formulas"] += 1
            elif content.kind is CellKind.NUMBER:
                counts["numbers"] += 1
            else:
                counts["text"] += 1
        payload = {
            "extent": list(sheet.extent),
            "counts": counts,
            "ddg": {"nodes": len(ddg.nodes), "edges": len(ddg.edges())},
            "sinks": _a1s(ddg.sinks()),
            "acyclic": verdict.ok,
        }
        diagnostics = _out_of_grid_diagnostics(ddg)
        if not verdict.ok:
            diagnostics.append({"kind": "cycle", "cells": _a1s(verdict.cycle)})
    return _report(analysis, "inspect", {}, payload, diagnostics, timer)


def build_grid_report(analysis: Analysis) -> dict:
    with _Timer() as timer:
        sheet = analysis.sheet
        payload = {
            "name": sheet.name,
            "extent": list(sheet.extent),
            "cells": {
                addr.a1(): {
                    "kind": content.kind.value,
                    "text": render_field(content),
                }
                for addr, content in sorted(sheet.cells.items())
            },
        }
    return _report(analysis, "grid", {}, payload, [], timer)


def _area_json(area: LogicalArea) -> dict:
    return {"key": area.key.fingerprint, "cells": _a1s(area.members)}


def build_areas_report(analysis: Analysis, level: EqLevel) -> dict:
    with _Timer() as timer:
        areas = analysis.areas(level)
        payload = {
            "level": level.label,
            "areas": [_area_json(a) for a in areas],
        }
    return _report(analysis, "areas", {"level": level.label}, payload, [], timer)


def classes_highlight(classes: list[SemanticClass]) -> list[dict]:
    rows = []
    for cls in classes:
        for unit in cls.units:
            for addr in unit.cells:
                rows.append({"cell": addr.a1(), "class": cls.id, "unit": unit.id})
    rows.sort(key=lambda r: CellAddr(*_parse_back(r["cell"])))
    return rows


def _parse_back(a1: str) -> tuple[int, int]:
    from gridaudit.grid import parse_a1

    return parse_a1(a1)


def highlight_csv(rows: list[dict], columns: list[str]) -> str:
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(str(row[c]) for c in columns))
    return "\n".join(lines) + "\n"


def _class_params_json(params: ClassParams) -> dict:
    return {
        "dh": params.geometry.d_h,
        "dv": params.geometry.d_v,
        "dman": params.geometry.d_man,
        "eq_start": params.eq_start.label,
        "eq_rest": params.eq_rest.label,
    }


def build_classes_report(analysis: Analysis, params: ClassParams) -> dict:
    with _Timer() as timer:
        classes = analysis.classes(params)
        class_list = []
        for cls in classes:
            try:
                rep = pattern_outliers(cls, analysis.sheet)
                outliers = {
                    "axis": rep.axis,
                    "stride": rep.stride,
                    "breaks": _a1s(rep.breaks),
                    "holes": _a1s(rep.holes),
                }
            except TooFewUnits:
                outliers = None
            class_list.append(
                {
                    "id": cls.id,
                    "singleton": cls.singleton,
                    "shape": [list(o) for o in cls.shape],
                    "shape_signature": shape_signature(cls.units[0]),
                    "start_key": cls.start_key.fingerprint,
                    "rest_keys": [
                        {"offset": list(o), "key": key.fingerprint}
                        for o, key in cls.rest_keys
                    ],
                    "units": [
                        {
                            "id": unit.id,
                            "anchor": unit.anchor.a1(),
                            "cells": _a1s(unit.cells),
                        }
                        for unit in cls.units
                    ],
                    "outliers": outliers,
                }
            )
        payload = {"classes": class_list, "highlight": classes_highlight(classes)}
    return _report(
        analysis, "classes", _class_params_json(params), payload, [], timer
    )


def modules_highlight(recovery: ModuleRecovery) -> list[dict]:
    rows = []
    for module in recovery.modules:
        for addr in module.cells:
            rows.append({"cell": addr.a1(), "module": module.id})
    rows.sort(key=lambda r: CellAddr(*_parse_back(r["cell"])))
    return rows


def build_modules_report(analysis: Analysis, curation: SinkCuration) -> dict:
    with _Timer() as timer:
        ddg = analysis.ddg
        recovery = recover_modules(ddg, list(curation.active), curation.excluded)
        violations = module_boundary_check(list(recovery.modules), ddg)
        payload = {
            "curation": {
                "active": _a1s(curation.active),
                "excluded": _a1s(sorted(curation.excluded)),
                "history": _a1s(curation.history),
            },
            "modules": [
                {
                    "id": m.id,
                    "result": m.result.a1(),
                    "cells": _a1s(m.cells),
                    "size": m.size,
                    "promoted": m.promoted,
                }
                for m in recovery.modules
            ],
            "boundary_violations": [
                {
                    "edge": [v.edge[0].a1(), v.edge[1].a1()],
                    "src_module": v.src_module,
                    "dst_module": v.dst_module,
                }
                for v in violations
            ],
            "highlight": modules_highlight(recovery),
        }
        diagnostics = _out_of_grid_diagnostics(ddg)
        if recovery.orphans:
            diagnostics.append(
                {"kind": "orphaned_by_curation", "cells": _a1s(recovery.orphans)}
            )
    return _report(
        analysis,
        "modules",
        {"exclude": _a1s(curation.history)},
        payload,
        diagnostics,
        timer,
    )


def build_srg(
    analysis: Analysis,
    curation: SinkCuration,
    mode: str,
    fisheye: str | None = None,
    class_params: ClassParams | None = None,
) -> Srg:
    from gridaudit.errors import InvalidParams

    ddg = analysis.ddg
    if mode == "units":
        classes = analysis.classes(class_params or DEFAULT_CLASS_PARAMS)
        graph = srg_of_units(classes, ddg)
    elif mode == "modules":
        recovery = recover_modules(ddg, list(curation.active), curation.excluded)
        graph = srg_of_modules(
            list(recovery.modules), ddg, tuple(sorted(curation.excluded))
        )
    else:
        raise InvalidParams(f"unknown srg mode {mode!r}; expected units or modules")
    if fisheye is not None:
        graph = fisheye_expand(graph, fisheye, ddg)
    return graph


def build_srg_report(
    analysis: Analysis,
    curation: SinkCuration,
    mode: str,
    fisheye: str | None = None,
    class_params: ClassParams | None = None,
) -> dict:
    with _Timer() as timer:
        graph = build_srg(analysis, curation, mode, fisheye, class_params)
        payload = srg_to_json(graph)
        diagnostics = _out_of_grid_diagnostics(analysis.ddg)
    parameters: dict = {"mode": mode, "fisheye": fisheye}
    if mode == "units":
        parameters.update(_class_params_json(class_params or DEFAULT_CLASS_PARAMS))
    return _report(analysis, "srg", parameters, payload, diagnostics, timer)


def build_trace_report(
    analysis: Analysis, curation: SinkCuration, module_ref: str
) -> dict:
    with _Timer() as timer:
        ddg = analysis.ddg
        recovery = recover_modules(ddg, list(curation.active), curation.excluded)
        graph = srg_of_modules(
            list(recovery.modules), ddg, tuple(sorted(curation.excluded))
        )
        steps = fault_trace_step(list(recovery.modules), graph, module_ref)
        payload = {
            "module": _normalized(module_ref),
            "predecessors": [
                {"module": mod_id, "result": result.a1()} for mod_id, result in steps
            ],
            "buried": not steps,
        }
    return _report(
        analysis, "trace", {"module": module_ref}, payload, [], timer
    )


def _normalized(module_ref: str) -> str:
    from gridaudit.modules import normalize_module_id

    return normalize_module_id(module_ref)


def build_diff_report(analysis: Analysis, fine: EqLevel, coarse: EqLevel) -> dict:
    with _Timer() as timer:
        if fine >= coarse:
            raise LevelMismatch(
                f"fine level {fine.label} must be strictly finer "
                f"than coarse level {coarse.label}"
            )
        report: DiffReport = compare_partitions(
            analysis.areas(fine), analysis.areas(coarse)
        )
        entries = [
            {
                "coarse_key": e.coarse.key.fingerprint,
                "coarse_cells": _a1s(e.coarse.members),
                "fine_areas": [_area_json(a) for a in e.fine],
                "flagged": e.flagged,
            }
            for e in report.entries
        ]
        payload = {
            "fine": fine.label,
            "coarse": coarse.label,
            "entries": entries,
            "hot_spots": [
                {"coarse_key": e["coarse_key"], "cells": e["coarse_cells"]}
                for e in entries
                if e["flagged"]
            ],
        }
    return _report(
        analysis,
        "diff-eq",
        {"fine": fine.label, "coarse": coarse.label},
        payload,
        [],
        timer,
    )


def build_constants_report(analysis: Analysis) -> dict:
    with _Timer() as timer:
        parsed = analysis._ensure_parsed()
        constants = []
        for addr in sorted(parsed):
            values = constants_in(parsed[addr])
            if values:
                constants.append({"cell": addr.a1(), "values": values})
        payload = {"constants": constants}
    return _report(analysis, "constants", {}, payload, [], timer)


def build_ddg_dot(analysis: Analysis) -> str:
    return ddg_to_dot(analysis.ddg)


def build_ddg_json(analysis: Analysis) -> dict:
    return ddg_to_json(analysis.ddg)


def error_json(exc) -> dict:
    """Machine-readable error body shared by the CLI and the service."""
    from gridaudit.errors import AnalysisParseErrors, CyclicDDG

    body: dict = {"code": exc.code, "message": str(exc)}
    if isinstance(exc, AnalysisParseErrors):
        body["cells"] = [
            {"cell": addr.a1(), "message": err.message, "pos": err.pos}
            for addr, err in exc.failures
        ]
    if isinstance(exc, CyclicDDG) and exc.cycle:
        body["cycle"] = [addr.a1() for addr in exc.cycle]
    return {"error": body}
