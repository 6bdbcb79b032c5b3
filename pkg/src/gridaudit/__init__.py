"""Spreadsheet structure auditing.

Groups formula cells into logical areas and semantic classes, recovers
single-result data modules over the data-dependency graph, and renders
set relation graphs for interactive fault tracing.
"""

from gridaudit._kernels import active_backend, available_backends, set_backend
from gridaudit.classes import (
    ClassParams,
    GeometryParams,
    OutlierReport,
    SemanticClass,
    SemanticUnit,
    grow_classes,
    neighbor,
    pattern_outliers,
    shape_signature,
)
from gridaudit.ddg import Ddg, build_ddg, check_acyclic
from gridaudit.equivalence import (
    DiffReport,
    EqKey,
    EqLevel,
    LogicalArea,
    compare_partitions,
    equivalent,
    fingerprint,
    level_from_name,
    logical_areas,
)
from gridaudit.errors import (
    AnalysisParseErrors,
    CyclicDDG,
    GridAuditError,
    InvalidParams,
    LevelMismatch,
    MalformedAddress,
    MalformedWorkbook,
    MultipleSheets,
    NotAModuleVertex,
    NotASink,
    OutOfGrid,
    ParseError,
    SheetMismatch,
    TooFewUnits,
    UnknownModule,
)
from gridaudit.formula import (
    constants_in,
    parse_all,
    parse_formula,
    referenced_cells,
)
from gridaudit.grid import (
    CellAddr,
    CellContent,
    CellKind,
    Sheet,
    dump_csv,
    formula_cells,
    load_workbook,
    parse_a1,
)
from gridaudit.modules import (
    DataModule,
    ModuleRecovery,
    SinkCuration,
    curate_init,
    exclude_sink,
    module_boundary_check,
    recover_modules,
    restore_sink,
)
from gridaudit.srg import (
    Srg,
    fault_trace_step,
    fisheye_collapse,
    fisheye_expand,
    srg_of_modules,
    srg_of_units,
)

__version__ = "0.1.0"

__all__ = [
    "AnalysisParseErrors",
    "CellAddr",
    "CellContent",
    "CellKind",
    "ClassParams",
    "CyclicDDG",
    "DataModule",
    "Ddg",
    "DiffReport",
    "EqKey",
    "EqLevel",
    "GeometryParams",
    "GridAuditError",
    "InvalidParams",
    "LevelMismatch",
    "LogicalArea",
    "MalformedAddress",
    "MalformedWorkbook",
    "ModuleRecovery",
    "MultipleSheets",
    "NotAModuleVertex",
    "NotASink",
    "OutOfGrid",
    "OutlierReport",
    "ParseError",
    "SemanticClass",
    "SemanticUnit",
    "Sheet",
    "SheetMismatch",
    "SinkCuration",
    "Srg",
    "TooFewUnits",
    "UnknownModule",
    "active_backend",
    "available_backends",
    "build_ddg",
    "check_acyclic",
    "compare_partitions",
    "constants_in",
    "curate_init",
    "dump_csv",
    "equivalent",
    "exclude_sink",
    "fault_trace_step",
    "fingerprint",
    "fisheye_collapse",
    "fisheye_expand",
    "formula_cells",
    "grow_classes",
    "level_from_name",
    "load_workbook",
    "logical_areas",
    "module_boundary_check",
    "neighbor",
    "parse_a1",
    "parse_all",
    "parse_formula",
    "pattern_outliers",
    "recover_modules",
    "referenced_cells",
    "restore_sink",
    "set_backend",
    "shape_signature",
    "srg_of_modules",
    "srg_of_units",
]
