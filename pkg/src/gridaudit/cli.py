"""Command-line front door.

Runs every analysis in batch over a CSV or JSON workbook and emits JSON
(and optionally DOT and highlight CSV) artifacts.  Exit codes: 0 clean,
1 when the report carries diagnostics, 2 on fatal errors.  ``--strict``
turns diagnostics into a fatal exit.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from gridaudit.classes import ClassParams, GeometryParams
from gridaudit.equivalence import level_from_name
from gridaudit.errors import GridAuditError
from gridaudit.grid import CellAddr, load_workbook, parse_a1
from gridaudit.modules import curate_init
from gridaudit.pipeline import (
    Analysis,
    apply_exclusions,
    build_areas_report,
    build_classes_report,
    build_constants_report,
    build_ddg_dot,
    build_diff_report,
    build_inspect_report,
    build_modules_report,
    build_srg,
    build_srg_report,
    error_json,
    highlight_csv,
)
from gridaudit.srg import to_dot as srg_to_dot

LEVEL_HELP = "equivalence level: copy, logical or structural (lowercase)"


def _add_io_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("workbook", help="path to a .csv or .json workbook")
    sub.add_argument(
        "--format",
        choices=["csv", "json"],
        default=None,
        help="workbook format (default: inferred from the file suffix)",
    )
    sub.add_argument(
        "--out", metavar="PATH", default=None, help="write the JSON report to PATH"
    )
    sub.add_argument(
        "--strict",
        action="store_true",
        help="exit 2 instead of 1 when the report carries diagnostics",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gridaudit",
        description="Audit spreadsheet structure: logical areas, semantic "
        "classes, data modules and their relation graphs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("inspect", help="sheet summary, sink list and DDG stats")
    _add_io_flags(p)
    p.add_argument("--dot", metavar="PATH", help="also write the DDG as DOT")

    p = sub.add_parser("areas", help="group formula cells into logical areas")
    _add_io_flags(p)
    p.add_argument("--level", required=True, help=LEVEL_HELP)

    p = sub.add_parser("classes", help="grow semantic classes of semantic units")
    _add_io_flags(p)
    p.add_argument("--dh", type=int, default=1, help="horizontal gap tolerance")
    p.add_argument("--dv", type=int, default=0, help="vertical gap tolerance")
    p.add_argument(
        "--dman",
        type=int,
        default=None,
        help="Manhattan gap tolerance (default: dh + dv)",
    )
    p.add_argument("--eq-start", default="copy", help=LEVEL_HELP + " for anchors")
    p.add_argument(
        "--eq-rest", default="copy", help=LEVEL_HELP + " for grown cells"
    )
    p.add_argument(
        "--highlight", metavar="PATH", help="write a cell,class,unit CSV map"
    )

    p = sub.add_parser("modules", help="recover single-result data modules")
    _add_io_flags(p)
    p.add_argument(
        "--exclude",
        metavar="CELL",
        action="append",
        default=[],
        help="exclude a result cell before recovery; repeatable, applied in "
        "order, each must be a current sink",
    )
    p.add_argument(
        "--highlight", metavar="PATH", help="write a cell,module CSV map"
    )

    p = sub.add_parser("srg", help="set relation graph over units or modules")
    _add_io_flags(p)
    p.add_argument("--mode", required=True, choices=["units", "modules"])
    p.add_argument(
        "--fisheye", metavar="ID", help="expand this module vertex into its cells"
    )
    p.add_argument("--dot", metavar="PATH", help="also write the SRG as DOT")

    p = sub.add_parser(
        "diff-eq", help="compare a fine against a coarse equivalence partition"
    )
    _add_io_flags(p)
    p.add_argument("--fine", required=True, help=LEVEL_HELP)
    p.add_argument("--coarse", required=True, help=LEVEL_HELP)

    p = sub.add_parser("constants", help="list literal constants per formula cell")
    _add_io_flags(p)

    p = sub.add_parser("serve", help="run the HTTP audit service")
    p.add_argument("--port", type=int, default=8437)
    p.add_argument("--host", default="127.0.0.1")

    return parser


def _load_sheet(args) -> Analysis:
    path = Path(args.workbook)
    fmt = args.format or ("json" if path.suffix.lower() == ".json" else "csv")
    text = path.read_text(encoding="utf-8")
    return Analysis(load_workbook(text, fmt, name=path.stem))


def _emit(report: dict, args) -> None:
    text = json.dumps(report, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _write(path: str, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")


def _run(args) -> int:
    if args.command == "serve":
        import uvicorn

        from gridaudit.service import create_app

        uvicorn.run(create_app(), host=args.host, port=args.port)
        return 0

    analysis = _load_sheet(args)

    if args.command == "inspect":
        report = build_inspect_report(analysis)
        if args.dot:
            _write(args.dot, build_ddg_dot(analysis))
    elif args.command == "areas":
        report = build_areas_report(analysis, level_from_name(args.level))
    elif args.command == "classes":
        params = ClassParams(
            geometry=GeometryParams(d_h=args.dh, d_v=args.dv, d_man=args.dman),
            eq_start=level_from_name(args.eq_start),
            eq_rest=level_from_name(args.eq_rest),
        )
        report = build_classes_report(analysis, params)
        if args.highlight:
            _write(
                args.highlight,
                highlight_csv(
                    report["payload"]["highlight"], ["cell", "class", "unit"]
                ),
            )
    elif args.command == "modules":
        cells = [CellAddr(*parse_a1(text)) for text in args.exclude]
        curation = apply_exclusions(analysis.ddg, cells)
        report = build_modules_report(analysis, curation)
        if args.highlight:
            _write(
                args.highlight,
                highlight_csv(
                    report["payload"]["highlight"], ["cell", "module"]
                ),
            )
    elif args.command == "srg":
        curation = curate_init(analysis.ddg)
        report = build_srg_report(analysis, curation, args.mode, args.fisheye)
        if args.dot:
            graph = build_srg(analysis, curation, args.mode, args.fisheye)
            _write(args.dot, srg_to_dot(graph, style="audit"))
    elif args.command == "diff-eq":
        report = build_diff_report(
            analysis, level_from_name(args.fine), level_from_name(args.coarse)
        )
    elif args.command == "constants":
        report = build_constants_report(analysis)
    else:  # pragma: no cover - argparse rejects unknown commands
        raise AssertionError(args.command)

    _emit(report, args)
    if report["diagnostics"]:
        return 2 if args.strict else 1
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _run(args)
    except GridAuditError as exc:
        sys.stderr.write(json.dumps(error_json(exc), indent=2) + "\n")
        return 2
    except OSError as exc:
        body = {"error": {"code": "IOError", "message": str(exc)}}
        sys.stderr.write(json.dumps(body, indent=2) + "\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
