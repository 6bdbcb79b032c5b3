"""Shared fixtures, random sheet generators, and independent oracles.

The module oracle here deliberately uses a different algorithm than the
production code (round-based forward reachability instead of a single
reverse-topological pass) so the two can check each other.
"""

from __future__ import annotations

import json
import random
from pathlib import Path

import pytest

from gridaudit.ddg import Ddg
from gridaudit.grid import CellAddr, Sheet, load_workbook, parse_a1

DATA = Path(__file__).parent / "data"
GOLDEN = Path(__file__).parent / "golden"


def A(text: str) -> CellAddr:
    return CellAddr(*parse_a1(text))


def sheet_from_csv(text: str, name: str = "sheet") -> Sheet:
    return load_workbook(text, "csv", name=name)


def load_fixture(stem: str) -> Sheet:
    return load_workbook((DATA / f"{stem}.csv").read_text(), "csv", name=stem)


@pytest.fixture(scope="session")
def s1() -> Sheet:
    return load_fixture("s1")


@pytest.fixture(scope="session")
def s2() -> Sheet:
    return load_fixture("s2")


@pytest.fixture(scope="session")
def s3() -> Sheet:
    return load_fixture("s3")


# random sheet construction


def _rand_expr(rng: random.Random, refs: list[str], depth: int) -> str:
    if depth <= 0 or not refs:
        roll = rng.random()
        if refs and roll < 0.6:
            return rng.choice(refs)
        if roll < 0.8:
            return str(rng.randint(0, 99))
        return f"{rng.randint(1, 9)}.{rng.randint(0, 99)}"
    roll = rng.random()
    if roll < 0.45:
        op = rng.choice(["+", "-", "*", "/", "&", "^"])
        return (
            _rand_expr(rng, refs, depth - 1)
            + op
            + _rand_expr(rng, refs, depth - 1)
        )
    if roll < 0.6:
        op = rng.choice(["<", "<=", ">", ">=", "=", "<>"])
        return (
            _rand_expr(rng, refs, depth - 1)
            + op
            + _rand_expr(rng, refs, depth - 1)
        )
    if roll < 0.75:
        name = rng.choice(["SUM", "MIN", "MAX", "IF", "ROUND"])
        n = rng.randint(1, 3)
        args = ",".join(_rand_expr(rng, refs, depth - 1) for _ in range(n))
        return f"{name}({args})"
    if roll < 0.85:
        return "-" + _rand_expr(rng, refs, depth - 1)
    return "(" + _rand_expr(rng, refs, depth - 1) + ")"


def _decorate_ref(rng: random.Random, a1: str) -> str:
    # sprinkle $ markers without changing the target cell
    i = 0
    while a1[i].isalpha():
        i += 1
    col, row = a1[:i], a1[i:]
    style = rng.randrange(4)
    if style == 1:
        return f"${col}{row}"
    if style == 2:
        return f"{col}${row}"
    if style == 3:
        return f"${col}${row}"
    return a1


def make_random_sheet(rng: random.Random, rows: int = 20, cols: int = 20) -> Sheet:
    """Mixed sheet of literals and parseable formulas; cycles allowed."""
    height = rng.randint(2, rows)
    width = rng.randint(2, cols)
    grid: list[list[str]] = []
    addrs = [
        CellAddr(r, c).a1()
        for r in range(1, height + 1)
        for c in range(1, width + 1)
    ]
    for r in range(1, height + 1):
        row = []
        for c in range(1, width + 1):
            roll = rng.random()
            if roll < 0.35:
                refs = [
                    _decorate_ref(rng, rng.choice(addrs))
                    for _ in range(rng.randint(1, 3))
                ]
                row.append("=" + _rand_expr(rng, refs, rng.randint(1, 3)))
            elif roll < 0.7:
                row.append(str(rng.randint(0, 999)))
            elif roll < 0.78:
                row.append("note")
            else:
                row.append("")
        grid.append(row)
    lines = []
    for row in grid:
        fields = []
        for field in row:
            if "," in field or '"' in field:
                field = '"' + field.replace('"', '""') + '"'
            fields.append(field)
        lines.append(",".join(fields))
    return sheet_from_csv("\n".join(lines) + "\n", name="random")


def make_acyclic_sheet(rng: random.Random, max_cells: int = 30) -> Sheet:
    """Formulas reference only row-major-earlier cells, so the DDG is a DAG."""
    total = rng.randint(4, max_cells)
    width = rng.randint(2, 6)
    cells: dict[str, str] = {}
    order: list[CellAddr] = []
    for i in range(total):
        addr = CellAddr(i // width + 1, i % width + 1)
        if i < 2 or rng.random() < 0.3:
            cells[addr.a1()] = str(rng.randint(1, 50))
        else:
            pool = [a.a1() for a in order]
            refs = [rng.choice(pool) for _ in range(rng.randint(1, 3))]
            cells[addr.a1()] = "=" + "+".join(refs) if rng.random() < 0.5 else (
                "=" + _rand_expr(rng, refs, 2)
            )
        order.append(addr)
    return load_workbook(json.dumps({"name": "random", "cells": cells}), "json")


# independent module oracle


def _cut_reach(
    succs, nodes: list[CellAddr], results: set[CellAddr]
) -> dict[CellAddr, frozenset[CellAddr]]:
    memo: dict[CellAddr, frozenset[CellAddr]] = {}

    def walk(v: CellAddr) -> frozenset[CellAddr]:
        if v in memo:
            return memo[v]
        out: set[CellAddr] = set()
        for s in succs(v):
            if s in results:
                out.add(s)
            else:
                out |= walk(s)
        memo[v] = frozenset(out)
        return memo[v]

    return {v: walk(v) for v in nodes if v not in results}


def _topo_positions(succs, nodes: list[CellAddr]) -> dict[CellAddr, int]:
    """DFS postorder topological position; higher = further downstream."""
    state: dict[CellAddr, int] = {}
    post: list[CellAddr] = []

    def visit(v: CellAddr) -> None:
        state[v] = 1
        for s in succs(v):
            if s not in state:
                visit(s)
        state[v] = 2
        post.append(v)

    for v in nodes:
        if v not in state:
            visit(v)
    # postorder puts successors first; reverse for preds-before-succs
    order = list(reversed(post))
    return {v: i for i, v in enumerate(order)}


def oracle_modules(
    ddg: Ddg,
    results: list[CellAddr],
    excluded: frozenset[CellAddr] = frozenset(),
):
    """Reference implementation of module recovery.

    Promotes one violating cell per round, always the most downstream
    one, recomputing cut reachability from scratch in between.  Returns
    (modules, orphans) with modules as sorted (result, members) pairs.
    """
    live = [n for n in ddg.nodes if n not in excluded]

    def succs(v: CellAddr):
        return [s for s in ddg.succs(v) if s not in excluded]

    position = _topo_positions(succs, live)
    result_set = set(results)
    while True:
        reach = _cut_reach(succs, live, result_set)
        violators = [v for v, r in reach.items() if len(r) > 1]
        if not violators:
            break
        result_set.add(max(violators, key=position.__getitem__))

    orphans = sorted(v for v, r in reach.items() if not r)
    modules = []
    for r in sorted(result_set):
        members = sorted(
            [v for v, d in reach.items() if d == frozenset([r])] + [r]
        )
        modules.append((r, tuple(members)))
    return modules, tuple(orphans)


def strip_timings(report: dict) -> dict:
    out = dict(report)
    out.pop("timings", None)
    return out


def check_dot(text: str) -> None:
    """Small structural DOT check: digraph header, balanced braces,
    every statement a node, edge, or attribute line."""
    assert text.startswith("digraph "), text[:40]
    assert text.count("{") == text.count("}") == 1
    body = text.split("{", 1)[1].rsplit("}", 1)[0]
    for line in body.splitlines():
        line = line.strip()
        if not line:
            continue
        assert line.endswith(";"), line
        assert line.startswith('"'), line
