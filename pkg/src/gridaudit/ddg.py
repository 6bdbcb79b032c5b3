"""Data-dependency graph over a sheet.

Nodes are the formula cells plus every cell any formula references, even
when that cell is empty (reading a blank cell is a legitimate audit
finding).  Literal cells nothing refers to stay out of the graph.  Each
edge points from a referenced cell to the formula reading it, so edge
direction follows the flow of data.  References that leave the grid are
dropped and reported as diagnostics rather than failing the build.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from gridaudit.errors import OutOfGrid
from gridaudit.formula import Ast, expand_node, parse_all, ref_nodes
from gridaudit.grid import CellAddr, Sheet


class Ddg:
    def __init__(
        self,
        formulas: frozenset[CellAddr],
        preds: dict[CellAddr, tuple[CellAddr, ...]],
        out_of_grid: tuple[tuple[CellAddr, str], ...],
    ):
        self.formula_nodes = formulas
        self._preds = preds
        self.out_of_grid = out_of_grid
        succs: dict[CellAddr, list[CellAddr]] = {}
        nodes: set[CellAddr] = set(formulas)
        for target, sources in preds.items():
            for source in sources:
                nodes.add(source)
                succs.setdefault(source, []).append(target)
        self._succs = {source: tuple(sorted(out)) for source, out in succs.items()}
        self.nodes = tuple(sorted(nodes))

    def preds(self, addr: CellAddr) -> tuple[CellAddr, ...]:
        return self._preds.get(addr, ())

    def succs(self, addr: CellAddr) -> tuple[CellAddr, ...]:
        return self._succs.get(addr, ())

    def edges(self) -> list[tuple[CellAddr, CellAddr]]:
        return sorted(
            (source, target)
            for target, sources in self._preds.items()
            for source in sources
        )

    @property
    def input_nodes(self) -> tuple[CellAddr, ...]:
        return tuple(a for a in self.nodes if a not in self.formula_nodes)

    def sinks(self) -> list[CellAddr]:
        """Nodes nothing reads; these are the sheet's result cells."""
        return [a for a in self.nodes if not self._succs.get(a)]

    def __repr__(self) -> str:
        return f"Ddg({len(self.nodes)} nodes, {sum(map(len, self._preds.values()))} edges)"


def build_ddg(sheet: Sheet, parsed: dict[CellAddr, Ast] | None = None) -> Ddg:
    if parsed is None:
        parsed = parse_all(sheet)
    preds: dict[CellAddr, tuple[CellAddr, ...]] = {}
    bad: list[tuple[CellAddr, str]] = []
    for addr in sorted(parsed):
        seen: set[CellAddr] = set()
        sources: list[CellAddr] = []
        for node in ref_nodes(parsed[addr]):
            try:
                cells = expand_node(node, addr)
            except OutOfGrid as exc:
                bad.append((addr, str(exc)))
                continue
            for cell in cells:
                if cell not in seen:
                    seen.add(cell)
                    sources.append(cell)
        preds[addr] = tuple(sources)
    return Ddg(frozenset(parsed), preds, tuple(bad))


@dataclass(frozen=True)
class CycleCheck:
    ok: bool
    order: tuple[CellAddr, ...] | None
    cycle: tuple[CellAddr, ...] | None


def check_acyclic(ddg: Ddg) -> CycleCheck:
    """Topologically sort the graph, or exhibit a cycle.

    The order is deterministic: among ready nodes the row-major smallest
    comes first.  On failure ``cycle`` is a shortest cycle found, listed
    with its starting cell repeated at the end.
    """
    indegree = {addr: len(ddg.preds(addr)) for addr in ddg.nodes}
    ready = [addr for addr in ddg.nodes if indegree[addr] == 0]
    heapq.heapify(ready)
    order: list[CellAddr] = []
    while ready:
        addr = heapq.heappop(ready)
        order.append(addr)
        for succ in ddg.succs(addr):
            indegree[succ] -= 1
            if indegree[succ] == 0:
                heapq.heappush(ready, succ)
    if len(order) == len(ddg.nodes):
        return CycleCheck(ok=True, order=tuple(order), cycle=None)

    remaining = {addr for addr in ddg.nodes if indegree[addr] > 0}
    best: tuple[CellAddr, ...] | None = None
    for start in sorted(remaining):
        # BFS over the remaining subgraph for the shortest path back to start
        parents: dict[CellAddr, CellAddr] = {}
        queue = [start]
        found = None
        while queue and found is None:
            nxt: list[CellAddr] = []
            for addr in queue:
                for succ in ddg.succs(addr):
                    if succ == start:
                        found = addr
                        break
                    if succ in remaining and succ not in parents:
                        parents[succ] = addr
                        nxt.append(succ)
                if found is not None:
                    break
            queue = nxt
        if found is None:
            continue
        path = [found]
        while path[-1] != start:
            path.append(parents[path[-1]])
        path.reverse()
        cycle = tuple(path) + (start,)
        if best is None or len(cycle) < len(best):
            best = cycle
    return CycleCheck(ok=False, order=None, cycle=best)


def to_json(ddg: Ddg) -> dict:
    return {
        "nodes": [addr.a1() for addr in ddg.nodes],
        "edges": [[a.a1(), b.a1()] for a, b in ddg.edges()],
    }


def to_dot(ddg: Ddg) -> str:
    """Graphviz rendering; input cells are boxed, formula cells plain."""
    lines = ["digraph ddg {"]
    for addr in ddg.nodes:
        if addr in ddg.formula_nodes:
            lines.append(f'  "{addr.a1()}";')
        else:
            lines.append(f'  "{addr.a1()}" [shape=box, style=filled, fillcolor=lightgrey];')
    for a, b in ddg.edges():
        lines.append(f'  "{a.a1()}" -> "{b.a1()}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
