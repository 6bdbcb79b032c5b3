"""Result-cell curation and data-module recovery.

A curated sheet is viewed through its result cells: the sinks of the
dependency graph, minus anything the auditor excludes as a mere
check-sum.  Each remaining cell contributes to one or more results; a
cell feeding several results is itself promoted to an interior result.
The sheet then falls apart into data modules, one per result, each
holding the cells that contribute to that result alone.
"""

from __future__ import annotations

from dataclasses import dataclass

from gridaudit.ddg import Ddg, check_acyclic
from gridaudit.errors import CyclicDDG, InvalidParams, NotASink
from gridaudit.grid import CellAddr


def module_id(result: CellAddr) -> str:
    return f"{result.a1()}-module"


def normalize_module_id(text: str) -> str:
    """Accept 'A3' and 'a3-module' alike; canonical form is 'A3-module'."""
    base = text[: -len("-module")] if text.endswith("-module") else text
    return f"{base.upper()}-module"


@dataclass(frozen=True)
class SinkCuration:
    """Exclusion state over one dependency graph.

    ``active`` is always exactly the sink set of the graph induced on the
    non-excluded nodes; ``history`` records exclusions in order.
    """

    active: tuple[CellAddr, ...]
    excluded: frozenset[CellAddr]
    history: tuple[CellAddr, ...]


def _active_sinks(ddg: Ddg, excluded: frozenset[CellAddr]) -> tuple[CellAddr, ...]:
    return tuple(
        addr
        for addr in ddg.nodes
        if addr not in excluded and all(s in excluded for s in ddg.succs(addr))
    )


def curate_init(ddg: Ddg) -> SinkCuration:
    """Start curation from the graph's sinks; the graph must be acyclic."""
    verdict = check_acyclic(ddg)
    if not verdict.ok:
        raise CyclicDDG(verdict.cycle)
    return SinkCuration(
        active=_active_sinks(ddg, frozenset()),
        excluded=frozenset(),
        history=(),
    )


def exclude_sink(cur: SinkCuration, ddg: Ddg, cell: CellAddr) -> SinkCuration:
    """Drop one active result cell.

    Predecessors whose every reader is now excluded become active sinks
    themselves, mirroring the interactive check-sum removal loop.
    """
    if cell not in cur.active:
        raise NotASink(f"{cell.a1()} is not an active result cell")
    excluded = cur.excluded | {cell}
    return SinkCuration(
        active=_active_sinks(ddg, excluded),
        excluded=excluded,
        history=cur.history + (cell,),
    )


def restore_sink(cur: SinkCuration, ddg: Ddg, cell: CellAddr) -> SinkCuration:
    """Undo one exclusion; the rest of the history stays in place."""
    if cell not in cur.excluded:
        raise NotASink(f"{cell.a1()} is not an excluded result cell")
    excluded = cur.excluded - {cell}
    return SinkCuration(
        active=_active_sinks(ddg, excluded),
        excluded=excluded,
        history=tuple(h for h in cur.history if h != cell),
    )


@dataclass(frozen=True)
class DataModule:
    """One result cell and everything that feeds only it."""

    id: str
    result: CellAddr
    cells: tuple[CellAddr, ...]
    promoted: bool

    @property
    def size(self) -> int:
        return len(self.cells)


@dataclass(frozen=True)
class ModuleRecovery:
    modules: tuple[DataModule, ...]
    orphans: tuple[CellAddr, ...]

    def by_id(self) -> dict[str, DataModule]:
        return {m.id: m for m in self.modules}


def recover_modules(
    ddg: Ddg,
    results: list[CellAddr],
    excluded: frozenset[CellAddr] = frozenset(),
) -> ModuleRecovery:
    """Partition contributing cells into single-result modules.

    ``results`` seeds the result set; a cell whose contributions reach
    two or more results is promoted into it.  Excluded cells are outside
    the analysis entirely; cells reaching no result (only possible after
    exclusions or with a custom seed) are reported as orphans.  The graph
    must be acyclic.
    """
    node_set = set(ddg.nodes) - excluded
    for r in results:
        if r not in node_set:
            raise InvalidParams(f"result {r.a1()} is not a live node of the graph")

    verdict = check_acyclic(ddg)
    if not verdict.ok:
        raise CyclicDDG(verdict.cycle)

    # cells that reach at least one result, walking the induced graph
    scope: set[CellAddr] = set()
    queue = list(results)
    while queue:
        addr = queue.pop()
        if addr in scope:
            continue
        scope.add(addr)
        for pred in ddg.preds(addr):
            if pred in node_set and pred not in scope:
                queue.append(pred)

    result_set = set(results)
    contributes: dict[CellAddr, frozenset[CellAddr]] = {}
    for addr in reversed(verdict.order):
        if addr not in scope or addr in result_set:
            continue
        reached: set[CellAddr] = set()
        for succ in ddg.succs(addr):
            if succ not in scope:
                continue
            if succ in result_set:
                reached.add(succ)
            else:
                reached.update(contributes[succ])
        if len(reached) > 1:
            result_set.add(addr)
        else:
            contributes[addr] = frozenset(reached)

    members: dict[CellAddr, list[CellAddr]] = {r: [] for r in result_set}
    for addr, reached in contributes.items():
        (target,) = reached
        members[target].append(addr)

    seeded = set(results)
    modules = tuple(
        DataModule(
            id=module_id(result),
            result=result,
            cells=tuple(sorted(members[result] + [result])),
            promoted=result not in seeded,
        )
        for result in sorted(result_set)
    )
    orphans = tuple(sorted(node_set - scope))
    return ModuleRecovery(modules=modules, orphans=orphans)


@dataclass(frozen=True)
class BoundaryViolation:
    """A dependency crossing module boundaries away from a result cell."""

    edge: tuple[CellAddr, CellAddr]
    src_module: str
    dst_module: str


def module_boundary_check(
    modules: list[DataModule], ddg: Ddg
) -> list[BoundaryViolation]:
    """Verify that only result cells are referenced across modules.

    Empty on every valid partition; anything else names the offending
    edge and both modules.
    """
    owner: dict[CellAddr, DataModule] = {}
    for m in modules:
        for addr in m.cells:
            owner[addr] = m
    violations = []
    for a, b in ddg.edges():
        ma = owner.get(a)
        mb = owner.get(b)
        if ma is None or mb is None or ma.id == mb.id:
            continue
        if a != ma.result:
            violations.append(
                BoundaryViolation(edge=(a, b), src_module=ma.id, dst_module=mb.id)
            )
    return violations
