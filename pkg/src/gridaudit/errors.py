"""Exception hierarchy shared by all analyses.

Every error class name doubles as the machine-readable ``code`` emitted by
the CLI and the HTTP service, so keep names stable.
"""

from __future__ import annotations


class GridAuditError(Exception):
    """Base class for all toolkit errors."""

    @property
    def code(self) -> str:
        return type(self).__name__


class MalformedAddress(GridAuditError):
    """A1 address text does not match ``[A-Z]+[1-9][0-9]*`` or exceeds grid limits."""


class MalformedWorkbook(GridAuditError):
    """Workbook source is not valid CSV/JSON or exceeds the grid extent."""


class MultipleSheets(MalformedWorkbook):
    """The JSON workbook wrapper contains more than one sheet."""


class ParseError(GridAuditError):
    """Formula text is syntactically invalid.

    ``pos`` is the 0-based character offset into the original source text.
    """

    def __init__(self, message: str, pos: int, src: str = ""):
        super().__init__(f"{message} (at position {pos})")
        self.message = message
        self.pos = pos
        self.src = src


class AnalysisParseErrors(GridAuditError):
    """One or more formula cells failed to parse; analysis aborts.

    Carries every offending cell so auditors can fix them in one pass.
    """

    def __init__(self, failures):
        self.failures = list(failures)  # [(CellAddr, ParseError)]
        cells = ", ".join(addr.a1() for addr, _ in self.failures)
        super().__init__(f"{len(self.failures)} formula cell(s) failed to parse: {cells}")


class OutOfGrid(GridAuditError):
    """A resolved cell reference falls outside the grid."""


class LevelMismatch(GridAuditError):
    """Partition diff called with fine level not strictly finer than coarse."""


class TooFewUnits(GridAuditError):
    """Pattern-outlier scan needs at least 3 units; report 'no pattern basis'."""


class CyclicDDG(GridAuditError):
    """Dependency graph contains a cycle; module analysis requires acyclicity."""

    def __init__(self, cycle):
        self.cycle = list(cycle)
        super().__init__("cyclic dependencies: " + " -> ".join(a.a1() for a in self.cycle))


class NotASink(GridAuditError):
    """Cell offered for exclusion is not a current sink."""


class UnknownModule(GridAuditError):
    """Module id does not name a module of this analysis."""


class NotAModuleVertex(GridAuditError):
    """Fish-eye focus must be a module vertex."""


class SheetMismatch(GridAuditError):
    """Abstractions passed together were not derived from the same sheet."""


class InvalidParams(GridAuditError):
    """Analysis parameters violate their invariants."""
