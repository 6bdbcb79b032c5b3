"""Formula parsing into origin-normalized ASTs.

Every reference in a parsed tree is stored relative to the cell the
formula lives in (absolute axes keep their grid coordinate), so two
formulas that are copies of each other parse to identical trees no matter
where they sit.  Grammar, in precedence order from loosest to tightest:

    formula := "=" cmp
    cmp     := add  (("=" | "<>" | "<" | "<=" | ">" | ">=") add)*
    add     := mul  (("+" | "-" | "&") mul)*
    mul     := unary (("*" | "/" | "^") unary)*
    unary   := "-" unary | atom
    atom    := number | string | ref | ref ":" ref
             | name "(" [cmp ("," cmp)*] ")" | "(" cmp ")"

All binary operators associate left.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union

from gridaudit import _kernels as kernels
from gridaudit.errors import AnalysisParseErrors, OutOfGrid, ParseError
from gridaudit.grid import CellAddr, CellKind, Sheet

_CMP_OPS = {"=", "<>", "<", "<=", ">", ">="}
_ADD_OPS = {"+", "-", "&"}
_MUL_OPS = {"*", "/", "^"}


@dataclass(frozen=True)
class CellRef:
    """One cell reference, normalized against the formula's own cell.

    A relative axis stores the offset target-minus-origin; an absolute
    axis (``$`` in the source) stores the 1-based grid coordinate.
    """

    col_abs: bool
    col: int
    row_abs: bool
    row: int

    def __repr__(self) -> str:
        col = f"C{self.col}" if self.col_abs else f"c{self.col:+d}"
        row = f"R{self.row}" if self.row_abs else f"r{self.row:+d}"
        return f"<{row}{col}>"


@dataclass(frozen=True)
class NumberLit:
    value: float


@dataclass(frozen=True)
class TextLit:
    value: str


@dataclass(frozen=True)
class Ref:
    ref: CellRef


@dataclass(frozen=True)
class RangeRef:
    start: CellRef
    end: CellRef


@dataclass(frozen=True)
class FuncCall:
    name: str
    args: tuple["Ast", ...]


@dataclass(frozen=True)
class BinOp:
    op: str
    lhs: "Ast"
    rhs: "Ast"


@dataclass(frozen=True)
class UnaryOp:
    op: str
    operand: "Ast"


Ast = Union[NumberLit, TextLit, Ref, RangeRef, FuncCall, BinOp, UnaryOp]


def _normalize(decoded: tuple[int, int, int, int], origin: CellAddr) -> CellRef:
    col_abs, col, row_abs, row = decoded
    return CellRef(
        col_abs=bool(col_abs),
        col=col if col_abs else col - origin.col,
        row_abs=bool(row_abs),
        row=row if row_abs else row - origin.row,
    )


def resolve(ref: CellRef, origin: CellAddr) -> CellAddr:
    """Absolute address of a normalized reference as seen from origin.

    Raises OutOfGrid when the target falls outside the grid.
    """
    col = ref.col if ref.col_abs else origin.col + ref.col
    row = ref.row if ref.row_abs else origin.row + ref.row
    if row < 1 or col < 1 or row > kernels.MAX_ROWS or col > kernels.MAX_COLS:
        raise OutOfGrid(f"reference {ref!r} from {origin.a1()} leaves the grid")
    return CellAddr(row, col)


class _Parser:
    def __init__(self, src: str, origin: CellAddr):
        self.src = src
        self.origin = origin
        try:
            self.tokens = kernels.tokenize(src, 1)
        except ValueError as exc:
            message, pos = exc.args
            raise ParseError(message, pos, src) from None
        self.pos = 0

    # token helpers

    def _peek(self) -> tuple[str, str, int] | None:
        if self.pos < len(self.tokens):
            return self.tokens[self.pos]
        return None

    def _next(self) -> tuple[str, str, int]:
        tok = self._peek()
        if tok is None:
            raise ParseError("unexpected end of formula", len(self.src), self.src)
        self.pos += 1
        return tok

    def _expect(self, kind: str, what: str) -> tuple[str, str, int]:
        tok = self._peek()
        if tok is None:
            raise ParseError(f"expected {what}", len(self.src), self.src)
        if tok[0] != kind:
            raise ParseError(f"expected {what}, got {tok[1]!r}", tok[2], self.src)
        self.pos += 1
        return tok

    def _at_op(self, ops: set[str]) -> str | None:
        tok = self._peek()
        if tok is not None and tok[0] == kernels.OP and tok[1] in ops:
            return tok[1]
        return None

    # grammar

    def parse(self) -> Ast:
        node = self._cmp()
        tok = self._peek()
        if tok is not None:
            raise ParseError(f"unexpected {tok[1]!r} after expression", tok[2], self.src)
        return node

    def _cmp(self) -> Ast:
        node = self._add()
        while (op := self._at_op(_CMP_OPS)) is not None:
            self.pos += 1
            node = BinOp(op, node, self._add())
        return node

    def _add(self) -> Ast:
        node = self._mul()
        while (op := self._at_op(_ADD_OPS)) is not None:
            self.pos += 1
            node = BinOp(op, node, self._mul())
        return node

    def _mul(self) -> Ast:
        node = self._unary()
        while (op := self._at_op(_MUL_OPS)) is not None:
            self.pos += 1
            node = BinOp(op, node, self._unary())
        return node

    def _unary(self) -> Ast:
        tok = self._peek()
        if tok is not None and tok[0] == kernels.OP and tok[1] == "-":
            self.pos += 1
            return UnaryOp("-", self._unary())
        return self._atom()

    def _decode_ref(self, text: str, pos: int) -> CellRef:
        try:
            decoded = kernels.decode_ref(text)
        except ValueError as exc:
            raise ParseError(exc.args[0], pos + exc.args[1], self.src) from None
        return _normalize(decoded, self.origin)

    def _name_as_ref(self, text: str, pos: int) -> CellRef:
        try:
            decoded = kernels.decode_ref(text)
        except ValueError:
            raise ParseError(
                f"{text!r} is neither a function call nor a cell reference",
                pos,
                self.src,
            ) from None
        return _normalize(decoded, self.origin)

    def _range_end(self) -> CellRef:
        tok = self._next()
        kind, text, pos = tok
        if kind == kernels.REF:
            return self._decode_ref(text, pos)
        if kind == kernels.NAME:
            return self._name_as_ref(text, pos)
        raise ParseError(f"expected a cell reference, got {text!r}", pos, self.src)

    def _maybe_range(self, start: CellRef) -> Ast:
        tok = self._peek()
        if tok is not None and tok[0] == kernels.COLON:
            self.pos += 1
            return RangeRef(start, self._range_end())
        return Ref(start)

    def _atom(self) -> Ast:
        tok = self._next()
        kind, text, pos = tok
        if kind == kernels.NUM:
            return NumberLit(float(text))
        if kind == kernels.STR:
            return TextLit(text)
        if kind == kernels.REF:
            return self._maybe_range(self._decode_ref(text, pos))
        if kind == kernels.NAME:
            nxt = self._peek()
            if nxt is not None and nxt[0] == kernels.LPAREN:
                self.pos += 1
                args: list[Ast] = []
                if self._peek() is not None and self._peek()[0] != kernels.RPAREN:
                    args.append(self._cmp())
                    while self._peek() is not None and self._peek()[0] == kernels.COMMA:
                        self.pos += 1
                        args.append(self._cmp())
                self._expect(kernels.RPAREN, "')'")
                return FuncCall(text.upper(), tuple(args))
            return self._maybe_range(self._name_as_ref(text, pos))
        if kind == kernels.LPAREN:
            node = self._cmp()
            self._expect(kernels.RPAREN, "')'")
            return node
        raise ParseError(f"unexpected {text!r}", pos, self.src)


def parse_formula(src: str, origin: CellAddr) -> Ast:
    """Parse formula source (leading ``=`` required) at the given cell."""
    if not src.startswith("="):
        raise ParseError("formula must start with '='", 0, src)
    return _Parser(src, origin).parse()


def parse_all(sheet: Sheet) -> dict[CellAddr, Ast]:
    """Parse every formula cell, row-major.

    Collects all failures before giving up, so one report names every bad
    cell instead of only the first.
    """
    parsed: dict[CellAddr, Ast] = {}
    failures: list[tuple[CellAddr, ParseError]] = []
    for addr in sorted(sheet.cells):
        content = sheet.cells[addr]
        if content.kind is not CellKind.FORMULA:
            continue
        try:
            parsed[addr] = parse_formula(str(content.value), addr)
        except ParseError as exc:
            failures.append((addr, exc))
    if failures:
        raise AnalysisParseErrors(failures)
    return parsed


def ref_nodes(ast: Ast) -> Iterator[Ref | RangeRef]:
    """All reference nodes in source order."""
    if isinstance(ast, (Ref, RangeRef)):
        yield ast
    elif isinstance(ast, FuncCall):
        for arg in ast.args:
            yield from ref_nodes(arg)
    elif isinstance(ast, BinOp):
        yield from ref_nodes(ast.lhs)
        yield from ref_nodes(ast.rhs)
    elif isinstance(ast, UnaryOp):
        yield from ref_nodes(ast.operand)


def expand_node(node: Ref | RangeRef, origin: CellAddr) -> list[CellAddr]:
    """Cells a single reference node touches; rectangles expand inclusively."""
    if isinstance(node, Ref):
        return [resolve(node.ref, origin)]
    a = resolve(node.start, origin)
    b = resolve(node.end, origin)
    r0, r1 = sorted((a.row, b.row))
    c0, c1 = sorted((a.col, b.col))
    return [CellAddr(r, c) for r in range(r0, r1 + 1) for c in range(c0, c1 + 1)]


def referenced_cells(ast: Ast, origin: CellAddr) -> list[CellAddr]:
    """Cells the formula reads, in source order, first mention kept."""
    seen: set[CellAddr] = set()
    out: list[CellAddr] = []
    for node in ref_nodes(ast):
        for addr in expand_node(node, origin):
            if addr not in seen:
                seen.add(addr)
                out.append(addr)
    return out


def constants_in(ast: Ast) -> list[float | str]:
    """Literal constants in source order.

    A unary minus directly on a number folds into the value, so ``-1``
    reports as -1.0 rather than 1.0.
    """
    out: list[float | str] = []

    def walk(node: Ast) -> None:
        if isinstance(node, NumberLit):
            out.append(node.value)
        elif isinstance(node, TextLit):
            out.append(node.value)
        elif isinstance(node, UnaryOp):
            if node.op == "-" and isinstance(node.operand, NumberLit):
                out.append(-node.operand.value)
            else:
                walk(node.operand)
        elif isinstance(node, BinOp):
            walk(node.lhs)
            walk(node.rhs)
        elif isinstance(node, FuncCall):
            for arg in node.args:
                walk(arg)

    walk(ast)
    return out
