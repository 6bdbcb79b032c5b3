"""Formula parsing, reference resolution, and constant extraction."""

from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from gridaudit.errors import AnalysisParseErrors, OutOfGrid, ParseError
from gridaudit.formula import (
    BinOp,
    CellRef,
    FuncCall,
    NumberLit,
    RangeRef,
    Ref,
    TextLit,
    UnaryOp,
    constants_in,
    parse_all,
    parse_formula,
    referenced_cells,
    resolve,
)
from gridaudit.grid import CellAddr

from .conftest import A, sheet_from_csv


def rel(dr: int, dc: int) -> CellRef:
    return CellRef(col_abs=False, col=dc, row_abs=False, row=dr)


def absolute(row: int, col: int) -> CellRef:
    return CellRef(col_abs=True, col=col, row_abs=True, row=row)


def num(x) -> NumberLit:
    return NumberLit(float(x))


def test_parse_relative_sum():
    ast = parse_formula("=A1+B1", A("C1"))
    assert ast == BinOp("+", Ref(rel(0, -2)), Ref(rel(0, -1)))


def test_parse_mixed_range_call():
    ast = parse_formula("=SUM($C$3:C5)*2", A("D4"))
    assert ast == BinOp(
        "*",
        FuncCall("SUM", (RangeRef(absolute(3, 3), rel(1, -1)),)),
        num(2),
    )


def test_parse_rejects_stray_paren():
    with pytest.raises(ParseError):
        parse_formula("=)", A("A1"))


def test_parse_requires_leading_equals():
    with pytest.raises(ParseError):
        parse_formula("A1+1", A("B1"))


@pytest.mark.parametrize(
    "src",
    ["=1+", "=(1", "=SUM(1,", "=SUM(1", "=1 2", "=A1:", "=A1:2", "=foo!", '="abc'],
)
def test_parse_rejects_malformed(src):
    with pytest.raises(ParseError):
        parse_formula(src, A("A1"))


def test_parse_error_position_is_source_relative():
    with pytest.raises(ParseError) as err:
        parse_formula("=IF(A1>0", A("A1"))
    assert err.value.pos == 8


def test_precedence_mul_over_add():
    assert parse_formula("=1+2*3", A("A1")) == BinOp(
        "+", num(1), BinOp("*", num(2), num(3))
    )


def test_precedence_add_over_compare():
    assert parse_formula("=1<2+3", A("A1")) == BinOp(
        "<", num(1), BinOp("+", num(2), num(3))
    )


def test_left_associativity():
    assert parse_formula("=1-2-3", A("A1")) == BinOp(
        "-", BinOp("-", num(1), num(2)), num(3)
    )
    assert parse_formula("=8/2/2", A("A1")) == BinOp(
        "/", BinOp("/", num(8), num(2)), num(2)
    )
    assert parse_formula("=2^3^2", A("A1")) == BinOp(
        "^", BinOp("^", num(2), num(3)), num(2)
    )
    assert parse_formula('="a"&"b"&"c"', A("A1")) == BinOp(
        "&", BinOp("&", TextLit("a"), TextLit("b")), TextLit("c")
    )


def test_unary_minus_nests_and_binds_tight():
    assert parse_formula("=--1", A("A1")) == UnaryOp("-", UnaryOp("-", num(1)))
    assert parse_formula("=-A1^2", A("B1")) == BinOp(
        "^", UnaryOp("-", Ref(rel(0, -1))), num(2)
    )


def test_function_names_uppercase_and_nullary():
    assert parse_formula("=sum(A1)", A("B1")) == FuncCall("SUM", (Ref(rel(0, -1)),))
    assert parse_formula("=PI()", A("A1")) == FuncCall("PI", ())


def test_nested_call_with_comparison_args():
    ast = parse_formula("=IF(A1>0,1,-1)", A("B1"))
    assert ast == FuncCall(
        "IF",
        (BinOp(">", Ref(rel(0, -1)), num(0)), num(1), UnaryOp("-", num(1))),
    )


def test_parens_change_shape():
    flat = parse_formula("=(1+2)*3", A("A1"))
    assert flat == BinOp("*", BinOp("+", num(1), num(2)), num(3))


def test_resolve_examples():
    assert resolve(rel(-1, -1), A("B2")) == A("A1")
    assert resolve(absolute(3, 3), A("Z99")) == A("C3")
    with pytest.raises(OutOfGrid):
        resolve(rel(-5, 0), A("A2"))
    with pytest.raises(OutOfGrid):
        resolve(rel(0, -1), A("A1"))


def test_referenced_cells_examples():
    ast = parse_formula("=A1+B1", A("C1"))
    assert [a.a1() for a in referenced_cells(ast, A("C1"))] == ["A1", "B1"]

    ast = parse_formula("=SUM(A1:B2)", A("C3"))
    assert [a.a1() for a in referenced_cells(ast, A("C3"))] == ["A1", "B1", "A2", "B2"]

    ast = parse_formula("=A1+A1", A("B1"))
    assert [a.a1() for a in referenced_cells(ast, A("B1"))] == ["A1"]


def test_referenced_cells_reversed_range():
    ast = parse_formula("=SUM(B2:A1)", A("C3"))
    assert [a.a1() for a in referenced_cells(ast, A("C3"))] == ["A1", "B1", "A2", "B2"]


@given(
    r1=st.integers(1, 40),
    c1=st.integers(1, 20),
    r2=st.integers(1, 40),
    c2=st.integers(1, 20),
)
def test_range_size_is_inclusive_rectangle(r1, c1, r2, c2):
    start = CellAddr(r1, c1).a1()
    end = CellAddr(r2, c2).a1()
    ast = parse_formula(f"=SUM({start}:{end})", A("AZ99"))
    cells = referenced_cells(ast, A("AZ99"))
    assert len(cells) == (abs(r1 - r2) + 1) * (abs(c1 - c2) + 1)
    assert len(set(cells)) == len(cells)


@given(
    offsets=st.lists(
        st.tuples(st.integers(-5, 5), st.integers(-5, 5)), min_size=1, max_size=4
    ),
    shift=st.tuples(st.integers(-4, 4), st.integers(-4, 4)),
)
def test_relative_formula_invariant_under_translation(offsets, shift):
    origin = CellAddr(10, 10)
    moved = CellAddr(10 + shift[0], 10 + shift[1])

    def text_at(base: CellAddr) -> str:
        parts = [CellAddr(base.row + dr, base.col + dc).a1() for dr, dc in offsets]
        return "=" + "+".join(parts)

    assert parse_formula(text_at(origin), origin) == parse_formula(
        text_at(moved), moved
    )


@given(shift=st.tuples(st.integers(-4, 4), st.integers(-4, 4)))
def test_absolute_refs_pin_under_translation(shift):
    origin = CellAddr(10, 10)
    moved = CellAddr(10 + shift[0], 10 + shift[1])
    assert parse_formula("=$C$3+1", origin) == parse_formula("=$C$3+1", moved)
    resolved = resolve(
        parse_formula("=$C$3", moved).ref, moved
    )
    assert resolved == A("C3")


def test_parse_all_collects_every_formula(s1):
    parsed = parse_all(s1)
    assert [a.a1() for a in parsed] == ["C1", "C2", "C3"]
    assert parsed[A("C3")] == BinOp("+", Ref(rel(-2, 0)), Ref(rel(-1, 0)))


def test_parse_all_reports_all_failures():
    sheet = sheet_from_csv("=1+,2\n=),=A1\n")
    with pytest.raises(AnalysisParseErrors) as err:
        parse_all(sheet)
    assert [addr.a1() for addr, _ in err.value.failures] == ["A1", "A2"]
    assert all(isinstance(e, ParseError) for _, e in err.value.failures)
    assert "A1" in str(err.value) and "A2" in str(err.value)


def test_parse_all_empty_sheet():
    assert parse_all(sheet_from_csv("1,2\n,\n")) == {}


def test_constants_in_examples():
    assert constants_in(parse_formula("=A1*1.05", A("B1"))) == [1.05]
    assert constants_in(parse_formula("=SUM(A1:A9)", A("B1"))) == []
    assert constants_in(parse_formula("=IF(A1>0,1,-1)", A("B1"))) == [0.0, 1.0, -1.0]


def test_constants_in_text_and_nested_negation():
    assert constants_in(parse_formula('="n/a"&A1', A("B1"))) == ["n/a"]
    # minus folds only when directly on a number
    assert constants_in(parse_formula("=-(1+2)", A("B1"))) == [1.0, 2.0]
    assert constants_in(parse_formula("=--3", A("B1"))) == [-3.0]
