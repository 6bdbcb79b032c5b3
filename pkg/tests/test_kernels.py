"""Tokenizer and address kernels, checked on both backends."""

from __future__ import annotations

import string

import pytest
from hypothesis import given, strategies as st

from gridaudit import _kernels as kernels
from gridaudit._kernels import pure

BACKENDS = [pure]
if "compiled" in kernels.available_backends():
    from gridaudit._kernels import _speedups

    BACKENDS.append(_speedups)

backend = pytest.mark.parametrize(
    "k", BACKENDS, ids=[b.BACKEND for b in BACKENDS]
)


def brute_a1(row: int, col: int) -> str:
    letters = ""
    while col > 0:
        col, rem = divmod(col - 1, 26)
        letters = string.ascii_uppercase[rem] + letters
    return letters + str(row)


@backend
def test_a1_to_rowcol_examples(k):
    assert k.a1_to_rowcol("A1") == (1, 1)
    assert k.a1_to_rowcol("AA10") == (10, 27)
    assert k.a1_to_rowcol("B3") == (3, 2)
    assert k.a1_to_rowcol("XFD1048576") == (1_048_576, 16_384)


@backend
def test_a1_case_insensitive(k):
    assert k.a1_to_rowcol("aa10") == k.a1_to_rowcol("AA10")
    assert k.a1_to_rowcol("b2") == (2, 2)


@backend
@pytest.mark.parametrize("bad", ["1A", "A0", "A", "10", "", "A1B", "$A$1", "A 1"])
def test_a1_rejects_malformed(k, bad):
    with pytest.raises(ValueError):
        k.a1_to_rowcol(bad)


@backend
@pytest.mark.parametrize("bad", ["XFE1", "A1048577", "ZZZZ1"])
def test_a1_rejects_out_of_bounds(k, bad):
    with pytest.raises(ValueError):
        k.a1_to_rowcol(bad)


@backend
def test_rowcol_to_a1_examples(k):
    assert k.rowcol_to_a1(1, 1) == "A1"
    assert k.rowcol_to_a1(10, 27) == "AA10"
    assert k.rowcol_to_a1(3, 52) == "AZ3"
    assert k.rowcol_to_a1(1, 16_384) == "XFD1"
    with pytest.raises(ValueError):
        k.rowcol_to_a1(0, 1)
    with pytest.raises(ValueError):
        k.rowcol_to_a1(1, 0)


@backend
@given(row=st.integers(1, 1_048_576), col=st.integers(1, 16_384))
def test_a1_round_trip(k, row, col):
    text = k.rowcol_to_a1(row, col)
    assert text == brute_a1(row, col)
    assert k.a1_to_rowcol(text) == (row, col)


@backend
def test_decode_ref_flags(k):
    assert k.decode_ref("A1") == (0, 1, 0, 1)
    assert k.decode_ref("$A1") == (1, 1, 0, 1)
    assert k.decode_ref("A$1") == (0, 1, 1, 1)
    assert k.decode_ref("$C$3") == (1, 3, 1, 3)
    assert k.decode_ref("aa10") == (0, 27, 0, 10)


@backend
@pytest.mark.parametrize("bad", ["$1", "A$", "$A$", "A0", "$$A1", "A$0"])
def test_decode_ref_rejects(k, bad):
    with pytest.raises(ValueError):
        k.decode_ref(bad)


@backend
def test_tokenize_simple_sum(k):
    toks = k.tokenize("SUM(A1:B2)*2")
    assert [(t[0], t[1]) for t in toks] == [
        (kernels.NAME, "SUM"),
        (kernels.LPAREN, "("),
        (kernels.NAME, "A1"),
        (kernels.COLON, ":"),
        (kernels.NAME, "B2"),
        (kernels.RPAREN, ")"),
        (kernels.OP, "*"),
        (kernels.NUM, "2"),
    ]
    assert [t[2] for t in toks] == [0, 3, 4, 6, 7, 9, 10, 11]


@backend
def test_tokenize_dollar_refs_and_strings(k):
    toks = k.tokenize('$C$3&"a""b"')
    assert [(t[0], t[1]) for t in toks] == [
        (kernels.REF, "$C$3"),
        (kernels.OP, "&"),
        (kernels.STR, 'a"b'),
    ]


@backend
def test_tokenize_comparison_operators(k):
    toks = k.tokenize("A1<>B1<=2>=3")
    ops = [t[1] for t in toks if t[0] == kernels.OP]
    assert ops == ["<>", "<=", ">="]


@backend
def test_tokenize_numbers(k):
    kinds = {t[1]: t[0] for t in k.tokenize("1.5,0.25,2e3,1E-2,.5")}
    assert kinds == {
        "1.5": kernels.NUM,
        "0.25": kernels.NUM,
        "2e3": kernels.NUM,
        "1E-2": kernels.NUM,
        ".5": kernels.NUM,
        ",": kernels.COMMA,
    }


@backend
def test_tokenize_whitespace_insignificant(k):
    spaced = k.tokenize(" A1  +\tB1 ")
    tight = k.tokenize("A1+B1")
    assert [(t[0], t[1]) for t in spaced] == [(t[0], t[1]) for t in tight]


@backend
def test_tokenize_start_offset(k):
    toks = k.tokenize("=A1+1", 1)
    assert [t[1] for t in toks] == ["A1", "+", "1"]
    assert toks[0][2] == 1


@backend
def test_tokenize_errors_carry_position(k):
    with pytest.raises(ValueError) as err:
        k.tokenize('1+"abc')
    assert err.value.args[1] == 2
    with pytest.raises(ValueError):
        k.tokenize("A1 # B1")
    with pytest.raises(ValueError):
        k.tokenize("$+1")


FORMULA_ALPHABET = 'AB12+*(),:$"<>= .xyz&^'


@given(st.text(alphabet=FORMULA_ALPHABET, max_size=40))
def test_backends_agree_on_arbitrary_text(text):
    if len(BACKENDS) < 2:
        return
    outcomes = []
    for k in BACKENDS:
        try:
            outcomes.append(("ok", k.tokenize(text)))
        except ValueError as err:
            outcomes.append(("err", err.args[1]))
    assert outcomes[0] == outcomes[1], f"backends disagree on {text!r}"


@given(
    row=st.integers(1, 1_048_576),
    col=st.integers(1, 16_384),
    flags=st.tuples(st.booleans(), st.booleans()),
)
def test_backends_agree_on_refs(row, col, flags):
    if len(BACKENDS) < 2:
        return
    col_abs, row_abs = flags
    text = ("$" if col_abs else "") + brute_a1(row, col)
    if row_abs:
        i = 1 if col_abs else 0
        while text[i].isalpha():
            i += 1
        text = text[:i] + "$" + text[i:]
    answers = {k.decode_ref(text) for k in BACKENDS}
    assert len(answers) == 1
    assert answers.pop() == (int(col_abs), col, int(row_abs), row)


def test_backend_selection_round_trip():
    names = kernels.available_backends()
    assert names[0] == "pure"
    before = kernels.active_backend()
    try:
        for name in names:
            kernels.set_backend(name)
            assert kernels.active_backend() == name
            assert kernels.tokenize("A1")[0][0] == kernels.NAME
    finally:
        kernels.set_backend(before)
    with pytest.raises(ValueError):
        kernels.set_backend("gpu")


def test_grid_limits_exported():
    assert kernels.MAX_ROWS == 1_048_576
    assert kernels.MAX_COLS == 16_384
