"""Pure-Python implementations of the hot per-cell kernels.

These are the reference semantics; ``_speedups`` (Cython) must behave
identically, token for token, error for error.  All errors are raised as
``ValueError`` with args ``(message, position)`` so callers can re-wrap
them without this module depending on the package's exception types.
"""

from __future__ import annotations

BACKEND = "pure"

MAX_ROWS = 1_048_576
MAX_COLS = 16_384

# token kinds
NUM = "num"
STR = "str"
REF = "ref"
NAME = "name"
OP = "op"
LPAREN = "lparen"
RPAREN = "rparen"
COMMA = "comma"
COLON = "colon"

_OPS_SINGLE = set("+-*/^&=")


def a1_to_rowcol(text: str) -> tuple[int, int]:
    """Decode an A1 address (no $ markers) to a 1-based (row, col) pair."""
    n = len(text)
    i = 0
    col = 0
    while i < n:
        c = text[i]
        if "A" <= c <= "Z":
            col = col * 26 + (ord(c) - 64)
        elif "a" <= c <= "z":
            col = col * 26 + (ord(c) - 96)
        else:
            break
        if col > MAX_COLS:
            raise ValueError("column out of range", i)
        i += 1
    if i == 0 or i == n:
        raise ValueError("not an A1 address", i)
    if not "1" <= text[i] <= "9":
        raise ValueError("row must start with a nonzero digit", i)
    row = 0
    while i < n:
        c = text[i]
        if not "0" <= c <= "9":
            raise ValueError("trailing characters after row number", i)
        row = row * 10 + (ord(c) - 48)
        if row > MAX_ROWS:
            raise ValueError("row out of range", i)
        i += 1
    return row, col


def rowcol_to_a1(row: int, col: int) -> str:
    """Render a 1-based (row, col) pair as an A1 address."""
    if row < 1 or col < 1:
        raise ValueError("row and column must be >= 1", 0)
    letters = ""
    c = col
    while c > 0:
        c, rem = divmod(c - 1, 26)
        letters = chr(65 + rem) + letters
    return letters + str(row)


def decode_ref(text: str) -> tuple[int, int, int, int]:
    """Decode a cell reference with optional $ markers.

    Returns (col_abs, col, row_abs, row) with 0/1 absoluteness flags.
    """
    n = len(text)
    i = 0
    col_abs = 0
    if i < n and text[i] == "$":
        col_abs = 1
        i += 1
    col = 0
    start = i
    while i < n:
        c = text[i]
        if "A" <= c <= "Z":
            col = col * 26 + (ord(c) - 64)
        elif "a" <= c <= "z":
            col = col * 26 + (ord(c) - 96)
        else:
            break
        if col > MAX_COLS:
            raise ValueError("column out of range", i)
        i += 1
    if i == start:
        raise ValueError("reference needs column letters", i)
    row_abs = 0
    if i < n and text[i] == "$":
        row_abs = 1
        i += 1
    if i >= n or not "1" <= text[i] <= "9":
        raise ValueError("reference row must start with a nonzero digit", i)
    row = 0
    while i < n:
        c = text[i]
        if not "0" <= c <= "9":
            raise ValueError("trailing characters in reference", i)
        row = row * 10 + (ord(c) - 48)
        if row > MAX_ROWS:
            raise ValueError("row out of range", i)
        i += 1
    return col_abs, col, row_abs, row


def _is_letter(c: str) -> bool:
    return "A" <= c <= "Z" or "a" <= c <= "z" or c == "_"


def _is_digit(c: str) -> bool:
    return "0" <= c <= "9"


def tokenize(src: str, start: int = 0) -> list[tuple[str, str, int]]:
    """Split formula text into (kind, text, pos) tokens.

    Whitespace is insignificant.  String literals are returned with quotes
    stripped and doubled quotes resolved.  $-marked cell references become
    REF tokens; bare word runs become NAME tokens (the parser decides
    whether a NAME is a cell reference or a function name).
    """
    tokens: list[tuple[str, str, int]] = []
    n = len(src)
    i = start
    while i < n:
        c = src[i]
        if c in " \t\r\n":
            i += 1
            continue
        pos = i
        if c == '"':
            i += 1
            parts: list[str] = []
            while True:
                if i >= n:
                    raise ValueError("unterminated string literal", pos)
                c = src[i]
                if c == '"':
                    if i + 1 < n and src[i + 1] == '"':
                        parts.append('"')
                        i += 2
                        continue
                    i += 1
                    break
                parts.append(c)
                i += 1
            tokens.append((STR, "".join(parts), pos))
            continue
        if _is_digit(c) or (c == "." and i + 1 < n and _is_digit(src[i + 1])):
            j = i
            while j < n and _is_digit(src[j]):
                j += 1
            if j < n and src[j] == ".":
                j += 1
                while j < n and _is_digit(src[j]):
                    j += 1
            if j < n and src[j] in "eE":
                k = j + 1
                if k < n and src[k] in "+-":
                    k += 1
                if k < n and _is_digit(src[k]):
                    k += 1
                    while k < n and _is_digit(src[k]):
                        k += 1
                    j = k
            tokens.append((NUM, src[i:j], pos))
            i = j
            continue
        if c == "$":
            # $-prefixed reference: $A1 or $A$1
            j = i + 1
            while j < n and ("A" <= src[j] <= "Z" or "a" <= src[j] <= "z"):
                j += 1
            if j == i + 1:
                raise ValueError("expected column letters after '$'", pos)
            if j < n and src[j] == "$":
                j += 1
            k = j
            while k < n and _is_digit(src[k]):
                k += 1
            if k == j:
                raise ValueError("expected row number in reference", pos)
            tokens.append((REF, src[i:k], pos))
            i = k
            continue
        if _is_letter(c):
            j = i
            while j < n and (_is_letter(src[j]) or _is_digit(src[j]) or src[j] == "."):
                j += 1
            # letters immediately followed by $row form a mixed reference (A$1)
            if j < n and src[j] == "$":
                head = src[i:j]
                if head.isalpha():
                    k = j + 1
                    while k < n and _is_digit(src[k]):
                        k += 1
                    if k == j + 1:
                        raise ValueError("expected row number after '$'", pos)
                    tokens.append((REF, src[i:k], pos))
                    i = k
                    continue
            tokens.append((NAME, src[i:j], pos))
            i = j
            continue
        if c == "(":
            tokens.append((LPAREN, c, pos))
            i += 1
            continue
        if c == ")":
            tokens.append((RPAREN, c, pos))
            i += 1
            continue
        if c == ",":
            tokens.append((COMMA, c, pos))
            i += 1
            continue
        if c == ":":
            tokens.append((COLON, c, pos))
            i += 1
            continue
        if c == "<":
            if i + 1 < n and src[i + 1] == ">":
                tokens.append((OP, "<>", pos))
                i += 2
            elif i + 1 < n and src[i + 1] == "=":
                tokens.append((OP, "<=", pos))
                i += 2
            else:
                tokens.append((OP, "<", pos))
                i += 1
            continue
        if c == ">":
            if i + 1 < n and src[i + 1] == "=":
                tokens.append((OP, ">=", pos))
                i += 2
            else:
                tokens.append((OP, ">", pos))
                i += 1
            continue
        if c in _OPS_SINGLE:
            tokens.append((OP, c, pos))
            i += 1
            continue
        raise ValueError(f"unexpected character {c!r}", pos)
    return tokens
