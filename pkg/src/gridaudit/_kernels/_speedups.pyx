# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled implementations of the hot per-cell kernels.

Must stay observably identical to ``pure.py``: same tokens, same error
messages, same (message, position) ValueError args.
"""

BACKEND = "compiled"

MAX_ROWS = 1_048_576
MAX_COLS = 16_384

NUM = "num"
STR = "str"
REF = "ref"
NAME = "name"
OP = "op"
LPAREN = "lparen"
RPAREN = "rparen"
COMMA = "comma"
COLON = "colon"

cdef long _MAX_ROWS = 1_048_576
cdef long _MAX_COLS = 16_384


cdef inline bint _is_letter(Py_UCS4 c):
    return (u"A" <= c <= u"Z") or (u"a" <= c <= u"z") or c == u"_"


cdef inline bint _is_digit(Py_UCS4 c):
    return u"0" <= c <= u"9"


def a1_to_rowcol(str text):
    """Decode an A1 address (no $ markers) to a 1-based (row, col) pair."""
    cdef Py_ssize_t n = len(text)
    cdef Py_ssize_t i = 0
    cdef long col = 0
    cdef long row = 0
    cdef Py_UCS4 c
    while i < n:
        c = text[i]
        if u"A" <= c <= u"Z":
            col = col * 26 + (<long> c - 64)
        elif u"a" <= c <= u"z":
            col = col * 26 + (<long> c - 96)
        else:
            break
        if col > _MAX_COLS:
            raise ValueError("column out of range", i)
        i += 1
    if i == 0 or i == n:
        raise ValueError("not an A1 address", i)
    if not (u"1" <= text[i] <= u"9"):
        raise ValueError("row must start with a nonzero digit", i)
    while i < n:
        c = text[i]
        if not (u"0" <= c <= u"9"):
            raise ValueError("trailing characters after row number", i)
        row = row * 10 + (<long> c - 48)
        if row > _MAX_ROWS:
            raise ValueError("row out of range", i)
        i += 1
    return row, col


def rowcol_to_a1(long row, long col):
    """Render a 1-based (row, col) pair as an A1 address."""
    if row < 1 or col < 1:
        raise ValueError("row and column must be >= 1", 0)
    cdef str letters = ""
    cdef long c = col
    cdef long rem
    while c > 0:
        c, rem = divmod(c - 1, 26)
        letters = chr(65 + rem) + letters
    return letters + str(row)


def decode_ref(str text):
    """Decode a cell reference with optional $ markers.

    Returns (col_abs, col, row_abs, row) with 0/1 absoluteness flags.
    """
    cdef Py_ssize_t n = len(text)
    cdef Py_ssize_t i = 0
    cdef Py_ssize_t start
    cdef int col_abs = 0
    cdef int row_abs = 0
    cdef long col = 0
    cdef long row = 0
    cdef Py_UCS4 c
    if i < n and text[i] == u"$":
        col_abs = 1
        i += 1
    start = i
    while i < n:
        c = text[i]
        if u"A" <= c <= u"Z":
            col = col * 26 + (<long> c - 64)
        elif u"a" <= c <= u"z":
            col = col * 26 + (<long> c - 96)
        else:
            break
        if col > _MAX_COLS:
            raise ValueError("column out of range", i)
        i += 1
    if i == start:
        raise ValueError("reference needs column letters", i)
    if i < n and text[i] == u"$":
        row_abs = 1
        i += 1
    if i >= n or not (u"1" <= text[i] <= u"9"):
        raise ValueError("reference row must start with a nonzero digit", i)
    while i < n:
        c = text[i]
        if not (u"0" <= c <= u"9"):
            raise ValueError("trailing characters in reference", i)
        row = row * 10 + (<long> c - 48)
        if row > _MAX_ROWS:
            raise ValueError("row out of range", i)
        i += 1
    return col_abs, col, row_abs, row


def tokenize(str src, Py_ssize_t start=0):
    """Split formula text into (kind, text, pos) tokens.

    See the pure backend for the token contract; behavior is identical.
    """
    cdef list tokens = []
    cdef Py_ssize_t n = len(src)
    cdef Py_ssize_t i = start
    cdef Py_ssize_t pos, j, k
    cdef Py_UCS4 c
    cdef list parts
    cdef str head
    while i < n:
        c = src[i]
        if c == u" " or c == u"\t" or c == u"\r" or c == u"\n":
            i += 1
            continue
        pos = i
        if c == u'"':
            i += 1
            parts = []
            while True:
                if i >= n:
                    raise ValueError("unterminated string literal", pos)
                c = src[i]
                if c == u'"':
                    if i + 1 < n and src[i + 1] == u'"':
                        parts.append('"')
                        i += 2
                        continue
                    i += 1
                    break
                parts.append(chr(c))
                i += 1
            tokens.append((STR, "".join(parts), pos))
            continue
        if _is_digit(c) or (c == u"." and i + 1 < n and _is_digit(src[i + 1])):
            j = i
            while j < n and _is_digit(src[j]):
                j += 1
            if j < n and src[j] == u".":
                j += 1
                while j < n and _is_digit(src[j]):
                    j += 1
            if j < n and (src[j] == u"e" or src[j] == u"E"):
                k = j + 1
                if k < n and (src[k] == u"+" or src[k] == u"-"):
                    k += 1
                if k < n and _is_digit(src[k]):
                    k += 1
                    while k < n and _is_digit(src[k]):
                        k += 1
                    j = k
            tokens.append((NUM, src[i:j], pos))
            i = j
            continue
        if c == u"$":
            j = i + 1
            while j < n and ((u"A" <= src[j] <= u"Z") or (u"a" <= src[j] <= u"z")):
                j += 1
            if j == i + 1:
                raise ValueError("expected column letters after '$'", pos)
            if j < n and src[j] == u"$":
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
            while j < n and (_is_letter(src[j]) or _is_digit(src[j]) or src[j] == u"."):
                j += 1
            if j < n and src[j] == u"$":
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
        if c == u"(":
            tokens.append((LPAREN, "(", pos))
            i += 1
            continue
        if c == u")":
            tokens.append((RPAREN, ")", pos))
            i += 1
            continue
        if c == u",":
            tokens.append((COMMA, ",", pos))
            i += 1
            continue
        if c == u":":
            tokens.append((COLON, ":", pos))
            i += 1
            continue
        if c == u"<":
            if i + 1 < n and src[i + 1] == u">":
                tokens.append((OP, "<>", pos))
                i += 2
            elif i + 1 < n and src[i + 1] == u"=":
                tokens.append((OP, "<=", pos))
                i += 2
            else:
                tokens.append((OP, "<", pos))
                i += 1
            continue
        if c == u">":
            if i + 1 < n and src[i + 1] == u"=":
                tokens.append((OP, ">=", pos))
                i += 2
            else:
                tokens.append((OP, ">", pos))
                i += 1
            continue
        if c == u"+" or c == u"-" or c == u"*" or c == u"/" or c == u"^" or c == u"&" or c == u"=":
            tokens.append((OP, chr(c), pos))
            i += 1
            continue
        raise ValueError(f"unexpected character {chr(c)!r}", pos)
    return tokens
