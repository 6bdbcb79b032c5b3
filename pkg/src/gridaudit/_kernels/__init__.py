"""Kernel backend selection: compiled extension with pure-Python fallback.

The compiled backend is used when the extension built and the
``GRIDAUDIT_PURE`` environment variable is unset.  ``set_backend`` exists
for tests and benchmarks that want to pin one side.
"""

from __future__ import annotations

import os

from gridaudit._kernels import pure

try:
    from gridaudit._kernels import _speedups
except ImportError:  # extension not built
    _speedups = None

MAX_ROWS = pure.MAX_ROWS
MAX_COLS = pure.MAX_COLS

NUM = pure.NUM
STR = pure.STR
REF = pure.REF
NAME = pure.NAME
OP = pure.OP
LPAREN = pure.LPAREN
RPAREN = pure.RPAREN
COMMA = pure.COMMA
COLON = pure.COLON

_active = pure
if _speedups is not None and not os.environ.get("GRIDAUDIT_PURE"):
    _active = _speedups


def available_backends() -> list[str]:
    names = ["pure"]
    if _speedups is not None:
        names.append("compiled")
    return names


def active_backend() -> str:
    return _active.BACKEND


def set_backend(name: str) -> None:
    global _active, tokenize, a1_to_rowcol, rowcol_to_a1, decode_ref
    if name == "pure":
        _active = pure
    elif name == "compiled":
        if _speedups is None:
            raise RuntimeError("compiled kernels are not available")
        _active = _speedups
    else:
        raise ValueError(f"unknown backend {name!r}")
    tokenize = _active.tokenize
    a1_to_rowcol = _active.a1_to_rowcol
    rowcol_to_a1 = _active.rowcol_to_a1
    decode_ref = _active.decode_ref


tokenize = _active.tokenize
a1_to_rowcol = _active.a1_to_rowcol
rowcol_to_a1 = _active.rowcol_to_a1
decode_ref = _active.decode_ref
