"""The ``(x1,...,xr;y1,...,ys)^n = 0`` notation for solutions."""

from __future__ import annotations

import re
from typing import Sequence

__all__ = ["LiteralError", "parse_solution_literal", "render_solution"]


class LiteralError(ValueError):
    def __init__(self, text: str, pos: int, msg: str):
        self.text, self.pos = text, pos
        super().__init__(f"{msg} at position {pos}\n  {text}\n  {' ' * pos}^")


_INT = re.compile(r"\s*(\d+)\s*")


def _expect(text: str, pos: int, ch: str) -> int:
    while pos < len(text) and text[pos].isspace():
        pos += 1
    if pos >= len(text) or text[pos] != ch:
        found = repr(text[pos]) if pos < len(text) else "end of input"
        raise LiteralError(text, pos, f"expected {ch!r}, found {found}")
    return pos + 1


def _int_list(text: str, pos: int, stop: str) -> tuple[list[int], int]:
    values = []
    while True:
        m = _INT.match(text, pos)
        if not m:
            raise LiteralError(text, pos, "expected a non-negative integer")
        values.append(int(m.group(1)))
        pos = m.end()
        if pos < len(text) and text[pos] == ",":
            pos += 1
            continue
        if pos < len(text) and text[pos] == stop:
            return values, pos + 1
        found = repr(text[pos]) if pos < len(text) else "end of input"
        raise LiteralError(text, pos, f"expected ',' or {stop!r}, found {found}")


def parse_solution_literal(text: str) -> tuple[int, list[int], list[int]]:
    """Parse ``"(3,5,8;7,7)^4 = 0"`` into ``(4, [3, 5, 8], [7, 7])``."""
    pos = _expect(text, 0, "(")
    lhs, pos = _int_list(text, pos, ";")
    rhs, pos = _int_list(text, pos, ")")
    pos = _expect(text, pos, "^")
    m = _INT.match(text, pos)
    if not m:
        raise LiteralError(text, pos, "expected the exponent")
    n = int(m.group(1))
    pos = m.end()
    rest = text[pos:].strip()
    if rest and re.fullmatch(r"=\s*0", rest) is None:
        raise LiteralError(text, pos, "trailing text (only '= 0' is allowed)")
    if n < 1:
        raise LiteralError(text, m.start(1), "exponent must be positive")
    return n, lhs, rhs


def render_solution(n: int, lhs: Sequence[int], rhs: Sequence[int]) -> str:
    return f"({','.join(map(str, lhs))};{','.join(map(str, rhs))})^{n}"
