"""A small s-expression reader/writer with source locations.

Tokens are parentheses and symbols.  A symbol may carry balanced ``{}``
groups (used for the compact unknown-variable syntax) whose contents —
including parentheses — are consumed as part of the token, so forms like
``X{iota;perm(+{nu@0}-{});0}`` lex as one symbol.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, List, Union


class SexprError(Exception):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


@dataclass(frozen=True)
class Sym:
    text: str
    line: int = 0
    col: int = 0

    def __repr__(self):
        return self.text


@dataclass(frozen=True)
class SList:
    items: tuple
    line: int = 0
    col: int = 0

    def __repr__(self):
        return "(" + " ".join(map(repr, self.items)) + ")"


SNode = Union[Sym, SList]


def _tokens(text: str) -> Iterator[tuple]:
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            line += 1
            col = 1
            i += 1
        elif c in " \t\r":
            col += 1
            i += 1
        elif c == ";":
            while i < n and text[i] != "\n":
                i += 1
        elif c in "()":
            yield c, c, line, col
            col += 1
            i += 1
        else:
            start, sline, scol = i, line, col
            depth = 0
            while i < n:
                c = text[i]
                if c == "{":
                    depth += 1
                elif c == "}":
                    if depth == 0:
                        raise SexprError("unbalanced '}' in symbol", line, col)
                    depth -= 1
                elif depth == 0 and (c in "() \t\r\n;"):
                    break
                col += 1
                i += 1
            if depth != 0:
                raise SexprError("unterminated '{' in symbol", sline, scol)
            yield "sym", text[start:i], sline, scol


def parse_all(text: str) -> List[SNode]:
    """All top-level forms in the text."""
    stack: List[list] = []
    marks: List[tuple] = []
    out: List[SNode] = []
    last = (1, 1)
    for kind, tok, line, col in _tokens(text):
        last = (line, col)
        if kind == "(":
            stack.append([])
            marks.append((line, col))
        elif kind == ")":
            if not stack:
                raise SexprError("unmatched ')'", line, col)
            items = stack.pop()
            l, c = marks.pop()
            node = SList(tuple(items), l, c)
            (stack[-1] if stack else out).append(node)
        else:
            node = Sym(tok, line, col)
            (stack[-1] if stack else out).append(node)
    if stack:
        l, c = marks[-1]
        raise SexprError("unclosed '('", l, c)
    if not out:
        raise SexprError("empty input", *last)
    return out


def parse_one(text: str) -> SNode:
    forms = parse_all(text)
    if len(forms) != 1:
        raise SexprError("expected exactly one form", forms[1].line, forms[1].col)
    return forms[0]


def render(node: SNode, width: int = 72) -> str:
    """Deterministic printing: flat when short, indented otherwise."""
    return _render(node, 0, width)


def _flat(node: SNode) -> str:
    if isinstance(node, Sym):
        return node.text
    return "(" + " ".join(_flat(x) for x in node.items) + ")"


def _render(node: SNode, indent: int, width: int) -> str:
    flat = _flat(node)
    if isinstance(node, Sym) or not node.items or indent + len(flat) <= width:
        return flat
    head, *rest = node.items
    pad = " " * (indent + 2)
    lines = [_render(x, indent + 2, width) for x in rest]
    body = ("\n" + pad).join(lines)
    return f"({_flat(head) if isinstance(head, Sym) else _render(head, indent + 1, width)}\n{pad}{body})"
