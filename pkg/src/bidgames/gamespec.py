"""Tiny expression grammar for naming games on the CLI and over HTTP.

Atoms: ``A``, ``B``, ``E``, ``second_move_wins``, ``A^3`` (or ``A_pow:3``),
``B^2``, ``bid_zero:3``, ``win_after:4``, ``ladies_blocks:3``, ``tug:2``,
``ult:2``, ``ttt``, ``ttt:center``, ``ttt:corner``, ``file:PATH`` (a
bidgraph-1 JSON document).  Combinators: ``wedge(X,Y)``, ``reverse(X)``,
``truncate(X,7)``.
"""

from __future__ import annotations

from .graphs import GameGraph, build_primitive, build_tug, build_ult, reverse, truncate, wedge
from .ttt import build_ttt


class GameSpecError(ValueError):
    pass


def parse_game(text: str) -> GameGraph:
    graph, rest = _parse(text.strip())
    if rest.strip():
        raise GameSpecError(f"trailing input after game spec: {rest!r}")
    return graph


def _parse(text: str) -> tuple[GameGraph, str]:
    text = text.lstrip()
    for name, arity in (("wedge", 2), ("reverse", 1), ("truncate", None)):
        if text.startswith(name + "("):
            body = text[len(name) + 1 :]
            first, rest = _parse(body)
            if name == "reverse":
                rest = rest.lstrip()
                if not rest.startswith(")"):
                    raise GameSpecError("expected ')' in reverse(...)")
                return reverse(first), rest[1:]
            rest = rest.lstrip()
            if not rest.startswith(","):
                raise GameSpecError(f"expected ',' in {name}(...)")
            rest = rest[1:]
            if name == "wedge":
                second, rest2 = _parse(rest)
                rest2 = rest2.lstrip()
                if not rest2.startswith(")"):
                    raise GameSpecError("expected ')' in wedge(...)")
                return wedge(first, second), rest2[1:]
            # truncate(X, n)
            rest = rest.lstrip()
            num = ""
            while rest and rest[0].isdigit():
                num, rest = num + rest[0], rest[1:]
            rest = rest.lstrip()
            if not num or not rest.startswith(")"):
                raise GameSpecError("expected truncate(X, n)")
            return truncate(first, int(num)), rest[1:]
    # atom: read until a delimiter
    i = 0
    while i < len(text) and text[i] not in ",)":
        i += 1
    atom, rest = text[:i].strip(), text[i:]
    if not atom:
        raise GameSpecError("empty game spec")
    return _parse_atom(atom), rest


def _parse_atom(atom: str) -> GameGraph:
    if atom.startswith("file:"):
        with open(atom[5:]) as fh:
            return GameGraph.from_json(fh.read())
    if atom in ("A", "B", "E", "second_move_wins"):
        return build_primitive(atom)
    if atom == "second":
        return build_primitive("second_move_wins")
    if atom == "ttt":
        return build_ttt()
    if atom.startswith("ttt:"):
        arg = atom[4:]
        if arg == "center":
            return build_ttt({4})
        if arg == "corner":
            return build_ttt({0})
        if arg == "edge":
            return build_ttt({1})
        cells = {int(c) for c in arg.split("+")}
        return build_ttt(cells)
    if "^" in atom:
        base, _, num = atom.partition("^")
        if base in ("A", "B") and num.isdigit():
            return build_primitive(f"{base}_pow", int(num))
        raise GameSpecError(f"unknown game spec: {atom!r}")
    if ":" in atom:
        kind, _, num = atom.partition(":")
        if not num.isdigit():
            raise GameSpecError(f"bad parameter in {atom!r}")
        n = int(num)
        if kind == "tug":
            return build_tug(n)
        if kind == "ult":
            return build_ult(n)
        if kind in ("A_pow", "B_pow", "bid_zero", "win_after", "ladies_blocks"):
            return build_primitive(kind, n)
        if kind == "ladies":
            return build_primitive("ladies_blocks", n)
        raise GameSpecError(f"unknown game kind: {kind!r}")
    raise GameSpecError(f"unknown game spec: {atom!r}")
