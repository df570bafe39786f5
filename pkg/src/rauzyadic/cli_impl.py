"""Helpers for the command line that need a little logic of their own."""

from __future__ import annotations

from .errors import UnsupportedCase
from .morphism import compose
from .sadic import DirectiveWord
from .schemas import GPRIME_EDGES, match_rows
from .validator import MAX_BLOCK, RoutedStep


def route_prefix(dw: DirectiveWord) -> list[RoutedStep]:
    """Route a finite directive prefix through the refined graph.

    Depth-first over block decompositions; returns the first complete
    routing whose final step lands in the two-loop or no-loop region."""
    ms = list(dw.preperiod) + list(dw.period)
    start = "2" if dw.alphabet_size == 3 else "1"

    def matches_from(vertex, label):
        out = []
        for (a, b), rows in GPRIME_EDGES.items():
            if a != vertex:
                continue
            for m in match_rows(rows, label):
                out.append((b, m))
        return out

    best: list[RoutedStep] | None = None

    def dfs(vertex, pos, acc):
        nonlocal best
        if best is not None:
            return
        if pos == len(ms):
            if acc and acc[-1].dst in ("7/8", "5/6"):
                best = list(acc)
            return
        block = None
        for j in range(1, MAX_BLOCK + 1):
            if pos + j > len(ms):
                break
            block = ms[pos + j - 1] if block is None else compose(block, ms[pos + j - 1])
            for dst, m in matches_from(vertex, block):
                dfs(dst, pos + j, acc + [RoutedStep(vertex, dst, block, m)])

    dfs(start, 0, [])
    if best is None:
        raise UnsupportedCase("prefix does not route to the two-loop or no-loop region")
    return best
