"""Evolution-morphism schemas, the graph of graphs, and its refinement.

Every morphism that can label a Rauzy-graph evolution is an instance of a
parametric bracket pattern over symbols x, y, z (a permutation of the
letters) with loop exponents k and l.  This module holds:

  * the pattern language and matcher;
  * the evolution tables per source type (used to verify extraction);
  * the refined graph with vertices 2, V0, V1, V2, 4B, 1, 5/6, 7/8, 10B
    and its edge labels (used by the validator);
  * the shape-to-shape adjacency of the unrefined graph of graphs.

Rows that enter the two-loop region carry the case key for the length
bookkeeping and the loop-count formula for the exit gates.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .errors import AmbiguousMatch, NoSchemaMatch
from .morphism import Morphism, bracket

# -- pattern language -------------------------------------------------


@dataclass(frozen=True)
class Atom:
    sym: str                 # "x", "y", "z", "i", "0".."2", or a group like "xy"
    var: str | None = None   # exponent variable "k" / "l", or None for constant
    off: int = 1             # exponent offset (constant value when var is None)


def _parse_atom(tok: str) -> Atom:
    if "^" in tok:
        base, exp = tok.split("^")
    else:
        base, exp = tok, None
    base = base.strip("()")
    if exp is None:
        return Atom(base, None, 1)
    exp = exp.strip()
    for v in ("k", "l"):
        if exp.startswith(v):
            off = int(exp[len(v):]) if len(exp) > len(v) else 0
            return Atom(base, v, off)
    return Atom(base, None, int(exp))


@lru_cache(maxsize=None)
def parse_pattern(text: str) -> tuple[Atom, ...]:
    return tuple(_parse_atom(t) for t in text.split())


def _image(atoms: tuple[Atom, ...], assign: dict[str, str], k: int, l: int) -> str | None:
    out = []
    for a in atoms:
        base = "".join(assign.get(c, c) for c in a.sym)
        e = a.off if a.var is None else (k if a.var == "k" else l) + a.off
        if e < 0:
            return None
        out.append(base * e)
    return "".join(out)


def _image_len(atoms, assign, k, l):
    n = 0
    for a in atoms:
        e = a.off if a.var is None else (k if a.var == "k" else l) + a.off
        if e < 0:
            return None
        n += len(a.sym) * e
    return n


_ASSIGNMENTS = {
    "lit": ({},),
    "xyz": tuple({"x": str(x), "y": str(y), "z": str(z)}
                 for x, y, z in itertools.permutations(range(3))),
    "xy01": ({"x": "0", "y": "1"}, {"x": "1", "y": "0"}),
    "xy12": ({"x": "1", "y": "2"}, {"x": "2", "y": "1"}),
    "ixy0": ({"i": "0", "x": "1", "y": "2"}, {"i": "0", "x": "2", "y": "1"}),
    "ixy1": ({"i": "1", "x": "0", "y": "2"}, {"i": "1", "x": "2", "y": "0"}),
    "ixy2": ({"i": "2", "x": "0", "y": "1"}, {"i": "2", "x": "1", "y": "0"}),
}


@dataclass(frozen=True)
class Match:
    row: "Row"
    assign: tuple[tuple[str, str], ...]
    k: int | None
    l: int | None
    with_third: bool

    @property
    def sub(self) -> dict[str, str]:
        return dict(self.assign)


@dataclass(frozen=True)
class Row:
    """One table row: a parametric morphism schema on one edge."""

    rid: str
    src: str
    dst: str
    imgs: tuple[str, ...]
    vars: str = "lit"
    opt3: bool = False
    cond: object = None            # callable (k, l) -> bool
    through: str | None = None     # "4R" | "10R" when the edge contracts a run
    kcase: str | None = None       # length-bookkeeping case for 7/8 or 5/6 entries
    Kfun: object = None            # callable (k, l) -> loop count of the entry
    d_factors: tuple[str, ...] = ()

    @property
    def atoms(self):
        return tuple(parse_pattern(t) for t in self.imgs)

    @property
    def uses(self) -> frozenset[str]:
        return frozenset(a.var for p in self.atoms for a in p if a.var)

    def instantiate(self, assign: dict[str, str], k: int = 0, l: int = 0,
                    with_third: bool = True) -> Morphism | None:
        atoms = self.atoms
        if self.opt3 and not with_third:
            atoms = atoms[:-1]
        imgs = []
        for p in atoms:
            w = _image(p, assign, k, l)
            if w is None:
                return None
            imgs.append(w)
        return bracket(*imgs)

    def matches(self, m: Morphism) -> list[Match]:
        atoms = self.atoms
        need_third = len(m.images) == len(atoms)
        if not need_third and not (self.opt3 and len(m.images) == len(atoms) - 1):
            return []
        pats = atoms if need_third else atoms[:-1]
        uses = self.uses
        kmax = max(len(w) for w in m.images) + 2
        ks = range(kmax + 1) if "k" in uses else (0,)
        ls = range(kmax + 1) if "l" in uses else (0,)
        out = []
        for assign in _ASSIGNMENTS[self.vars]:
            for k in ks:
                for l in ls:
                    if self.cond is not None and not self.cond(k, l):
                        continue
                    if any(_image_len(p, assign, k, l) != len(w)
                           for p, w in zip(pats, m.images)):
                        continue
                    if all(_image(p, assign, k, l) == w for p, w in zip(pats, m.images)):
                        out.append(Match(self, tuple(sorted(assign.items())),
                                         k if "k" in uses else None,
                                         l if "l" in uses else None, need_third))
        return out


def match_rows(rows, m: Morphism) -> list[Match]:
    out = []
    for row in rows:
        out.extend(row.matches(m))
    return out


def unique_row_match(rows, m: Morphism, where: str) -> Match:
    ms = match_rows(rows, m)
    rids = {x.row.rid for x in ms}
    if not ms:
        raise NoSchemaMatch(f"{m} matches no row {where}")
    if len(rids) > 1:
        raise AmbiguousMatch(f"{m} matches several rows {sorted(rids)} {where}")
    return ms[0]


# -- the graph of graphs (shape adjacency) ------------------------------

GOG_EDGES: dict[int, frozenset[int]] = {
    1: frozenset({1, 7, 8}),
    2: frozenset({1, 2, 3, 4, 7, 8, 10}),
    3: frozenset({1, 3, 7, 8, 10}),
    4: frozenset({1, 4, 7, 8, 10}),
    5: frozenset({1, 10}),
    6: frozenset({1, 7, 8, 10}),
    7: frozenset({1, 7, 8, 9}),
    8: frozenset({1, 5, 6, 7, 8, 9}),
    9: frozenset({1, 5, 6, 9}),
    10: frozenset({1, 7, 8, 10}),
}


# -- evolution tables per source type -----------------------------------
#
# u_from / u_to: role of the chain vertex before and after ('B', 'R' or '*').


@dataclass(frozen=True)
class EvolutionRow:
    from_type: int
    to_types: frozenset[int]
    u_from: str
    u_to: str
    row: Row


def _ev(ft, tts, uf, ut, rid, imgs, vars="lit", opt3=False, cond=None):
    return EvolutionRow(ft, frozenset(tts), uf, ut,
                        Row(rid, f"type{ft}", "/".join(map(str, sorted(tts))),
                            tuple(imgs), vars=vars, opt3=opt3, cond=cond))


EVOLUTION_TABLE: tuple[EvolutionRow, ...] = (
    # from type 1
    _ev(1, {1}, "B", "B", "A1.1a", ("x", "y x"), "xy01"),
    _ev(1, {1}, "B", "B", "A1.1b", ("y x", "x"), "xy01"),
    _ev(1, {7, 8}, "B", "*", "A1.78", ("x", "y^k x", "y^k-1 x"), "xy01", True,
        lambda k, l: k >= 2),
    # from type 2
    _ev(2, {1}, "B", "B", "A2.1a", ("x", "y z x"), "xyz"),
    _ev(2, {1}, "B", "B", "A2.1b", ("y z x", "x"), "xyz"),
    _ev(2, {1}, "B", "B", "A2.1c", ("x y", "z y"), "xyz"),
    _ev(2, {1}, "B", "B", "A2.1d", ("x y", "z x y"), "xyz"),
    _ev(2, {1}, "B", "B", "A2.1e", ("z x y", "x y"), "xyz"),
    _ev(2, {2}, "B", "B", "A2.2a", ("0", "1 0", "2 0")),
    _ev(2, {2}, "B", "B", "A2.2b", ("0 1", "1", "2 1")),
    _ev(2, {2}, "B", "B", "A2.2c", ("0 2", "1 2", "2")),
    _ev(2, {3}, "B", "B", "A2.3a", ("0", "1 0", "2 1 0")),
    _ev(2, {3}, "B", "B", "A2.3b", ("0", "1 2 0", "2 0")),
    _ev(2, {3}, "B", "B", "A2.3c", ("0 1", "1", "2 0 1")),
    _ev(2, {3}, "B", "B", "A2.3d", ("0 2 1", "1", "2 1")),
    _ev(2, {3}, "B", "B", "A2.3e", ("0 2", "1 0 2", "2")),
    _ev(2, {3}, "B", "B", "A2.3f", ("0 1 2", "1 2", "2")),
    _ev(2, {4}, "B", "R", "A2.4a", ("x y^k z", "y^l z", "x y^k-1 z"), "xyz", True,
        lambda k, l: k >= l >= 1 and k + l >= 3),
    _ev(2, {4}, "B", "R", "A2.4b", ("y^k z", "x y^l z", "y^k-1 z"), "xyz", True,
        lambda k, l: k >= l >= 1 and k + l >= 3),
    _ev(2, {4}, "B", "B", "A2.4c", ("x", "y x", "y z x"), "xyz"),
    _ev(2, {4}, "B", "B", "A2.4d", ("x", "y z x", "y x"), "xyz"),
    _ev(2, {7, 8}, "B", "*", "A2.78a", ("x", "y^k z x", "y^k-1 z x"), "xyz", True,
        lambda k, l: k >= 2),
    _ev(2, {7, 8}, "B", "*", "A2.78b", ("x", "z y^k x", "z y^k-1 x"), "xyz", True,
        lambda k, l: k >= 2),
    _ev(2, {7, 8}, "B", "*", "A2.78c", ("x", "(yz)^k x", "(yz)^k-1 x"), "xyz", True,
        lambda k, l: k >= 2),
    _ev(2, {7, 8}, "B", "*", "A2.78d", ("x", "(yz)^k y x", "(yz)^k-1 y x"), "xyz", True,
        lambda k, l: k >= 1),
    _ev(2, {7, 8}, "B", "*", "A2.78e", ("x y", "z^k x y", "z^k-1 x y"), "xyz", True,
        lambda k, l: k >= 2),
    _ev(2, {7, 8}, "B", "*", "A2.78f", ("x y", "z^k y", "z^k-1 y"), "xyz", True,
        lambda k, l: k >= 2),
    _ev(2, {10}, "B", "R", "A2.10a", ("(xy)^k z", "y (xy)^l z"), "xyz", False,
        lambda k, l: k >= 1 and l >= 0 and k + l >= 2),
    _ev(2, {10}, "B", "R", "A2.10b", ("(xy)^k z", "y (xy)^l z", "(xy)^k-1 z"), "xyz", False,
        lambda k, l: k >= 2 and k > l >= 0),
    _ev(2, {10}, "B", "R", "A2.10c", ("(xy)^k z", "y (xy)^l z", "y (xy)^l-1 z"), "xyz", False,
        lambda k, l: l >= k >= 1),
    _ev(2, {10}, "B", "B", "A2.10d", ("x y", "z x y", "z y"), "xyz"),
    # from type 3
    _ev(3, {1}, "B", "B", "A3.1a", ("x y", "z y"), "xyz"),
    _ev(3, {1}, "B", "B", "A3.1b", ("x y", "z"), "xyz"),
    _ev(3, {1}, "B", "B", "A3.1c", ("x", "y z"), "xyz"),
    _ev(3, {3}, "B", "B", "A3.3a", ("0", "1 0", "2 0")),
    _ev(3, {3}, "B", "B", "A3.3b", ("0", "1 0", "2")),
    _ev(3, {3}, "B", "B", "A3.3c", ("0", "1", "2 0")),
    _ev(3, {3}, "B", "B", "A3.3d", ("0 1", "1", "2 1")),
    _ev(3, {3}, "B", "B", "A3.3e", ("0 1", "1", "2")),
    _ev(3, {3}, "B", "B", "A3.3f", ("0", "1", "2 1")),
    _ev(3, {3}, "B", "B", "A3.3g", ("0 2", "1 2", "2")),
    _ev(3, {3}, "B", "B", "A3.3h", ("0 2", "1", "2")),
    _ev(3, {3}, "B", "B", "A3.3i", ("0", "1 2", "2")),
    _ev(3, {7, 8}, "B", "*", "A3.78a", ("x", "y z^k x", "y z^k-1 x"), "xyz", True,
        lambda k, l: k >= 1),
    _ev(3, {7, 8}, "B", "*", "A3.78b", ("x", "y^k z", "y^k-1 z"), "xyz", True,
        lambda k, l: k >= 2),
    _ev(3, {10}, "B", "B", "A3.10a", ("x", "y x", "y z"), "xyz"),
    _ev(3, {10}, "B", "R", "A3.10b", ("x^k y", "z x^l y"), "xyz", False,
        lambda k, l: k >= 1 and l >= 0 and k + l >= 2),
    _ev(3, {10}, "B", "R", "A3.10c", ("x^k y", "z x^l y", "x^k-1 y"), "xyz", True,
        lambda k, l: k >= 2 and k > l >= 0),
    _ev(3, {10}, "B", "R", "A3.10d", ("x^k y", "z x^l y", "z x^l-1 y"), "xyz", True,
        lambda k, l: l >= k >= 1),
    # from type 4
    _ev(4, {1}, "R", "B", "A4.1", ("x", "y"), "xy01"),
    _ev(4, {4}, "R", "R", "A4.4a", ("0", "1", "2"), "lit", True),
    _ev(4, {4}, "B", "B", "A4.4b", ("0", "1 0", "2 0")),
    _ev(4, {4}, "B", "B", "A4.4c", ("0", "2 0", "1 0")),
    _ev(4, {4}, "R", "B", "A4.4d", ("1", "0", "2")),
    _ev(4, {4}, "R", "B", "A4.4e", ("1", "2", "0")),
    _ev(4, {4}, "B", "R", "A4.4f", ("0 x^k y", "x^l y", "0 x^k-1 y"), "xy12", True,
        lambda k, l: k >= 1 and k >= l >= 0),
    _ev(4, {4}, "B", "R", "A4.4g", ("x^k y", "0 x^l y", "x^k-1 y"), "xy12", True,
        lambda k, l: k >= 1 and k >= l >= 0),
    _ev(4, {7, 8}, "R", "*", "A4.78a", ("1", "0", "2"), "lit", True),
    _ev(4, {7, 8}, "B", "*", "A4.78b", ("0", "x^k y 0", "x^k-1 y 0"), "xy12", True,
        lambda k, l: k >= 1),
    _ev(4, {10}, "R", "B", "A4.10a", ("1", "0", "2")),
    _ev(4, {10}, "B", "R", "A4.10b", ("0 (x0)^k y", "(x0)^l y"), "xy12", False,
        lambda k, l: k >= 0 and l >= 0 and k + l >= 1),
    _ev(4, {10}, "B", "R", "A4.10c", ("0 (x0)^k y", "(x0)^l y", "0 (x0)^k-1 y"), "xy12", False,
        lambda k, l: k >= 1 and k >= l >= 0),
    _ev(4, {10}, "B", "R", "A4.10d", ("0 (x0)^k y", "(x0)^l y", "(x0)^l-1 y"), "xy12", False,
        lambda k, l: l > k >= 0),
    # from type 5
    _ev(5, {1}, "R", "B", "A5.1", ("x", "y"), "xy01"),
    _ev(5, {10}, "R", "B", "A5.10a", ("1", "2", "0")),
    _ev(5, {10}, "B", "R", "A5.10b", ("1", "0 1", "2")),
    _ev(5, {10}, "B", "R", "A5.10c", ("0^k 2", "1", "0^k-1 2"), "lit", True,
        lambda k, l: k >= 1),
    _ev(5, {10}, "B", "R", "A5.10d", ("2^k 0", "1 2^l 0"), "lit", False,
        lambda k, l: k >= 0 and l >= 0 and k + l >= 1),
    _ev(5, {10}, "B", "R", "A5.10e", ("2^k 0", "1 2^l 0", "2^k-1 0"), "lit", False,
        lambda k, l: k >= l >= 0 and k >= 1),
    _ev(5, {10}, "B", "R", "A5.10f", ("2^k 0", "1 2^l 0", "1 2^l-1 0"), "lit", False,
        lambda k, l: l > k >= 0),
    # from type 6
    _ev(6, {1}, "*", "B", "A6.1a", ("x", "y x"), "xy01"),
    _ev(6, {1}, "*", "B", "A6.1b", ("y x", "x"), "xy01"),
    _ev(6, {7, 8}, "*", "*", "A6.78a", ("1", "0^k 2", "0^k-1 2"), "lit", True,
        lambda k, l: k >= 1),
    _ev(6, {7, 8}, "*", "*", "A6.78b", ("x", "y^k x", "y^k-1 x"), "xy01", True,
        lambda k, l: k >= 2),
    _ev(6, {10}, "*", "B", "A6.10a", ("1", "0 1", "2")),
    _ev(6, {10}, "*", "R", "A6.10b", ("1 2^k 0", "2^l 0"), "lit", False,
        lambda k, l: k >= 0 and l >= 0 and k + l >= 1),
    _ev(6, {10}, "*", "R", "A6.10c", ("1 2^k 0", "2^l 0", "1 2^k-1 0"), "lit", False,
        lambda k, l: k >= l >= 0 and k >= 1),
    _ev(6, {10}, "*", "R", "A6.10d", ("1 2^k 0", "2^l 0", "2^l-1 0"), "lit", False,
        lambda k, l: l > k >= 0),
    # from type 7
    _ev(7, {1}, "R", "B", "A7.1", ("x", "y"), "xy01"),
    _ev(7, {7, 8}, "R", "*", "A7.78a", ("0", "1", "2"), "lit", True),
    _ev(7, {7, 8}, "B", "*", "A7.78b", ("0", "1 0", "2 0"), "lit", True),
    _ev(7, {9}, "R", "B", "A7.9a", ("0", "x", "y"), "xy12"),
    _ev(7, {9}, "B", "R", "A7.9b", ("0 1", "1", "0 2"), "lit", True),
    _ev(7, {9}, "B", "R", "A7.9c", ("1", "0 1", "2"), "lit", True),
    _ev(7, {9}, "B", "R", "A7.9d", ("0 1", "2", "0 2"), "lit", True),
    _ev(7, {9}, "B", "R", "A7.9e", ("1", "0 2", "2"), "lit", True),
    # from type 8
    _ev(8, {1}, "*", "B", "A8.1a", ("x", "y x"), "xy01"),
    _ev(8, {1}, "*", "B", "A8.1b", ("y x", "x"), "xy01"),
    _ev(8, {5, 6}, "*", "*", "A8.56a", ("0 x", "y", "0 y"), "xy12", True),
    _ev(8, {5, 6}, "*", "*", "A8.56b", ("x", "0 y", "y"), "xy12", True),
    _ev(8, {7, 8}, "*", "*", "A8.78a", ("0", "1 0", "2 0"), "lit", True),
    _ev(8, {7, 8}, "*", "*", "A8.78b", ("x", "y^k x", "y^k-1 x"), "xy01", True,
        lambda k, l: k >= 2),
    _ev(8, {9}, "*", "B", "A8.9a", ("0", "x 0", "y 0"), "xy12"),
    _ev(8, {9}, "*", "R", "A8.9b", ("0 1", "1", "0 2"), "lit", True),
    _ev(8, {9}, "*", "R", "A8.9c", ("1", "0 1", "2"), "lit", True),
    _ev(8, {9}, "*", "R", "A8.9d", ("0 1", "2", "0 2"), "lit", True),
    _ev(8, {9}, "*", "R", "A8.9e", ("1", "0 2", "2"), "lit", True),
    # from type 9
    _ev(9, {1}, "R", "B", "A9.1", ("x", "y"), "xy01"),
    _ev(9, {5, 6}, "R", "*", "A9.56a", ("0", "1", "2"), "lit", True),
    _ev(9, {5, 6}, "R", "*", "A9.56b", ("2", "1", "0")),
    _ev(9, {5, 6}, "B", "*", "A9.56c", ("0 x", "y", "0 y"), "xy12", True),
    _ev(9, {5, 6}, "B", "*", "A9.56d", ("x", "0 y", "y"), "xy12", True),
    _ev(9, {9}, "R", "R", "A9.9a", ("0", "1", "2"), "lit", True),
    _ev(9, {9}, "B", "B", "A9.9b", ("0", "x 0", "y 0"), "xy12"),
    # from type 10
    _ev(10, {1}, "R", "B", "A10.1", ("x", "y"), "xy01"),
    _ev(10, {7, 8}, "R", "*", "A10.78a", ("1", "0", "2"), "lit", True),
    _ev(10, {7, 8}, "B", "*", "A10.78b", ("0", "2^k 1", "2^k-1 1"), "lit", True,
        lambda k, l: k >= 1),
    _ev(10, {10}, "R", "R", "A10.10a", ("1", "0", "2"), "lit", True),
    _ev(10, {10}, "B", "B", "A10.10b", ("0", "2 0", "1")),
    _ev(10, {10}, "R", "B", "A10.10c", ("0", "1", "2")),
    _ev(10, {10}, "B", "R", "A10.10d", ("0 1^k 2", "1^l 2"), "lit", False,
        lambda k, l: k >= 0 and l >= 0 and k + l >= 1),
    _ev(10, {10}, "B", "R", "A10.10e", ("0 1^k 2", "1^l 2", "0 1^k-1 2"), "lit", False,
        lambda k, l: k >= 1 and k >= l >= 0),
    _ev(10, {10}, "B", "R", "A10.10f", ("0 1^k 2", "1^l 2", "1^l-1 2"), "lit", False,
        lambda k, l: l > k >= 0),
)


def evolution_rows(from_type: int, to_type: int | None = None,
                   u_from: str | None = None) -> list[EvolutionRow]:
    out = []
    for er in EVOLUTION_TABLE:
        if er.from_type != from_type:
            continue
        if to_type is not None and to_type not in er.to_types:
            continue
        if u_from is not None and er.u_from not in ("*", u_from):
            continue
        out.append(er)
    return out


def gog_from_tables() -> dict[int, frozenset[int]]:
    """Shape adjacency recomputed from the evolution tables."""
    adj: dict[int, set[int]] = {t: set() for t in range(1, 11)}
    for er in EVOLUTION_TABLE:
        adj[er.from_type] |= set(er.to_types)
    return {t: frozenset(s) for t, s in adj.items()}


# -- the refined graph ---------------------------------------------------

GPRIME_VERTICES = ("2", "V0", "V1", "V2", "4B", "1", "5/6", "7/8", "10B")


def _row(rid, src, dst, imgs, vars="lit", opt3=False, cond=None, through=None,
         kcase=None, Kfun=None, d_factors=()):
    return Row(rid, src, dst, tuple(imgs), vars=vars, opt3=opt3, cond=cond,
               through=through, kcase=kcase, Kfun=Kfun, d_factors=tuple(d_factors))


def _c2_rows() -> list[Row]:
    """Loops and edges of the three-way split of the type-3 vertex.

    F_x  = { D(y,x) D(z,x),  D(x,y) D(z,y) both orders }
    F_xy = { D(x,z),  D(x,y) D(z,x) }   with z the third letter.
    """
    from .morphism import D, compose
    rows = []
    for x in range(3):
        y, z = sorted(set(range(3)) - {x})
        loops = [
            (compose(D(y, x), D(z, x)), (f"D{y}{x}", f"D{z}{x}")),
            (compose(D(x, y), D(z, y)), (f"D{x}{y}", f"D{z}{y}")),
            (compose(D(x, z), D(y, z)), (f"D{x}{z}", f"D{y}{z}")),
        ]
        for j, (m, facs) in enumerate(loops):
            rows.append(_row(f"C2.V{x}.loop{j}", f"V{x}", f"V{x}",
                             tuple(" ".join(w) for w in m.images), d_factors=facs))
    for x, yv in itertools.permutations(range(3), 2):
        z = next(iter(set(range(3)) - {x, yv}))
        from .morphism import D, compose
        single = D(x, z)
        paired = compose(D(x, yv), D(z, x))
        rows.append(_row(f"C2.V{x}{yv}.a", f"V{x}", f"V{yv}",
                         tuple(" ".join(w) for w in single.images),
                         d_factors=(f"D{x}{z}",)))
        rows.append(_row(f"C2.V{x}{yv}.b", f"V{x}", f"V{yv}",
                         tuple(" ".join(w) for w in paired.images),
                         d_factors=(f"D{x}{yv}", f"D{z}{x}")))
    return rows


def _gprime_rows() -> list[Row]:
    r = []
    # C1: the Arnoux-Rauzy loop on vertex 2
    r += [_row("C1.a", "2", "2", ("0", "1 0", "2 0")),
          _row("C1.b", "2", "2", ("0 1", "1", "2 1")),
          _row("C1.c", "2", "2", ("0 2", "1 2", "2"))]
    # C2
    r += _c2_rows()
    # C3: the loop on 4B
    r += [_row("C3.a", "4B", "4B", ("0", "1 0", "2 0")),
          _row("C3.b", "4B", "4B", ("0", "2 0", "1 0"))]
    for rid, imgs in (("C3.c", ("x^k-1 y", "0 x^k y", "0 x^k-1 y")),
                      ("C3.d", ("x^k-1 y", "0 x^k-1 y", "0 x^k y")),
                      ("C3.e", ("0 x^k-1 y", "x^k y", "x^k-1 y")),
                      ("C3.f", ("0 x^k-1 y", "x^k-1 y", "x^k y"))):
        r.append(_row(rid, "4B", "4B", imgs, vars="xy12", cond=lambda k, l: k >= 1))
    # C4, inner edges (table of labels within the last component)
    r += [_row("C4.1.loopa", "1", "1", ("0", "1 0")),
          _row("C4.1.loopb", "1", "1", ("0 1", "1")),
          _row("C4.1.78", "1", "7/8", ("x", "y^k x", "y^k-1 x"), vars="xy01",
               opt3=True, cond=lambda k, l: k >= 2, kcase="type1_entry",
               Kfun=lambda k, l: k - 1)]
    r += [_row("C4.56.1a", "5/6", "1", ("x", "y x"), vars="xy01"),
          _row("C4.56.1b", "5/6", "1", ("y x", "x"), vars="xy01"),
          _row("C4.56.1c", "5/6", "1", ("1 2^k 0", "2^k 0"), cond=lambda k, l: k >= 1),
          _row("C4.56.1d", "5/6", "1", ("2^k 0", "1 2^k 0"), cond=lambda k, l: k >= 1),
          _row("C4.56.1e", "5/6", "1", ("1 2^k 0", "2^k+1 0"), cond=lambda k, l: k >= 0),
          _row("C4.56.1f", "5/6", "1", ("2^k+1 0", "1 2^k 0"), cond=lambda k, l: k >= 0)]
    r += [_row("C4.56.78a", "5/6", "7/8", ("1", "0^k 2", "0^k-1 2"), opt3=True,
               cond=lambda k, l: k >= 1, kcase="c56_direct", Kfun=lambda k, l: k),
          _row("C4.56.78b", "5/6", "7/8", ("x", "y^k x", "y^k-1 x"), vars="xy01",
               opt3=True, cond=lambda k, l: k >= 2, kcase="type1_entry",
               Kfun=lambda k, l: k - 1),
          _row("C4.56.78c", "5/6", "7/8", ("2^l 0", "1 2^k 0", "1 2^k-1 0"), opt3=True,
               cond=lambda k, l: k > l >= 0, through="10R", kcase="c56_10R_a",
               Kfun=lambda k, l: k - l),
          _row("C4.56.78d", "5/6", "7/8", ("1 2^k 0", "2^l 0", "2^l-1 0"), opt3=True,
               cond=lambda k, l: l > k + 1 >= 1, through="10R", kcase="c56_10R_b",
               Kfun=lambda k, l: l - k - 1)]
    r += [_row("C4.56.10a", "5/6", "10B", ("1", "0 1", "2")),
          _row("C4.56.10b", "5/6", "10B", ("2^k 0", "1 2^k 0", "1 2^k-1 0"),
               cond=lambda k, l: k >= 1, through="10R"),
          _row("C4.56.10c", "5/6", "10B", ("1 2^k 0", "2^k+1 0", "2^k 0"),
               cond=lambda k, l: k >= 0, through="10R")]
    r += [_row("C4.78.1a", "7/8", "1", ("0 1", "1")),
          _row("C4.78.1b", "7/8", "1", ("1", "0 1")),
          _row("C4.78.1c", "7/8", "1", ("x", "y"), vars="xy01"),
          _row("C4.78.56a", "7/8", "5/6", ("0 x", "y", "0 y"), vars="xy12", opt3=True),
          _row("C4.78.56b", "7/8", "5/6", ("x", "0 y", "y"), vars="xy12", opt3=True),
          _row("C4.78.loop", "7/8", "7/8", ("0", "1 0", "2 0"), opt3=True)]
    r += [_row("C4.10B.1a", "10B", "1", ("0 1^k 2", "1^k 2"), cond=lambda k, l: k >= 1),
          _row("C4.10B.1b", "10B", "1", ("1^k 2", "0 1^k 2"), cond=lambda k, l: k >= 1),
          _row("C4.10B.1c", "10B", "1", ("0 1^k 2", "1^k+1 2"), cond=lambda k, l: k >= 0),
          _row("C4.10B.1d", "10B", "1", ("1^k+1 2", "0 1^k 2"), cond=lambda k, l: k >= 0)]
    r += [_row("C4.10B.78a", "10B", "7/8", ("0", "2^k 1", "2^k-1 1"),
               cond=lambda k, l: k >= 1, kcase="c10B_direct", Kfun=lambda k, l: k),
          _row("C4.10B.78b", "10B", "7/8", ("1^l 2", "0 1^k 2", "0 1^k-1 2"), opt3=True,
               cond=lambda k, l: k > l >= 0, through="10R", kcase="c10B_10R_a",
               Kfun=lambda k, l: k - l),
          _row("C4.10B.78c", "10B", "7/8", ("0 1^k 2", "1^l 2", "1^l-1 2"), opt3=True,
               cond=lambda k, l: l > k + 1 >= 1, through="10R", kcase="c10B_10R_b",
               Kfun=lambda k, l: l - k - 1)]
    r += [_row("C4.10B.10a", "10B", "10B", ("0", "2 0", "1")),
          _row("C4.10B.10b", "10B", "10B", ("1^k 2", "0 1^k 2", "0 1^k-1 2"),
               cond=lambda k, l: k >= 1, through="10R"),
          _row("C4.10B.10c", "10B", "10B", ("0 1^k 2", "1^k+1 2", "1^k 2"),
               cond=lambda k, l: k >= 0, through="10R")]
    # the two right-proper composite edges added to the component
    r += [_row("C4.56.loopa", "5/6", "5/6", ("1 0^k 2", "0^k-1 2", "1 0^k-1 2"),
               cond=lambda k, l: k >= 1, kcase="c56_loop", Kfun=lambda k, l: k),
          _row("C4.56.loopb", "5/6", "5/6", ("1 0^k-1 2", "0^k 2", "1 0^k 2"),
               cond=lambda k, l: k >= 1, kcase="c56_loop", Kfun=lambda k, l: k),
          _row("C4.56.loopc", "5/6", "5/6", ("0^k 2", "1 0^k-1 2", "0^k-1 2"),
               cond=lambda k, l: k >= 1, kcase="c56_loop", Kfun=lambda k, l: k),
          _row("C4.56.loopd", "5/6", "5/6", ("0^k-1 2", "1 0^k 2", "0^k 2"),
               cond=lambda k, l: k >= 1, kcase="c56_loop", Kfun=lambda k, l: k)]
    r += [_row("C4.10B.56a", "10B", "5/6", ("0 2^k 1", "2^k-1 1", "0 2^k-1 1"),
               cond=lambda k, l: k >= 1, kcase="c10B_56", Kfun=lambda k, l: k),
          _row("C4.10B.56b", "10B", "5/6", ("0 2^k-1 1", "2^k 1", "0 2^k 1"),
               cond=lambda k, l: k >= 1, kcase="c10B_56", Kfun=lambda k, l: k),
          _row("C4.10B.56c", "10B", "5/6", ("2^k 1", "0 2^k-1 1", "2^k-1 1"),
               cond=lambda k, l: k >= 1, kcase="c10B_56", Kfun=lambda k, l: k),
          _row("C4.10B.56d", "10B", "5/6", ("2^k-1 1", "0 2^k 1", "2^k 1"),
               cond=lambda k, l: k >= 1, kcase="c10B_56", Kfun=lambda k, l: k)]
    # black edges from 2
    r += [_row("T2.1a", "2", "1", ("x", "y z x"), vars="xyz"),
          _row("T2.1b", "2", "1", ("y z x", "x"), vars="xyz"),
          _row("T2.1c", "2", "1", ("x y", "z y"), vars="xyz"),
          _row("T2.1d", "2", "1", ("x y", "z x y"), vars="xyz"),
          _row("T2.1e", "2", "1", ("z x y", "x y"), vars="xyz"),
          _row("T2.1f", "2", "1", ("y z^k x", "z^k x"), vars="xyz",
               cond=lambda k, l: k >= 2, through="4R"),
          _row("T2.1g", "2", "1", ("z^k x", "y z^k x"), vars="xyz",
               cond=lambda k, l: k >= 2, through="4R"),
          _row("T2.1h", "2", "1", ("y z^k x", "z^k-1 x"), vars="xyz",
               cond=lambda k, l: k >= 2, through="4R"),
          _row("T2.1i", "2", "1", ("z^k-1 x", "y z^k x"), vars="xyz",
               cond=lambda k, l: k >= 2, through="4R"),
          _row("T2.1j", "2", "1", ("y z^k-1 x", "z^k x"), vars="xyz",
               cond=lambda k, l: k >= 2, through="4R"),
          _row("T2.1k", "2", "1", ("z^k x", "y z^k-1 x"), vars="xyz",
               cond=lambda k, l: k >= 2, through="4R"),
          _row("T2.1l", "2", "1", ("(xy)^k z", "y (xy)^k z"), vars="xyz",
               cond=lambda k, l: k >= 1, through="10R"),
          _row("T2.1m", "2", "1", ("y (xy)^k z", "(xy)^k z"), vars="xyz",
               cond=lambda k, l: k >= 1, through="10R"),
          _row("T2.1n", "2", "1", ("(xy)^k z", "y (xy)^k-1 z"), vars="xyz",
               cond=lambda k, l: k >= 2, through="10R"),
          _row("T2.1o", "2", "1", ("y (xy)^k-1 z", "(xy)^k z"), vars="xyz",
               cond=lambda k, l: k >= 2, through="10R")]
    r += [_row("T2.4Ba", "2", "4B", ("x", "y x", "y z x"), vars="xyz"),
          _row("T2.4Bb", "2", "4B", ("x", "y z x", "y x"), vars="xyz"),
          _row("T2.4Bc", "2", "4B", ("y^k-1 z", "x y^k z", "x y^k-1 z"), vars="xyz",
               cond=lambda k, l: k >= 2, through="4R"),
          _row("T2.4Bd", "2", "4B", ("y^k-1 z", "x y^k-1 z", "x y^k z"), vars="xyz",
               cond=lambda k, l: k >= 2, through="4R"),
          _row("T2.4Be", "2", "4B", ("x y^k-1 z", "y^k z", "y^k-1 z"), vars="xyz",
               cond=lambda k, l: k >= 2, through="4R"),
          _row("T2.4Bf", "2", "4B", ("x y^k-1 z", "y^k-1 z", "y^k z"), vars="xyz",
               cond=lambda k, l: k >= 2, through="4R")]
    r += [_row("T2.V0a", "2", "V0", ("0", "1 2 0", "2 0")),
          _row("T2.V0b", "2", "V0", ("0", "1 0", "2 1 0")),
          _row("T2.V1a", "2", "V1", ("0 1", "1", "2 0 1")),
          _row("T2.V1b", "2", "V1", ("0 2 1", "1", "2 1")),
          _row("T2.V2a", "2", "V2", ("0 2", "1 0 2", "2")),
          _row("T2.V2b", "2", "V2", ("0 1 2", "1 2", "2"))]
    r += [_row("T2.78a", "2", "7/8", ("x", "y^k z x", "y^k-1 z x"), vars="xyz",
               opt3=True, cond=lambda k, l: k >= 2, kcase="c2_two_seg",
               Kfun=lambda k, l: k - 1),
          _row("T2.78b", "2", "7/8", ("x", "z y^k x", "z y^k-1 x"), vars="xyz",
               opt3=True, cond=lambda k, l: k >= 2, kcase="c2_two_seg",
               Kfun=lambda k, l: k - 1),
          _row("T2.78c", "2", "7/8", ("x", "(yz)^k x", "(yz)^k-1 x"), vars="xyz",
               opt3=True, cond=lambda k, l: k >= 2, kcase="c2_group",
               Kfun=lambda k, l: k - 1),
          _row("T2.78d", "2", "7/8", ("x y", "z^k x y", "z^k-1 x y"), vars="xyz",
               opt3=True, cond=lambda k, l: k >= 2, kcase="c2_pairfirst",
               Kfun=lambda k, l: k - 1),
          _row("T2.78e", "2", "7/8", ("x", "(yz)^k y x", "(yz)^k-1 y x"), vars="xyz",
               opt3=True, cond=lambda k, l: k >= 1, kcase="c2_group_odd",
               Kfun=lambda k, l: k),
          _row("T2.78f", "2", "7/8", ("x y", "z^k y", "z^k-1 y"), vars="xyz",
               opt3=True, cond=lambda k, l: k >= 2, kcase="c2_pairsplit",
               Kfun=lambda k, l: k - 1),
          _row("T2.78g", "2", "7/8", ("z^l x", "y z^k x", "y z^k-1 x"), vars="xyz",
               opt3=True, cond=lambda k, l: k - 1 > l >= 1, through="4R",
               kcase="c2_4R_a", Kfun=lambda k, l: k - l - 1),
          _row("T2.78h", "2", "7/8", ("y z^l x", "z^k x", "z^k-1 x"), vars="xyz",
               opt3=True, cond=lambda k, l: k - 1 > l >= 1, through="4R",
               kcase="c2_4R_b", Kfun=lambda k, l: k - l - 1),
          _row("T2.78i", "2", "7/8", ("y (xy)^l z", "(xy)^k z", "(xy)^k-1 z"), vars="xyz",
               opt3=True, cond=lambda k, l: k - 1 > l >= 0, through="10R",
               kcase="c2_10R_a", Kfun=lambda k, l: k - l - 1),
          _row("T2.78j", "2", "7/8", ("(xy)^k z", "y (xy)^l z", "y (xy)^l-1 z"), vars="xyz",
               opt3=True, cond=lambda k, l: l > k >= 1, through="10R",
               kcase="c2_10R_b", Kfun=lambda k, l: l - k)]
    r += [_row("T2.10Ba", "2", "10B", ("x y", "z x y", "z y"), vars="xyz"),
          _row("T2.10Bb", "2", "10B", ("z^k x", "y z^k x", "y z^k-1 x"), vars="xyz",
               cond=lambda k, l: k >= 2, through="4R"),
          _row("T2.10Bc", "2", "10B", ("y z^k x", "z^k x", "z^k-1 x"), vars="xyz",
               cond=lambda k, l: k >= 2, through="4R"),
          _row("T2.10Bd", "2", "10B", ("y (xy)^k-1 z", "(xy)^k z", "(xy)^k-1 z"), vars="xyz",
               cond=lambda k, l: k >= 2, through="10R"),
          _row("T2.10Be", "2", "10B", ("(xy)^k z", "y (xy)^k z", "y (xy)^k-1 z"), vars="xyz",
               cond=lambda k, l: k >= 1, through="10R")]
    # black edges from V_i
    for i in range(3):
        v, dom = f"V{i}", f"ixy{i}"
        r += [_row(f"T3.{i}.1a", v, "1", ("x", "i y"), vars=dom),
              _row(f"T3.{i}.1b", v, "1", ("i y", "x"), vars=dom),
              _row(f"T3.{i}.1c", v, "1", ("x i", "y i"), vars=dom),
              _row(f"T3.{i}.1d", v, "1", ("x y^k i", "y^k i"), vars=dom,
                   cond=lambda k, l: k >= 1, through="10R"),
              _row(f"T3.{i}.1e", v, "1", ("y^k i", "x y^k i"), vars=dom,
                   cond=lambda k, l: k >= 1, through="10R"),
              _row(f"T3.{i}.1f", v, "1", ("x y^k i", "y^k-1 i"), vars=dom,
                   cond=lambda k, l: k >= 2, through="10R"),
              _row(f"T3.{i}.1g", v, "1", ("y^k-1 i", "x y^k i"), vars=dom,
                   cond=lambda k, l: k >= 2, through="10R"),
              _row(f"T3.{i}.78a", v, "7/8", ("i", "x y^k i", "x y^k-1 i"), vars=dom,
                   opt3=True, cond=lambda k, l: k >= 1, kcase="v_top",
                   Kfun=lambda k, l: k),
              _row(f"T3.{i}.78b", v, "7/8", ("x", "i^k y", "i^k-1 y"), vars=dom,
                   opt3=True, cond=lambda k, l: k >= 2, kcase="v_bottom",
                   Kfun=lambda k, l: k - 1),
              _row(f"T3.{i}.78c", v, "7/8", ("x y^l i", "y^k i", "y^k-1 i"), vars=dom,
                   opt3=True, cond=lambda k, l: k - 1 > l >= 0, through="10R",
                   kcase="v_10R_a", Kfun=lambda k, l: k - l - 1),
              _row(f"T3.{i}.78d", v, "7/8", ("y^k i", "x y^l i", "x y^l-1 i"), vars=dom,
                   opt3=True, cond=lambda k, l: l > k >= 1, through="10R",
                   kcase="v_10R_b", Kfun=lambda k, l: l - k),
              _row(f"T3.{i}.10Ba", v, "10B", ("x", "i x", "i y"), vars=dom),
              _row(f"T3.{i}.10Bb", v, "10B", ("x y^k-1 i", "y^k i", "y^k-1 i"), vars=dom,
                   cond=lambda k, l: k >= 2, through="10R"),
              _row(f"T3.{i}.10Bc", v, "10B", ("y^k i", "x y^k i", "x y^k-1 i"), vars=dom,
                   cond=lambda k, l: k >= 1, through="10R")]
    # black edges from 4B
    r += [_row("T4.1a", "4B", "1", ("x^k y", "0 x^k y"), vars="xy12",
               cond=lambda k, l: k >= 1, through="4R"),
          _row("T4.1b", "4B", "1", ("0 x^k y", "x^k y"), vars="xy12",
               cond=lambda k, l: k >= 1, through="4R"),
          _row("T4.1c", "4B", "1", ("x^k-1 y", "0 x^k y"), vars="xy12",
               cond=lambda k, l: k >= 1, through="4R"),
          _row("T4.1d", "4B", "1", ("0 x^k y", "x^k-1 y"), vars="xy12",
               cond=lambda k, l: k >= 1, through="4R"),
          _row("T4.1e", "4B", "1", ("x^k y", "0 x^k-1 y"), vars="xy12",
               cond=lambda k, l: k >= 1, through="4R"),
          _row("T4.1f", "4B", "1", ("0 x^k-1 y", "x^k y"), vars="xy12",
               cond=lambda k, l: k >= 1, through="4R"),
          _row("T4.1g", "4B", "1", ("0 (x0)^k y", "(x0)^k y"), vars="xy12",
               cond=lambda k, l: k >= 1, through="10R"),
          _row("T4.1h", "4B", "1", ("(x0)^k y", "0 (x0)^k y"), vars="xy12",
               cond=lambda k, l: k >= 1, through="10R"),
          _row("T4.1i", "4B", "1", ("0 (x0)^k-1 y", "(x0)^k y"), vars="xy12",
               cond=lambda k, l: k >= 1, through="10R"),
          _row("T4.1j", "4B", "1", ("(x0)^k y", "0 (x0)^k-1 y"), vars="xy12",
               cond=lambda k, l: k >= 1, through="10R")]
    r += [_row("T4.78a", "4B", "7/8", ("0", "x^k y 0", "x^k-1 y 0"), vars="xy12",
               opt3=True, cond=lambda k, l: k >= 1, kcase="f4_direct",
               Kfun=lambda k, l: k),
          _row("T4.78b", "4B", "7/8", ("x^l y", "0 x^k y", "0 x^k-1 y"), vars="xy12",
               opt3=True, cond=lambda k, l: k - 1 > l >= 0, through="4R",
               kcase="f4_4R", Kfun=lambda k, l: k - 1 - l),
          _row("T4.78c", "4B", "7/8", ("0 x^l y", "x^k y", "x^k-1 y"), vars="xy12",
               opt3=True, cond=lambda k, l: k - 1 > l >= 0, through="4R",
               kcase="f4_4R", Kfun=lambda k, l: k - 1 - l),
          _row("T4.78d", "4B", "7/8", ("(x0)^l y", "0 (x0)^k y", "0 (x0)^k-1 y"),
               vars="xy12", opt3=True, cond=lambda k, l: k > l >= 0, through="10R",
               kcase="f4_10R_a", Kfun=lambda k, l: k - l),
          _row("T4.78e", "4B", "7/8", ("0 (x0)^k y", "(x0)^l y", "(x0)^l-1 y"),
               vars="xy12", opt3=True, cond=lambda k, l: l - 1 > k >= 0, through="10R",
               kcase="f4_10R_b", Kfun=lambda k, l: l - k - 1)]
    r += [_row("T4.10Ba", "4B", "10B", ("x^k y", "0 x^k y", "0 x^k-1 y"), vars="xy12",
               cond=lambda k, l: k >= 1, through="4R"),
          _row("T4.10Bb", "4B", "10B", ("0 x^k y", "x^k y", "x^k-1 y"), vars="xy12",
               cond=lambda k, l: k >= 1, through="4R"),
          _row("T4.10Bc", "4B", "10B", ("(x0)^k y", "0 (x0)^k y", "0 (x0)^k-1 y"),
               vars="xy12", cond=lambda k, l: k >= 1, through="10R"),
          _row("T4.10Bd", "4B", "10B", ("0 (x0)^k-1 y", "(x0)^k y", "(x0)^k-1 y"),
               vars="xy12", cond=lambda k, l: k >= 1, through="10R")]
    return r


GPRIME_ROWS: tuple[Row, ...] = tuple(_gprime_rows())

GPRIME_EDGES: dict[tuple[str, str], tuple[Row, ...]] = {}
for _r in GPRIME_ROWS:
    GPRIME_EDGES.setdefault((_r.src, _r.dst), ())
    GPRIME_EDGES[(_r.src, _r.dst)] += (_r,)


def rows_from(src: str) -> list[Row]:
    return [r for r in GPRIME_ROWS if r.src == src]


def match_schema(m: Morphism, src: str, dst: str) -> Match:
    """Unique row + parameters for a morphism on the edge src -> dst."""
    rows = GPRIME_EDGES.get((src, dst), ())
    return unique_row_match(rows, m, f"on edge {src} -> {dst}")
