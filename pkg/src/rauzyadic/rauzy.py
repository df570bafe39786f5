"""Rauzy graphs of order n, reduced graphs, the 10 shapes, and circuits.

The order-n graph has the length-n factors as vertices and one edge per
length-(n+1) factor; the reduced graph condenses non-special interior
vertices.  Shape classification covers the ten types a minimal subshift
with 1 <= p(n+1)-p(n) <= 2 can exhibit at a bispecial order.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .errors import (ChainBlocked, EnumerationBudgetExceeded, HorizonExceeded,
                     OutOfClass)
from .words import FactorOracle, Word


@dataclass(frozen=True)
class Edge:
    """Edge u -> v with u.right == left.v, the full label."""

    src: Word
    left: str
    right: str
    dst: Word

    @property
    def full_label(self) -> Word:
        return self.src + self.right


@dataclass(frozen=True)
class RauzyGraph:
    order: int
    vertices: frozenset[Word]
    edges: tuple[Edge, ...]

    def out_edges(self, u: Word) -> tuple[Edge, ...]:
        return self._adj()[0].get(u, ())

    def in_edges(self, v: Word) -> tuple[Edge, ...]:
        return self._adj()[1].get(v, ())

    def _adj(self):
        if not hasattr(self, "_adj_cache"):
            out: dict[Word, list[Edge]] = {}
            inc: dict[Word, list[Edge]] = {}
            for e in self.edges:
                out.setdefault(e.src, []).append(e)
                inc.setdefault(e.dst, []).append(e)
            object.__setattr__(self, "_adj_cache",
                               ({u: tuple(sorted(es, key=lambda e: e.right)) for u, es in out.items()},
                                {v: tuple(sorted(es, key=lambda e: e.right)) for v, es in inc.items()}))
        return self._adj_cache

    def full_labels(self) -> frozenset[Word]:
        return frozenset(e.full_label for e in self.edges)


def build_graph(oracle: FactorOracle, n: int) -> RauzyGraph:
    """Vertices are the length-n factors, one edge per length-(n+1) factor."""
    if n + 1 > oracle.horizon:
        raise HorizonExceeded(f"graph of order {n} needs horizon {n + 1}")
    edges = tuple(sorted((Edge(w[:-1], w[0], w[-1], w[1:]) for w in oracle.factors(n + 1)),
                         key=lambda e: e.full_label))
    return RauzyGraph(n, frozenset(oracle.factors(n)), edges)


# -- paths and circuits -----------------------------------------------


@dataclass(frozen=True)
class Path:
    """Edge path; empty paths are anchored at a vertex."""

    order: int
    start: Word
    edges: tuple[Edge, ...]

    def __post_init__(self):
        prev = self.start
        for e in self.edges:
            if e.src != prev:
                raise ValueError("edges do not chain")
            prev = e.dst

    @property
    def end(self) -> Word:
        return self.edges[-1].dst if self.edges else self.start

    def __len__(self):
        return len(self.edges)

    @property
    def right_label(self) -> Word:
        return "".join(e.right for e in self.edges)

    @property
    def left_label(self) -> Word:
        return "".join(e.left for e in self.edges)

    @property
    def full_label(self) -> Word:
        return self.start + self.right_label

    @property
    def vertices(self) -> tuple[Word, ...]:
        return (self.start,) + tuple(e.dst for e in self.edges)

    def visits(self, v: Word) -> int:
        return self.vertices.count(v)

    def concat(self, other: "Path") -> "Path":
        if other.start != self.end:
            raise ValueError("paths do not chain")
        return Path(self.order, self.start, self.edges + other.edges)


def walk(graph: RauzyGraph, start: Word, right_label: Word) -> Path:
    """The unique path from start with the given right label."""
    edges = []
    cur = start
    for b in right_label:
        matches = [e for e in graph.out_edges(cur) if e.right == b]
        if len(matches) != 1:
            raise ValueError(f"no unique edge from {cur!r} with right label {b!r}")
        edges.append(matches[0])
        cur = matches[0].dst
    return Path(graph.order, start, tuple(edges))


@dataclass(frozen=True)
class Circuit:
    """Path from a right special vertex back to itself with no interior
    visit of the start; allowed iff its full label is in the language."""

    path: Path
    allowed: bool

    @property
    def start(self) -> Word:
        return self.path.start

    @property
    def right_label(self) -> Word:
        return self.path.right_label

    @property
    def full_label(self) -> Word:
        return self.path.full_label

    def __len__(self):
        return len(self.path)


def circuit(graph: RauzyGraph, path: Path, oracle: FactorOracle) -> Circuit:
    """Wrap a path as a circuit, computing its allowed flag."""
    if path.start != path.end or len(path) == 0:
        raise ValueError("not a circuit: endpoints differ or empty")
    if path.start in path.vertices[1:-1]:
        raise ValueError("not a circuit: interior visit of the start")
    lbl = path.full_label
    allowed = len(lbl) <= oracle.horizon and oracle.contains(lbl)
    return Circuit(path, allowed)


def circuits_from(graph: RauzyGraph, v: Word, oracle: FactorOracle,
                  budget: int = 1_000_000) -> tuple[Circuit, ...]:
    """All allowed circuits from v, by depth-first search with
    allowed-prefix pruning.  Sorted by right label."""
    if len(oracle.right_extensions(v)) < 2:
        return ()
    out: list[Circuit] = []
    expansions = 0
    stack: list[Path] = [Path(graph.order, v, ())]
    while stack:
        p = stack.pop()
        for e in graph.out_edges(p.end):
            expansions += 1
            if expansions > budget:
                raise EnumerationBudgetExceeded(f"circuit enumeration from {v!r} exceeded {budget}")
            lbl = p.full_label + e.right
            if len(lbl) > oracle.horizon:
                raise HorizonExceeded(f"circuit from {v!r} grew past horizon {oracle.horizon}")
            if not oracle.contains(lbl):
                continue
            q = Path(graph.order, v, p.edges + (e,))
            if e.dst == v:
                out.append(Circuit(q, True))
            else:
                stack.append(q)
    return tuple(sorted(out, key=lambda c: c.right_label))


def psi_project(p: Path, lower: RauzyGraph) -> Path:
    """The unique path in the order-(n-1) graph with the same right label
    whose endpoints are suffixes of p's endpoints."""
    if p.order != lower.order + 1:
        raise ValueError("psi projects one order down")
    return walk(lower, p.start[1:], p.right_label)


# -- reduced graphs and shapes ----------------------------------------


@dataclass(frozen=True)
class ReducedEdge:
    src: Word
    dst: Word
    path: Path

    @property
    def length(self) -> int:
        return len(self.path)

    @property
    def right_label(self) -> Word:
        return self.path.right_label

    @property
    def full_label(self) -> Word:
        return self.path.full_label


@dataclass(frozen=True)
class ReducedRauzyGraph:
    order: int
    vertices: frozenset[Word]
    edges: tuple[ReducedEdge, ...]

    def out_edges(self, u: Word) -> tuple[ReducedEdge, ...]:
        return tuple(e for e in self.edges if e.src == u)

    def in_edges(self, v: Word) -> tuple[ReducedEdge, ...]:
        return tuple(e for e in self.edges if e.dst == v)


def special_vertices(graph: RauzyGraph, oracle: FactorOracle) -> frozenset[Word]:
    """Special or boundary vertices (for minimal subshifts, just the specials)."""
    out = set()
    for v in graph.vertices:
        dplus = len(graph.out_edges(v))
        dminus = len(graph.in_edges(v))
        if dplus >= 2 or dminus >= 2 or dplus == 0 or dminus == 0:
            out.add(v)
    return frozenset(out)


def reduce_graph(graph: RauzyGraph, oracle: FactorOracle) -> ReducedRauzyGraph:
    """Condense maximal paths whose interior vertices are non-special."""
    keep = special_vertices(graph, oracle)
    if not keep:
        raise OutOfClass(f"order {graph.order}: no special vertex (periodic language)")
    edges = []
    for u in sorted(keep):
        for first in graph.out_edges(u):
            chain = [first]
            while chain[-1].dst not in keep:
                nxt = graph.out_edges(chain[-1].dst)
                if len(nxt) != 1:
                    raise OutOfClass("non-special vertex with out-degree != 1")
                chain.append(nxt[0])
            p = Path(graph.order, u, tuple(chain))
            edges.append(ReducedEdge(u, p.end, p))
    edges.sort(key=lambda e: (e.src, e.full_label))
    return ReducedRauzyGraph(graph.order, keep, tuple(edges))


@dataclass(frozen=True)
class GraphShape:
    """One of the ten shapes, with the measurements its type carries.

    ``u_role`` says whether the chain vertex is the bispecial vertex ('B')
    or the other right special one ('R').  ``gap`` is nonzero when the
    classified order had no bispecial factor and the type reported is the
    one of the next bispecial order.
    """

    type_id: int
    order: int
    u_role: str | None = None
    gap: int = 0
    p1: int | None = None
    p2: int | None = None
    u1: int | None = None
    u2: int | None = None
    v1: int | None = None
    v2: int | None = None


def _single_cycle(g: ReducedRauzyGraph, r: Word, avoid: Word | None):
    """The unique condensed cycle through r avoiding ``avoid``; returns the
    list of reduced edges or None."""
    best = None
    stack = [(r, [])]
    while stack:
        cur, acc = stack.pop()
        for e in g.out_edges(cur):
            if avoid is not None and e.dst == avoid:
                continue
            if e.dst == r:
                if best is not None and [x.full_label for x in best] != [x.full_label for x in acc + [e]]:
                    return None  # not unique
                best = acc + [e]
            elif e.dst not in [x.dst for x in acc] and e.dst != r:
                stack.append((e.dst, acc + [e]))
    return best


def classify_shape(g: ReducedRauzyGraph, oracle: FactorOracle, chain_vertex: Word | None = None,
                   gap: int = 0) -> GraphShape:
    """Classify a reduced graph at a bispecial order among the ten types."""
    n = g.order
    rs = sorted(v for v in g.vertices if oracle.is_right_special(v))
    ls = sorted(v for v in g.vertices if oracle.is_left_special(v))
    bis = sorted(set(rs) & set(ls))
    if not bis:
        raise OutOfClass(f"order {n}: no bispecial vertex")
    dplus = {v: len(g.out_edges(v)) for v in g.vertices}

    def role(shape: GraphShape) -> GraphShape:
        if chain_vertex is None or len(rs) == 1:
            return replace(shape, u_role="B" if chain_vertex in bis else None)
        return replace(shape, u_role="B" if chain_vertex in bis else "R")

    if len(rs) == 1 and len(ls) == 1:
        b = bis[0]
        if dplus[b] == 2:
            return role(GraphShape(1, n, gap=gap))
        if dplus[b] == 3:
            return role(GraphShape(2, n, gap=gap))
        raise OutOfClass(f"order {n}: degree {dplus[b]} bispecial")
    if len(rs) == 1 and len(ls) == 2:
        return role(GraphShape(3, n, gap=gap))
    if len(rs) == 2 and len(ls) == 1:
        return role(GraphShape(4, n, gap=gap))
    if len(rs) == 2 and len(ls) == 2:
        loops = {v for v in rs if any(e.dst == v for e in g.out_edges(v))}
        if len(bis) == 2:
            if loops == set(rs):
                sh = GraphShape(8, n, gap=gap, u1=0, u2=0)
                b1, b2 = rs if chain_vertex != rs[-1] else (rs[1], rs[0])
                c1 = _single_cycle(g, b1, avoid=b2)
                c2 = _single_cycle(g, b2, avoid=b1)
                if c1 and c2:
                    sh = replace(sh, v1=sum(e.length for e in c1), v2=sum(e.length for e in c2))
                return role(sh)
            if not loops:
                return role(GraphShape(6, n, gap=gap, p1=0, p2=0))
            raise OutOfClass(f"order {n}: two bispecials, one loop")
        # one bispecial, one right-only special, one left-only special
        b = bis[0]
        r = next(v for v in rs if v != b)
        l = next(v for v in ls if v != b)
        has_b_loop = b in loops
        r_cycle_avoiding_b = _single_cycle(g, r, avoid=b)
        if has_b_loop and r_cycle_avoiding_b:
            v1 = sum(e.length for e in r_cycle_avoiding_b[:1])
            u1 = sum(e.length for e in r_cycle_avoiding_b[1:])
            bl = next(e for e in g.out_edges(b) if e.dst == b)
            return role(GraphShape(7, n, gap=gap, u1=u1, u2=0, v1=v1, v2=bl.length))
        if has_b_loop:
            return role(GraphShape(9, n, gap=gap))
        # no loops at all: type 5 or type 10, told apart by parallel edges
        doubles = any(sum(1 for f in g.out_edges(v) if f.dst == e.dst) == 2
                      for v in g.vertices for e in g.out_edges(v))
        if doubles:
            p2 = next((e.length for e in g.in_edges(r) if e.src == l), None)
            return role(GraphShape(5, n, gap=gap, p1=0, p2=p2))
        return role(GraphShape(10, n, gap=gap))
    raise OutOfClass(f"order {n}: {len(rs)} right specials, {len(ls)} left specials")


def next_bispecial_order(oracle: FactorOracle, n: int) -> int:
    m = n
    while not oracle.bispecials(m):
        m += 1
        if m + 2 > oracle.horizon:
            raise HorizonExceeded(f"no bispecial order found above {n} within horizon")
    return m


def reduce_and_classify(graph: RauzyGraph, oracle: FactorOracle,
                        chain_vertex: Word | None = None) -> tuple[ReducedRauzyGraph, GraphShape]:
    """Reduced graph plus its type; at a non-bispecial order the type is the
    one of the next bispecial order, with the gap recorded."""
    n = graph.order
    g = reduce_graph(graph, oracle)
    for m in (n, n + 1):
        p = len(oracle.factors(m + 1)) - len(oracle.factors(m))
        if not 1 <= p <= 2:
            raise OutOfClass(f"order {m}: first difference {p} outside [1, 2]")
    if oracle.bispecials(n):
        return g, classify_shape(g, oracle, chain_vertex)
    m = next_bispecial_order(oracle, n)
    gm = reduce_graph(build_graph(oracle, m), oracle)
    chain_m = None
    if chain_vertex is not None:
        chain_m = right_special_chain(oracle, m)[m]
    shape = classify_shape(gm, oracle, chain_m, gap=m - n)
    return g, replace(shape, order=n)


# -- the right special chain ------------------------------------------


def right_special_chain(oracle: FactorOracle, N: int) -> list[Word]:
    """U_0..U_N with U_n right special of length n and a suffix of U_{n+1}.

    The chain is the branch of the right-special suffix tree that reaches
    order N; where several do, the lexicographically smallest extension is
    taken at each step.
    """
    if N + 1 > oracle.horizon:
        raise HorizonExceeded(f"chain to {N} needs horizon {N + 1}")
    levels = [oracle.right_specials(n) for n in range(N + 1)]
    depth: dict[Word, int] = {}
    for n in range(N, -1, -1):
        for u in levels[n]:
            kids = [w for w in levels[n + 1] if w[1:] == u] if n < N else []
            depth[u] = 1 + max((depth[w] for w in kids), default=0)
    chain = [""]
    for n in range(N):
        kids = sorted(w for w in levels[n + 1] if w[1:] == chain[-1])
        if not kids:
            raise ChainBlocked(f"no right special extension of {chain[-1]!r} at order {n + 1}")
        best = max(depth[w] for w in kids)
        chain.append(next(w for w in kids if depth[w] == best))
    return chain


# -- measurements for the length bookkeeping ---------------------------


@dataclass(frozen=True)
class LoopMeasurement:
    """u_i, v_i and the maximal loop count K in a two-loop configuration,
    with side 1 the chain side."""

    u1: int
    u2: int
    v1: int
    v2: int
    K: int


def measure_two_loops(oracle: FactorOracle, order: int, chain_vertex: Word,
                      budget: int = 1_000_000) -> LoopMeasurement:
    """Direct measurement of |u1|, |u2|, |v1|, |v2| and K on the graph."""
    graph = build_graph(oracle, order)
    g = reduce_graph(graph, oracle)
    rs = [v for v in g.vertices if oracle.is_right_special(v)]
    if len(rs) != 2 or chain_vertex not in rs:
        raise OutOfClass(f"order {order}: not a two-right-special configuration")
    r1 = chain_vertex
    r2 = next(v for v in rs if v != r1)
    sides = {}
    for i, (ri, rj) in enumerate(((r1, r2), (r2, r1)), start=1):
        cyc = _single_cycle(g, ri, avoid=rj)
        if cyc is None:
            raise OutOfClass(f"order {order}: no unique own cycle at {ri!r}")
        if len(cyc) == 1:
            sides[i] = (0, cyc[0].length)
        elif len(cyc) == 2:
            sides[i] = (cyc[1].length, cyc[0].length)
        else:
            raise OutOfClass(f"order {order}: own cycle through {len(cyc)} condensed edges")
    circs = circuits_from(graph, r1, oracle, budget)
    K = max((c.path.visits(r2) - 1 for c in circs if c.path.visits(r2)), default=0)
    return LoopMeasurement(u1=sides[1][0], u2=sides[2][0], v1=sides[1][1], v2=sides[2][1], K=K)


def measure_no_loops(oracle: FactorOracle, order: int, chain_vertex: Word) -> tuple[int, int]:
    """|p1| (into the chain-side right special) and |p2| in the four-cycle
    configuration of the 5/6 region."""
    graph = build_graph(oracle, order)
    g = reduce_graph(graph, oracle)
    rs = [v for v in g.vertices if oracle.is_right_special(v)]
    if len(rs) != 2 or chain_vertex not in rs:
        raise OutOfClass(f"order {order}: not a two-right-special configuration")
    r1 = chain_vertex
    r2 = next(v for v in rs if v != r1)
    out = {}
    for i, ri in enumerate((r1, r2), start=1):
        incoming = g.in_edges(ri)
        srcs = {e.src for e in incoming}
        if srcs == {ri} or not incoming:
            raise OutOfClass(f"order {order}: loop at {ri!r}, not a 5/6 region")
        plain = [e for e in incoming if e.src != ri]
        if len({e.src for e in plain}) != 1:
            raise OutOfClass(f"order {order}: several predecessors of {ri!r}")
        src = plain[0].src
        if oracle.is_left_special(src) and not oracle.is_right_special(src):
            out[i] = plain[0].length
        else:
            out[i] = 0
    return out[1], out[2]


# -- DOT export --------------------------------------------------------


def to_dot(graph: RauzyGraph | ReducedRauzyGraph, name: str = "rauzy") -> str:
    """Deterministic DOT rendering; reduced edges use doubled pen width."""
    reduced = isinstance(graph, ReducedRauzyGraph)
    lines = [f"digraph {name} {{", "  rankdir=LR;"]
    for v in sorted(graph.vertices):
        label = v if v else "eps"
        lines.append(f'  "{label}";')
    edges = sorted(graph.edges, key=lambda e: (e.src, e.full_label))
    for e in edges:
        src = e.src if e.src else "eps"
        dst = e.dst if e.dst else "eps"
        style = ', penwidth=2' if reduced else ""
        lines.append(f'  "{src}" -> "{dst}" [label="{e.full_label}"{style}];')
    lines.append("}")
    return "\n".join(lines) + "\n"
