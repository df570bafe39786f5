"""Path-length bookkeeping computed from accumulated morphism images.

At an arrival in the two-loop region the quantities |u1|, |u2|, |v1|,
|v2| and the maximal loop count are linear in the letter-image lengths of
the composition of all earlier steps, together with common-prefix /
common-suffix data; an arrival in the no-loop region adds |p1| and |p2|.
Nothing here rebuilds Rauzy graphs: that is what the measurement oracle
in the test suite is for.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import UnsupportedCase
from .morphism import Morphism, compose_all


@dataclass(frozen=True)
class LengthState:
    u1: int | None = None
    u2: int | None = None
    v1: int | None = None
    v2: int | None = None
    K: int | None = None
    h: int | None = None
    p1: int | None = None
    p2: int | None = None

    def loops(self):
        return (self.u1, self.u2, self.v1, self.v2, self.K)


def common_prefix_len(a: str, b: str) -> int:
    n = 0
    for x, y in zip(a, b):
        if x != y:
            break
        n += 1
    return n


def common_suffix_len(a: str, b: str) -> int:
    return common_prefix_len(a[::-1], b[::-1])


def _power_suffix(g: Morphism, a: str, b: str) -> int:
    """|CS(g(a)^i, g(b)^j)| with the powers long enough to stabilize."""
    bound = 2 * max(len(w) for w in g.images) + 2
    wa, wb = g(a), g(b)
    pa = wa * (bound // max(1, len(wa)) + 2)
    pb = wb * (bound // max(1, len(wb)) + 2)
    return common_suffix_len(pa, pb)


def _type3_q(g: Morphism, top: str, x: str, y: str) -> int:
    """Length of the simple path from the left special vertex to the
    bispecial one in a one-right-special three-circuit graph.

    All three quantities are stabilized common suffixes of letter-image
    powers; the two pairs through the top loop pin the graph order."""
    order = min(_power_suffix(g, top, x), _power_suffix(g, top, y))
    return _power_suffix(g, x, y) - order


def _type10_data(g: Morphism) -> tuple[int, int]:
    """(order, left-to-bispecial path length) at a three-circuit loop
    vertex, from common suffixes of letter-image powers."""
    order = _power_suffix(g, "1", "2")
    q = _power_suffix(g, "0", "1") - order
    return order, q


def _c1_values(kcase: str, g: Morphism, sub: dict[str, str], k: int | None,
               l: int | None, entry: Morphism) -> tuple[int, int, int, int]:
    """(u1, u2, v1, v2) of the arrival region per the entry case.

    g is the composition of the steps before the entry; entry is the
    morphism of the entry step itself (for composite rows, of its embedded
    loop-region part)."""
    L = lambda w: len(g(w))
    x, y, z, i = (sub.get(c) for c in "xyzi")
    img0 = entry.images[0]
    if kcase == "type1_entry":
        return L(x) - 1, L(y) - 1, 1, 1
    if kcase == "c2_two_seg":
        return L(x) - 1, L(y) - 1, 1, 1
    if kcase == "c2_group":
        return L(x) - 1, L(y + z) - 1, 1, 1
    if kcase == "c2_pairfirst":
        return L(x + y) - 1, L(z) - 1, 1, 1
    if kcase == "c2_group_odd":
        return L(x) - 1, L(y) - 1, 1, L(z) + 1
    if kcase == "c2_pairsplit":
        return L(y) - 1, L(z) - 1, L(x) + 1, 1
    if kcase in ("c2_4R_a", "c2_4R_b"):
        u1 = L(x) - common_prefix_len(g(z), g(x)) - 1
        return u1, L(z) - 1, L(img0) - u1, 1
    if kcase == "c2_10R_a":
        u1, u2 = L(z) - 1, L(x) - 1
        return u1, u2, L(img0) - u1, L(x + y) - u2
    if kcase == "c2_10R_b":
        u1, u2 = L(z) - 1, L(y) - 1
        return u1, u2, L(img0) - u1, L(x) + 1
    if kcase == "v_top":
        q = _type3_q(g, i, x, y)
        u1, u2 = L(i) - 1, q - 1
        return u1, u2, 1, L(y) - u2
    if kcase == "v_bottom":
        q = _type3_q(g, i, x, y)
        u1, u2 = q - 1, L(i) - 1
        return u1, u2, L(x) - u1, 1
    if kcase == "v_10R_a":
        q = _type3_q(g, i, x, y)
        u1, u2 = L(i) - 1, L(y) - q - 1
        return u1, u2, L(img0) - u1, L(y) - u2
    if kcase == "v_10R_b":
        q = _type3_q(g, i, x, y)
        u1, u2 = L(i) - 1, q - 1
        return u1, u2, L(img0) - u1, L(y) - u2
    if kcase == "f4_direct":
        cp = common_prefix_len(g(x), g(y))
        u1, u2 = L("0") - 1, cp - 1
        return u1, u2, 1, L(x) - u2
    if kcase == "f4_4R":
        cp = common_prefix_len(g(x), g(y))
        u1, u2 = L(y) - cp - 1, L(x) - 1
        return u1, u2, L(img0) - u1, 1
    if kcase == "f4_10R_a":
        cp = common_prefix_len(g(x), g(y))
        u1, u2 = L(y) - cp - 1, L("0") - 1
        return u1, u2, L(img0) - u1, L(x + "0") - u2
    if kcase == "f4_10R_b":
        cp = common_prefix_len(g(x), g(y))
        u1, u2 = L(y) - cp - 1, L(x) - 1
        return u1, u2, L(img0) - u1, L("0") + 1
    if kcase in ("c56_direct", "c56_loop"):
        cp = common_prefix_len(g("0"), g("2"))
        u1, u2 = L("2") - cp - 1, cp - 1
        return u1, u2, L(img0) - u1, L("0") - u2
    if kcase == "c56_10R_a":
        cp = common_prefix_len(g("0"), g("2"))
        q = _power_suffix(g, "1", "2") - min(_power_suffix(g, "0", "1"),
                                             _power_suffix(g, "0", "2"))
        u1, u2 = L("0") - cp - 1, q - 1
        return u1, u2, L(img0) - u1, L("2") - u2
    if kcase == "c56_10R_b":
        cp = common_prefix_len(g("0"), g("2"))
        u1, u2 = L("0") - cp - 1, L("2") - cp - 1
        return u1, u2, L(img0) - u1, cp + 1
    if kcase in ("c10B_direct", "c10B_56"):
        cp = common_prefix_len(g("1"), g("2"))
        _, q = _type10_data(g)
        u1, u2 = q - 1, cp - 1
        return u1, u2, L(img0) - u1, L("2") - u2
    if kcase == "c10B_10R_a":
        cp = common_prefix_len(g("1"), g("2"))
        _, q = _type10_data(g)
        u1, u2 = L("2") - cp - 1, q - 1
        return u1, u2, L(img0) - u1, L("1") - u2
    if kcase == "c10B_10R_b":
        cp = common_prefix_len(g("1"), g("2"))
        u1, u2 = L("2") - cp - 1, L("0") - 1
        return u1, u2, L(img0) - u1, L("1") - u2
    raise UnsupportedCase(f"no length formulas for case {kcase!r}")


_EMBEDDED_ENTRY = {
    "c56_loop": lambda k: Morphism(("1", "0" * k + "2", "0" * (k - 1) + "2"), 3),
    "c10B_56": lambda k: Morphism(("0", "2" * k + "1", "2" * (k - 1) + "1"), 3),
}


def _entry_data(steps, e):
    """(u1, u2, v1, v2, K) for the entry at index e of the step list."""
    step = steps[e]
    row = step.match.row
    if row.kcase is None:
        raise UnsupportedCase(f"step {row.rid} does not enter the two-loop region")
    g = compose_all([s.label for s in steps[:e]], n=step.label.codomain)
    entry = step.label
    if row.kcase in _EMBEDDED_ENTRY:
        entry = _EMBEDDED_ENTRY[row.kcase](step.match.k)
    u1, u2, v1, v2 = _c1_values(row.kcase, g, step.match.sub, step.match.k,
                                step.match.l, entry)
    K = row.Kfun(step.match.k or 0, step.match.l or 0)
    return g, entry, (u1, u2, v1, v2, K)


def _is_loop_step(step) -> bool:
    return step.src == "7/8" and step.dst == "7/8"


def compute_length_state(steps) -> LengthState:
    """LengthState of a matched step prefix ending at 7/8 or 5/6.

    ``steps`` carry ``label`` (the morphism) and ``match`` (the table row
    with parameters), as produced by extraction or by directive routing.
    """
    if not steps:
        raise UnsupportedCase("empty step prefix")
    last = steps[-1]
    if last.dst == "7/8":
        e = len(steps) - 1
        h = 0
        while e >= 0 and _is_loop_step(steps[e]):
            h += 1
            e -= 1
        if e < 0 or steps[e].match.row.kcase is None:
            raise UnsupportedCase("no region entry before the loop steps")
        _, _, (u1, u2, v1, v2, K) = _entry_data(steps, e)
        return LengthState(u1, u2, v1, v2, K, h=h)
    if last.dst != "5/6":
        raise UnsupportedCase(f"prefix ends at {last.dst}, not 7/8 or 5/6")
    if last.match.row.kcase in _EMBEDDED_ENTRY:
        e, h = len(steps) - 1, 0
        g, entry, (u1, u2, v1, v2, K) = _entry_data(steps, e)
        gam = compose_all([g, entry])
    else:
        e = len(steps) - 2
        h = 0
        while e >= 0 and _is_loop_step(steps[e]):
            h += 1
            e -= 1
        if e < 0 or steps[e].match.row.kcase is None:
            raise UnsupportedCase("no region entry before the no-loop arrival")
        g, entry, (u1, u2, v1, v2, K) = _entry_data(steps, e)
        # the accumulated images include the loop explosions before the exit
        gam = compose_all([g, entry] + [s.label for s in steps[e + 1 : -1]])
    p1, p2 = _p_lengths(gam, u1, u2, v1, v2, K, h)
    return LengthState(u1, u2, v1, v2, K, h=h, p1=p1, p2=p2)


def exit_gate_bound(u1, u2, v1, v2, K, h) -> bool:
    """The two-loop exit inequality |u1| + h(|u1|+|v1|) >= |u2| + (K-1)(|u2|+|v2|)."""
    return u1 + h * (u1 + v1) >= u2 + (K - 1) * (u2 + v2)


def _ell(u1, u2, v1, v2, K) -> int:
    """The unique l with u1 + (l-1)(u1+v1) < u2 + (K-1)(u2+v2) <= u1 + l(u1+v1)."""
    rhs = u2 + (K - 1) * (u2 + v2)
    l = 0
    while u1 + l * (u1 + v1) < rhs:
        l += 1
    return l


def _p_lengths(gam: Morphism, u1, u2, v1, v2, K, h) -> tuple[int, int]:
    """|p1| (chain side) and |p2| of the no-loop region after h loop steps.

    gam is the accumulated composition through the last loop explosion;
    the excess term counts from the h-th chain-side explosion (adjudicated
    against direct measurement; the source text uses the l-th)."""
    cp = common_prefix_len(gam.images[1], gam.images[2])
    l = _ell(u1, u2, v1, v2, K)
    rhs = u2 + (K - 1) * (u2 + v2)
    if h < l:
        kp = 0
        while u2 + kp * (u2 + v2) < u1 + h * (u1 + v1):
            kp += 1
        other = cp - (K - 1 - kp) * (u2 + v2) - (u2 + kp * (u2 + v2) - (u1 + h * (u1 + v1))) - 1
        mine = len(gam.images[2]) - cp - 1
    else:
        other = cp - 1
        mine = len(gam.images[2]) - cp - (u1 + h * (u1 + v1) - rhs) - 1
    return mine, other
