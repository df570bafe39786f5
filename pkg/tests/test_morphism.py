import itertools

import pytest
from hypothesis import given, strategies as st

from rauzyadic.errors import AlphabetMismatch, NotInCatalog, NotRightProper
from rauzyadic.morphism import (
    D, DERIVED_EXPANSION, E, G, GEN_E01, GEN_E12, GEN_G, GEN_M, M,
    bracket, classify, compose, compose_all, compose_generators, decompose,
    derived, identity, left_conjugate, parse_rules, permutation,
)

PERMS3 = list(itertools.permutations(range(3)))


def perm_m(x, y, z):
    """The letter-to-letter morphism 0->x, 1->y, 2->z."""
    return permutation(f"{x}{y}{z}")


def br3(*images):
    return bracket(*images, codomain=3)


def test_apply_examples():
    assert GEN_G("01") == "101"
    assert GEN_M("012") == "011"
    assert identity(3)("0120") == "0120"


def test_compose_examples():
    m = compose(GEN_M, compose(D(2, 0), D(1, 2)))
    assert m == br3("0", "110", "10")
    assert compose(GEN_E01, GEN_E01) == identity(3)
    assert compose(GEN_E12, GEN_E12) == identity(3)
    e02 = compose_all([GEN_E01, GEN_E12, GEN_E01])
    assert compose_all([e02, D(0, 2), e02]) == D(2, 0) == br3("0", "1", "20")


def test_compose_alphabet_mismatch():
    with pytest.raises(AlphabetMismatch):
        compose(bracket("01", "1"), bracket("0", "1", "2"))


def test_classify():
    rec = classify(bracket("0", "10", "20"))
    assert rec.right_proper and rec.ending == "0" and not rec.left_proper
    rec = classify(GEN_E01)
    assert rec.letter_to_letter and not rec.right_proper
    rec = classify(bracket("01", "1"))
    assert rec.right_proper and rec.ending == "1" and not rec.left_proper


def test_left_conjugate():
    assert left_conjugate(bracket("0", "10", "20")) == bracket("0", "01", "02")
    assert left_conjugate(bracket("01", "1")) == bracket("10", "1")
    assert left_conjugate(bracket("0", "110", "10")) == bracket("0", "011", "01")
    with pytest.raises(NotRightProper):
        left_conjugate(GEN_E01)


def test_rule_string_round_trip():
    m = bracket("01", "0")
    assert parse_rules(m.rule_string()) == m
    assert parse_rules("0 -> 01; 1 -> 0") == m


def test_derived_expansions_hold():
    # every derived-family identity of the decomposition table
    for name, word in DERIVED_EXPANSION.items():
        if name == "E02":
            assert compose_generators(word) == E(0, 2) == br3("2", "1", "0")
        else:
            assert compose_generators(word) == derived(name), name


def test_exchange_involutions():
    for x, y in [(0, 1), (1, 2), (0, 2)]:
        assert compose(E(x, y), E(x, y)) == identity(3)


@given(st.permutations(range(3)), st.permutations(range(3)), st.permutations(range(3)))
def test_compose_associative(p, q, r):
    a, b, c = perm_m(*p), perm_m(*q), perm_m(*r)
    assert compose(compose(a, b), c) == compose(a, compose(b, c))


# -- the decomposition formula catalog --------------------------------
#
# Each entry: (pattern builder, factor builder, parameter predicate).
# x, y, z is a permutation of 0, 1, 2; L is the digit function.


def L(*ints):
    return "".join(str(i) for i in ints)


def formula_instances(kmax=5):
    """All (morphism, factors) pairs of the ten proof formulas, k,l <= kmax."""
    out = []
    for x, y, z in PERMS3:
        X, Y, Z = str(x), str(y), str(z)
        perm = perm_m(x, y, z)
        for k in range(1, kmax + 1):
            if k >= 2:
                out.append((br3(X, Y * k + X, Y * (k - 1) + X),
                            [M(z, x)] + [G(z, y)] * (k - 1) + [D(y, z), perm]))
                out.append((br3(X, X + Y * k, X + Y * (k - 1)),
                            [M(z, x)] + [D(z, y)] * (k - 1) + [G(y, z), perm]))
            out.append((br3(X, Y * k + Z, Y * (k - 1) + Z),
                        [G(z, y)] * (k - 1) + [D(y, z), perm]))
            out.append((br3(X, Z + Y * k + X, Z + Y * (k - 1) + X),
                        [D(z, y)] * (k - 1) + [G(y, z), D(y, x), D(z, x), perm]))
            out.append((br3(Y * k + X, Z + Y * k + X, Z + Y * (k - 1) + X),
                        [G(x, y)] * (k - 1) + [D(y, x), G(x, z), D(z, y), perm_m(y, z, x)]))
            out.append((br3(X + Y * k, X + Z + Y * k, X + Z + Y * (k - 1)),
                        [G(z, x)] + [D(z, y)] * (k - 1) + [D(x, y)] * k + [G(y, z), perm]))
            for l in range(0, kmax + 1):
                if l < k:
                    out.append((br3(Y * l + X, Z + Y * k + X, Z + Y * (k - 1) + X),
                                [D(z, y)] * (k - l - 1) + [G(x, y)] * l
                                + [G(y, z), D(y, x), D(z, x), perm]))
                if l <= k:
                    out.append((br3(X + Y * l + Z, Y * k + Z, Y * (k - 1) + Z),
                                [D(x, y)] * l + [D(x, z)] + [G(z, y)] * (k - 1) + [D(y, z), perm]))
                    # first factor D(x,y)^l, not G(x,y)^l as misprinted in the source table
                    out.append((br3(Z + X + Y * l, Z + Y * k, Z + Y * (k - 1)),
                                [D(x, y)] * l + [G(x, z)] + [D(z, y)] * (k - 1) + [G(y, z), perm]))
    return out


def test_formula_identities():
    # the displayed decomposition formulas hold as morphism equalities
    inst = formula_instances()
    assert len(inst) > 450
    for m, factors in inst:
        assert compose_all(factors) == m, m


def test_section_4_formulas():
    # M G21^{k-2} D20 D12 and friends
    for k in range(2, 6):
        prod = compose_all([GEN_M] + [G(2, 1)] * (k - 2) + [D(2, 0), D(1, 2)])
        assert prod == br3("0", "1" * k + "0", "1" * (k - 1) + "0")
        prod = compose_all([GEN_E01, GEN_M] + [G(2, 1)] * (k - 2) + [D(2, 0), D(1, 2)])
        assert prod == br3("1", "0" * k + "1", "0" * (k - 1) + "1")
        prod = compose_all([GEN_M] + [G(2, 1)] * (k - 2) + [G(2, 0), G(1, 2)])
        assert prod == br3("0", "0" + "1" * k, "0" + "1" * (k - 1))


def test_decompose_examples():
    word = decompose(bracket("0", "110", "10"))
    assert compose_generators(word) == br3("0", "110", "10")
    assert decompose(identity(3)) == ()
    assert decompose(identity(2)) == ()
    # [x, y^k x, y^{k-1} x] for (x,y,k)=(1,0,3)
    m = br3("1", "0001", "001")
    assert compose_generators(decompose(m)) == m


def test_decompose_formula_instances():
    for m, _ in formula_instances(kmax=4):
        word = decompose(m)
        assert compose_generators(word).restrict(m.domain).images == m.images, m


def test_decompose_two_letter():
    for m in [bracket("0", "10"), bracket("01", "1"), bracket("10", "0"), bracket("1", "01"),
              bracket("120", "20"), bracket("20", "120"), bracket("0", "1100")]:
        word = decompose(m)
        comp = compose_generators(word)
        assert comp.images[:2] == m.images, m


def test_decompose_rejects_non_catalog():
    with pytest.raises(NotInCatalog):
        decompose(bracket("00", "11", "22"))


@given(st.sampled_from(sorted(DERIVED_EXPANSION)), st.sampled_from(sorted(DERIVED_EXPANSION)))
def test_decompose_products_of_derived(a, b):
    if a.startswith("M") and b.startswith("M"):
        return
    m = compose(compose_generators(DERIVED_EXPANSION[a]), compose_generators(DERIVED_EXPANSION[b]))
    word = decompose(m)
    assert compose_generators(word) == m


@given(st.lists(st.sampled_from(sorted(set(DERIVED_EXPANSION) - {"M01", "M10", "M02", "M20", "M12", "M21"})),
                min_size=1, max_size=5))
def test_decompose_random_products(names):
    m = compose_all([compose_generators(DERIVED_EXPANSION[n]) for n in names])
    word = decompose(m)
    assert compose_generators(word) == m


def test_left_conjugate_preserves_factor_sets():
    from rauzyadic.words import factors_of
    m = bracket("0", "110", "10", codomain=3)
    lc = left_conjugate(m)
    w = "0102101102"
    for n in range(1, 6):
        # images differ by a one-letter shift, so interior factors agree
        a, b = m(w), lc(w)
        assert factors_of(a[1:-1], n) == factors_of(b[1:-1], n)
