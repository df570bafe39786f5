import pytest

from rauzyadic.errors import NonGrowing, NoStabilization, NotContractible
from rauzyadic.morphism import bracket, classify, compose_all, identity
from rauzyadic.sadic import (
    DirectiveWord, format_directive, generate_one_sided, language_horizon,
    parse_directive, parse_morphism_spec, proper_contraction,
    weak_primitivity_check,
)
from rauzyadic.words import complexity_profile, named_oracle

STURMIAN_ALT = DirectiveWord((), (bracket("0", "10"), bracket("01", "1")))
AR_CYCLE = DirectiveWord((), (bracket("0", "10", "20"), bracket("01", "1", "21"),
                              bracket("02", "12", "2")))
FIB_DW = DirectiveWord((), (bracket("01", "0"),))


def test_generate_fibonacci_prefix():
    res = generate_one_sided(FIB_DW, 8)
    assert res.prefix == "01001010"


def test_generate_prefix_stable():
    a = generate_one_sided(STURMIAN_ALT, 30).prefix
    b = generate_one_sided(STURMIAN_ALT, 90).prefix
    assert b.startswith(a)


def test_generate_identity_non_growing():
    with pytest.raises(NonGrowing):
        generate_one_sided(DirectiveWord((), (identity(2),)), 10)


def test_generate_non_growing_seed():
    with pytest.raises(NonGrowing):
        generate_one_sided(DirectiveWord((), (bracket("0", "10"),)), 10)


def test_sturmian_language_complexity():
    o = language_horizon(STURMIAN_ALT, 12)
    prof = complexity_profile(o, 10)
    assert prof.p == tuple(n + 1 for n in range(11))


def test_ar_language_is_tribonacci():
    o = language_horizon(AR_CYCLE, 10)
    trib = named_oracle("tribonacci", 10)
    for n in range(11):
        assert o.factors(n) == trib.factors(n)


def test_fibonacci_directive_language(fib):
    o = language_horizon(FIB_DW, 8)
    assert o.factors(2) == {"00", "01", "10"}
    for n in range(9):
        assert o.factors(n) == fib.factors(n)


def test_language_horizon_identities():
    o = language_horizon(AR_CYCLE, 12)
    prof = complexity_profile(o, 10)
    assert prof.p[1:] == tuple(2 * n + 1 for n in range(1, 11))


def test_non_minimal_directive_no_stabilization():
    bad = DirectiveWord((), (bracket("0", "10"),))
    with pytest.raises(NoStabilization):
        language_horizon(bad, 4)


def test_weak_primitivity():
    assert weak_primitivity_check(AR_CYCLE).holds
    assert weak_primitivity_check(STURMIAN_ALT).holds
    v = weak_primitivity_check(DirectiveWord((), (bracket("0", "10"),)))
    assert v.status == "fails" and v.fails_at == 0
    v = weak_primitivity_check(DirectiveWord((), (identity(2),)))
    assert v.status == "fails" and v.fails_at == 0
    v = weak_primitivity_check(DirectiveWord((bracket("0", "10"),)))
    assert v.status == "undetermined"


def test_weak_primitivity_iff_primitive_contraction():
    # on these eventually periodic examples a weakly primitive word admits
    # a contraction whose blocks have positive occurrence products
    for dw in (AR_CYCLE, STURMIAN_ALT, FIB_DW):
        assert weak_primitivity_check(dw).holds
        block = compose_all([dw.morphism(i) for i in range(2 * dw.known_levels() + 2)])
        occ = block.occurrence_matrix()
        assert all(all(row) for row in occ)


def test_proper_contraction_sturmian():
    t = proper_contraction(STURMIAN_ALT)
    for m in list(t.preperiod) + list(t.period):
        rec = classify(m)
        assert rec.right_proper and rec.left_proper
    o1 = language_horizon(STURMIAN_ALT, 10)
    o2 = language_horizon(t, 10)
    for n in range(11):
        assert o1.factors(n) == o2.factors(n)


def test_proper_contraction_ar():
    t = proper_contraction(AR_CYCLE)
    for m in list(t.preperiod) + list(t.period):
        rec = classify(m)
        assert rec.right_proper and rec.left_proper
    o1 = language_horizon(AR_CYCLE, 8)
    o2 = language_horizon(t, 8)
    for n in range(9):
        assert o1.factors(n) == o2.factors(n)


def test_proper_contraction_needs_primitivity():
    with pytest.raises(NotContractible):
        proper_contraction(DirectiveWord((), (bracket("0", "10"),)))


def test_directive_file_round_trip():
    text = """
# alternating Sturmian
preperiod:
period:
[0,10]
0->01;1->1
"""
    dw = parse_directive(text)
    assert dw.period == (bracket("0", "10"), bracket("01", "1"))
    again = parse_directive(format_directive(dw))
    assert again == dw


def test_parse_morphism_spec_names():
    m = parse_morphism_spec("M D20 D12")
    assert m == bracket("0", "110", "10", codomain=3)
    m = parse_morphism_spec("M G21 D20 D12")
    assert m == bracket("0", "1110", "110", codomain=3)
    assert parse_morphism_spec("D10") == bracket("0", "10", "2", codomain=3)


def test_non_primitive_word_has_no_primitive_contraction():
    # the converse direction: occurrence products of a non-weakly-primitive
    # directive never become positive over any block
    dw = DirectiveWord((), (bracket("0", "10"),))
    for span in (2, 5, 9):
        block = compose_all([dw.morphism(i) for i in range(span)])
        occ = block.occurrence_matrix()
        assert not all(all(row) for row in occ)


def test_proper_contraction_with_preperiod():
    dw = DirectiveWord((bracket("01", "201", "21"), bracket("0", "21", "1")),
                       (bracket("1", "02", "2"), bracket("0", "120", "10")))
    t = proper_contraction(dw)
    for m in list(t.preperiod) + list(t.period):
        rec = classify(m)
        assert rec.right_proper and rec.left_proper
    o1 = language_horizon(dw, 8)
    o2 = language_horizon(t, 8)
    for n in range(9):
        assert o1.factors(n) == o2.factors(n)
