import pytest
from hypothesis import given, strategies as st

from namelogic.errors import ParseError, UnsupportedFragmentError
from namelogic.formula import (
    And,
    B,
    Bot,
    C,
    D,
    E,
    FALSE,
    Iff,
    Implies,
    Not,
    Or,
    Prop,
    S,
    TRUE,
    Top,
    closure,
    desugar,
    modal_depth,
    names_in,
    parse_formula,
    print_formula,
    props_in,
    subformulas,
)

p, q, r = Prop("p"), Prop("q"), Prop("r")


# ---------------------------------------------------------------------------
# Parsing

def test_parse_atom():
    assert parse_formula("p") == p


def test_parse_constants():
    assert parse_formula("true") == TRUE
    assert parse_formula("false") == FALSE


def test_parse_someone_and_not_everyone():
    assert parse_formula("S[n] p & !E[n] p") == And(S("n", p), Not(E("n", p)))


def test_parse_common_knowledge_disjunction():
    assert parse_formula("C[n] (p | q)") == C("n", Or(p, q))


def test_parse_relativized_modality():
    assert parse_formula("B[a;n] (p -> q)") == B("a", "n", Implies(p, q))


def test_implication_is_right_associative():
    assert parse_formula("p -> q -> r") == Implies(p, Implies(q, r))


def test_iff_is_right_associative():
    assert parse_formula("p <-> q <-> r") == Iff(p, Iff(q, r))


def test_precedence_ladder():
    # <-> below -> below | below & below unary
    assert parse_formula("p & q | r") == Or(And(p, q), r)
    assert parse_formula("p | q -> r") == Implies(Or(p, q), r)
    assert parse_formula("p -> q <-> r") == Iff(Implies(p, q), r)
    assert parse_formula("!p & q") == And(Not(p), q)


def test_modalities_bind_their_immediate_argument():
    assert parse_formula("E[n] p & q") == And(E("n", p), q)
    assert parse_formula("S[m] S[m] q") == S("m", S("m", q))
    assert parse_formula("!E[n] p") == Not(E("n", p))


def test_parse_error_carries_position():
    with pytest.raises(ParseError) as exc:
        parse_formula("p &")
    assert exc.value.line == 1
    assert exc.value.column == 4


def test_unknown_token_rejected():
    with pytest.raises(ParseError):
        parse_formula("p @ q")


def test_unclosed_paren_rejected():
    with pytest.raises(ParseError):
        parse_formula("(p")


def test_uppercase_atom_rejected():
    with pytest.raises(ParseError):
        parse_formula("P")


def test_modal_without_bracket_is_not_an_atom():
    with pytest.raises(ParseError):
        parse_formula("E p")


# ---------------------------------------------------------------------------
# Printing

def test_print_examples():
    assert print_formula(S("n", p)) == "S[n] p"
    assert print_formula(Not(E("n", p))) == "!E[n] p"
    assert print_formula(D("n", And(p, q))) == "D[n] (p & q)"
    assert print_formula(B("a", "n", p)) == "B[a;n] p"


def test_print_respects_associativity():
    assert print_formula(And(And(p, q), r)) == "p & q & r"
    assert print_formula(And(p, And(q, r))) == "p & (q & r)"
    assert print_formula(Implies(p, Implies(q, r))) == "p -> q -> r"
    assert print_formula(Implies(Implies(p, q), r)) == "(p -> q) -> r"


def _formulas(names=("n", "m"), props=("p", "q"), agents=("a", "b")):
    leaves = [st.sampled_from([Prop(x) for x in props] + [TRUE, FALSE])]

    def extend(children):
        name = st.sampled_from(names)
        agent = st.sampled_from(agents)
        return st.one_of(
            st.builds(Not, children),
            st.builds(And, children, children),
            st.builds(Or, children, children),
            st.builds(Implies, children, children),
            st.builds(Iff, children, children),
            st.builds(E, name, children),
            st.builds(S, name, children),
            st.builds(C, name, children),
            st.builds(D, name, children),
            st.builds(B, agent, name, children),
        )

    return st.recursive(st.one_of(leaves), extend, max_leaves=12)


@given(_formulas())
def test_print_parse_roundtrip(f):
    assert parse_formula(print_formula(f)) == f


@given(_formulas())
def test_desugar_is_idempotent(f):
    core = desugar(f)
    assert desugar(core) == core


@given(_formulas())
def test_desugar_removes_sugar(f):
    assert not any(isinstance(g, (Or, Implies, Iff)) for g in subformulas(f))


# ---------------------------------------------------------------------------
# Subformulas and signature

def test_subformulas_of_core_conjunction():
    assert subformulas(And(p, q)) == frozenset({And(p, q), p, q})


def test_subformulas_include_modal_argument():
    assert subformulas(S("n", p)) == frozenset({S("n", p), p})


def test_signature_helpers():
    f = parse_formula("B[a;n] p & S[m] q")
    assert names_in(f) == frozenset({"n", "m"})
    assert props_in(f) == frozenset({"p", "q"})
    assert modal_depth(f) == 1
    assert modal_depth(parse_formula("S[n] S[n] S[n] p")) == 3
    assert modal_depth(p) == 0


# ---------------------------------------------------------------------------
# Closure

def test_closure_of_atom_has_no_modal_members():
    cl = closure(p)
    assert cl.formulas == frozenset({p, Not(p)})


def test_closure_of_someone_knows():
    # All members derivable by hand from the closure rules:
    # start S[n] p; subterms add p; seeds add S[n] true and E[n] false with
    # their subterms; E-weakening on E[n] false adds S[n] false; then single
    # negations of every non-negated member.
    positives = {
        S("n", p),
        p,
        S("n", TRUE),
        E("n", FALSE),
        S("n", FALSE),
        TRUE,
        FALSE,
    }
    expected = positives | {Not(g) for g in positives}
    cl = closure(S("n", p))
    assert cl.formulas == frozenset(expected)
    assert cl.names == frozenset({"n"})
    assert cl.props == frozenset({"p"})


def test_closure_of_common_knowledge_contains_unfolding():
    cl = closure(C("n", p))
    for member in (E("n", p), S("n", p), E("n", C("n", p))):
        assert member in cl
        assert Not(member) in cl


def test_closure_members_are_negation_paired():
    for chi in (S("n", p), C("n", Or(p, q)), parse_formula("S[n] p -> E[m] q")):
        cl = closure(chi)
        for g in cl:
            if isinstance(g, Not):
                assert g.arg in cl
            else:
                assert Not(g) in cl


def test_closure_is_closed():
    for chi in (S("n", p), C("n", Or(p, q)), parse_formula("!(S[n] p & !p)")):
        cl = closure(chi)
        for member in cl:
            assert closure(member).formulas <= cl.formulas


def test_closure_rejects_distributed_and_relativized():
    with pytest.raises(UnsupportedFragmentError):
        closure(D("n", p))
    with pytest.raises(UnsupportedFragmentError):
        closure(B("a", "n", p))


def test_closure_desugars_first():
    cl = closure(Implies(p, q))
    assert And(p, Not(q)) in cl
    assert not any(isinstance(g, (Or, Implies, Iff)) for g in cl)
