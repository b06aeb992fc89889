import pytest

from lmatrix.algebra_a import Algebra, Representation, render
from lmatrix.catalog import get_example
from lmatrix.errors import InputError
from lmatrix.gim import Ordering
from lmatrix.lambda_engine import (
    advance,
    check_C1,
    check_C2,
    check_C3,
    check_relations,
    check_tau_relations,
    first_step_pairs,
    init_state,
    iter_states,
    lambda_expression,
    make_tau,
    run_sequence,
    step_pairs,
)
from lmatrix.matrix_core import apply_sequence
from lmatrix.mutation_reflections import reflection_state


@pytest.fixture
def start(running):
    return init_state(running, Ordering.parse("1<2<3", 3))


@pytest.fixture
def after_2(start):
    return advance(start, 2)


def test_initial_state(start):
    assert start.lam == ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    assert start.w == ()
    assert start.tau == ()
    assert check_relations(start) == []
    assert check_C1(start) and check_C2(start)


def test_first_pair_sets(start):
    p_s, p_tau = first_step_pairs(start, 2)
    assert p_s.sorted() == [(2, 3)]
    assert p_tau.sorted() == [(2, 1)]
    assert p_tau.partners(2) == [1]


def test_pending_tau(start):
    _, p_tau = first_step_pairs(start, 2)
    tau = make_tau(start, p_tau)
    assert render(tau[1]) == "2*e1 + s2 - 2*s2*e1"
    assert tau[2] == start.s[2]
    assert check_tau_relations(start, tau) == []


def test_first_step_pairs_agree_with_general_rule(start, torus):
    for k in (1, 2, 3):
        assert first_step_pairs(start, k) == step_pairs(start, k)
    st = init_state(torus, Ordering.parse("1<2<3<4", 4))
    for k in (1, 2, 3, 4):
        assert first_step_pairs(st, k) == step_pairs(st, k)


def test_first_step_pairs_rejects_later_states(after_2):
    with pytest.raises(InputError):
        first_step_pairs(after_2, 3)


def test_first_mutation_lambda(after_2):
    assert after_2.w == (2,)
    assert after_2.lam == ((1, 1, 0), (0, -1, 0), (0, 1, 1))
    assert render(after_2.tau[1]) == "2*e1 + s2 - 2*s2*e1"


def test_first_mutation_idempotents(after_2):
    alg = Algebra(3)
    e1, e2, e3, s2 = alg.e(1), alg.e(2), alg.e(3), alg.s(2)
    assert after_2.e[0] == alg.mul(2 * alg.one() - s2, e1)
    assert after_2.e[2] == alg.mul(s2, e3)
    assert after_2.e[1] == alg.mul(s2, e1 - e3) - e1 + e2 + e3


def test_first_mutation_reflections(after_2):
    alg = Algebra(3)
    s2, s3 = alg.s(2), alg.s(3)
    e1, e2, e3 = alg.e(1), alg.e(2), alg.e(3)
    assert after_2.s[1] == s2 + 2 * alg.mul(alg.one() - s2, e1 - e3)
    want_s3 = (
        alg.word((2, 3, 2))
        + 2 * alg.mul(alg.one() + alg.word((2, 3)), e2)
        + 2 * alg.mul(alg.one() - 2 * s2 - alg.word((2, 3, 2)), e3)
    )
    assert after_2.s[2] == want_s3
    assert s3 != after_2.s[2]


def test_first_mutation_s1_conjugates_by_tau2(start, after_2):
    alg = Algebra(3)
    _, p_tau = first_step_pairs(start, 2)
    tau = make_tau(start, p_tau)
    assert tau[0] == alg.s(1) + 2 * alg.mul(alg.one() - alg.s(1), alg.e(2))
    assert tau[1] == alg.s(2) + 2 * alg.mul(alg.one() - alg.s(2), alg.e(1))
    assert tau[2] == alg.s(3)
    assert after_2.s[0] == alg.mul(alg.mul(tau[1], tau[0]), tau[1])


def test_second_step_taus(after_2):
    alg = Algebra(3)
    one, e1, s2 = alg.one(), alg.e(1), alg.s(2)
    s232, s23 = alg.word((2, 3, 2)), alg.word((2, 3))
    _, p_tau = step_pairs(after_2, 3)
    tau = make_tau(after_2, p_tau)
    assert tau[0] == after_2.s[0]
    # Same sign on the e1 term as the first-step tau_2.
    assert tau[1] == s2 + 2 * alg.mul(one - s2, e1)
    assert tau[2] == s232 + 2 * alg.mul(one - s232 + s23 - s2, e1)
    assert check_tau_relations(after_2, tau) == []
    assert advance(after_2, 3).tau == tau


def test_s3_acts_through_mutated_matrix(after_2):
    rep = after_2.rep
    got = [rep.act(after_2.s[2], lam) for lam in after_2.lam]
    assert got == [(1, 4, 3), (0, -3, -2), (0, -1, -1)]
    assert check_C2(after_2)


def test_second_mutation(after_2):
    p_s, p_tau = step_pairs(after_2, 3)
    assert len(p_s) == 0
    assert p_tau.sorted() == [(3, 2)]
    st = advance(after_2, 3)
    assert st.lam == ((1, 1, 0), (0, 1, 2), (0, -1, -1))
    assert st.lam == apply_sequence(st.base, (2, 3)).cw


def test_iter_states_yields_every_prefix(running):
    states = list(iter_states(running, Ordering.parse("1<2<3", 3), (2, 3, 1)))
    assert [s.w for s in states] == [(), (2,), (2, 3), (2, 3, 1)]
    for st in states:
        assert check_C1(st)
        assert check_C3(st, reflection_state(running, st.w))


def test_rank3_exchange_sequence(rank3):
    e = get_example("rank3-exchange")
    st = run_sequence(rank3, Ordering.parse(e.ordering, 3), e.seq)
    assert st.lam == ((5, 18, 15), (-2, -7, -6), (0, -2, -1))
    assert check_C2(st)
    assert check_C3(st, reflection_state(rank3, e.seq))


def test_check_C3_requires_matching_sequence(after_2, running):
    with pytest.raises(InputError):
        check_C3(after_2, reflection_state(running, (3,)))


def test_four_term_lambda_expression():
    e = get_example("a4")
    base = e.matrix()
    st = run_sequence(base, Ordering.parse(e.ordering, 4), e.seq)
    assert st.lam[2] == (0, 0, 1, 1)
    assert lambda_expression(st, 3) == "(2 - 2*s2 + 2*s4*s2 - s2*s4*s2)(λ3)"


def test_four_term_expression_and_word_share_a_matrix():
    e = get_example("a4")
    base = e.matrix()
    st = init_state(base, Ordering.parse(e.ordering, 4))
    alg = st.algebra
    x = 2 * alg.one() - 2 * alg.s(2) + 2 * alg.word((4, 2)) - alg.word((2, 4, 2))
    rep = Representation(st.gim.a)
    assert x != alg.word((2, 4, 2))
    assert rep.evaluate(x) == rep.word_matrix((2, 4, 2))
    assert rep.act(alg.word((2, 4, 2)), (0, 0, 1, 0)) == (0, 0, 1, 1)
