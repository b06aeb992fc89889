import pytest

from lmatrix.catalog import get_example
from lmatrix.coxeter_words import (
    Word,
    act_word,
    concatenate,
    conjugate,
    free_reduce,
    is_reduced,
    is_reflection,
    iter_reduced_words,
    parse_word,
    reduce,
    reflection_matrix,
    search_pi_equivalent,
    word_matrix,
    word_to_string,
)
from lmatrix.errors import IndexOutOfRange, InputError, SearchBudgetExceeded
from lmatrix.gim import Ordering, all_orderings, gim_from_ordering
from lmatrix.matrix_core import identity
from lmatrix.mutation_reflections import reflection_state


def test_reduce_cancels_adjacent_pairs():
    assert reduce([1, 2, 2, 1, 3]).letters == (3,)
    assert reduce([1, 1]).letters == ()
    assert Word((1, 2)) * Word((2, 1)) == Word(())
    assert free_reduce([3, 1, 2, 2, 1]) == (3,)


def test_concatenate_reduces_freely():
    assert concatenate(Word((1, 2)), Word((2, 3))) == Word((1, 3))
    assert concatenate(Word((1,)), Word((1,))) == Word(())


def test_reduce_checks_range():
    with pytest.raises(IndexOutOfRange):
        reduce([1, 4], n=3)
    with pytest.raises(IndexOutOfRange):
        reduce([0])


def test_is_reduced():
    assert is_reduced((1, 2, 1))
    assert not is_reduced((1, 2, 2))


def test_reflections():
    assert is_reflection(parse_word("32123"))
    assert not is_reflection(parse_word("3212"))
    assert not is_reflection(Word(()))
    assert conjugate(Word((1, 2)), 3).letters == (1, 2, 3, 2, 1)
    assert conjugate(Word((1, 2)), 2).letters == (1, 2, 1)


def test_parse_word_forms():
    assert parse_word("3,4,1") == parse_word("341") == Word((3, 4, 1))
    assert parse_word("") == Word(())
    assert parse_word("e") == Word(())
    assert word_to_string(Word((3, 4, 1))) == "3,4,1"
    assert word_to_string(Word((3, 4, 1)), compact=True) == "341"
    assert Word((1, 2, 3)).inverse() == Word((3, 2, 1))
    with pytest.raises(InputError):
        parse_word("1,x")
    with pytest.raises(IndexOutOfRange):
        parse_word("15", 4)


def test_reflection_matrices_of_running_example(running):
    a = gim_from_ordering(running, Ordering.natural(3)).a
    assert reflection_matrix(a, 1) == ((-1, 0, 0), (-2, 1, 0), (3, 0, 1))
    assert reflection_matrix(a, 2) == ((1, -1, 0), (0, -1, 0), (0, 1, 1))
    assert reflection_matrix(a, 3) == ((1, 0, 3), (0, 1, 2), (0, 0, -1))
    assert word_matrix(a, (2,)) == reflection_matrix(a, 2)
    assert word_matrix(a, (2, 2)) == identity(3)


def test_act_word_matches_word_matrix(running):
    a = gim_from_ordering(running, Ordering.natural(3)).a
    w = (1, 3, 2, 1)
    v = (2, -1, 5)
    mat = word_matrix(a, w)
    expected = tuple(sum(v[j] * mat[j][m] for j in range(3)) for m in range(3))
    assert act_word(a, w, v) == expected
    # s_2 acts first on alpha_1
    assert act_word(a, (1, 2), (1, 0, 0)) == act_word(a, (1,), act_word(a, (2,), (1, 0, 0)))


def test_iter_reduced_words_order():
    words = [w.letters for w in iter_reduced_words(2, 2)]
    assert words == [(), (1,), (2,), (1, 2), (2, 1)]


def test_s3_s4_cubed_is_in_the_kernel_for_every_ordering(kernel):
    for o in all_orderings(4):
        a = gim_from_ordering(kernel, o).a
        assert word_matrix(a, (3, 4) * 3) == identity(4)


def test_pi_search_finds_short_kernel_words(kernel):
    a = gim_from_ordering(kernel, Ordering.natural(4)).a
    found = search_pi_equivalent(Word(()), a, 6)
    assert found[0] == Word(())
    assert Word((3, 4, 3, 4, 3, 4)) in found
    assert Word((4, 3, 4, 3, 4, 3)) in found


def test_pi_search_budget(kernel):
    a = gim_from_ordering(kernel, Ordering.natural(4)).a
    with pytest.raises(SearchBudgetExceeded):
        search_pi_equivalent(Word(()), a, 6, node_cap=10)


def test_pi_search_shortens_long_reflection(kernel):
    r3 = reflection_state(kernel, [4, 3, 1, 4, 2]).r[2]
    assert word_to_string(r3, compact=True) == "3414343424343434243434143"
    short = Word(tuple(int(c) for c in "34132423143"))
    for o in all_orderings(4):
        a = gim_from_ordering(kernel, o).a
        assert word_matrix(a, short) == word_matrix(a, r3), str(o)
    a = gim_from_ordering(kernel, Ordering.natural(4)).a
    found = search_pi_equivalent(r3, a, 11)
    assert short in found
    assert all(word_matrix(a, w) == word_matrix(a, r3) for w in found)


def test_sequence_without_a_two_never_produces_the_letter_two(kernel):
    st = reflection_state(kernel, [4, 3, 1, 4, 1])
    assert word_to_string(st.r[3], compact=True) == "34143434143434143434143"
    assert all(2 not in r for i, r in enumerate(st.r, start=1) if i != 2)
