import pytest

from lmatrix.catalog import get_example
from lmatrix.coxeter_words import Word
from lmatrix.errors import InputError, LengthMismatch, RankTooLarge
from lmatrix.gim import (
    Ordering,
    all_orderings,
    brute_force_ordering_search,
    chordless_cycles,
    find_admissible_ordering,
    find_real_loesung_witness,
    gim_from_ordering,
    is_generalized_cartan,
    is_loesung,
    is_symmetrized,
    ordering_satisfies_parity,
    quadratic_form,
)
from lmatrix.gim import _rotate
from lmatrix.matrix_core import abs_vec, apply_sequence


def test_ordering_parse_ascending_and_descending():
    assert Ordering.parse("4<3<1<5<2").chain == (4, 3, 1, 5, 2)
    assert Ordering.parse("1>2>3").chain == (3, 2, 1)
    assert str(Ordering.parse("1 < 3 < 2")) == "1<3<2"


def test_ordering_parse_rejects_bad_chains():
    with pytest.raises(InputError):
        Ordering.parse("1<1<2")
    with pytest.raises(InputError):
        Ordering.parse("1<2>3")
    with pytest.raises(InputError):
        Ordering.parse("a<b")
    with pytest.raises(LengthMismatch):
        Ordering.parse("1<2", 3)


def test_precedes():
    o = Ordering.parse("4<2<3<1")
    assert o.precedes(4, 1)
    assert o.precedes(2, 3)
    assert not o.precedes(1, 2)


def test_running_example_gim(running):
    g = gim_from_ordering(running, Ordering.natural(3))
    assert g.a == ((2, 1, -3), (2, 2, -2), (-3, -1, 2))
    assert is_symmetrized(g)
    assert not is_generalized_cartan(g)


def test_rank3_exchange_gim(rank3):
    g = gim_from_ordering(rank3, Ordering.parse("1>2>3"))
    assert g.a == ((2, -3, 3), (-2, 2, -2), (2, -2, 2))


def test_a4_gim_is_a_cartan_matrix():
    base = get_example("a4").matrix()
    g = gim_from_ordering(base, Ordering.parse("4<2<3<1"))
    assert is_generalized_cartan(g)
    assert g.a[0][1] == g.a[1][2] == g.a[2][3] == -1


def test_quadratic_form_and_loesung(rank3):
    g = gim_from_ordering(rank3, Ordering.parse("1>2>3"))
    assert quadratic_form(g, (5, 18, 15)) == 6
    res = is_loesung(g, (5, 18, 15))
    assert res and res.k == 1 and res.positive
    res = is_loesung(g, (0, -2, -1))
    assert res.value == 4 and res.k == 2 and not res.positive


def test_zero_vector_is_rejected(rank3):
    g = gim_from_ordering(rank3, Ordering.natural(3))
    with pytest.raises(InputError):
        is_loesung(g, (0, 0, 0))


def test_real_loesung_witness(rank3):
    g = gim_from_ordering(rank3, Ordering.parse("1>2>3"))
    assert find_real_loesung_witness(g, (0, 2, 1), 3) == (Word((2,)), 3)
    assert find_real_loesung_witness(g, (0, 0, 1), 0) == (Word(()), 3)


def test_c_vector_that_is_no_loesung_for_any_ordering():
    base = get_example("not-a-loesung").matrix()
    seed = apply_sequence(base, [1, 2, 3, 4, 2])
    assert (5, 2, 2, 2) in [abs_vec(c) for c in seed.cw]
    gims = [gim_from_ordering(base, o) for o in all_orderings(4)]
    assert len(gims) == 24
    assert not any(is_loesung(g, (5, 2, 2, 2)) for g in gims)


def test_all_orderings_guard():
    assert len(list(all_orderings(3))) == 6
    with pytest.raises(RankTooLarge):
        list(all_orderings(9))


def test_spanning_tree_example_cycles():
    base = get_example("spanning-tree").matrix()
    cycles = chordless_cycles(base)
    oriented = [c.vertices for c in cycles if c.oriented]
    assert oriented == [(1, 3, 4), (2, 4, 5)]
    assert (1, 2, 4) in [c.vertices for c in cycles if not c.oriented]


@pytest.mark.parametrize("raw", [[1, 4, 3], [4, 3, 1], [3, 1, 4], [1, 3, 4], [4, 1, 3]])
def test_cycle_direction_is_canonical(raw):
    assert _rotate(raw) == (1, 3, 4)


def test_cycle_direction_on_longer_cycle():
    assert _rotate([5, 2, 7, 3]) == (2, 5, 3, 7)


def test_spanning_tree_example_orderings():
    base = get_example("spanning-tree").matrix()
    assert ordering_satisfies_parity(base, Ordering.parse("4<3<1<5<2"))
    found = find_admissible_ordering(base)
    assert found is not None
    assert ordering_satisfies_parity(base, found)
    assert found in brute_force_ordering_search(base)


def test_dreaded_torus_parity(torus):
    assert ordering_satisfies_parity(torus, Ordering.natural(4))
    assert not ordering_satisfies_parity(torus, Ordering((2, 1, 3, 4)))
    found = find_admissible_ordering(torus)
    assert found is not None and ordering_satisfies_parity(torus, found)


def test_acyclic_matrix_uses_topological_order():
    base = get_example("a4").matrix()
    assert chordless_cycles(base) == []
    found = find_admissible_ordering(base)
    assert found is not None
    assert ordering_satisfies_parity(base, found)
