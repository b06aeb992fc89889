import pytest

from lmatrix.catalog import get_example
from lmatrix.errors import IndexOutOfRange
from lmatrix.gim import Ordering, gim_from_ordering
from lmatrix.harness import (
    CONJECTURE,
    SCAN,
    THEOREM,
    Report,
    class_size_statistics,
    enumerate_sequences,
    group_seed_classes,
    iter_seeds,
    loesung_scan,
    probe_conjecture_C_equal_implies_pi_equal,
    probe_l_matrices,
    run_full_verification,
    verify_sequence,
)
from lmatrix.matrix_core import abs_vec


def test_enumerate_sequences_order():
    assert list(enumerate_sequences(2, 2)) == [(), (1,), (2,), (1, 2), (2, 1)]
    assert len(list(enumerate_sequences(3, 1))) == 4
    assert len(list(enumerate_sequences(3, 5))) == 94


def test_iter_seeds_follows_enumeration(running):
    assert [s.w for s in iter_seeds(running, 3)] == list(enumerate_sequences(3, 3))


def test_torus_classes_join_sequences_with_equal_c(torus):
    gim = gim_from_ordering(torus, Ordering.natural(4))
    classes = group_seed_classes(torus, 6, gim)
    hit = [c for c in classes if (3, 4, 1, 3, 4, 3) in c.members]
    assert len(hit) == 1
    assert (4, 1, 3, 4, 1, 3) in hit[0].members
    assert set(hit[0].witnesses) == set(hit[0].members)
    stats = class_size_statistics(classes)
    assert stats["classes"] == len(classes)
    assert sum(int(k) * v for k, v in stats["histogram"].items()) == len(list(enumerate_sequences(4, 6)))


def test_probes_find_nothing_on_the_torus(torus):
    o = Ordering.natural(4)
    for probe in (probe_conjecture_C_equal_implies_pi_equal, probe_l_matrices):
        report = probe(torus, o, 6)
        assert report.label == CONJECTURE
        assert report.violations == []
        assert report.stats["ordering_satisfies_parity"] is True
        assert report.stats["pairs_compared"] > 0
        assert report.exit_code == 0


def test_probe_outside_hypothesis_only_counts(torus):
    o = Ordering((2, 1, 3, 4))
    report = probe_l_matrices(torus, o, 4)
    assert report.stats["ordering_satisfies_parity"] is False
    assert report.violations == []
    assert len(report.notes) == 2


def test_probe_without_mutations(torus):
    report = probe_l_matrices(torus, Ordering.natural(4), 0)
    assert report.runs == 1
    assert report.stats["pairs_compared"] == 0
    assert report.stats["max_size"] == 1


def test_loesung_scan_reports_vector_failing_every_gim():
    base = get_example("not-a-loesung").matrix()
    report = loesung_scan(base, 5)
    assert report.label == SCAN
    assert report.config["orderings"] == 24
    bad = [tuple(abs_vec(f["c"])) for f in report.stats["fails_all"]]
    assert (5, 2, 2, 2) in bad
    entry = next(f for f in report.stats["fails_all"] if tuple(abs_vec(f["c"])) == (5, 2, 2, 2))
    assert len(entry["q"]) == 24


def test_loesung_scan_initial_seed(running):
    report = loesung_scan(running, 0)
    assert report.runs == 1
    assert report.stats["c_vectors"] == 3
    assert report.stats["fails_all"] == []
    assert report.stats["passing_gims_histogram"] == {"6": 3}


def test_loesung_scan_with_witnesses(running):
    report = loesung_scan(running, 1, Ordering.natural(3), witness_len=1)
    assert report.config["orderings"] == 1
    assert report.stats["real_witnesses"] >= 3


def test_full_verification_running_example(running):
    seen = []
    report = run_full_verification(running, Ordering.natural(3), 4, progress=seen.append)
    assert report.label == THEOREM
    assert report.runs == 1 + 3 + 6 + 12 + 24
    assert sum(seen) == report.runs
    assert report.errors == []
    assert report.stats["failures"] == {}
    assert report.exit_code == 0


def test_full_verification_in_parallel_matches_serial(running):
    serial = run_full_verification(running, Ordering.natural(3), 3)
    parallel = run_full_verification(running, Ordering.natural(3), 3, jobs=2)
    assert parallel.runs == serial.runs
    assert parallel.errors == serial.errors == []


def test_verify_sequence_steps(rank3):
    e = get_example("rank3-exchange")
    report = verify_sequence(rank3, Ordering.parse(e.ordering, 3), e.seq)
    steps = report.stats["steps"]
    assert report.runs == len(steps) == len(e.seq) + 1
    assert all(s["ok"] for s in steps)
    assert steps[-1]["lambda"] == [[5, 18, 15], [-2, -7, -6], [0, -2, -1]]
    assert report.exit_code == 0


def test_verify_sequence_rejects_bad_index(running):
    with pytest.raises(IndexOutOfRange):
        verify_sequence(running, Ordering.natural(3), (1, 4))


def test_report_exit_codes():
    r = Report(command="x", label=THEOREM, config={})
    assert r.exit_code == 0
    r.violations.append({"i": 1})
    assert r.exit_code == 2
    r.errors.append({"message": "boom"})
    assert r.exit_code == 3
    assert r.summary().startswith("runs=0 violations=1 errors=1")
    assert r.to_dict()["label"] == THEOREM
