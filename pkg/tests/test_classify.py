"""Pattern-based classification and its agreement with the CI oracle."""

import numpy as np
import pytest

from cmseq import (
    ConditioningSide,
    IndexInterval,
    SequenceLaw,
    Tolerance,
    UnsupportedIntervalError,
    classify_cm_interval,
    classify_cmc,
    classify_markov,
    classify_reciprocal,
    full_report,
    oracle_cm_interval,
    oracle_markov,
    oracle_reciprocal,
    verify_composition,
)
from cmseq.fixtures import ar1_law, identity_law

FIRST = ConditioningSide.FIRST
LAST = ConditioningSide.LAST


def law_from_precision(a):
    return SequenceLaw.from_precision(np.asarray(a, dtype=float), 1)


def banded_precision(n, extra=()):
    a = np.zeros((n + 1, n + 1))
    for i in range(n):
        a[i, i + 1] = a[i + 1, i] = -0.5
    for i, j, v in extra:
        a[i, j] = a[j, i] = v
    np.fill_diagonal(a, np.abs(a).sum(axis=1) + 1.0)
    return a


def test_white_noise_is_everything(white_n3):
    rep = full_report(white_n3)
    assert rep.markov.conforms
    assert rep.reciprocal.conforms
    assert rep.cm_l.conforms and rep.cm_f.conforms
    assert all(e.witness.conforms for e in rep.interval_cm)
    assert rep.consistency


def test_ar1_is_markov_and_everything_above(ar1_n3):
    rep = full_report(ar1_n3)
    assert rep.markov.conforms
    assert rep.reciprocal.conforms and rep.reciprocal.routes_agree
    assert rep.cm_l.conforms and rep.cm_f.conforms
    assert all(e.witness.conforms for e in rep.interval_cm)
    assert rep.consistency


def test_cyclic_fixture_is_reciprocal_not_markov(cyclic_law):
    rep = full_report(cyclic_law)
    assert not rep.markov.conforms
    assert rep.markov.worst_block in ((0, 3), (3, 0))
    assert rep.reciprocal.conforms
    assert rep.cm_l.conforms and rep.cm_f.conforms
    assert rep.consistency


def test_cml_fixture_is_one_sided(cml_law):
    rep = full_report(cml_law)
    assert rep.cm_l.conforms
    assert not rep.cm_f.conforms
    assert not rep.reciprocal.conforms
    assert not rep.markov.conforms
    assert rep.consistency


@pytest.mark.parametrize(
    "law_fixture", ["white_n3", "ar1_n3", "cyclic_law", "cml_law"]
)
def test_class_flags_match_oracle_on_fixtures(law_fixture, request):
    """Pattern detection on the precision must agree with the brute-force
    conditional-independence sweeps on the covariance."""
    law = request.getfixturevalue(law_fixture)
    rep = full_report(law)
    full = IndexInterval(0, law.n_last)
    assert rep.markov.conforms == oracle_markov(law).holds
    assert rep.reciprocal.conforms == oracle_reciprocal(law).holds
    assert rep.cm_l.conforms == oracle_cm_interval(law, full, LAST).holds
    assert rep.cm_f.conforms == oracle_cm_interval(law, full, FIRST).holds
    for entry in rep.interval_cm:
        assert (
            entry.witness.conforms
            == oracle_cm_interval(law, entry.interval, entry.side).holds
        ), (entry.interval, entry.side)


def test_interval_report_covers_all_boundary_intervals(ar1_n3):
    rep = full_report(ar1_n3)
    seen = {(e.interval.lo, e.interval.hi, e.side) for e in rep.interval_cm}
    expected = set()
    for k in (1, 2):
        for side in (FIRST, LAST):
            expected.add((0, k, side))
            expected.add((k, 3, side))
    assert seen == expected


def test_interval_classification_on_tail_law():
    # band + (1, 4): conditionally Markov on [1, 4] from its first time,
    # but not over the whole range
    law = law_from_precision(banded_precision(4, extra=[(1, 4, -0.25)]))
    assert classify_cm_interval(law, IndexInterval(1, 4), FIRST).conforms
    assert not classify_cmc(law, FIRST).conforms
    assert classify_cmc(law, LAST).conforms
    # and the oracle sees it the same way
    assert oracle_cm_interval(law, IndexInterval(1, 4), FIRST).holds
    assert not oracle_cm_interval(law, IndexInterval(0, 4), FIRST).holds


def test_unsupported_intervals_are_rejected(ar1_n3):
    with pytest.raises(UnsupportedIntervalError):
        classify_cm_interval(ar1_n3, IndexInterval(0, 3), LAST)  # full range
    with pytest.raises(UnsupportedIntervalError):
        classify_cm_interval(ar1_n3, IndexInterval(1, 2), FIRST)  # interior
    with pytest.raises(UnsupportedIntervalError):
        classify_cm_interval(ar1_n3, IndexInterval(1, 9), FIRST)  # out of range


def test_class_lattice_on_handcrafted_laws():
    """Markov implies reciprocal implies both one-sided classes; the
    reciprocal flag is exactly their conjunction."""
    laws = [
        law_from_precision(banded_precision(4)),
        law_from_precision(banded_precision(4, extra=[(0, 4, -0.3)])),
        law_from_precision(banded_precision(4, extra=[(1, 4, -0.3)])),
        law_from_precision(banded_precision(4, extra=[(0, 2, -0.3)])),
        law_from_precision(banded_precision(4, extra=[(0, 2, -0.3), (1, 4, -0.3)])),
    ]
    for law in laws:
        rep = full_report(law)
        if rep.markov.conforms:
            assert rep.reciprocal.conforms
        if rep.reciprocal.conforms:
            assert rep.cm_l.conforms and rep.cm_f.conforms
        assert rep.reciprocal.conforms == (rep.cm_l.conforms and rep.cm_f.conforms)
        assert rep.reciprocal.routes_agree
        assert verify_composition(law)


def test_composition_routes_on_fixtures(ar1_n3, cyclic_law, cml_law, white_n3):
    for law in (ar1_n3, cyclic_law, cml_law, white_n3):
        assert verify_composition(law)


def test_one_sided_interval_family_alone_does_not_imply_reciprocity():
    """Exploratory: a law that is conditionally Markov from the first time on
    [0, N] *and* on every trailing interval, yet is not reciprocal.

    A single (0, 2) precision coupling does it: marginalizing away leading
    times folds the coupling into the band, so every trailing interval looks
    Markov from its first time — but the law fails the last-time conditioning
    test, and reciprocity genuinely needs both sides."""
    law = law_from_precision(banded_precision(4, extra=[(0, 2, -0.3)]))
    assert classify_cmc(law, FIRST).conforms
    for k1 in (1, 2, 3):
        iv = IndexInterval(k1, 4)
        assert classify_cm_interval(law, iv, FIRST).conforms
        assert oracle_cm_interval(law, iv, FIRST).holds
    assert not classify_cmc(law, LAST).conforms
    assert not classify_reciprocal(law).conforms
    assert not oracle_reciprocal(law).holds
    # the full conjunction (with the last-time test) stays internally consistent
    assert verify_composition(law)


def test_consistency_bit_summarizes_routes(cyclic_law):
    rep = full_report(cyclic_law, Tolerance())
    assert rep.consistency
    assert rep.reciprocal.routes_agree


def test_classify_markov_agrees_with_precision_band(ar1_n3):
    w = classify_markov(ar1_n3)
    assert w.conforms
    assert w.worst_ratio < 1e-12


def test_multidimensional_components():
    law = identity_law(4, dim=2)
    rep = full_report(law)
    assert rep.markov.conforms and rep.consistency
    assert oracle_markov(law).holds
