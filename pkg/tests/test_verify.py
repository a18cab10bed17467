import json

import pytest

from oracles import naive_orbit_count
from symbreak.circuit import PredicateEvaluator, cnf_to_evaluator, constant_evaluator, lexmin_canon_eval
from symbreak.cnf import CnfPredicate, sbp_small_group, sbp_symmetric, sbp_tree
from symbreak.errors import CapExceeded, SpecError
from symbreak.groups import Natural, RowColumn, Tree, TreeAut, realize
from symbreak.perm import burnside_count, parse_bits
from symbreak.verify import check_complete, equiv_check, predicate_size_report

K13 = Tree(4, [(1, 2), (1, 3), (1, 4)])


def test_symmetric_complete():
    report = check_complete(cnf_to_evaluator(sbp_symmetric(4)), realize(Natural(4)))
    assert report.complete
    assert report.orbit_count == 5 == report.accepted_count


def test_always_true_incomplete():
    report = check_complete(constant_evaluator(2, True), realize(Natural(2)))
    assert report.verdict == "incomplete"
    assert report.orbits_with_zero_accepted == []
    assert report.orbits_with_multiple_accepted == [(parse_bits("01"), [parse_bits("01"), parse_bits("10")])]


def test_star_tree():
    g = realize(TreeAut(K13))
    report = check_complete(cnf_to_evaluator(sbp_tree(K13)), g)
    assert report.complete
    assert report.orbit_count == 8 == burnside_count(g) == naive_orbit_count(g)


def test_cap_and_domain():
    with pytest.raises(CapExceeded):
        check_complete(constant_evaluator(5, True), realize(Natural(5)), cap_bits=4)
    with pytest.raises(SpecError):
        check_complete(constant_evaluator(4, True), realize(Natural(5)))


def _flip(ev, theta):
    return PredicateEvaluator(ev.domain_size, lambda t: (not ev(t)) if t == theta else ev(t))


def test_mutation_sensitivity():
    g = realize(RowColumn(2, 3))
    base = lexmin_canon_eval(g)
    dropped = check_complete(_flip(base, parse_bits("000011")), g)
    assert dropped.orbits_with_zero_accepted == [parse_bits("000011")]
    added = check_complete(_flip(base, parse_bits("110000")), g)
    rep, acc = added.orbits_with_multiple_accepted[0]
    assert rep == parse_bits("000011")
    assert parse_bits("110000") in acc
    assert not dropped.complete and not added.complete


def test_report_json():
    report = check_complete(constant_evaluator(2, True), realize(Natural(2)))
    doc = json.loads(report.to_json())
    assert doc == {
        "acceptedCount": 4,
        "orbitCount": 3,
        "orbitsWithMultipleAccepted": [{"accepted": ["01", "10"], "representative": "01"}],
        "orbitsWithZeroAccepted": [],
        "verdict": "incomplete",
    }
    assert "orbit of 01 accepts 01 10" in report.summary()


def test_equiv():
    ev = cnf_to_evaluator(sbp_symmetric(3))
    assert equiv_check(ev, ev) is None
    assert equiv_check(ev, cnf_to_evaluator(sbp_small_group(realize(Natural(3))))) is None
    assert equiv_check(ev, constant_evaluator(3, True)) == parse_bits("010")
    with pytest.raises(SpecError):
        equiv_check(ev, constant_evaluator(2, True))


def test_size_report():
    assert predicate_size_report(sbp_symmetric(5)) == (5, 0, 4, 8)
    assert predicate_size_report(CnfPredicate(3, 0, ())) == (3, 0, 0, 0)
    path6 = Tree(6, [(i, i + 1) for i in range(1, 6)])
    assert predicate_size_report(sbp_tree(path6)).literal_count <= 6 * 6
