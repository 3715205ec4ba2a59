import pytest

from dgr.conjecture_pkg.conjectures import (verify_conjecture1, verify_conjecture2, verify_conjecture3,
                                            verify_conjecture4, verify_conjecture5_6, theorem_checks,
                                            contains_disjoint_rulers, VERIFIED, COUNTEREXAMPLE, INFEASIBLE)
from dgr.conjecture_pkg.tau import tau_bounds, materialize_regular
from dgr.core_pkg.dgr_set import DgrSet
from dgr.io_pkg.registry import BoundsRegistry
from dgr.search_pkg.exact import HValue, WITNESS, PROVEN_ABSENT


def test_contains_disjoint_rulers(config):
    assert contains_disjoint_rulers([1, 2, 4], 1, 3, config).status == WITNESS
    assert contains_disjoint_rulers([1, 2, 3], 1, 3, config).status == PROVEN_ABSENT
    short = contains_disjoint_rulers([1, 2], 1, 3, config)
    assert short.status == PROVEN_ABSENT
    assert 'pigeonhole' in short.note


######################
#CONJECTURE 1
######################


def test_conjecture1_with_y_value(config):
    report = verify_conjecture1(2, 2, 7, config, registry=BoundsRegistry(), y_mode=True)
    assert report.verdict == VERIFIED
    assert report.params['H'] == 4
    assert report.params['Y_N'] == 4
    assert report.details[0]['subsets'] == 20


@pytest.mark.parametrize("I,J,N,H", [(1, 3, 10, 4), (1, 2, 5, 2)])
def test_conjecture1_single_ruler(config, I, J, N, H):
    report = verify_conjecture1(I, J, N, config, registry=BoundsRegistry())
    assert report.verdict == VERIFIED
    assert report.params['H'] == H


def test_conjecture1_counterexample(config):
    # with a size of 3, the subset {1,2,3} holds no 3-mark Golomb ruler
    report = verify_conjecture1(1, 3, 5, config, H=3)
    assert report.verdict == COUNTEREXAMPLE
    assert report.witness == [1, 2, 3]

    report = verify_conjecture1(1, 3, 5, config, H=3, y_mode=True)
    assert report.verdict == COUNTEREXAMPLE
    assert report.params['Y_N'] == 4


def test_conjecture1_vacuous_and_infeasible(config):
    report = verify_conjecture1(2, 2, 3, config, H=4)
    assert report.verdict == VERIFIED
    assert 'vacuous' in report.notes[0]
    report = verify_conjecture1(2, 2, 7, config.replace(subset_cap=1), H=4)
    assert report.verdict == INFEASIBLE


######################
#REGISTRY SCANS
######################


def rows_by_pair(report):
    return {(r['I'], r['J']): r for r in report.details}


def test_conjecture2_on_shipped_registry(registry):
    report = verify_conjecture2(registry)
    assert report.verdict == VERIFIED
    rows = rows_by_pair(report)
    assert rows[(9, 12)]['result'] == 'unresolved'
    assert rows[(9, 13)]['result'] == 'unresolved'
    assert rows[(11, 12)]['result'] == 'holds'
    assert rows[(11, 12)]['tight']
    assert rows[(12, 13)]['tight']
    assert rows[(7, 10)]['strict']


def test_conjecture2_contradiction():
    registry = BoundsRegistry({(3, 4): HValue(3, 4, 20, 'exact', provenance='external'),
                               (4, 4): HValue(4, 4, 40, 'lower-bound', provenance='external')})
    report = verify_conjecture2(registry)
    assert report.verdict == COUNTEREXAMPLE
    assert report.witness == {'I': 3, 'J': 4}
    assert verify_conjecture2(BoundsRegistry()).notes


def test_conjecture3(registry):
    report = verify_conjecture3(registry)
    assert report.verdict == VERIFIED
    by_J = {r['J']: r for r in report.details}
    assert by_J[10]['I0'] == 8
    assert by_J[12]['I0'] == 11
    assert by_J[13]['checked'] == list(range(14, 26))

    broken = BoundsRegistry({(2, 3): HValue(2, 3, 6, 'exact', provenance='external'),
                             (3, 3): HValue(3, 3, 10, 'exact', provenance='external')})
    report = verify_conjecture3(broken)
    assert report.verdict == COUNTEREXAMPLE
    assert report.witness == {'I0': 2, 'I': 3, 'J': 3}


def test_conjectures5_and_6(registry):
    report = verify_conjecture5_6(registry)
    assert report.verdict == VERIFIED
    fives = [r for r in report.details if r['conjecture'] == 5]
    assert {(r['I'], r['result']) for r in fives} == {(8, 'holds'), (9, 'unresolved'), (10, 'unresolved'),
                                                      (11, 'unresolved')}
    assert any(r['conjecture'] == 6 and r['k'] == 6 for r in report.details)


def test_theorem_checks(registry, config):
    report2 = verify_conjecture2(registry)
    report3 = verify_conjecture3(registry)
    report1 = verify_conjecture1(2, 2, 7, config, registry=BoundsRegistry())
    report = theorem_checks(report2, report3, registry, report1=report1)
    assert report.verdict == VERIFIED
    assert {d['theorem'] for d in report.details} == {'C2 => C3', 'C1 => C2', 'C1 => C3'}


######################
#CONJECTURE 4
######################


def test_conjecture4_single(config):
    report = verify_conjecture4(2, 2, config)
    assert report.verdict == VERIFIED
    assert report.params['n'] == 6
    assert 'from the search' in report.notes[0]

    capped = verify_conjecture4(2, 2, config.replace(conjecture4_ruler_cap=1))
    assert capped.verdict == INFEASIBLE


def test_conjecture4_pairs(config):
    report = verify_conjecture4(2, 2, config, mode='pairs')
    assert report.verdict == VERIFIED
    assert '6 <= J <= I' in report.notes[0]
    with pytest.raises(ValueError):
        verify_conjecture4(2, 2, config, mode='triples')


def test_conjecture4_hypothesis_fails(config):
    # H(1,3) = 4 > 3
    with pytest.raises(ValueError, match="hypothesis"):
        verify_conjecture4(1, 3, config)


@pytest.mark.slow
def test_conjecture4_at_four_five(registry, config):
    report = verify_conjecture4(4, 5, config, registry=registry)
    assert report.verdict == VERIFIED
    assert 'from the registry' in report.notes[0]


######################
#TAU
######################


@pytest.mark.parametrize("J,lower,upper", [(10, 8, 8), (11, 9, 10), (12, 9, 11), (13, 10, 13)])
def test_tau_with_published_bounds(registry, J, lower, upper):
    record = tau_bounds(J, registry)
    assert (record.lower, record.upper) == (lower, upper)


@pytest.mark.parametrize("J,upper", [(10, 8), (11, 10), (12, 11), (13, 13)])
def test_tau_from_registry_alone(registry, J, upper):
    record = tau_bounds(J, registry, merge_table=False)
    assert (record.lower, record.upper) == (8, upper)
    assert record.computed_upper == upper


def test_tau_strings(registry):
    assert str(tau_bounds(10, registry)) == "tau(10) = 8"
    assert str(tau_bounds(11, registry)) == "9 <= tau(11) <= 10"
    record = tau_bounds(5, registry)
    assert record.upper is None
    assert str(record) == "tau(5) >= 1"
    assert record.to_dict()['note'] is not None


def test_materialize_regular(small_dgr):
    three = DgrSet([(1, 2, 4), (3, 6, 7), (5, 8, 9)], n=9)
    closure, missing = materialize_regular(3, {2: small_dgr, 3: three}, 6)
    assert sorted(closure) == [2, 3, 4, 5, 6]
    assert missing == []
    closure, missing = materialize_regular(3, {3: three}, 5)
    assert missing == [4, 5]
