import itertools

import pytest

from dgr.core_pkg.ruler import is_golomb, MarkUniverse
from dgr.core_pkg.dgr_set import DgrSet, validate_dgr
from dgr.search_pkg.config import SearchConfig
from dgr.search_pkg.exact import (find_dgr_exact, enumerate_dgrs, compute_H, trivial_upper_bound, node_shares, ExactSearch,
                                  WITNESS, PROVEN_ABSENT, BUDGET_EXHAUSTED, EXACT)
from dgr.constructions_pkg.g_registry import default_g_registry
from dgr.utils import Budget


def golomb_subsets(J, n):
    return [frozenset(c) for c in itertools.combinations(range(1, n + 1), J) if is_golomb(c)]


def oracle_dgrs(I, J, n):
    """Every set of I pairwise-disjoint J-mark Golomb rulers within {1..n}, by plain recursion."""
    rulers = golomb_subsets(J, n)
    found = []

    def extend(start, chosen, used):
        if len(chosen) == I:
            found.append(frozenset(chosen))
            return
        for i in range(start, len(rulers)):
            if used.isdisjoint(rulers[i]):
                extend(i + 1, chosen + [rulers[i]], used | rulers[i])

    extend(0, [], frozenset())
    return found


def oracle_exists(I, J, n):
    if n < I * J:
        return False
    rulers = golomb_subsets(J, n)

    def extend(start, need, used):
        if need == 0:
            return True
        return any(used.isdisjoint(rulers[i]) and extend(i + 1, need - 1, used | rulers[i])
                   for i in range(start, len(rulers)))

    return extend(0, I, frozenset())


def as_key(d):
    return frozenset(frozenset(r) for r in d.rulers)


@pytest.mark.parametrize("I", [1, 2, 3])
@pytest.mark.parametrize("J", [1, 2, 3, 4])
def test_existence_matches_oracle(I, J, config):
    for n in range(1, 15):
        expected = oracle_exists(I, J, n)
        result = find_dgr_exact(I, J, n, config)
        assert result.status == (WITNESS if expected else PROVEN_ABSENT), (I, J, n)
        if expected:
            assert validate_dgr(result.witness, n=n, J=J)
            assert result.witness.I == I


@pytest.mark.parametrize("I,J,n", [(2, 3, 7), (2, 3, 8), (3, 3, 10), (2, 4, 13), (1, 4, 9)])
def test_enumeration_matches_oracle(I, J, n, config):
    found = [as_key(d) for d in enumerate_dgrs(I, J, n, config)]
    assert len(found) == len(set(found))
    assert set(found) == set(oracle_dgrs(I, J, n))


def test_enumeration_without_symmetry(config):
    plain = {as_key(d) for d in enumerate_dgrs(2, 3, 8, config.replace(symmetry=False))}
    assert plain == set(oracle_dgrs(2, 3, 8))


def test_small_values_of_H(config):
    assert compute_H(2, 3, config).value == 6
    assert compute_H(3, 2, config).value == 6
    value = compute_H(4, 3, config)
    assert value.status == EXACT
    assert value.value == 12
    assert value.is_regular
    assert validate_dgr(value.witness, n=12)


@pytest.mark.parametrize("J", [1, 2, 3, 4, 5])
def test_single_ruler_gives_optimal_length(J, config):
    assert compute_H(1, J, config).value == default_g_registry().G(J) + 1


@pytest.mark.slow
@pytest.mark.parametrize("J", [6, 7])
def test_single_ruler_gives_optimal_length_slow(J, config):
    assert compute_H(1, J, config).value == default_g_registry().G(J) + 1


@pytest.mark.slow
def test_regular_four_by_five(config):
    result = find_dgr_exact(4, 5, 20, config)
    assert result.status == WITNESS
    assert result.witness.is_regular()


def test_seeded_search(config):
    seed = DgrSet([(1, 2, 4)], n=9)
    result = find_dgr_exact(3, 3, 9, config, seed=seed)
    assert result.status == WITNESS
    assert (1, 2, 4) in result.witness.rulers
    assert validate_dgr(result.witness, n=9)

    with pytest.raises(ValueError):
        find_dgr_exact(2, 3, 9, config, seed=DgrSet([(1, 2, 3)], n=9))
    complete = find_dgr_exact(1, 3, 9, config, seed=seed)
    assert complete.status == WITNESS


def test_universe_restriction(config):
    universe = MarkUniverse(elements=[1, 2, 4, 5, 6, 8])
    result = find_dgr_exact(2, 3, 8, config, universe=universe)
    assert result.status == WITNESS
    assert result.witness.marks <= {1, 2, 4, 5, 6, 8}
    # 1,2,3 is an arithmetic progression
    assert find_dgr_exact(1, 3, 6, config, universe=MarkUniverse(elements=[1, 2, 3])).status == PROVEN_ABSENT


def test_pigeonhole_shortcut(config):
    result = find_dgr_exact(3, 4, 11, config)
    assert result.status == PROVEN_ABSENT
    assert result.nodes == 0


def test_budget_exhaustion_and_resume(config):
    stopped = find_dgr_exact(3, 4, 20, config, budget=Budget(nodes=1))
    assert stopped.status == BUDGET_EXHAUSTED
    assert stopped.witness is None
    assert len(stopped.frontier) > 0
    resumed = find_dgr_exact(3, 4, 20, config, frontier=stopped.frontier)
    assert resumed.status == WITNESS
    assert validate_dgr(resumed.witness, n=20)


def test_resume_visits_the_same_witness(config):
    direct = find_dgr_exact(3, 4, 16, config)
    stopped = find_dgr_exact(3, 4, 16, config, budget=Budget(nodes=2))
    resumed = find_dgr_exact(3, 4, 16, config, frontier=stopped.frontier)
    assert direct.status == WITNESS
    assert resumed.witness == direct.witness


@pytest.mark.parametrize("I,J,n", [(3, 2, 6), (3, 4, 12), (3, 4, 13), (3, 4, 14), (1, 4, 6)])
def test_parallel_search_agrees(I, J, n, config):
    result = find_dgr_exact(I, J, n, config.replace(threads=2))
    assert result.status == (WITNESS if oracle_exists(I, J, n) else PROVEN_ABSENT)
    if result.found:
        assert validate_dgr(result.witness, n=n, J=J)


def test_node_shares():
    assert node_shares(None, 3) == [None, None, None]
    assert node_shares(10, 3) == [4, 3, 3]
    assert node_shares(2, 4) == [1, 1, 1, 1]
    assert node_shares(10, 0) == []


def test_parallel_search_shares_the_node_budget(config):
    frames = len(list(ExactSearch(3, 4, 20, config, budget=Budget()).first_level_frames()))
    assert frames > 1
    result = find_dgr_exact(3, 4, 20, config.replace(threads=2, node_budget=40))
    # each subtree may count the one node that tripped its share
    assert result.nodes <= 40 + frames


def test_invalid_arguments(config):
    with pytest.raises(ValueError):
        find_dgr_exact(0, 3, 6, config)


def test_trivial_upper_bound():
    assert trivial_upper_bound(3, 4) == 24
    assert SearchConfig().threads == 1
