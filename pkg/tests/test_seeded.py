import json

import pytest

from dgr.core_pkg.dgr_set import DgrSet, validate_dgr
from dgr.io_pkg.registry import BoundsRegistry
from dgr.search_pkg.config import resolve_k_policy
from dgr.search_pkg.exact import WITNESS, NOT_FOUND, EXACT, UPPER_BOUND
from dgr.search_pkg.seeded import (SeedPool, collect_seed_pool, seeded_extend, fallback_k_descent, bound_descent,
                                   chain_descent, default_m0, write_descent_log, descent_table)


def test_default_m0():
    assert default_m0(6, 10, 70) == 75
    assert default_m0(2, 3, 6) == 9


def test_k_policy():
    assert resolve_k_policy('auto', 6) == [4, 3, 2, 1]
    assert resolve_k_policy('auto', 2) == [1]
    assert resolve_k_policy('3', 6) == [3, 2, 1]
    assert resolve_k_policy('5,2', 6) == [5, 2]
    with pytest.raises(ValueError):
        resolve_k_policy('7', 6)
    with pytest.raises(ValueError):
        resolve_k_policy('many', 6)


def test_seed_pool_checks(small_dgr):
    pool = SeedPool([small_dgr])
    assert (pool.I, pool.J, pool.n) == (2, 3, 6)
    with pytest.raises(ValueError):
        SeedPool([])
    with pytest.raises(ValueError):
        SeedPool([small_dgr, DgrSet([(1, 2, 4), (5, 6, 8)], n=8)])
    with pytest.raises(ValueError):
        SeedPool([DgrSet([(1, 2, 3), (4, 5, 7)], n=7)])


def test_extension_carries_the_whole_seed(small_dgr, config):
    result = seeded_extend([small_dgr], 2, 9, config)
    assert result.status == WITNESS
    witness = result.witness
    assert witness.rulers[:2] == ((2, 3, 5), (4, 6, 7))
    assert witness.tags == {'k': 2, 'b': 1, 'carried': '0/1'}
    assert witness.is_regular()


def test_extension_with_one_ruler(small_dgr, config):
    result = seeded_extend([small_dgr], 1, 9, config)
    assert result.status == WITNESS
    assert validate_dgr(result.witness, n=9, J=3)
    assert result.witness.I == 3
    assert result.witness.tags['k'] == 1


def test_extension_arguments(small_dgr, config):
    with pytest.raises(ValueError):
        seeded_extend([small_dgr], 1, 8, config)
    with pytest.raises(ValueError):
        seeded_extend([small_dgr], 3, 9, config)


def test_extension_not_found(config):
    # both placements of 1,2,5,7 within {1..8} leave four marks with a repeated difference
    pool = [DgrSet([(1, 2, 5, 7)], n=7)]
    result = seeded_extend(pool, 1, 8, config)
    assert result.status == NOT_FOUND


def test_extension_counts_truncated_candidates(small_dgr, config):
    # a zero node budget per ξ stops every candidate before its first ruler
    result = seeded_extend([small_dgr], 1, 9, config.replace(xi_node_budget=0))
    assert result.status == NOT_FOUND
    assert result.truncated > 0
    assert result.to_dict()['truncated'] == result.truncated

    settled = seeded_extend([DgrSet([(1, 2, 5, 7)], n=7)], 1, 8, config)
    assert settled.status == NOT_FOUND
    assert settled.truncated == 0


def test_descent_steps_record_truncation(small_dgr, config):
    result = bound_descent([small_dgr], config.replace(xi_node_budget=0, k_policy='1'))
    assert result.witness is None
    assert all(step.status == NOT_FOUND for step in result.state.steps)
    assert all(step.truncated > 0 for step in result.state.steps)
    assert result.to_dict()['steps'][0]['truncated'] == result.state.steps[0].truncated


def test_fallback_trace(small_dgr, config):
    result = fallback_k_descent([small_dgr], 2, 9, config)
    assert result.status == WITNESS
    assert result.note == 'k=2:witness'


def test_bound_descent_reaches_the_floor(small_dgr, config):
    result = bound_descent([small_dgr], config)
    assert result.status == EXACT
    assert result.m == 9
    assert result.I == 3
    assert validate_dgr(result.witness, n=9, J=3)
    hvalue = result.to_hvalue()
    assert hvalue.is_exact and hvalue.value == 9


def test_bound_descent_stops_above_the_floor(config):
    pool = [DgrSet([(1, 2, 5, 7)], n=7)]
    result = bound_descent(pool, config)
    assert result.state.m0 == 9
    assert result.state.tried == [9, 8]
    assert result.m == 9
    assert result.witness.tags['b'] == 2
    assert result.status == UPPER_BOUND


def test_bound_descent_ascends_after_a_failure(config):
    pool = [DgrSet([(1, 2, 5, 7)], n=7)]
    result = bound_descent(pool, config.replace(m0=8))
    assert result.state.tried == [8, 9]
    assert result.m == 9
    assert result.status == UPPER_BOUND
    assert result.to_hvalue().provenance == 'computed-ub'


def test_chain_descent_merges_into_registry(small_dgr, config, tmp_path):
    registry = BoundsRegistry()
    results = chain_descent([small_dgr], 3, config, registry=registry)
    assert len(results) == 1
    assert registry.get(3, 3).value == 9
    assert registry.get(3, 3).is_exact

    path = write_descent_log(results, tmp_path / 'descent_log.json', seeds=SeedPool([small_dgr]))
    with open(path) as f:
        data = json.load(f)
    assert data['levels'][0]['m'] == 9
    table = descent_table(results)
    assert list(table.columns) == ['I', 'J', 'H', 'status', 'k', 'b', 'carried']
    assert table.iloc[0]['H'] == 9

    with pytest.raises(ValueError):
        chain_descent([small_dgr], 2, config)


def test_collect_seed_pool(config):
    pool = collect_seed_pool(2, 3, 7, config.replace(pool_cap=3))
    assert len(pool) == 3
    assert all(validate_dgr(d, n=7) for d in pool)
    with pytest.raises(ValueError):
        collect_seed_pool(2, 3, 5, config)


def test_parallel_extension(small_dgr, config):
    result = seeded_extend([small_dgr], 2, 9, config.replace(threads=2, chunk_size=1))
    assert result.status == WITNESS
    assert result.witness.tags['b'] == 1


@pytest.mark.slow
def test_table1_level_seven(fixtures, config):
    result = seeded_extend([fixtures.table1[(6, 10)]], 1, 74, config.replace(budget_secs=1800))
    assert result.status == WITNESS
    assert validate_dgr(result.witness, n=74, J=10)
    assert result.witness.I == 7


@pytest.mark.slow
def test_table1_descent_bound(fixtures, registry, config):
    result = bound_descent([fixtures.table1[(6, 10)]], config.replace(budget_secs=3600), registry=registry)
    assert result.status in (EXACT, UPPER_BOUND)
    assert result.m <= 75


@pytest.mark.slow
def test_table1_regular_level_eight(fixtures, registry, config):
    # from the (7,10,74)-DGR of the descent trace, the descent closes at the pigeonhole bound 80
    result = bound_descent([fixtures.table1[(7, 10)]], config.replace(budget_secs=3600), registry=registry)
    assert result.state.floor == 80
    assert result.status == EXACT
    assert result.state.best_m == 80
    assert validate_dgr(result.witness, n=80, J=10)
    assert result.witness.is_regular()
