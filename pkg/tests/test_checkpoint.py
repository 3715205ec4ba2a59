import json

import pytest

from dgr.core_pkg.dgr_set import DgrSet, validate_dgr
from dgr.search_pkg.checkpoint import save_frontier, load_frontier, FRONTIER_SCHEMA
from dgr.search_pkg.exact import find_dgr_exact, WITNESS, BUDGET_EXHAUSTED
from dgr.utils import Budget


def test_frontier_round_trip(config, tmp_path):
    stopped = find_dgr_exact(3, 4, 20, config, budget=Budget(nodes=1))
    assert stopped.status == BUDGET_EXHAUSTED
    path = save_frontier(tmp_path / 'frontier.json', 3, 4, 20, stopped.frontier, nodes=stopped.nodes)

    with open(path) as f:
        assert json.load(f)['schema'] == FRONTIER_SCHEMA
    data = load_frontier(path, 3, 4, 20)
    assert data['seed'] is None
    resumed = find_dgr_exact(3, 4, 20, config, frontier=data['frontier'])
    assert resumed.status == WITNESS
    assert validate_dgr(resumed.witness, n=20)


def test_seeded_frontier(config, tmp_path):
    seed = DgrSet([(1, 2, 5, 7)], n=20)
    stopped = find_dgr_exact(3, 4, 20, config, seed=seed, budget=Budget(nodes=1))
    assert stopped.status == BUDGET_EXHAUSTED
    path = save_frontier(tmp_path / 'seeded.json', 3, 4, 20, stopped.frontier, seed=seed)
    data = load_frontier(path)
    restored = DgrSet(data['seed'], n=20)
    resumed = find_dgr_exact(3, 4, 20, config, seed=restored, frontier=data['frontier'])
    assert resumed.status == WITNESS
    assert (1, 2, 5, 7) in resumed.witness.rulers


def test_mismatched_checkpoint(config, tmp_path):
    path = save_frontier(tmp_path / 'frontier.json', 3, 4, 20, [])
    with pytest.raises(ValueError, match="n=20"):
        load_frontier(path, 3, 4, 21)

    other = tmp_path / 'other.json'
    other.write_text(json.dumps({'schema': 'something-else'}))
    with pytest.raises(ValueError):
        load_frontier(other)
