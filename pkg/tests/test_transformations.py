import random

import pytest

from dgr.core_pkg.dgr_set import DgrSet, validate_dgr, sigma, lambda_max
from dgr.core_pkg.enumeration import enumerate_rulers
from dgr.core_pkg.transformations import transformation_set, k_sub_transformation_set, shift_range


def random_dgr(rng, rulers, I):
    chosen = []
    used = set()
    for r in rng.sample(rulers, len(rulers)):
        if used.isdisjoint(r.marks):
            chosen.append(r.marks)
            used.update(r.marks)
        if len(chosen) == I:
            break
    return DgrSet(chosen)


def test_transformation_set_size():
    rng = random.Random(11)
    rulers = list(enumerate_rulers(3, 14))
    for _ in range(1000):
        d = random_dgr(rng, rulers, rng.randint(1, 3))
        m = lambda_max(d) + rng.randint(0, 10)
        family = transformation_set(d, m)
        assert len(family) == m - lambda_max(d) + sigma(d)
        members = family.members()
        assert len(members) == len(family)
        assert len({x.key() for x in members}) == len(members)


def test_transformation_members_are_valid(small_dgr):
    family = transformation_set(small_dgr, 9)
    assert family.offsets == range(0, 4)
    for x in family:
        assert validate_dgr(x, n=9)
        assert x.tags['b'] in family.offsets
    with pytest.raises(ValueError):
        transformation_set(small_dgr, 5)


def test_k_sub_transformation_set(small_dgr):
    members = list(k_sub_transformation_set([small_dgr], 1, 9))
    # (1,2,4) shifts by 0..5 and (3,5,6) by -2..3
    assert len(members) == 12
    assert members[0].rulers == ((1, 2, 4),)
    assert members[0].tags == {'k': 1, 'b': 0, 'carried': '0'}
    assert all(x.n == 9 and x.I == 1 for x in members)
    assert all(validate_dgr(x) for x in members)

    full = list(k_sub_transformation_set([small_dgr], 2, 9))
    assert [x.tags['b'] for x in full] == [0, 1, 2, 3]
    assert full[1].rulers == ((2, 3, 5), (4, 6, 7))
    assert full[1].tags['carried'] == '0/1'


def test_near_order_by_shift_magnitude(small_dgr):
    members = list(k_sub_transformation_set([small_dgr], 1, 9))
    magnitudes = [abs(x.tags['b']) for x in members]
    assert magnitudes == sorted(magnitudes)
    assert [x.tags['b'] for x in members[:4]] == [0, 0, 1, -1]


def test_duplicates_are_removed():
    # both DGRs carry the ruler (1,2,4)
    d1 = DgrSet([(1, 2, 4), (3, 5, 6)], n=6)
    d2 = DgrSet([(1, 2, 4), (5, 6, 8)], n=8)
    members = list(k_sub_transformation_set([d1, d2], 1, 10))
    keys = [x.key() for x in members]
    assert len(keys) == len(set(keys))
    assert keys.count(((1, 2, 4),)) == 1


def test_partitions_cover_the_stream():
    rng = random.Random(3)
    rulers = list(enumerate_rulers(3, 12))
    pool = [random_dgr(rng, rulers, 2) for _ in range(4)]
    pool = [DgrSet(d.rulers, n=12) for d in pool if d.I == 2]
    full = {x.key() for x in k_sub_transformation_set(pool, 1, 14)}
    parts = set()
    for index in range(3):
        parts |= {x.key() for x in k_sub_transformation_set(pool, 1, 14, partition=(index, 3))}
    assert parts == full


def test_orders_yield_the_same_members(small_dgr):
    near = {x.key() for x in k_sub_transformation_set([small_dgr], 1, 9, order='near')}
    subset = {x.key() for x in k_sub_transformation_set([small_dgr], 1, 9, order='subset')}
    assert near == subset
    with pytest.raises(ValueError):
        list(k_sub_transformation_set([small_dgr], 1, 9, order='random'))


def test_stream_is_deterministic(small_dgr):
    first = [(x.key(), x.tags) for x in k_sub_transformation_set([small_dgr], 1, 12)]
    second = [(x.key(), x.tags) for x in k_sub_transformation_set([small_dgr], 1, 12)]
    assert first == second


def test_invalid_k(small_dgr):
    with pytest.raises(ValueError):
        list(k_sub_transformation_set([small_dgr], 3, 9))
    with pytest.raises(ValueError):
        list(k_sub_transformation_set([small_dgr], 0, 9))


def test_empty_pool_still_checks_arguments():
    assert list(k_sub_transformation_set([], 1, 9)) == []
    with pytest.raises(ValueError, match="positive"):
        list(k_sub_transformation_set([], 0, 9))
    with pytest.raises(ValueError, match="partition"):
        list(k_sub_transformation_set([], 1, 9, partition=(2, 2)))


def test_shift_range(small_dgr):
    assert shift_range(small_dgr, 6) == range(0, 1)
