import pytest

from dgr.core_pkg.dgr_set import DgrSet, validate_dgr, sigma, lambda_max, shift_dgr, mirror_dgr


def test_valid_dgr(small_dgr):
    report = validate_dgr(small_dgr)
    assert report
    assert small_dgr.I == 2
    assert small_dgr.J == 3
    assert small_dgr.marks == frozenset(range(1, 7))
    assert small_dgr.is_regular()


def test_shared_mark_is_reported():
    d = DgrSet([(1, 2, 4), (3, 4, 6)], n=6)
    report = validate_dgr(d)
    assert not report
    assert report.rulers == (0, 1)
    assert report.mark == 4
    assert report.reason == "rulers 0 and 1 share the mark 4"


def test_non_golomb_ruler_is_reported():
    report = validate_dgr(DgrSet([(1, 2, 4), (5, 6, 7)], n=7))
    assert not report
    assert report.rulers == (1,)
    assert 'not Golomb' in report.reason


def test_bound_and_arity():
    report = validate_dgr(DgrSet([(1, 2, 4), (3, 5, 6)], n=5))
    assert not report
    assert report.mark == 6

    report = validate_dgr(DgrSet([(1, 2, 4), (5, 6)], n=6))
    assert not report
    assert 'has 2 marks, 3 expected' in report.reason

    report = validate_dgr(DgrSet([(0, 1, 3)], n=4))
    assert not report
    assert report.mark == 0


def test_sigma_lambda():
    d = DgrSet([(3, 4, 6), (5, 7, 8)], n=10)
    assert sigma(d) == 3
    assert lambda_max(d) == 8
    with pytest.raises(ValueError):
        sigma(DgrSet([]))


def test_shift():
    d = DgrSet([(3, 4, 6), (5, 7, 8)], n=10)
    left = shift_dgr(d, -2, m=10)
    assert left.rulers == ((1, 2, 4), (3, 5, 6))
    assert left.n == 10
    assert validate_dgr(shift_dgr(d, 2, m=10))
    with pytest.raises(ValueError):
        shift_dgr(d, -3, m=10)
    with pytest.raises(ValueError):
        shift_dgr(d, 3, m=10)


def test_mirror(small_dgr):
    m = mirror_dgr(small_dgr)
    assert m.key() == ((1, 2, 4), (3, 5, 6))
    assert m == small_dgr
    d = DgrSet([(1, 2, 4)], n=7)
    assert mirror_dgr(d).rulers == ((4, 6, 7),)


def test_canonical_order_and_equality():
    d = DgrSet([(1, 2, 4), (3, 5, 6)], n=6, tags={'k': 1})
    canonical = d.canonical()
    assert canonical.rulers == ((3, 5, 6), (1, 2, 4))
    assert canonical == d
    assert canonical.tags == {'k': 1}
    assert hash(canonical) == hash(d)
    assert DgrSet([(1, 2, 4), (3, 5, 6)], n=7) != d


def test_regular_needs_full_cover():
    d = DgrSet([(1, 2, 4), (5, 6, 8)], n=8)
    assert validate_dgr(d)
    assert not d.is_regular()


def test_subset_union_tags(small_dgr):
    part = small_dgr.subset([1], n=9)
    assert part.rulers == ((3, 5, 6),)
    assert part.n == 9
    joined = part.union(DgrSet([(7, 8, 10)], n=10))
    assert joined.I == 2
    assert joined.n == 10
    tagged = small_dgr.with_tags(k=2, b=1)
    assert tagged.tags == {'k': 2, 'b': 1}
    assert small_dgr.tags == {}
