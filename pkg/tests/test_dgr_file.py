import pytest

from dgr.core_pkg.dgr_set import DgrSet, validate_dgr
from dgr.io_pkg.dgr_file import parse_dgr_file, emit_dgr_file, read_dgr_file, write_dgr_file
from dgr.utils import DgrFormatError, data_path


def test_fixture_file_parses():
    sets = read_dgr_file(data_path('table4_fixtures.dgr'), validate=False)
    assert len(sets) == 22
    first = sets[0]
    assert (first.I, first.J, first.n) == (7, 10, 74)
    assert validate_dgr(first)


def test_emit_is_canonical(small_dgr):
    data = emit_dgr_file([small_dgr.with_tags(k=1, b=-2)])
    assert data == b"# I=2 J=3 n=6 k=1 b=-2\n3,5,6\n1,2,4\n"
    parsed = parse_dgr_file(data)
    assert parsed == [small_dgr]
    assert parsed[0].tags == {'k': 1, 'b': -2}


def test_blocks_are_separated_by_blank_lines(small_dgr, tmp_path):
    other = DgrSet([(1, 2, 4), (5, 6, 8), (3, 9, 10)], n=10)
    path = tmp_path / 'two.dgr'
    write_dgr_file([small_dgr, other], path)
    assert b'\n\n# I=3' in path.read_bytes()
    assert read_dgr_file(path) == [small_dgr, other]
    assert emit_dgr_file(read_dgr_file(path)) == path.read_bytes()


def test_tolerant_separators_without_header():
    sets = parse_dgr_file("1 2 4\n3 & 5 & 6\n")
    assert len(sets) == 1
    assert sets[0].n == 6
    assert sets[0].rulers == ((1, 2, 4), (3, 5, 6))


def test_comments_are_skipped():
    sets = parse_dgr_file("# an example\n# I=1 J=3 n=4\n1,2,4\n")
    assert sets[0].n == 4


def test_shared_mark_names_the_line():
    with pytest.raises(DgrFormatError) as error:
        parse_dgr_file(b"# I=2 J=3 n=6\n1,2,4\n3,4,6\n")
    assert error.value.line_number == 3
    assert 'share the mark 4' in str(error.value)


def test_bad_token_names_the_line():
    with pytest.raises(DgrFormatError) as error:
        parse_dgr_file("# I=1 J=3 n=6\n1,2,x\n")
    assert error.value.line_number == 2


def test_header_mismatches():
    with pytest.raises(DgrFormatError, match="I=2"):
        parse_dgr_file("# I=2 J=3 n=6\n1,2,4\n")
    with pytest.raises(DgrFormatError, match="J=4"):
        parse_dgr_file("# I=1 J=4 n=6\n1,2,4\n")
    with pytest.raises(DgrFormatError):
        parse_dgr_file("# I=1 J=3 n=6\n")


def test_invalid_blocks_kept_without_validation():
    sets = parse_dgr_file("# I=1 J=3 n=6\n1,2,3\n", validate=False)
    assert not validate_dgr(sets[0])


def test_empty_input():
    assert parse_dgr_file(b'') == []
    assert emit_dgr_file([]) == b''
