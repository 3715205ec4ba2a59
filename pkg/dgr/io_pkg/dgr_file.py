import re

from dgr.core_pkg.dgr_set import DgrSet, validate_dgr
from dgr.utils import DgrFormatError, format_marks

'''
DGR text format

    # I=<I> J=<J> n=<n> [key=value ...]
    <ruler>            one line per ruler, ascending marks separated by commas
    ...
    <blank line>       between DgrSets

Reading is tolerant: marks may be separated by commas, whitespace, '&' or ';' (the
layouts found in typeset tables), lines starting with '#' that are not headers are
comments, and a block without header takes I, J and n from its content.
Writing always produces the canonical form: rulers by decreasing smallest mark.
'''

HEADER_KEYS = ('I', 'J', 'n')
_separators = re.compile(r'[,\s&;]+')


def _parse_header(line, line_number):
    fields = {}
    for token in line.lstrip('#').split():
        if '=' not in token:
            return None
        key, value = token.split('=', 1)
        fields[key] = value
    if not all(key in fields for key in HEADER_KEYS):
        return None
    header = {}
    for key in HEADER_KEYS:
        value = fields.pop(key)
        try:
            header[key] = int(value)
        except ValueError:
            raise DgrFormatError(f"the header value {key}={value} is not an integer", line_number)
    tags = {}
    for key, value in fields.items():
        try:
            tags[key] = int(value)
        except ValueError:
            tags[key] = value
    return header, tags


def _parse_ruler(line, line_number):
    tokens = [t for t in _separators.split(line.strip()) if t != '']
    marks = []
    for t in tokens:
        try:
            marks.append(int(t))
        except ValueError:
            raise DgrFormatError(f"the token {t!r} is not an integer", line_number)
    return marks


def _close_block(block, validate, out):
    header, tags, rows, header_line = block
    if len(rows) == 0:
        if header is not None:
            raise DgrFormatError("a header without rulers", header_line)
        return
    rulers = [marks for marks, _ in rows]
    if header is None:
        d = DgrSet(rulers, tags=tags)
    else:
        if header['I'] != len(rulers):
            raise DgrFormatError(f"the header declares I={header['I']} but {len(rulers)} rulers follow", header_line)
        d = DgrSet(rulers, n=header['n'], tags=tags)
        for marks, line_number in rows:
            if len(marks) != header['J']:
                raise DgrFormatError(f"the ruler has {len(marks)} marks, the header declares J={header['J']}", line_number)
    if validate:
        report = validate_dgr(d)
        if not report:
            line_number = rows[report.rulers[-1]][1] if report.rulers else header_line
            raise DgrFormatError(report.reason, line_number)
    out.append(d)


def parse_dgr_file(data, validate=True):
    """Parse bytes or text into a list of DgrSet; errors carry the offending line number."""
    if isinstance(data, bytes):
        data = data.decode('utf-8')
    sets = []
    block = [None, {}, [], None]
    for line_number, line in enumerate(data.splitlines(), start=1):
        stripped = line.strip()
        if stripped == '':
            _close_block(block, validate, sets)
            block = [None, {}, [], None]
            continue
        if stripped.startswith('#'):
            parsed = _parse_header(stripped, line_number)
            if parsed is None:
                continue
            if block[0] is not None or len(block[2]) > 0:
                _close_block(block, validate, sets)
            block = [parsed[0], parsed[1], [], line_number]
            continue
        block[2].append((_parse_ruler(stripped, line_number), line_number))
    _close_block(block, validate, sets)
    return sets


def emit_dgr_file(sets):
    blocks = []
    for d in sets:
        d = d.canonical()
        header = f"# I={d.I} J={d.J} n={d.n}"
        for key, value in d.tags.items():
            header += f" {key}={value}"
        blocks.append('\n'.join([header] + [format_marks(r) for r in d.rulers]))
    if len(blocks) == 0:
        return b''
    return ('\n\n'.join(blocks) + '\n').encode('utf-8')


def read_dgr_file(path, validate=True):
    with open(path, 'rb') as f:
        return parse_dgr_file(f.read(), validate=validate)


def write_dgr_file(sets, path):
    with open(path, 'wb') as f:
        f.write(emit_dgr_file(sets))
