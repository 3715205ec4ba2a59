from dgr.core_pkg.dgr_set import validate_dgr
from dgr.io_pkg.dgr_file import read_dgr_file
from dgr.utils import data_path


class FixtureSet:
    """The published DGR blocks: the per-(I,J) record holders and the per-level descent trace."""

    def __init__(self, table4, table1):
        self.table4 = table4
        self.table1 = table1

    @classmethod
    def load(cls, data_dir=None):
        table4 = {}
        for d in read_dgr_file(data_path('table4_fixtures.dgr', data_dir, fallback=True), validate=False):
            table4[(d.I, d.J)] = d
        table1 = {}
        for d in read_dgr_file(data_path('table1_trace.dgr', data_dir, fallback=True), validate=False):
            table1[(d.I, d.J)] = d
        return cls(table4, table1)

    def all(self):
        return [('table4', key, d) for key, d in sorted(self.table4.items(), key=lambda kv: (kv[0][1], kv[0][0]))] + \
               [('table1', key, d) for key, d in sorted(self.table1.items())]

    def __len__(self):
        return len(self.table4) + len(self.table1)


class FixtureCheck:
    def __init__(self, source, I, J, n):
        self.source = source
        self.I = I
        self.J = J
        self.n = n
        self.valid = False
        self.reason = ''
        self.cell = None
        self.cell_status = None
        self.bound_ok = None
        self.exact_ok = None

    @property
    def ok(self):
        return self.valid and self.bound_ok is not False and self.exact_ok is not False

    def to_dict(self):
        return {
            'source': self.source, 'I': self.I, 'J': self.J, 'n': self.n, 'valid': self.valid,
            'reason': self.reason, 'cell': self.cell, 'cell_status': self.cell_status,
            'bound_ok': self.bound_ok, 'exact_ok': self.exact_ok, 'ok': self.ok,
        }


class FixtureReport:
    def __init__(self, checks):
        self.checks = checks

    @property
    def ok(self):
        return all(c.ok for c in self.checks)

    @property
    def verdict(self):
        return 'verified-on-range' if self.ok else 'violation'

    def mismatches(self):
        return [c for c in self.checks if not c.ok]

    def to_dict(self):
        return {
            'verdict': self.verdict,
            'checked': len(self.checks),
            'mismatches': [(c.source, c.I, c.J) for c in self.mismatches()],
            'checks': [c.to_dict() for c in self.checks],
        }


def validate_fixtures(fixtures=None, registry=None):
    """
    Validate every fixture, then cross-check it against the registry cell for its (I,J):
    the largest mark must stay within the cell value, and a fixture for an exact cell must
    reach exactly that value (a regular cell means the marks tile {1..IJ}).
    """
    from nipype import logging
    log = logging.getLogger('nipype.workflow')

    if fixtures is None:
        fixtures = FixtureSet.load()
    if registry is None:
        from dgr.io_pkg.registry import BoundsRegistry
        registry = BoundsRegistry.load()
    checks = []
    for source, (I, J), d in fixtures.all():
        check = FixtureCheck(source, I, J, d.n)
        report = validate_dgr(d)
        check.valid = bool(report)
        check.reason = report.reason
        entry = registry.get(I, J)
        if entry is not None:
            check.cell = entry.value
            check.cell_status = entry.status
            top = max(max(r) for r in d.rulers)
            check.bound_ok = top <= entry.value
            if entry.is_exact:
                check.exact_ok = top == entry.value and (entry.value != I * J or len(d.marks) == I * J)
        if not check.ok:
            log.warning(f"Fixture {source} (I={I}, J={J}) does not match the registry: {check.to_dict()}")
        checks.append(check)
    return FixtureReport(checks)
