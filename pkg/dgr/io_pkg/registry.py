import os
import json

from dgr.search_pkg.exact import HValue, EXACT, UPPER_BOUND, LOWER_BOUND
from dgr.utils import RegistryConflictError, data_path

BOUNDS_SCHEMA = 'dgr-bounds/1'
TAU_SCHEMA = 'dgr-tau/1'
PROVENANCES = ('paper-table', 'paper-text', 'computed-exact', 'computed-ub', 'computed-lb', 'external')


class TauBound:
    def __init__(self, J, lower, upper, provenance='paper-table'):
        self.J = J
        self.lower = lower
        self.upper = upper
        self.provenance = provenance

    def __repr__(self):
        return f"TauBound(J={self.J}, {self.lower}..{self.upper}, {self.provenance})"


def _read_rows(path, columns):
    rows = []
    with open(path) as f:
        for line_number, line in enumerate(f, start=1):
            line = line.strip()
            if line == '' or line.startswith('#'):
                continue
            fields = line.split()
            if len(fields) < columns:
                raise ValueError(f"{path}, line {line_number}: expected {columns} columns, found {line!r}.")
            rows.append((line_number, fields))
    return rows


class BoundsRegistry:
    """
    Known values and bounds of H(I,J), keyed by (I,J), each an HValue with provenance, plus
    the published bounds on tau(J). Computed results enter through merge(), which refuses
    to contradict what is already known.
    """

    def __init__(self, entries=None, tau=None, g_registry=None):
        self.entries = dict(entries or {})
        self.tau = dict(tau or {})
        self.g_registry = g_registry

    @classmethod
    def load(cls, data_dir=None, with_g=True):
        h_path = data_path('table2_H.txt', data_dir, fallback=True)
        tau_path = data_path('table3_tau.txt', data_dir, fallback=True)
        entries = {}
        for line_number, fields in _read_rows(h_path, 5):
            I, J, value = int(fields[0]), int(fields[1]), int(fields[2])
            status, provenance = fields[3], fields[4]
            reference = fields[5] if len(fields) > 5 else ''
            if status not in (EXACT, UPPER_BOUND, LOWER_BOUND):
                raise ValueError(f"{h_path}, line {line_number}: unknown status {status!r}.")
            if provenance not in PROVENANCES:
                raise ValueError(f"{h_path}, line {line_number}: unknown provenance {provenance!r}.")
            if (I, J) in entries:
                raise ValueError(f"{h_path}, line {line_number}: H({I},{J}) is listed twice.")
            entries[(I, J)] = HValue(I, J, value, status, provenance=provenance, reference=reference)
        tau = {}
        if os.path.isfile(tau_path):
            for line_number, fields in _read_rows(tau_path, 4):
                J, lower, upper = int(fields[0]), int(fields[1]), int(fields[2])
                if lower > upper:
                    raise ValueError(f"{tau_path}, line {line_number}: lower bound {lower} exceeds upper bound {upper}.")
                tau[J] = TauBound(J, lower, upper, fields[3])
        g_registry = None
        if with_g:
            from dgr.constructions_pkg.g_registry import GRegistry, default_g_registry
            g_path = data_path('g_optimal.txt', data_dir)
            g_registry = GRegistry.load(g_path) if data_dir is not None and os.path.isfile(g_path) else default_g_registry()
        return cls(entries, tau, g_registry)

    def save(self, data_dir):
        os.makedirs(data_dir, exist_ok=True)
        path = data_path('table2_H.txt', data_dir)
        lines = [f"# schema: {BOUNDS_SCHEMA}", "# columns: I J H status provenance reference"]
        for key in sorted(self.entries, key=lambda k: (k[1], k[0])):
            e = self.entries[key]
            lines.append(f"{e.I} {e.J} {e.value} {e.status} {e.provenance} {e.reference or '-'}")
        with open(path, 'w') as f:
            f.write('\n'.join(lines) + '\n')
        return path

    def get(self, I, J):
        return self.entries.get((I, J))

    def exact_value(self, I, J):
        entry = self.get(I, J)
        if entry is None or not entry.is_exact:
            return None
        return entry.value

    def upper_value(self, I, J):
        entry = self.get(I, J)
        if entry is None or entry.status == LOWER_BOUND:
            return None
        return entry.value

    def known_lower(self, I, J):
        """Best lower bound on H(I,J): pigeonhole IJ, the entry itself, and H(I',J) + (I-I') for exact I' < I."""
        lower = I * J
        entry = self.get(I, J)
        if entry is not None:
            if entry.status in (EXACT, LOWER_BOUND):
                lower = max(lower, entry.value)
            elif entry.lower is not None:
                lower = max(lower, entry.lower)
        for (I2, J2), other in self.entries.items():
            # dropping the ruler holding the largest mark gives H(I-1,J) < H(I,J)
            if J2 == J and I2 < I and other.is_exact:
                lower = max(lower, other.value + (I - I2))
        return lower

    def for_J(self, J):
        return [self.entries[k] for k in sorted(self.entries) if k[1] == J]

    def J_values(self):
        return sorted({J for _, J in self.entries})

    def merge(self, value):
        """
        Add a computed HValue. Exact values may replace bounds and tighter bounds replace
        looser ones; anything contradicting an existing entry raises RegistryConflictError.
        Returns the entry kept for (I,J).
        """
        from nipype import logging
        log = logging.getLogger('nipype.workflow')

        key = (value.I, value.J)
        current = self.entries.get(key)
        if current is None:
            self.entries[key] = value
            return value

        def conflict():
            raise RegistryConflictError(f"""The computed {value.status} value {value.value} for H({value.I},{value.J})
contradicts the registry entry {current.status} {current.value} ({current.provenance}).""")

        lo = current.value if current.status in (EXACT, LOWER_BOUND) else current.lower
        hi = current.value if current.status in (EXACT, UPPER_BOUND) else None
        if value.status in (EXACT, UPPER_BOUND) and lo is not None and value.value < lo:
            conflict()
        if value.status in (EXACT, LOWER_BOUND) and hi is not None and value.value > hi:
            conflict()

        if current.is_exact:
            if current.witness is None and value.witness is not None and value.is_exact:
                current.witness = value.witness
            return current
        replace = (value.is_exact
                   or (value.status == UPPER_BOUND and (hi is None or value.value < hi))
                   or (value.status == LOWER_BOUND and current.status == LOWER_BOUND and value.value > current.value))
        if replace:
            if value.status == UPPER_BOUND and lo is not None and (value.lower is None or value.lower < lo):
                value.lower = lo
            log.info(f"Registry: H({value.I},{value.J}) {current.status} {current.value} -> {value.status} {value.value}.")
            self.entries[key] = value
            return value
        if value.status == LOWER_BOUND and current.status == UPPER_BOUND and (lo is None or value.value > lo):
            current.lower = value.value
        return current

    def __contains__(self, key):
        return key in self.entries

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(sorted(self.entries))


######################
#TABLES
######################


def registry_frame(registry, I_range=None, J_range=None):
    """Long-form DataFrame of the registry entries: one row per (I,J)."""
    import pandas as pd
    rows = []
    for I, J in registry:
        if I_range is not None and I not in I_range:
            continue
        if J_range is not None and J not in J_range:
            continue
        e = registry.get(I, J)
        rows.append({'I': I, 'J': J, 'H': e.value, 'status': e.status, 'provenance': e.provenance,
                     'cell': f"{e.value}*" if e.is_exact else str(e.value)})
    return pd.DataFrame(rows, columns=['I', 'J', 'H', 'status', 'provenance', 'cell'])


def format_tau(t):
    if t.upper is None:
        return f">={t.lower}"
    if t.lower == t.upper:
        return str(t.lower)
    return f"{t.lower}-{t.upper}"


def registry_table(registry, fmt='text', table='H', I_range=None, J_range=None):
    """
    Render the H table (rows J, columns I, exact values marked '*') or the tau table as
    text or JSON bytes. Rendering is deterministic.
    """
    if fmt not in ('text', 'json'):
        raise ValueError(f"Unknown table format {fmt!r}; expected 'text' or 'json'.")
    if table not in ('H', 'tau'):
        raise ValueError(f"Unknown table {table!r}; expected 'H' or 'tau'.")
    if table == 'tau':
        records = [registry.tau[J] for J in sorted(registry.tau) if J_range is None or J in J_range]
        if fmt == 'json':
            data = {'schema': TAU_SCHEMA, 'tau': [
                {'J': t.J, 'lower': t.lower, 'upper': t.upper, 'provenance': t.provenance} for t in records]}
            return (json.dumps(data, indent=1, sort_keys=True) + '\n').encode('utf-8')
        import pandas as pd
        if len(records) == 0:
            return b'J tau(J)\n'
        df = pd.DataFrame([{'J': t.J, 'tau(J)': format_tau(t)} for t in records])
        return (df.to_string(index=False) + '\n').encode('utf-8')

    frame = registry_frame(registry, I_range=I_range, J_range=J_range)
    if fmt == 'json':
        entries = [registry.get(I, J).to_dict() for I, J in zip(frame['I'], frame['J'])]
        data = {'schema': BOUNDS_SCHEMA, 'entries': entries}
        return (json.dumps(data, indent=1, sort_keys=True) + '\n').encode('utf-8')
    if len(frame) == 0:
        return b'J/I\n'
    table = frame.pivot(index='J', columns='I', values='cell').fillna('-')
    table.columns = [str(I) for I in table.columns]
    table = table.reset_index().rename(columns={'J': 'J/I'})
    return (table.to_string(index=False) + '\n').encode('utf-8')
