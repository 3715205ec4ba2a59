import functools

from dgr.core_pkg.ruler import Ruler
from dgr.core_pkg.enumeration import trivial_min_lengths
from dgr.utils import data_path


class GRegistry:
    """Known optimal ruler lengths G(k), each with a stored optimal ruler (1-based marks)."""

    def __init__(self, entries=None, provenance='external'):
        # entries: {k: (G, Ruler)}
        self.entries = dict(entries or {})
        self.provenance = provenance

    @classmethod
    def load(cls, path=None):
        if path is None:
            path = data_path('g_optimal.txt')
        entries = {}
        provenance = 'external'
        with open(path) as f:
            for line_number, line in enumerate(f, start=1):
                line = line.strip()
                if line == '' or line.startswith('#'):
                    continue
                fields = line.split()
                if len(fields) != 3:
                    raise ValueError(f"{path}, line {line_number}: expected 'k G marks', found {line!r}.")
                k, G = int(fields[0]), int(fields[1])
                zero_based = [int(a) for a in fields[2].split(',')]
                ruler = Ruler([a + 1 for a in zero_based])
                if ruler.J != k:
                    raise ValueError(f"{path}, line {line_number}: the ruler has {ruler.J} marks, k={k} declared.")
                if ruler.length != G:
                    raise ValueError(f"{path}, line {line_number}: the ruler has length {ruler.length}, G({k})={G} declared.")
                entries[k] = (G, ruler)
        registry = cls(entries, provenance=provenance)
        registry.check_increasing()
        return registry

    def check_increasing(self):
        ks = sorted(self.entries)
        for a, b in zip(ks[:-1], ks[1:]):
            if b == a + 1 and not self.entries[a][0] < self.entries[b][0]:
                raise ValueError(f"G must be strictly increasing, G({a})={self.entries[a][0]} and G({b})={self.entries[b][0]}.")

    def G(self, k):
        if k not in self.entries:
            return None
        return self.entries[k][0]

    def ruler(self, k):
        if k not in self.entries:
            return None
        return self.entries[k][1]

    @property
    def known_k(self):
        return sorted(self.entries)

    def min_lengths(self, J):
        # min_lengths[t] lower-bounds the length of any t-mark Golomb ruler
        lengths = trivial_min_lengths(J)
        for t in range(J + 1):
            G = self.G(t)
            if G is not None:
                lengths[t] = max(lengths[t], G)
        return lengths

    def __contains__(self, k):
        return k in self.entries

    def __len__(self):
        return len(self.entries)


@functools.lru_cache(maxsize=None)
def default_g_registry():
    return GRegistry.load()
