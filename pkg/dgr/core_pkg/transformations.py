import itertools

from dgr.core_pkg.dgr_set import DgrSet, sigma, lambda_max, shift_dgr


class TransformFamily:
    """S(D,m): the shifts D+b for b in `offsets` (a contiguous range), all within {1..m}."""

    def __init__(self, base, offsets, m):
        self.base = base
        self.offsets = offsets
        self.m = m

    def __len__(self):
        return len(self.offsets)

    def __iter__(self):
        for b in self.offsets:
            yield shift_dgr(self.base, b, m=self.m).with_tags(b=b)

    def members(self):
        return list(self)

    def __repr__(self):
        return f"TransformFamily(offsets={self.offsets.start}..{self.offsets.stop - 1}, m={self.m})"


def shift_range(d, m):
    return range(1 - sigma(d), m - lambda_max(d) + 1)


def transformation_set(d, m):
    lam = lambda_max(d)
    if m < lam:
        raise ValueError(f"The transformation set within m={m} is undefined for lambda={lam} > m.")
    return TransformFamily(d, shift_range(d, m), m)


def k_sub_transformation_set(R, k, m, order='near', partition=None):
    """
    Stream T(R,k,m): every legal shift within {1..m} of every k-subset of every DGR of R,
    deduplicated on the canonical key of the shifted collection.

    order='near' walks shift magnitudes |b| = 0, 1, 2, ... (left shift first) across all (D, subset) pairs,
    so placements close to the seed come first; order='subset' exhausts the shifts of one
    subset before moving to the next.
    partition=(index, count) restricts the stream to the (D, subset) pairs whose position
    is congruent to index modulo count; the union of all partitions equals the full stream.
    Members carry tags k, b and `carried` (the subset's ruler indices in D, joined by '/').
    """
    R = list(R)
    if k < 1:
        raise ValueError(f"k must be a positive integer, k={k} was provided.")
    if partition is not None:
        index, count = partition
        if count < 1 or not 0 <= index < count:
            raise ValueError(f"Invalid partition {partition}; expected (index, count) with 0 <= index < count.")
    if len(R) == 0:
        return
    min_I = min(d.I for d in R)
    if k > min_I:
        raise ValueError(f"k must satisfy 1 <= k <= {min_I} (smallest I in the pool), k={k} was provided.")

    entries = []
    position = 0
    for d in R:
        for subset in itertools.combinations(range(d.I), k):
            if partition is None or position % partition[1] == partition[0]:
                a = d.subset(subset, n=m)
                offsets = shift_range(a, m)
                if len(offsets) > 0:
                    entries.append((a, subset, offsets))
            position += 1

    seen = set()

    def emit(a, subset, b):
        key = tuple(sorted(tuple(x + b for x in r) for r in a.rulers))
        if key in seen:
            return None
        seen.add(key)
        return DgrSet(key, n=m, tags={'k': k, 'b': b, 'carried': '/'.join(str(i) for i in subset)})

    if order == 'subset':
        for a, subset, offsets in entries:
            for b in offsets:
                xi = emit(a, subset, b)
                if xi is not None:
                    yield xi
        return
    if order != 'near':
        raise ValueError(f"Unknown seed order {order!r}; expected 'near' or 'subset'.")

    max_t = max(max(abs(o.start), abs(o.stop - 1)) for _, _, o in entries) if entries else -1
    for t in range(max_t + 1):
        for a, subset, offsets in entries:
            for b in ((0,) if t == 0 else (-t, t)):
                if b in offsets:
                    xi = emit(a, subset, b)
                    if xi is not None:
                        yield xi
