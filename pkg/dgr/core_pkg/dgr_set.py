from dgr.core_pkg.ruler import Ruler, first_repeated_difference
from dgr.utils import marks_to_mask, format_marks


class DgrSet:
    """
    An (I,J,n)-DGR: I pairwise-disjoint Golomb rulers of J marks each, within {1..n}.

    The rulers are stored as raw mark tuples and are not validated at construction,
    so that validate_dgr() can describe what is wrong with a candidate set. `tags` carry
    optional key=value annotations (e.g. k and b of the transformation that produced it)
    and do not take part in equality.
    """

    def __init__(self, rulers, n=None, tags=None):
        rulers = tuple(tuple(sorted(int(a) for a in r)) for r in rulers)
        self.rulers = rulers
        if n is None:
            n = max((r[-1] for r in rulers if len(r) > 0), default=0)
        self.n = int(n)
        self.tags = dict(tags) if tags else {}

    @property
    def I(self):
        return len(self.rulers)

    @property
    def J(self):
        if len(self.rulers) == 0:
            return 0
        return len(self.rulers[0])

    @property
    def marks(self):
        return frozenset(a for r in self.rulers for a in r)

    @property
    def mask(self):
        return marks_to_mask(self.marks)

    def key(self):
        # canonical key: sorted list of sorted mark vectors
        return tuple(sorted(self.rulers))

    def canonical(self):
        # file order: rulers by decreasing smallest mark
        rulers = sorted(self.rulers, key=lambda r: (-r[0], r) if r else (0, r))
        return DgrSet(rulers, n=self.n, tags=self.tags)

    def as_rulers(self):
        return [Ruler(r) for r in self.rulers]

    def is_regular(self):
        return self.n == self.I * self.J and len(self.marks) == self.n and bool(validate_dgr(self))

    def subset(self, indices, n=None):
        return DgrSet([self.rulers[i] for i in indices], n=self.n if n is None else n)

    def union(self, other, n=None):
        if n is None:
            n = max(self.n, other.n)
        return DgrSet(self.rulers + other.rulers, n=n)

    def with_tags(self, **tags):
        merged = dict(self.tags)
        merged.update(tags)
        return DgrSet(self.rulers, n=self.n, tags=merged)

    def __len__(self):
        return len(self.rulers)

    def __iter__(self):
        return iter(self.rulers)

    def __eq__(self, other):
        if isinstance(other, DgrSet):
            return self.n == other.n and self.key() == other.key()
        return NotImplemented

    def __hash__(self):
        return hash((self.n, self.key()))

    def __repr__(self):
        return f"DgrSet(I={self.I}, J={self.J}, n={self.n}, rulers={[list(r) for r in self.rulers]})"

    def __str__(self):
        return '\n'.join(format_marks(r) for r in self.rulers)


class DgrReport:
    """Outcome of validate_dgr(): truthy when valid, otherwise names the failing ruler(s) or mark."""

    def __init__(self, ok, reason='', rulers=(), mark=None):
        self.ok = ok
        self.reason = reason
        self.rulers = tuple(rulers)
        self.mark = mark

    def __bool__(self):
        return self.ok

    def __repr__(self):
        if self.ok:
            return 'DgrReport(ok)'
        return f"DgrReport(violation: {self.reason})"

    def to_dict(self):
        return {'ok': self.ok, 'reason': self.reason, 'rulers': list(self.rulers), 'mark': self.mark}


def validate_dgr(d, n=None, J=None):
    """
    Check every DgrSet invariant and report the first failure, in this order:
    ruler marks, arity, Golomb property, disjointness, bound.
    """
    if n is None:
        n = d.n
    if J is None:
        J = d.J
    for i, r in enumerate(d.rulers):
        if len(r) == 0:
            return DgrReport(False, f"ruler {i} is empty", rulers=(i,))
        if r[0] < 1:
            return DgrReport(False, f"ruler {i} contains the non-positive mark {r[0]}", rulers=(i,), mark=r[0])
        for x, y in zip(r[:-1], r[1:]):
            if x == y:
                return DgrReport(False, f"ruler {i} repeats the mark {x}", rulers=(i,), mark=x)
        if len(r) != J:
            return DgrReport(False, f"ruler {i} has {len(r)} marks, {J} expected", rulers=(i,))
        repeat = first_repeated_difference(r)
        if repeat is not None:
            return DgrReport(False,
                f"ruler {i} ({format_marks(r)}) is not Golomb: difference {repeat[0]} "
                f"occurs for {repeat[1]} and {repeat[2]}", rulers=(i,))
    owner = {}
    for i, r in enumerate(d.rulers):
        for a in r:
            if a in owner:
                j = owner[a]
                return DgrReport(False, f"rulers {j} and {i} share the mark {a}", rulers=(j, i), mark=a)
            owner[a] = i
    for i, r in enumerate(d.rulers):
        if r[-1] > n:
            return DgrReport(False, f"ruler {i} has the mark {r[-1]} beyond the bound n={n}", rulers=(i,), mark=r[-1])
    return DgrReport(True)


def sigma(d):
    if len(d.rulers) == 0 or all(len(r) == 0 for r in d.rulers):
        raise ValueError("sigma is undefined for an empty DgrSet.")
    return min(r[0] for r in d.rulers if r)


def lambda_max(d):
    if len(d.rulers) == 0 or all(len(r) == 0 for r in d.rulers):
        raise ValueError("lambda is undefined for an empty DgrSet.")
    return max(r[-1] for r in d.rulers if r)


def shift_dgr(d, b, m=None):
    """
    b-step transformation: every mark of every ruler moves by b. The declared bound
    becomes m when given (λ(d)+b must fit), otherwise d.n + b.
    """
    s = sigma(d)
    if s + b < 1:
        raise ValueError(f"A shift of b={b} needs b >= 1 - sigma = {1 - s}.")
    if m is not None:
        lam = lambda_max(d)
        if lam + b > m:
            raise ValueError(f"A shift of b={b} moves lambda={lam} to {lam + b}, beyond m={m}.")
        n = m
    else:
        n = d.n + b
    return DgrSet([tuple(a + b for a in r) for r in d.rulers], n=n, tags=d.tags)


def mirror_dgr(d, n=None):
    if n is None:
        n = d.n
    lam = lambda_max(d)
    if lam > n:
        raise ValueError(f"The mark {lam} exceeds the mirror bound n={n}.")
    return DgrSet([tuple(n + 1 - a for a in r) for r in d.rulers], n=n)
