import math
import numbers

import numpy as np
import galois

from dgr.core_pkg.ruler import Ruler


def check_prime_power(q):
    if isinstance(q, bool) or not isinstance(q, numbers.Integral):
        raise ValueError(f"q must be an integer prime power, {q!r} was provided.")
    q = int(q)
    if q < 2 or not galois.is_prime_power(q):
        raise ValueError(f"q must be a prime power (q >= 2), {q} was provided.")
    return q


class SingerSet:
    """q+1 residues modulo m = q^2+q+1 whose nonzero differences are all distinct."""

    def __init__(self, q, residues):
        self.q = q
        self.m = q * q + q + 1
        self.residues = tuple(sorted(int(x) % self.m for x in residues))

    @property
    def k(self):
        return len(self.residues)

    def is_perfect(self):
        return is_perfect_difference_set(self.residues, self.m)

    def as_ruler(self):
        # residues 0..m-1 become marks 1..m
        return Ruler([x + 1 for x in self.residues])

    def rulers(self):
        """Every ruler cut from the cyclic set: each multiplier coprime to m, each translate to 0."""
        for t in range(1, self.m):
            if math.gcd(t, self.m) != 1:
                continue
            scaled = [(t * x) % self.m for x in self.residues]
            for e in scaled:
                yield tuple(sorted((y - e) % self.m for y in scaled))

    def best_ruler(self):
        best = min(self.rulers(), key=lambda marks: (marks[-1], marks))
        return Ruler([x + 1 for x in best])

    def canonical(self):
        return SingerSet(self.q, min(self.rulers()))

    def __eq__(self, other):
        return isinstance(other, SingerSet) and (self.q, self.residues) == (other.q, other.residues)

    def __hash__(self):
        return hash((self.q, self.residues))

    def __repr__(self):
        return f"SingerSet(q={self.q}, residues={list(self.residues)} mod {self.m})"


def is_perfect_difference_set(residues, m):
    residues = [int(x) % m for x in residues]
    if len(set(residues)) != len(residues):
        return False
    seen = set()
    for x in residues:
        for y in residues:
            if x == y:
                continue
            d = (x - y) % m
            if d in seen:
                return False
            seen.add(d)
    return len(seen) == m - 1


def singer_difference_set(q):
    """
    Singer's perfect difference set for a prime power q, in canonical form (contains 0,
    lexicographic minimum over translates and multipliers).

    With g a primitive element of GF(q^3), the powers g^i taken modulo m = q^2+q+1 are the
    points of the projective plane over GF(q). The points of the line through 1 and g,
    that is 1 (i = 0), g (i = 1) and g + c for c in GF(q)*, give the q+1 residues.
    """
    q = check_prime_power(q)
    m = q * q + q + 1
    GF = galois.GF(q ** 3)
    g = GF.primitive_element
    powers = g ** np.arange(q ** 3 - 1)
    diff = powers - g
    # g^i - g lies in GF(q)* exactly when it is fixed by the Frobenius map x -> x^q
    in_line = (diff ** q == diff) & (diff != 0)
    residues = {0, 1}
    residues.update(int(i) % m for i in np.nonzero(in_line)[0])
    singer = SingerSet(q, residues)
    if singer.k != q + 1 or not singer.is_perfect():
        raise RuntimeError(f"The Singer construction for q={q} did not produce a perfect difference set.")
    return singer.canonical()


class SingerBound:
    def __init__(self, q, singer, registry_G=None):
        self.q = q
        self.k = q + 1
        self.bound = q * q + q
        self.singer = singer
        self.ruler = singer.as_ruler()
        self.best = singer.best_ruler()
        self.registry_G = registry_G

    @property
    def consistent(self):
        # the registry optimum can never exceed a constructed ruler's length
        if self.registry_G is None:
            return True
        return self.registry_G <= self.best.length <= self.bound

    def to_dict(self):
        return {
            'q': self.q, 'k': self.k, 'bound': self.bound,
            'residues': list(self.singer.residues),
            'ruler': list(self.ruler.marks), 'ruler_length': self.ruler.length,
            'best_ruler': list(self.best.marks), 'best_length': self.best.length,
            'registry_G': self.registry_G, 'consistent': self.consistent,
        }


def singer_g_bound(q, g_registry=None):
    """G(q+1) <= q^2+q, witnessed by the Singer set read as a ruler, and the shortest ruler cut from it."""
    singer = singer_difference_set(q)
    if g_registry is None:
        from dgr.constructions_pkg.g_registry import default_g_registry
        g_registry = default_g_registry()
    return SingerBound(singer.q, singer, registry_G=g_registry.G(singer.q + 1))
