from dgr.utils import (check_marks, marks_to_mask, format_marks,
                       InvalidMarksError, NotGolombError)


class Ruler:
    """
    A Golomb ruler with 1-based marks.

    Marks are positive integers kept strictly increasing. Rulers given with 0-based
    marks (as optimal rulers are usually published) are translated by +1 before
    construction; lengths and differences are unaffected by the translation.
    A ruler with one or two marks is Golomb by definition.
    """

    __slots__ = ('marks', 'mask')

    def __init__(self, marks):
        marks = check_marks(marks)
        repeat = first_repeated_difference(marks)
        if repeat is not None:
            raise NotGolombError(
                f"The marks {format_marks(marks)} do not form a Golomb ruler: the difference "
                f"{repeat[0]} occurs for both {repeat[1]} and {repeat[2]}.")
        self.marks = marks
        self.mask = marks_to_mask(marks)

    @classmethod
    def trusted(cls, marks):
        # skips validation; used by the enumerators, which only emit valid rulers
        r = cls.__new__(cls)
        r.marks = tuple(marks)
        r.mask = marks_to_mask(r.marks)
        return r

    @property
    def J(self):
        return len(self.marks)

    @property
    def length(self):
        return self.marks[-1] - self.marks[0]

    @property
    def min(self):
        return self.marks[0]

    @property
    def max(self):
        return self.marks[-1]

    def __len__(self):
        return len(self.marks)

    def __iter__(self):
        return iter(self.marks)

    def __contains__(self, a):
        return a in self.marks

    def __eq__(self, other):
        if isinstance(other, Ruler):
            return self.marks == other.marks
        return NotImplemented

    def __lt__(self, other):
        return self.marks < other.marks

    def __hash__(self):
        return hash(self.marks)

    def __repr__(self):
        return f"Ruler({list(self.marks)})"

    def __str__(self):
        return format_marks(self.marks)

    def __getstate__(self):
        return self.marks

    def __setstate__(self, marks):
        self.marks = marks
        self.mask = marks_to_mask(marks)


class MarkUniverse:
    """The ambient mark set: {1..n}, or an arbitrary finite set A of positive integers."""

    def __init__(self, n=None, elements=None):
        if elements is None:
            if n is None or n < 0:
                raise ValueError(f"A mark universe needs n >= 0 or an explicit set of elements, n={n} was provided.")
            elements = range(1, n + 1)
            self.is_interval = True
        else:
            elements = sorted(set(elements))
            if len(elements) > 0 and elements[0] < 1:
                raise InvalidMarksError(f"Universe elements must be positive integers, {elements[0]} was provided.")
            if n is not None:
                elements = [a for a in elements if a <= n]
            self.is_interval = len(elements) == 0 or elements[-1] == len(elements)
        self.elements = tuple(elements)
        self.mask = marks_to_mask(self.elements)

    @property
    def n(self):
        return self.elements[-1] if self.elements else 0

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, a):
        return a >= 0 and bool(self.mask >> a & 1)

    def __repr__(self):
        if self.is_interval:
            return f"MarkUniverse(n={self.n})"
        return f"MarkUniverse(elements={list(self.elements)})"


def first_repeated_difference(marks):
    # returns (difference, pair_a, pair_b) for the first repeat, None for a Golomb ruler
    seen = {}
    for j in range(1, len(marks)):
        for i in range(j):
            d = marks[j] - marks[i]
            if d in seen:
                return d, seen[d], (marks[i], marks[j])
            seen[d] = (marks[i], marks[j])
    return None


def is_golomb(marks):
    if isinstance(marks, Ruler):
        return True
    marks = check_marks(marks)
    return first_repeated_difference(marks) is None


def differences(r):
    marks = r.marks if isinstance(r, Ruler) else check_marks(r)
    return {marks[j] - marks[i] for j in range(1, len(marks)) for i in range(j)}


def as_ruler(r):
    if isinstance(r, Ruler):
        return r
    return Ruler(r)


def shift_ruler(r, b):
    r = as_ruler(r)
    if r.min + b < 1:
        raise ValueError(f"Shifting {r} by {b} would move the mark {r.min} to {r.min + b}; marks must stay >= 1.")
    return Ruler.trusted(a + b for a in r.marks)


def mirror_ruler(r, n):
    r = as_ruler(r)
    if r.max > n:
        raise ValueError(f"The mark {r.max} of {r} exceeds the mirror bound n={n}.")
    return Ruler.trusted(sorted(n + 1 - a for a in r.marks))
