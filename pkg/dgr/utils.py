import os
import time
import numbers


######################
#ERRORS
######################


class InvalidMarksError(ValueError):
    """Empty mark list, non-positive mark or duplicated mark."""


class NotGolombError(ValueError):
    """Marks are valid integers but a positive difference repeats."""


class DgrFormatError(ValueError):
    def __init__(self, message, line_number=None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class MemoryCapError(ValueError):
    pass


class RegistryConflictError(ValueError):
    pass


######################
#MARK SETS AS BITMASKS
######################


def marks_to_mask(marks):
    mask = 0
    for a in marks:
        mask |= 1 << a
    return mask


def mask_to_marks(mask):
    marks = []
    while mask:
        low = mask & -mask
        marks.append(low.bit_length() - 1)
        mask ^= low
    return marks


def popcount(mask):
    return bin(mask).count('1')


def interval_mask(low, high):
    # bits low..high inclusive
    if high < low:
        return 0
    return ((1 << (high - low + 1)) - 1) << low


def check_marks(marks):
    """Sort and validate a mark sequence; the 1-based convention requires marks >= 1."""
    marks = list(marks)
    if len(marks) == 0:
        raise InvalidMarksError("A ruler needs at least one mark, an empty sequence was provided.")
    for a in marks:
        if isinstance(a, bool) or not isinstance(a, numbers.Integral):
            raise InvalidMarksError(f"Marks must be integers, {a!r} was provided.")
        if a < 1:
            raise InvalidMarksError(f"Marks must be positive integers, {a} was provided.")
    marks = sorted(int(a) for a in marks)
    for x, y in zip(marks[:-1], marks[1:]):
        if x == y:
            raise InvalidMarksError(f"The mark {x} is duplicated in {marks}.")
    return tuple(marks)


def format_marks(marks):
    return ','.join(str(a) for a in marks)


######################
#BUDGETS
######################


class Budget:
    """
    Wall-clock and node budget shared by a search call. The deadline is an absolute
    time.time() value so that a Budget can be pickled to pathos workers.
    """

    def __init__(self, secs=None, nodes=None, deadline=None):
        self.start = time.time()
        if deadline is None and secs is not None:
            deadline = self.start + secs
        self.deadline = deadline
        self.node_limit = nodes
        self.nodes = 0
        self.hit = False

    def tick(self, count=1):
        self.nodes += count
        if self.node_limit is not None and self.nodes > self.node_limit:
            self.hit = True
        elif self.deadline is not None and (self.nodes & 1023) == 0 and time.time() >= self.deadline:
            self.hit = True
        return not self.hit

    def expired(self):
        if self.hit:
            return True
        if self.node_limit is not None and self.node_limit <= 0:
            self.hit = True
        elif self.deadline is not None and time.time() >= self.deadline:
            self.hit = True
        return self.hit

    def remaining_secs(self):
        if self.deadline is None:
            return None
        return max(0.0, self.deadline - time.time())

    def child(self, secs=None, nodes=None):
        # a sub-budget never outlives its parent deadline
        deadline = self.deadline
        if secs is not None:
            own = time.time() + secs
            deadline = own if deadline is None else min(deadline, own)
        return Budget(nodes=nodes, deadline=deadline)

    def elapsed(self):
        return time.time() - self.start


######################
#MISC
######################


def data_path(file_name, data_dir=None, fallback=False):
    # with fallback, a file missing from data_dir is read from the shipped data instead
    shipped = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'data')
    if data_dir is None:
        return os.path.join(shipped, file_name)
    path = os.path.join(str(data_dir), file_name)
    if fallback and not os.path.isfile(path):
        return os.path.join(shipped, file_name)
    return path


def generate_token_data(tmppath):
    # a (2,3,6)-DGR and the Table I seed, used by scripts/error_check_dgr.py
    from dgr.io_pkg.dgr_file import emit_dgr_file
    from dgr.io_pkg.fixtures import FixtureSet
    from dgr.core_pkg.dgr_set import DgrSet

    os.makedirs(f'{tmppath}/inputs', exist_ok=True)
    small = DgrSet([(1, 2, 4), (3, 5, 6)], n=6)
    with open(f'{tmppath}/inputs/token_small.dgr', 'wb') as f:
        f.write(emit_dgr_file([small]))
    regular = DgrSet([(1, 2, 4), (3, 5, 6), (7, 8, 10), (9, 11, 12)], n=12)
    with open(f'{tmppath}/inputs/token_regular.dgr', 'wb') as f:
        f.write(emit_dgr_file([regular]))
    fixtures = FixtureSet.load()
    with open(f'{tmppath}/inputs/table1_seed.dgr', 'wb') as f:
        f.write(emit_dgr_file([fixtures.table1[(6, 10)]]))
