from nipype import logging

from dgr.core_pkg.ruler import Ruler, MarkUniverse
from dgr.core_pkg.enumeration import _ruler_stream, trivial_min_lengths
from dgr.core_pkg.dgr_set import DgrSet, validate_dgr, mirror_dgr
from dgr.search_pkg.config import SearchConfig
from dgr.utils import Budget, popcount, interval_mask, mask_to_marks

WITNESS = 'witness'
PROVEN_ABSENT = 'proven-absent'
BUDGET_EXHAUSTED = 'budget-exhausted'
NOT_FOUND = 'not-found'

EXACT = 'exact'
UPPER_BOUND = 'upper-bound'
LOWER_BOUND = 'lower-bound'


class SearchResult:
    def __init__(self, status, witness=None, frontier=None, nodes=0, elapsed=0.0, note='', truncated=0):
        self.status = status
        self.witness = witness
        self.frontier = frontier
        self.nodes = nodes
        self.elapsed = elapsed
        self.note = note
        # candidates whose own node budget ran out; a not-found with truncated > 0 is not a definite miss
        self.truncated = truncated

    @property
    def found(self):
        return self.status == WITNESS

    def __repr__(self):
        return f"SearchResult({self.status}, nodes={self.nodes})"

    def to_dict(self):
        return {
            'status': self.status,
            'witness': None if self.witness is None else [list(r) for r in self.witness.canonical().rulers],
            'n': None if self.witness is None else self.witness.n,
            'nodes': self.nodes,
            'elapsed': round(self.elapsed, 3),
            'note': self.note,
            'truncated': self.truncated,
        }


class HValue:
    """A value of H(I,J) with its status, optional witness and provenance."""

    def __init__(self, I, J, value, status, witness=None, provenance='computed-exact', reference='', lower=None):
        if status not in (EXACT, UPPER_BOUND, LOWER_BOUND):
            raise ValueError(f"Unknown H status {status!r}.")
        self.I = I
        self.J = J
        self.value = value
        self.status = status
        self.witness = witness
        self.provenance = provenance
        self.reference = reference
        self.lower = lower

    @property
    def is_exact(self):
        return self.status == EXACT

    @property
    def is_regular(self):
        return self.status == EXACT and self.value == self.I * self.J

    def __repr__(self):
        return f"HValue(H({self.I},{self.J}) {self.status} {self.value}, {self.provenance})"

    def to_dict(self):
        return {
            'I': self.I, 'J': self.J, 'value': self.value, 'status': self.status,
            'provenance': self.provenance, 'reference': self.reference, 'lower': self.lower,
            'witness': None if self.witness is None else [list(r) for r in self.witness.canonical().rulers],
        }


######################
#BACKTRACKING
######################

_LEAF = object()


class _Frame:
    __slots__ = ('chosen', 'used', 'start', 'ub', 'after', 'gen')

    def __init__(self, chosen, used, start, ub, after=None):
        self.chosen = chosen
        self.used = used
        self.start = start
        self.ub = ub
        self.after = after
        self.gen = None

    def to_dict(self):
        return {'chosen': [list(r.marks) for r in self.chosen], 'start': self.start,
                'after': None if self.after is None else list(self.after)}


class ExactSearch:
    """
    Ruler-level exact cover with slack over the allowed marks.

    A node holds the rulers chosen so far and `start`, the smallest mark not yet covered
    nor skipped. It branches on the rulers whose smallest mark is `start` (lexicographic
    order), then on leaving `start` uncovered. Marks below `start` are never reused.
    A node is pruned when fewer free marks remain in [start, ub] than the missing rulers need.

    Mirror symmetry (only for the plain universe {1..n} without seed): a DGR and its
    mirror a -> n+1-a are equivalent, so the search keeps the one whose left gap
    sigma-1 does not exceed its right gap n-lambda (all marks <= n+1-sigma), breaking
    ties at the leaf with the canonical key. This removes mirror pairs and keeps one
    representative of every equivalence class.
    """

    def __init__(self, I, J, n, config, seed=None, universe=None, budget=None):
        self.I = I
        self.J = J
        self.n = n
        self.config = config
        self.seed = seed
        if universe is None:
            universe = MarkUniverse(n=n)
        seed_mask = seed.mask if seed is not None else 0
        self.allowed = universe.mask & interval_mask(1, n) & ~seed_mask
        self.need = I - (seed.I if seed is not None else 0)
        self.symmetric = (config.symmetry and seed is None and universe.is_interval and universe.n >= n)
        self.budget = budget if budget is not None else config.make_budget()
        if config.use_g_bounds:
            from dgr.constructions_pkg.g_registry import default_g_registry
            self.min_lengths = default_g_registry().min_lengths(J)
        else:
            self.min_lengths = trivial_min_lengths(J)
        self.exhausted = False

    def _ub(self, chosen, start):
        if not self.symmetric:
            return self.n
        first = chosen[0].min if chosen else start
        return self.n + 1 - first

    def make_frame(self, chosen, used, from_mark):
        need_left = self.need - len(chosen)
        if need_left == 0:
            return _LEAF
        free = self.allowed & ~used
        rest = free >> from_mark
        if rest == 0:
            return None
        start = from_mark + (rest & -rest).bit_length() - 1
        ub = self._ub(chosen, start)
        if start > ub:
            return None
        if popcount(free & interval_mask(start, ub)) < need_left * self.J:
            return None
        return _Frame(chosen, used, start, ub)

    def root_frame(self):
        return self.make_frame((), 0, 1)

    def frame_from_dict(self, data):
        chosen = tuple(Ruler.trusted(r) for r in data['chosen'])
        used = 0
        for r in chosen:
            used |= r.mask
        frame = _Frame(chosen, used, data['start'], self._ub(chosen, data['start']))
        if data.get('after') is not None:
            frame.after = tuple(data['after'])
        return frame

    def _rulers_at(self, frame):
        window = self.allowed & ~frame.used & interval_mask(frame.start, frame.ub)
        return _ruler_stream(self.J, mask_to_marks(window), first=frame.start,
                             min_lengths=self.min_lengths, after=frame.after)

    def _leaf(self, chosen):
        rulers = [r.marks for r in chosen]
        if self.seed is not None:
            rulers = list(self.seed.rulers) + rulers
        d = DgrSet(rulers, n=self.n)
        if self.symmetric:
            low = chosen[0].min
            high = max(r.max for r in chosen)
            if low - 1 == self.n - high and d.key() > mirror_dgr(d).key():
                return None
        report = validate_dgr(d)
        if not report:
            raise RuntimeError(f"The exact search produced an invalid DGR ({report.reason}).")
        return d

    def search(self, stack):
        """Yield witnesses in DFS order; on return, `exhausted` tells whether the stack was emptied."""
        self.exhausted = False
        self.stack = stack
        if self.budget.expired():
            return
        while stack:
            frame = stack[-1]
            if frame.gen is None:
                frame.gen = self._rulers_at(frame)
            r = next(frame.gen, None)
            if r is not None:
                if not self.budget.tick():
                    # r is regenerated on resume since frame.after still precedes it
                    frame.gen = None
                    return
                frame.after = r.marks
                chosen = frame.chosen + (r,)
                child = self.make_frame(chosen, frame.used | r.mask, frame.start + 1)
                if child is _LEAF:
                    witness = self._leaf(chosen)
                    if witness is not None:
                        yield witness
                elif child is not None:
                    stack.append(child)
                continue
            stack.pop()
            # leave `start` uncovered
            child = self.make_frame(frame.chosen, frame.used, frame.start + 1)
            if child is not None and child is not _LEAF:
                stack.append(child)
        self.exhausted = True

    def first_level_frames(self):
        """The subtrees below the first ruler choice, in DFS order; together they cover the whole tree."""
        frame = self.root_frame()
        while frame is not None and frame is not _LEAF:
            for r in self._rulers_at(frame):
                chosen = (r,)
                child = self.make_frame(chosen, r.mask, frame.start + 1)
                if child is _LEAF:
                    # a single ruler completes the DGR: hand it over as a finished frame
                    yield ('leaf', [list(r.marks)])
                elif child is not None:
                    yield ('frame', child.to_dict())
            frame = self.make_frame((), 0, frame.start + 1)


def _run_task(args):
    # pathos worker: explore one first-level subtree within its share of the node budget
    I, J, n, config, seed, universe, deadline, node_share, task = args
    budget = Budget(nodes=node_share, deadline=deadline)
    search = ExactSearch(I, J, n, config, seed=seed, universe=universe, budget=budget)
    kind, payload = task
    if kind == 'leaf':
        chosen = (Ruler.trusted(payload[0]),)
        witness = search._leaf(chosen)
        return (WITNESS if witness is not None else PROVEN_ABSENT), witness, 0, None
    stack = [search.frame_from_dict(payload)]
    witness = next(search.search(stack), None)
    if witness is not None:
        return WITNESS, witness, budget.nodes, None
    if search.exhausted:
        return PROVEN_ABSENT, None, budget.nodes, None
    return BUDGET_EXHAUSTED, None, budget.nodes, [f.to_dict() for f in stack]


def node_shares(node_limit, tasks):
    """Split a node limit evenly over `tasks` subtrees, every subtree getting at least one node."""
    if node_limit is None:
        return [None] * tasks
    if tasks == 0:
        return []
    share, extra = divmod(max(node_limit, 0), tasks)
    return [max(1, share + (i < extra)) for i in range(tasks)]


def _parallel_search(search, I, J, n, config, seed, universe, budget):
    from pathos.pools import ProcessPool
    log = logging.getLogger('nipype.workflow')

    frames = list(search.first_level_frames())
    limit = None if budget.node_limit is None else budget.node_limit - budget.nodes
    shares = node_shares(limit, len(frames))
    tasks = [(I, J, n, config, seed, universe, budget.deadline, share, task) for share, task in zip(shares, frames)]
    pool = ProcessPool(nodes=config.threads)
    frontier = []
    nodes = 0
    witness = None
    try:
        for status, found, task_nodes, remaining in pool.imap(_run_task, tasks):
            nodes += task_nodes
            if status == WITNESS:
                witness = found
                break
            if status == BUDGET_EXHAUSTED:
                frontier.append(remaining)
    finally:
        if witness is not None:
            pool.terminate()
        else:
            pool.close()
        pool.join()
        pool.clear()
    log.debug(f"Parallel exact search over {config.threads} workers explored {nodes} nodes.")
    return witness, frontier, nodes


def find_dgr_exact(I, J, n, config=None, seed=None, universe=None, budget=None, frontier=None):
    """
    Search for an (I,J,n)-DGR, optionally containing the rulers of `seed` and drawing
    marks from `universe` only.

    Returns a SearchResult with status 'witness', 'proven-absent' (the whole search
    space was exhausted with no budget hit) or 'budget-exhausted' (with a resumable
    frontier: a list of DFS stacks). `frontier` resumes such a search.
    With threads > 1 the node limit of `budget` is split evenly over the first-level
    subtrees, each subtree getting at least one node.
    """
    log = logging.getLogger('nipype.workflow')
    if config is None:
        config = SearchConfig()
    if I < 1 or J < 1:
        raise ValueError(f"I and J must be positive integers, I={I} and J={J} were provided.")
    if budget is None:
        budget = config.make_budget()

    if seed is not None:
        report = validate_dgr(seed, n=n, J=J)
        if not report:
            raise ValueError(f"The seed is not a valid partial ({I},{J},{n})-DGR: {report.reason}.")
        if seed.I > I:
            raise ValueError(f"The seed holds {seed.I} rulers, more than I={I}.")
        if seed.I == I:
            return SearchResult(WITNESS, DgrSet(seed.rulers, n=n), note='seed is complete')

    search = ExactSearch(I, J, n, config, seed=seed, universe=universe, budget=budget)
    if popcount(search.allowed) < search.need * J:
        return SearchResult(PROVEN_ABSENT, note='pigeonhole: not enough marks')

    if frontier is None:
        root = search.root_frame()
        if root is None:
            return SearchResult(PROVEN_ABSENT, nodes=0, note='no feasible start')
        if config.threads > 1:
            witness, remaining, nodes = _parallel_search(search, I, J, n, config, seed, universe, budget)
            if witness is not None:
                return SearchResult(WITNESS, witness, nodes=nodes, elapsed=budget.elapsed())
            if len(remaining) > 0:
                return SearchResult(BUDGET_EXHAUSTED, frontier=remaining, nodes=nodes, elapsed=budget.elapsed())
            return SearchResult(PROVEN_ABSENT, nodes=nodes, elapsed=budget.elapsed())
        stacks = [[root]]
    else:
        stacks = [[search.frame_from_dict(f) for f in stack] for stack in frontier]

    remaining = []
    for i, stack in enumerate(stacks):
        witness = next(search.search(stack), None)
        if witness is not None:
            log.debug(f"Witness for ({I},{J},{n}) after {budget.nodes} nodes.")
            return SearchResult(WITNESS, witness, nodes=budget.nodes, elapsed=budget.elapsed())
        if not search.exhausted:
            remaining.append([f.to_dict() for f in stack])
            remaining.extend([[f.to_dict() for f in s] for s in stacks[i + 1:]])
            log.info(f"Budget exhausted for ({I},{J},{n}) after {budget.nodes} nodes.")
            return SearchResult(BUDGET_EXHAUSTED, frontier=remaining, nodes=budget.nodes, elapsed=budget.elapsed())
    return SearchResult(PROVEN_ABSENT, nodes=budget.nodes, elapsed=budget.elapsed())


def enumerate_dgrs(I, J, n, config=None, budget=None, include_mirrors=True):
    """
    Yield every (I,J,n)-DGR once (as a set of rulers). The search runs with mirror
    symmetry and each representative is followed by its mirror image when distinct.
    Check `budget.hit` afterwards to know whether the stream is complete.
    """
    if config is None:
        config = SearchConfig()
    if budget is None:
        budget = config.make_budget()
    search = ExactSearch(I, J, n, config, budget=budget)
    if popcount(search.allowed) < search.need * J:
        return
    root = search.root_frame()
    if root is None:
        return
    for d in search.search([root]):
        yield d
        if include_mirrors and search.symmetric:
            m = mirror_dgr(d)
            if m.key() != d.key():
                yield m


def trivial_upper_bound(I, J):
    # I consecutive copies of the ruler {1,2,4,...,2^(J-1)}
    return I * 2 ** (J - 1)


def compute_H(I, J, config=None, start=None, max_n=None, budget=None):
    """
    Ascending scan for the least n with an (I,J,n)-DGR. Values below `start` (default
    I*J, the pigeonhole bound) are taken as known to be absent. The result is exact when
    every n below the witness was proven absent, otherwise it brackets H.
    """
    log = logging.getLogger('nipype.workflow')
    if config is None:
        config = SearchConfig()
    if budget is None:
        budget = Budget(secs=config.budget_secs)
    if start is None:
        start = I * J
    if max_n is None:
        max_n = config.max_n if config.max_n is not None else trivial_upper_bound(I, J)
    lower = None
    n = start - 1
    for n in range(start, max_n + 1):
        result = find_dgr_exact(I, J, n, config, budget=budget.child(nodes=config.node_budget))
        log.debug(f"H({I},{J}) scan: n={n} -> {result.status}")
        if result.status == WITNESS:
            if lower is None:
                return HValue(I, J, n, EXACT, witness=result.witness, provenance='computed-exact')
            return HValue(I, J, n, UPPER_BOUND, witness=result.witness, provenance='computed-ub', lower=lower)
        if result.status == BUDGET_EXHAUSTED and lower is None:
            lower = n
        if budget.expired():
            break
    value = lower if lower is not None else n + 1
    return HValue(I, J, value, LOWER_BOUND, provenance='computed-lb', lower=value)
