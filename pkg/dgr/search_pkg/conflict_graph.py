import math
import itertools

import networkx as nx
from nipype import logging

from dgr.core_pkg.ruler import Ruler, is_golomb
from dgr.core_pkg.enumeration import enumerate_rulers, count_rulers
from dgr.core_pkg.dgr_set import DgrSet, validate_dgr
from dgr.search_pkg.config import SearchConfig
from dgr.search_pkg.exact import SearchResult, find_dgr_exact, WITNESS, PROVEN_ABSENT, BUDGET_EXHAUSTED
from dgr.utils import MemoryCapError, popcount

# rough footprint of a networkx node (with its ruler attribute) and of an undirected edge
VERTEX_BYTES = 600
EDGE_BYTES = 250


class ConflictGraph:
    """
    Graph on the J-mark Golomb rulers within {1..n}, with an edge between two rulers
    sharing a mark; its independent sets of size I are the (I,J,n)-DGRs.

    In 'materialized' mode the graph is a networkx.Graph whose nodes are indices into
    `vertices`. In 'streaming' mode nothing is stored: vertices are enumerated on demand
    and adjacency is a mark intersection test.
    """

    def __init__(self, J, n, mode, graph=None, vertices=None):
        self.J = J
        self.n = n
        self.mode = mode
        self.graph = graph
        self.vertices = vertices
        if vertices is not None:
            self.index = {r: i for i, r in enumerate(vertices)}
        else:
            self.index = None

    @property
    def materialized(self):
        return self.mode == 'materialized'

    def vertex_count(self):
        if self.materialized:
            return len(self.vertices)
        return count_rulers(self.J, self.n)

    def edge_count(self):
        if not self.materialized:
            raise ValueError("The edge count is only available for a materialized conflict graph.")
        return self.graph.number_of_edges()

    def iter_vertices(self):
        if self.materialized:
            return iter(self.vertices)
        return enumerate_rulers(self.J, self.n)

    def has_vertex(self, r):
        marks = tuple(r)
        return (len(marks) == self.J and len(set(marks)) == self.J and min(marks) >= 1
                and max(marks) <= self.n and is_golomb(marks))

    def adjacent(self, r1, r2):
        r1 = r1 if isinstance(r1, Ruler) else Ruler.trusted(sorted(r1))
        r2 = r2 if isinstance(r2, Ruler) else Ruler.trusted(sorted(r2))
        if self.materialized and r1 in self.index and r2 in self.index:
            return self.graph.has_edge(self.index[r1], self.index[r2])
        return r1 != r2 and (r1.mask & r2.mask) != 0

    def is_independent(self, rulers):
        rulers = [tuple(r) for r in rulers]
        if not all(self.has_vertex(r) for r in rulers):
            return False
        for r1, r2 in itertools.combinations(rulers, 2):
            if self.adjacent(r1, r2):
                return False
        return True

    def __repr__(self):
        return f"ConflictGraph(J={self.J}, n={self.n}, mode={self.mode})"


def estimate_graph_bytes(J, n, vertex_count):
    # two random J-subsets of {1..n} intersect with probability 1 - C(n-J,J)/C(n,J)
    total = math.comb(n, J)
    p = 1.0 - (math.comb(max(n - J, 0), J) / total if total > 0 else 0.0)
    edges = p * vertex_count * (vertex_count - 1) / 2
    return int(vertex_count * VERTEX_BYTES + edges * EDGE_BYTES)


def build_conflict_graph(J, n, config=None, mode='auto'):
    """
    mode='materialized' raises MemoryCapError when the estimated footprint exceeds
    config.memory_cap_bytes; mode='auto' falls back to a streaming graph instead.
    """
    log = logging.getLogger('nipype.workflow')
    if config is None:
        config = SearchConfig()
    if mode not in ('auto', 'materialized', 'streaming'):
        raise ValueError(f"Unknown conflict graph mode {mode!r}; expected 'auto', 'materialized' or 'streaming'.")
    if J < 1 or n < 1:
        raise ValueError(f"J and n must be positive integers, J={J} and n={n} were provided.")
    if mode == 'streaming':
        return ConflictGraph(J, n, 'streaming')

    limit = max(1, config.memory_cap_bytes // VERTEX_BYTES)
    vertex_count = count_rulers(J, n, limit=limit)
    estimate = estimate_graph_bytes(J, n, vertex_count)
    if vertex_count > limit or estimate > config.memory_cap_bytes:
        message = f"The conflict graph for J={J}, n={n} needs about {estimate / 1024 ** 3:.2f} GiB " \
                  f"(over {vertex_count} vertices), beyond the cap of {config.memory_cap_bytes / 1024 ** 3:.2f} GiB."
        if mode == 'materialized':
            raise MemoryCapError(message)
        log.warning(message + " Falling back to the streaming conflict graph.")
        return ConflictGraph(J, n, 'streaming')

    vertices = list(enumerate_rulers(J, n))
    graph = nx.Graph()
    graph.add_nodes_from((i, {'ruler': r}) for i, r in enumerate(vertices))
    # rulers sharing the mark a form a clique
    by_mark = {}
    for i, r in enumerate(vertices):
        for a in r:
            by_mark.setdefault(a, []).append(i)
    for a, members in by_mark.items():
        graph.add_edges_from(itertools.combinations(members, 2))
    log.debug(f"Conflict graph J={J}, n={n}: {graph.number_of_nodes()} vertices, {graph.number_of_edges()} edges.")
    return ConflictGraph(J, n, 'materialized', graph=graph, vertices=vertices)


class _BudgetHit(Exception):
    pass


def _independent_extension(candidates, need, non_adjacent, budget):
    # vertices are taken in index order so that every independent set is visited once
    if need == 0:
        return []
    while candidates:
        if popcount(candidates) < need:
            return None
        low = candidates & -candidates
        v = low.bit_length() - 1
        candidates ^= low
        if not budget.tick():
            raise _BudgetHit()
        rest = _independent_extension(candidates & non_adjacent[v], need - 1, non_adjacent, budget)
        if rest is not None:
            return [v] + rest
    return None


def find_independent_set(g, I, seed=None, config=None, budget=None):
    """
    Extend `seed` (a partial DGR, i.e. pairwise non-adjacent vertices) to an independent
    set of size I, searching only the common non-neighborhood of the seed.
    """
    log = logging.getLogger('nipype.workflow')
    if config is None:
        config = SearchConfig()
    if budget is None:
        budget = config.make_budget()
    if seed is not None and not isinstance(seed, DgrSet):
        seed = DgrSet(seed, n=g.n)
    if seed is not None and seed.I > 0:
        for r1, r2 in itertools.combinations(seed.rulers, 2):
            if set(r1) & set(r2):
                raise ValueError(f"The seed rulers {r1} and {r2} are adjacent (they share a mark).")
        report = validate_dgr(seed, n=g.n, J=g.J)
        if not report:
            raise ValueError(f"The seed is not a set of vertices of the conflict graph: {report.reason}.")
        if seed.I > I:
            raise ValueError(f"The seed holds {seed.I} rulers, more than I={I}.")
        if seed.I == I:
            return SearchResult(WITNESS, DgrSet(seed.rulers, n=g.n), note='seed is complete')
    else:
        seed = None

    if not g.materialized:
        return find_dgr_exact(I, g.J, g.n, config, seed=seed, budget=budget)

    seed_mask = 0 if seed is None else seed.mask
    all_vertices = (1 << len(g.vertices)) - 1
    candidates = 0
    for i, r in enumerate(g.vertices):
        if r.mask & seed_mask == 0:
            candidates |= 1 << i
    non_adjacent = []
    for i in range(len(g.vertices)):
        neighbors = 1 << i
        for j in g.graph.neighbors(i):
            neighbors |= 1 << j
        non_adjacent.append(all_vertices & ~neighbors)

    need = I - (0 if seed is None else seed.I)
    try:
        chosen = _independent_extension(candidates, need, non_adjacent, budget)
    except _BudgetHit:
        log.info(f"Budget exhausted in the independent set search after {budget.nodes} nodes.")
        return SearchResult(BUDGET_EXHAUSTED, nodes=budget.nodes, elapsed=budget.elapsed())
    if chosen is None:
        return SearchResult(PROVEN_ABSENT, nodes=budget.nodes, elapsed=budget.elapsed())
    rulers = [] if seed is None else list(seed.rulers)
    rulers += [g.vertices[v].marks for v in chosen]
    witness = DgrSet(rulers, n=g.n)
    report = validate_dgr(witness)
    if not report:
        raise RuntimeError(f"The independent set search produced an invalid DGR ({report.reason}).")
    return SearchResult(WITNESS, witness, nodes=budget.nodes, elapsed=budget.elapsed())
