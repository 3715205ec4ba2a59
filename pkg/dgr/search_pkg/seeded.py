import os
import json
import itertools

from nipype import logging

from dgr.core_pkg.dgr_set import DgrSet, validate_dgr
from dgr.core_pkg.transformations import k_sub_transformation_set
from dgr.search_pkg.config import SearchConfig, resolve_k_policy
from dgr.search_pkg.exact import (SearchResult, find_dgr_exact, enumerate_dgrs, HValue,
                                  WITNESS, NOT_FOUND, BUDGET_EXHAUSTED, EXACT, UPPER_BOUND)
from dgr.utils import Budget

DESCENT_SCHEMA = 'dgr-descent/1'


######################
#SEED POOLS
######################


class SeedPool:
    """The pool R of (I,J,n)-DGRs whose k-subsets seed the extension to I+1 rulers."""

    def __init__(self, sets, source=''):
        sets = list(sets)
        if len(sets) == 0:
            raise ValueError("A seed pool needs at least one DGR.")
        first = sets[0]
        for d in sets:
            if (d.I, d.J, d.n) != (first.I, first.J, first.n):
                raise ValueError(f"""The seed pool mixes ({first.I},{first.J},{first.n})-DGRs with a
({d.I},{d.J},{d.n})-DGR; all seeds must share I, J and n.""")
            report = validate_dgr(d)
            if not report:
                raise ValueError(f"A seed is not a valid DGR: {report.reason}.")
        self.sets = sets
        self.source = source

    @property
    def I(self):
        return self.sets[0].I

    @property
    def J(self):
        return self.sets[0].J

    @property
    def n(self):
        return self.sets[0].n

    def __len__(self):
        return len(self.sets)

    def __iter__(self):
        return iter(self.sets)

    def __repr__(self):
        return f"SeedPool({len(self.sets)} x ({self.I},{self.J},{self.n}), source={self.source!r})"


def collect_seed_pool(I, J, n, config=None, budget=None):
    """All distinct (I,J,n)-DGRs found by the exact search, up to config.pool_cap of them."""
    log = logging.getLogger('nipype.workflow')
    if config is None:
        config = SearchConfig()
    sets = []
    for d in enumerate_dgrs(I, J, n, config, budget=budget):
        sets.append(d)
        if len(sets) >= config.pool_cap:
            log.info(f"The seed pool reached its cap of {config.pool_cap} DGRs.")
            break
    if len(sets) == 0:
        raise ValueError(f"No ({I},{J},{n})-DGR was found to seed the pool.")
    log.info(f"Collected {len(sets)} ({I},{J},{n})-DGRs as seeds.")
    return SeedPool(sets, source=f'enumerate_dgrs({I},{J},{n})')


######################
#EXTENSION
######################


def _extend_one(xi, I, J, m, config, budget):
    result = find_dgr_exact(I + 1, J, m, config, seed=xi, budget=budget.child(nodes=config.xi_node_budget))
    if result.status == WITNESS:
        witness = DgrSet(result.witness.rulers, n=m, tags=xi.tags)
        return witness, result.nodes, result.status
    return None, result.nodes, result.status


def _xi_chunk_worker(args):
    # pathos worker: the first ξ of the chunk that extends, in stream order
    chunk, I, J, m, config, deadline = args
    config = config.replace(threads=1)
    budget = Budget(deadline=deadline)
    nodes = 0
    truncated = 0
    for index, xi in chunk:
        if budget.expired():
            return None, None, nodes, truncated, False
        witness, xi_nodes, status = _extend_one(xi, I, J, m, config, budget)
        nodes += xi_nodes
        truncated += status == BUDGET_EXHAUSTED
        if witness is not None:
            return index, witness, nodes, truncated, True
    return None, None, nodes, truncated, True


def _chunks(stream, size):
    stream = iter(stream)
    while True:
        chunk = list(itertools.islice(stream, size))
        if len(chunk) == 0:
            return
        yield chunk


def _not_found(I, J, k, m, nodes, truncated, budget):
    log = logging.getLogger('nipype.workflow')
    if truncated > 0:
        log.warning(f"No ({I + 1},{J},{m})-DGR found for k={k}, but {truncated} candidates hit the per-ξ node "
                    "budget; raise xi_nodes in --search_budget to settle them.")
    return SearchResult(NOT_FOUND, nodes=nodes, elapsed=budget.elapsed(), note=f'{truncated} truncated candidates',
                        truncated=truncated)


def seeded_extend(R, k, m, config=None, budget=None):
    """
    Look for an (I+1,J,m)-DGR containing some member ξ of T(R,k,m): for each ξ in stream
    order, the exact search completes ξ with I+1-k rulers drawn from {1..m} minus the
    marks of ξ. Returns the first witness in stream order (tags k, b and carried come
    from ξ), 'not-found' once the stream is exhausted, or 'budget-exhausted'.
    A 'not-found' result counts in `truncated` the candidates stopped by xi_node_budget.
    """
    log = logging.getLogger('nipype.workflow')
    if config is None:
        config = SearchConfig()
    if not isinstance(R, SeedPool):
        R = SeedPool(R)
    I, J = R.I, R.J
    if m < (I + 1) * J:
        raise ValueError(f"m={m} is below the pigeonhole bound (I+1)J={(I + 1) * J}.")
    if k < 1 or k > I:
        raise ValueError(f"k must satisfy 1 <= k <= I={I}, k={k} was provided.")
    if budget is None:
        budget = Budget(secs=config.attempt_budget_secs if config.attempt_budget_secs is not None else config.budget_secs)

    stream = itertools.islice(enumerate(k_sub_transformation_set(R, k, m, order=config.seed_order)), config.subset_cap)
    nodes = 0
    truncated = 0
    if config.threads > 1:
        from pathos.pools import ProcessPool
        pool = ProcessPool(nodes=config.threads)
        tasks = ((chunk, I, J, m, config, budget.deadline) for chunk in _chunks(stream, config.chunk_size))
        found = None
        complete = True
        try:
            for index, witness, chunk_nodes, chunk_truncated, finished in pool.imap(_xi_chunk_worker, tasks):
                nodes += chunk_nodes
                truncated += chunk_truncated
                if witness is not None:
                    found = (index, witness)
                    break
                if not finished:
                    complete = False
                    break
        finally:
            if found is not None or not complete:
                pool.terminate()
            else:
                pool.close()
            pool.join()
            pool.clear()
        if found is not None:
            log.info(f"({I + 1},{J},{m})-DGR found from ξ #{found[0]} (k={k}, b={found[1].tags.get('b')}).")
            return SearchResult(WITNESS, found[1], nodes=nodes, elapsed=budget.elapsed(), note=f'xi={found[0]}')
        if not complete:
            return SearchResult(BUDGET_EXHAUSTED, nodes=nodes, elapsed=budget.elapsed(), note=f'k={k} m={m}')
        return _not_found(I, J, k, m, nodes, truncated, budget)

    for index, xi in stream:
        if budget.expired():
            log.info(f"Budget exhausted at ξ #{index} for k={k}, m={m}.")
            return SearchResult(BUDGET_EXHAUSTED, nodes=nodes, elapsed=budget.elapsed(), note=f'k={k} m={m}')
        witness, xi_nodes, status = _extend_one(xi, I, J, m, config, budget)
        nodes += xi_nodes
        truncated += status == BUDGET_EXHAUSTED
        log.debug(f"k={k} m={m} ξ #{index} b={xi.tags.get('b')}: {status}")
        if witness is not None:
            log.info(f"({I + 1},{J},{m})-DGR found from ξ #{index} (k={k}, b={xi.tags.get('b')}).")
            return SearchResult(WITNESS, witness, nodes=nodes, elapsed=budget.elapsed(), note=f'xi={index}')
    return _not_found(I, J, k, m, nodes, truncated, budget)


def fallback_k_descent(R, k_start, m, config=None, budget=None, ks=None):
    """
    Try seeded_extend with k = k_start, k_start-1, ..., 1 (or the explicit descending
    list `ks`) until a witness is found. `note` traces the k values tried.
    """
    if config is None:
        config = SearchConfig()
    if not isinstance(R, SeedPool):
        R = SeedPool(R)
    if ks is None:
        if k_start < 1 or k_start > R.I:
            raise ValueError(f"k_start must satisfy 1 <= k_start <= I={R.I}, {k_start} was provided.")
        ks = list(range(k_start, 0, -1))
    if budget is None:
        budget = Budget(secs=config.budget_secs)
    trace = []
    nodes = 0
    truncated = 0
    for k in ks:
        if budget.expired():
            return SearchResult(BUDGET_EXHAUSTED, nodes=nodes, elapsed=budget.elapsed(), note=','.join(trace),
                                truncated=truncated)
        result = seeded_extend(R, k, m, config, budget=budget.child(secs=config.attempt_budget_secs))
        nodes += result.nodes
        truncated += result.truncated
        trace.append(f'k={k}:{result.status}')
        if result.status == WITNESS:
            result.nodes = nodes
            result.note = ','.join(trace)
            result.truncated = truncated
            return result
    status = BUDGET_EXHAUSTED if budget.expired() else NOT_FOUND
    return SearchResult(status, nodes=nodes, elapsed=budget.elapsed(), note=','.join(trace), truncated=truncated)


######################
#DESCENT
######################


class DescentStep:
    def __init__(self, m, status, k=None, b=None, carried=None, nodes=0, elapsed=0.0, trace='', truncated=0):
        self.m = m
        self.status = status
        self.k = k
        self.b = b
        self.carried = carried
        self.nodes = nodes
        self.elapsed = elapsed
        self.trace = trace
        self.truncated = truncated

    def to_dict(self):
        return {'m': self.m, 'status': self.status, 'k': self.k, 'b': self.b, 'carried': self.carried,
                'nodes': self.nodes, 'elapsed': round(self.elapsed, 3), 'trace': self.trace,
                'truncated': self.truncated}


class DescentState:
    """
    Progress of the m-descent towards H(I+1,J): the interval of m levels tried, the best
    witness so far and every attempt made. m never goes below a = max(n+1, (I+1)J).
    """

    def __init__(self, I, J, n, m0, max_m, floor):
        self.I = I + 1
        self.J = J
        self.a = max(n + 1, (I + 1) * J)
        self.m0 = m0
        self.m = m0
        self.max_m = max_m
        self.floor = floor
        self.tried = []
        self.best = None
        self.steps = []

    @property
    def best_m(self):
        return None if self.best is None else self.best.n

    def record(self, m, result):
        tags = result.witness.tags if result.witness is not None else {}
        step = DescentStep(m, result.status, k=tags.get('k'), b=tags.get('b'), carried=tags.get('carried'),
                           nodes=result.nodes, elapsed=result.elapsed, trace=result.note, truncated=result.truncated)
        self.steps.append(step)
        self.tried.append(m)
        if result.status == WITNESS and (self.best is None or m < self.best.n):
            self.best = result.witness
        return step


class DescentResult:
    def __init__(self, state, status, source_n):
        self.state = state
        self.status = status
        self.source_n = source_n

    @property
    def I(self):
        return self.state.I

    @property
    def J(self):
        return self.state.J

    @property
    def m(self):
        return self.state.best_m

    @property
    def witness(self):
        return self.state.best

    @property
    def is_exact(self):
        return self.status == EXACT

    def to_hvalue(self):
        if self.witness is None:
            return None
        provenance = 'computed-exact' if self.is_exact else 'computed-ub'
        return HValue(self.I, self.J, self.m, self.status, witness=self.witness, provenance=provenance,
                      reference='seeded-descent')

    def to_dict(self):
        best = self.witness
        return {
            'I': self.I, 'J': self.J, 'source_n': self.source_n, 'a': self.state.a, 'm0': self.state.m0,
            'floor': self.state.floor, 'm': self.m, 'status': self.status,
            'k': None if best is None else best.tags.get('k'),
            'b': None if best is None else best.tags.get('b'),
            'carried': None if best is None else best.tags.get('carried'),
            'steps': [s.to_dict() for s in self.state.steps],
        }

    def __repr__(self):
        return f"DescentResult(H({self.I},{self.J}) {self.status} m={self.m})"


def default_m0(I, J, n):
    # midpoint of {a, ..., n+J-1}
    a = max(n + 1, (I + 1) * J)
    return max(a, (a + n + J - 1) // 2)


def bound_descent(R, config=None, registry=None, budget=None):
    """
    Upper-bound H(I+1,J) from a pool of (I,J,n)-DGRs. Starting at m0, each m level runs
    the k fallback; after a success m descends one by one until a failure or until a is
    reached, after a failure at m0 it ascends until a success or max_m (default n+J).
    The result is exact only when the best m equals the known lower bound
    max((I+1)J, registry lower bound for H(I+1,J)).
    """
    log = logging.getLogger('nipype.workflow')
    if config is None:
        config = SearchConfig()
    if not isinstance(R, SeedPool):
        R = SeedPool(R)
    if budget is None:
        budget = Budget(secs=config.budget_secs)
    I, J, n = R.I, R.J, R.n

    known_lower = registry.known_lower(I + 1, J) if registry is not None else None
    floor = max((I + 1) * J, known_lower or 0)
    m0 = config.m0 if config.m0 is not None else default_m0(I, J, n)
    max_m = config.max_m if config.max_m is not None else n + J
    state = DescentState(I, J, n, m0, max_m, floor)
    if m0 < state.a:
        raise ValueError(f"m0={m0} is below a=max(n+1,(I+1)J)={state.a}.")
    ks = resolve_k_policy(config.k_policy, I)

    def attempt(m):
        result = fallback_k_descent(R, ks[0], m, config, budget=budget, ks=ks)
        step = state.record(m, result)
        log.info(f"H({I + 1},{J}) descent: m={m} -> {result.status} (k={step.k}, b={step.b})")
        if result.status == NOT_FOUND and result.truncated > 0:
            log.warning(f"H({I + 1},{J}) descent: the miss at m={m} is inconclusive, "
                        f"{result.truncated} candidates were cut by the per-ξ node budget.")
        return result

    result = attempt(m0)
    if result.status == WITNESS:
        m = m0 - 1
        while m >= state.a and state.best_m > floor:
            if budget.expired():
                break
            if attempt(m).status != WITNESS:
                break
            m -= 1
    elif result.status == NOT_FOUND:
        m = m0 + 1
        while m <= max_m:
            if budget.expired():
                break
            if attempt(m).status == WITNESS:
                break
            m += 1

    if state.best is None:
        status = BUDGET_EXHAUSTED if budget.expired() else NOT_FOUND
    elif state.best_m == floor:
        status = EXACT
    else:
        status = UPPER_BOUND
    log.info(f"H({I + 1},{J}) descent finished: {status}, m={state.best_m}.")
    return DescentResult(state, status, n)


def chain_descent(R, target_I, config=None, registry=None, budget=None):
    """
    Repeat bound_descent level by level up to target_I rulers, each level seeded with the
    previous level's best witness. Returns the DescentResult of every level reached.
    """
    log = logging.getLogger('nipype.workflow')
    if config is None:
        config = SearchConfig()
    if not isinstance(R, SeedPool):
        R = SeedPool(R)
    if target_I <= R.I:
        raise ValueError(f"target_I={target_I} must exceed the seed pool's I={R.I}.")
    if budget is None:
        budget = Budget(secs=config.budget_secs)
    results = []
    pool = R
    while pool.I < target_I:
        result = bound_descent(pool, config, registry=registry, budget=budget)
        results.append(result)
        if result.witness is None:
            log.warning(f"The chain stopped at I={pool.I + 1}: {result.status}.")
            break
        if registry is not None and result.is_exact:
            registry.merge(result.to_hvalue())
        pool = SeedPool([DgrSet(result.witness.rulers, n=result.m)], source=f'descent I={result.I}')
    return results


def write_descent_log(results, path, seeds=None):
    if isinstance(results, DescentResult):
        results = [results]
    data = {
        'schema': DESCENT_SCHEMA,
        'seeds': None if seeds is None else f"{len(seeds)} x ({seeds.I},{seeds.J},{seeds.n})",
        'levels': [r.to_dict() for r in results],
    }
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, 'w') as f:
        json.dump(data, f, indent=1)
    return path


def descent_table(results):
    """Trace rows in the layout of a per-level table: target I, m reached, k, b and the carried rulers."""
    import pandas as pd
    rows = []
    for r in results:
        best = r.witness
        rows.append({
            'I': r.I, 'J': r.J, 'H': r.m, 'status': r.status,
            'k': None if best is None else best.tags.get('k'),
            'b': None if best is None else best.tags.get('b'),
            'carried': None if best is None else best.tags.get('carried'),
        })
    return pd.DataFrame(rows, columns=['I', 'J', 'H', 'status', 'k', 'b', 'carried'])
