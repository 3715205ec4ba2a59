import math
import time
import itertools

from nipype import logging

from dgr.core_pkg.ruler import MarkUniverse, mirror_ruler
from dgr.core_pkg.enumeration import enumerate_rulers, count_rulers
from dgr.core_pkg.dgr_set import DgrSet, validate_dgr
from dgr.search_pkg.config import SearchConfig
from dgr.search_pkg.exact import (SearchResult, find_dgr_exact, compute_H,
                                  WITNESS, PROVEN_ABSENT, BUDGET_EXHAUSTED)
from dgr.utils import Budget

VERIFIED = 'verified-on-range'
COUNTEREXAMPLE = 'counterexample'
INFEASIBLE = 'infeasible-at-scale'
VIOLATION = 'violation'


class ConjectureReport:
    """Outcome of a verification: verdict, the range tested, the witness of any counterexample."""

    def __init__(self, conjecture, params, verdict, witness=None, details=None, runtime=None, notes=None):
        self.conjecture = conjecture
        self.params = params
        self.verdict = verdict
        self.witness = witness
        self.details = details or []
        self.runtime = runtime
        self.notes = notes or []

    @property
    def ok(self):
        return self.verdict == VERIFIED

    def __repr__(self):
        return f"ConjectureReport({self.conjecture}: {self.verdict})"

    def to_dict(self):
        witness = self.witness
        if isinstance(witness, DgrSet):
            witness = [list(r) for r in witness.canonical().rulers]
        return {
            'conjecture': self.conjecture,
            'params': self.params,
            'verdict': self.verdict,
            'witness': witness,
            'details': self.details,
            'runtime': None if self.runtime is None else round(self.runtime, 3),
            'notes': self.notes,
        }


def _registry_or_default(registry):
    if registry is None:
        from dgr.io_pkg.registry import BoundsRegistry
        registry = BoundsRegistry.load()
    return registry


######################
#CONJECTURE 1
######################


def contains_disjoint_rulers(A, I, J, config=None, budget=None):
    """Search I disjoint J-mark Golomb rulers with every mark in the set A."""
    if config is None:
        config = SearchConfig()
    A = sorted(set(A))
    if len(A) < I * J:
        return SearchResult(PROVEN_ABSENT, note='pigeonhole: |A| < IJ')
    universe = MarkUniverse(elements=A)
    return find_dgr_exact(I, J, A[-1], config, universe=universe, budget=budget)


def _subsets_with_one(N, size, partition=None):
    # a subset of {1..N} is a translate of one holding 1, and translation keeps rulers
    position = 0
    for rest in itertools.combinations(range(2, N + 1), size - 1):
        if partition is None or position % partition[1] == partition[0]:
            yield (1,) + rest
        position += 1


def _scan_subsets(I, J, N, size, config, deadline, partition=None):
    budget = Budget(deadline=deadline)
    checked = 0
    for A in _subsets_with_one(N, size, partition):
        if budget.expired():
            return BUDGET_EXHAUSTED, None, checked
        result = contains_disjoint_rulers(A, I, J, config, budget=budget.child(nodes=config.node_budget))
        checked += 1
        if result.status == PROVEN_ABSENT:
            return COUNTEREXAMPLE, A, checked
        if result.status == BUDGET_EXHAUSTED:
            return BUDGET_EXHAUSTED, A, checked
    return VERIFIED, None, checked


def _scan_worker(args):
    I, J, N, size, config, deadline, partition = args
    return _scan_subsets(I, J, N, size, config.replace(threads=1), deadline, partition)


def _every_subset_contains(I, J, N, size, config, budget):
    """(verdict, counterexample, subsets checked) over the size-subsets of {1..N}."""
    if config.threads <= 1:
        return _scan_subsets(I, J, N, size, config, budget.deadline)
    from pathos.pools import ProcessPool
    pool = ProcessPool(nodes=config.threads)
    tasks = [(I, J, N, size, config, budget.deadline, (i, config.threads)) for i in range(config.threads)]
    try:
        results = pool.map(_scan_worker, tasks)
    finally:
        pool.close()
        pool.join()
        pool.clear()
    checked = sum(r[2] for r in results)
    found = sorted(r[1] for r in results if r[0] == COUNTEREXAMPLE)
    if len(found) > 0:
        return COUNTEREXAMPLE, found[0], checked
    if any(r[0] == BUDGET_EXHAUSTED for r in results):
        return BUDGET_EXHAUSTED, None, checked
    return VERIFIED, None, checked


def verify_conjecture1(I, J, N, config=None, registry=None, H=None, y_mode=False, budget=None):
    """
    Every H(I,J)-subset of {1..N} holds I disjoint J-mark Golomb rulers. The unbounded
    statement is tested on subsets of {1..N} only. With y_mode the report also gives
    Y_N(I,J), the least n such that every n-subset of {1..N} holds them (Y_N <= Y).
    """
    log = logging.getLogger('nipype.workflow')
    if config is None:
        config = SearchConfig()
    if budget is None:
        budget = Budget(secs=config.budget_secs)
    start = time.time()
    params = {'I': I, 'J': J, 'N': N, 'y_mode': y_mode}

    if H is None:
        registry = _registry_or_default(registry)
        H = registry.exact_value(I, J)
    if H is None:
        value = compute_H(I, J, config, budget=budget.child(secs=budget.remaining_secs()))
        if not value.is_exact:
            raise ValueError(f"""H({I},{J}) is not known exactly (the search reached {value.status} {value.value});
Conjecture 1 needs the exact value.""")
        H = value.value
    params['H'] = H
    if N < H:
        return ConjectureReport(1, params, VERIFIED, runtime=time.time() - start,
                                notes=[f"N={N} < H={H}: no subset of the required size, vacuous."])

    levels = range(H, N + 1) if y_mode else [H]
    details = []
    y_value = None
    for size in levels:
        count = math.comb(N - 1, size - 1)
        if count > config.subset_cap:
            details.append({'size': size, 'subsets': count, 'verdict': INFEASIBLE})
            return ConjectureReport(1, params, INFEASIBLE, details=details, runtime=time.time() - start,
                                    notes=[f"C({N - 1},{size - 1}) = {count} subsets exceed the cap of {config.subset_cap}."])
        verdict, A, checked = _every_subset_contains(I, J, N, size, config, budget)
        details.append({'size': size, 'subsets': count, 'checked': checked, 'verdict': verdict,
                        'counterexample': None if A is None else list(A)})
        log.info(f"Conjecture 1 ({I},{J}) over {size}-subsets of {{1..{N}}}: {verdict} ({checked} subsets).")
        if verdict == BUDGET_EXHAUSTED:
            return ConjectureReport(1, params, BUDGET_EXHAUSTED, details=details, runtime=time.time() - start)
        if verdict == VERIFIED:
            y_value = size
            break
        if not y_mode:
            log.warning(f"Conjecture 1 fails for ({I},{J}): {list(A)} holds no {I} disjoint {J}-mark rulers.")
            return ConjectureReport(1, params, COUNTEREXAMPLE, witness=list(A), details=details,
                                    runtime=time.time() - start)

    notes = ["Only subsets of {1..N} are tested; a subset is checked up to translation (it holds 1)."]
    if y_mode:
        params['Y_N'] = y_value
        if y_value is None:
            notes.append(f"Y_N({I},{J}) > {N}.")
        if y_value != H:
            first = details[0]
            return ConjectureReport(1, params, COUNTEREXAMPLE, witness=first['counterexample'], details=details,
                                    runtime=time.time() - start, notes=notes)
    return ConjectureReport(1, params, VERIFIED, details=details, runtime=time.time() - start, notes=notes)


######################
#REGISTRY SCANS
######################


def verify_conjecture2(registry=None):
    """H(I+1,J) <= H(I,J) + J for I >= 1, J >= 3, over consecutive registry entries."""
    log = logging.getLogger('nipype.workflow')
    registry = _registry_or_default(registry)
    details = []
    verdict = VERIFIED
    witness = None
    for I, J in registry:
        if J < 3 or I < 1 or (I + 1, J) not in registry:
            continue
        low_entry, high_entry = registry.get(I, J), registry.get(I + 1, J)
        upper_I = registry.upper_value(I, J)
        lower_I = registry.known_lower(I, J)
        upper_next = registry.upper_value(I + 1, J)
        lower_next = registry.known_lower(I + 1, J)
        row = {'I': I, 'J': J, 'H(I,J)': low_entry.value, 'status(I,J)': low_entry.status,
               'H(I+1,J)': high_entry.value, 'status(I+1,J)': high_entry.status}
        if upper_next is not None and upper_next <= lower_I + J:
            row['result'] = 'holds'
            row['tight'] = upper_next == lower_I + J
            if low_entry.is_exact and high_entry.is_exact and low_entry.value > I * J:
                row['strict'] = high_entry.value < low_entry.value + J
        elif upper_I is not None and lower_next > upper_I + J:
            row['result'] = 'violated'
            verdict = COUNTEREXAMPLE
            witness = {'I': I, 'J': J}
        else:
            row['result'] = 'unresolved'
        details.append(row)
    notes = []
    if len(details) == 0:
        notes.append('no consecutive pair in the registry, vacuous')
    if verdict != VERIFIED:
        log.warning(f"Conjecture 2 is contradicted by the registry at {witness}.")
    return ConjectureReport(2, {'pairs': len(details)}, verdict, witness=witness, details=details, notes=notes)


def verify_conjecture3(registry=None):
    """If H(I0,J) = I0 J then H(I,J) = IJ for every I > I0, over the exact registry entries."""
    log = logging.getLogger('nipype.workflow')
    registry = _registry_or_default(registry)
    details = []
    verdict = VERIFIED
    witness = None
    for J in registry.J_values():
        entries = registry.for_J(J)
        regular = [e.I for e in entries if e.is_regular and e.I >= 2]
        if len(regular) == 0:
            continue
        I0 = min(regular)
        row = {'J': J, 'I0': I0, 'checked': [], 'unresolved': []}
        for e in entries:
            if e.I <= I0:
                continue
            if e.status == 'lower-bound':
                if e.value > e.I * J:
                    row['violated'] = e.I
            elif e.value == e.I * J:
                row['checked'].append(e.I)
            elif e.is_exact:
                row['violated'] = e.I
            else:
                row['unresolved'].append(e.I)
        if 'violated' in row:
            verdict = COUNTEREXAMPLE
            witness = {'I0': I0, 'I': row['violated'], 'J': J}
            log.warning(f"Conjecture 3 is contradicted by the registry at {witness}.")
        details.append(row)
    notes = [] if details else ['no regular entry in the registry, vacuous']
    return ConjectureReport(3, {'J': registry.J_values()}, verdict, witness=witness, details=details, notes=notes)


def verify_conjecture5_6(registry=None, g_registry=None):
    """
    H(I,I+2) = I(I+2) for I >= 8 over the registry; G(k+2) < k^2+k for k >= 6 and the
    classical G(k) < k^2 over the optimal ruler lengths.
    """
    log = logging.getLogger('nipype.workflow')
    registry = _registry_or_default(registry)
    if g_registry is None:
        g_registry = registry.g_registry
    if g_registry is None:
        from dgr.constructions_pkg.g_registry import default_g_registry
        g_registry = default_g_registry()
    details = []
    verdict = VERIFIED
    witness = None

    for I, J in registry:
        if J != I + 2 or I < 8:
            continue
        e = registry.get(I, J)
        target = I * (I + 2)
        if e.status != 'lower-bound' and e.value == target:
            result = 'holds'
        elif registry.known_lower(I, J) > target:
            result = 'violated'
        else:
            result = 'unresolved'
        details.append({'conjecture': 5, 'I': I, 'J': J, 'H': e.value, 'status': e.status, 'target': target,
                        'result': result})
        if result == 'violated':
            verdict = COUNTEREXAMPLE
            witness = {'conjecture': 5, 'I': I, 'J': J}

    for k in g_registry.known_k:
        G = g_registry.G(k)
        if G >= k * k:
            verdict = COUNTEREXAMPLE
            witness = {'conjecture': 'G(k) < k^2', 'k': k}
        details.append({'conjecture': 'G(k) < k^2', 'k': k, 'G': G, 'result': 'holds' if G < k * k else 'violated'})
        if k - 2 >= 6:
            base = k - 2
            holds = G < base * base + base
            details.append({'conjecture': 6, 'k': base, 'G(k+2)': G, 'bound': base * base + base,
                            'result': 'holds' if holds else 'violated'})
            if not holds:
                verdict = COUNTEREXAMPLE
                witness = {'conjecture': 6, 'k': base}
    if verdict != VERIFIED:
        log.warning(f"Conjectures 5/6 are contradicted at {witness}.")
    return ConjectureReport('5+6', {'G_k': g_registry.known_k[-1] if len(g_registry) else None}, verdict,
                            witness=witness, details=details)


######################
#CONJECTURE 4
######################


def _regular_hypothesis(I, J, config, registry, budget):
    if registry is not None and registry.exact_value(I, J) == I * J:
        return 'registry'
    result = find_dgr_exact(I, J, I * J, config, budget=budget.child(secs=budget.remaining_secs()))
    if result.status == WITNESS:
        return 'search'
    if result.status == PROVEN_ABSENT:
        raise ValueError(f"H({I},{J}) > {I * J}: no regular ({I},{J},{I * J})-DGR exists, the hypothesis fails.")
    return None


def _seed_stream(J, n, mode):
    # a ruler and its mirror extend alike, so only the smaller of the two is tried
    rulers = enumerate_rulers(J, n)
    if mode == 'single':
        for r in rulers:
            if r.marks <= mirror_ruler(r, n).marks:
                yield DgrSet([r.marks], n=n)
        return
    rulers = list(rulers)
    for r1, r2 in itertools.combinations(rulers, 2):
        if r1.mask & r2.mask == 0:
            yield DgrSet([r1.marks, r2.marks], n=n)


def _extend_seeds(I_target, J, n, seeds, config, deadline):
    budget = Budget(deadline=deadline)
    failures = []
    exhausted = []
    checked = 0
    for seed in seeds:
        if budget.expired():
            return failures, exhausted, checked, False
        result = find_dgr_exact(I_target, J, n, config, seed=seed, budget=budget.child(nodes=config.node_budget))
        checked += 1
        if result.status == PROVEN_ABSENT:
            failures.append([list(r) for r in seed.rulers])
            break
        if result.status == BUDGET_EXHAUSTED:
            exhausted.append([list(r) for r in seed.rulers])
    return failures, exhausted, checked, True


def _conjecture4_worker(args):
    I_target, J, n, mode, config, deadline, partition = args
    seeds = (s for i, s in enumerate(_seed_stream(J, n, mode)) if i % partition[1] == partition[0])
    return _extend_seeds(I_target, J, n, seeds, config.replace(threads=1), deadline)


def verify_conjecture4(I, J, config=None, registry=None, mode='single', budget=None):
    """
    Given H(I,J) = IJ, every J-mark Golomb ruler within {1..(I+1)J} extends to a regular
    (I+1,J,(I+1)J)-DGR. mode='pairs' checks the two-ruler form instead: every two disjoint
    rulers within {1..IJ} lie in a common regular (I,J,IJ)-DGR.
    """
    log = logging.getLogger('nipype.workflow')
    if config is None:
        config = SearchConfig()
    if mode not in ('single', 'pairs'):
        raise ValueError(f"Unknown Conjecture 4 mode {mode!r}; expected 'single' or 'pairs'.")
    if budget is None:
        budget = Budget(secs=config.budget_secs)
    start = time.time()
    params = {'I': I, 'J': J, 'mode': mode}
    notes = []

    if mode == 'single':
        hypothesis = _regular_hypothesis(I, J, config, registry, budget)
        if hypothesis is None:
            return ConjectureReport(4, params, BUDGET_EXHAUSTED, runtime=time.time() - start,
                                    notes=[f"H({I},{J}) = {I * J} could not be established within the budget."])
        notes.append(f"H({I},{J}) = {I * J} from the {hypothesis}.")
        I_target, n = I + 1, (I + 1) * J
    else:
        if not 6 <= J <= I:
            notes.append(f"The two-ruler form is stated for 6 <= J <= I; ({I},{J}) is outside that range.")
        I_target, n = I, I * J
    params['n'] = n

    rulers = count_rulers(J, n, limit=config.conjecture4_ruler_cap)
    seeds_count = rulers if mode == 'single' else rulers * (rulers - 1) // 2
    params['rulers'] = rulers
    if rulers > config.conjecture4_ruler_cap or seeds_count > config.subset_cap:
        return ConjectureReport(4, params, INFEASIBLE, runtime=time.time() - start,
                                notes=notes + [f"More than {config.conjecture4_ruler_cap} {J}-mark rulers within {{1..{n}}}."])

    if config.threads <= 1:
        failures, exhausted, checked, finished = _extend_seeds(I_target, J, n, _seed_stream(J, n, mode), config, budget.deadline)
    else:
        from pathos.pools import ProcessPool
        pool = ProcessPool(nodes=config.threads)
        tasks = [(I_target, J, n, mode, config, budget.deadline, (i, config.threads)) for i in range(config.threads)]
        try:
            results = pool.map(_conjecture4_worker, tasks)
        finally:
            pool.close()
            pool.join()
            pool.clear()
        failures = sorted(f for r in results for f in r[0])
        exhausted = sorted(e for r in results for e in r[1])
        checked = sum(r[2] for r in results)
        finished = all(r[3] for r in results)
    params['checked'] = checked

    details = [{'exhausted_seed': e} for e in exhausted]
    if len(failures) > 0:
        log.warning(f"Conjecture 4 fails for ({I},{J}): {failures[0]} extends to no regular DGR.")
        return ConjectureReport(4, params, COUNTEREXAMPLE, witness=failures[0], details=details,
                                runtime=time.time() - start, notes=notes)
    if not finished or len(exhausted) > 0:
        return ConjectureReport(4, params, BUDGET_EXHAUSTED, details=details, runtime=time.time() - start, notes=notes)
    log.info(f"Conjecture 4 verified for ({I},{J}) over {checked} seeds.")
    return ConjectureReport(4, params, VERIFIED, runtime=time.time() - start, notes=notes)


######################
#IMPLICATIONS
######################


def theorem_checks(report2, report3, registry=None, report1=None):
    """
    Consistency of the reports with the implications between the conjectures:
    C2 => C3 (a C2 pass with a regular base forces a C3 pass for that J, and the value
    after a regular base must be regular), C1 => C2 and C1 => C3 (a verified C1 range
    covering {1..H+J} forbids a failure of C2 at that (I,J), and of C3 for that J).
    """
    registry = _registry_or_default(registry)
    details = []
    consistent = True

    violated2 = {(r['I'], r['J']) for r in report2.details if r.get('result') == 'violated'}
    violated3 = {r['J'] for r in report3.details if 'violated' in r}
    for row in report3.details:
        J = row['J']
        I0 = row['I0']
        c2_holds = not any(j == J for _, j in violated2)
        ok = not (c2_holds and J in violated3)
        following = registry.get(I0 + 1, J)
        if c2_holds and following is not None and following.status != 'upper-bound':
            ok = ok and registry.known_lower(I0 + 1, J) <= (I0 + 1) * J
        details.append({'theorem': 'C2 => C3', 'J': J, 'I0': I0, 'premise': c2_holds, 'consistent': ok})
        consistent = consistent and ok

    if report1 is not None and report1.verdict == VERIFIED:
        I, J, N, H = (report1.params[key] for key in ('I', 'J', 'N', 'H'))
        covered = N >= H + J
        ok2 = not (covered and (I, J) in violated2)
        ok3 = not (covered and J in violated3)
        details.append({'theorem': 'C1 => C2', 'I': I, 'J': J, 'premise': covered, 'consistent': ok2})
        details.append({'theorem': 'C1 => C3', 'I': I, 'J': J, 'premise': covered, 'consistent': ok3})
        consistent = consistent and ok2 and ok3

    verdict = VERIFIED if consistent else VIOLATION
    return ConjectureReport('theorems', {'checks': len(details)}, verdict, details=details)
