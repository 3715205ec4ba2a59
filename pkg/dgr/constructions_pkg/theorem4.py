from nipype import logging

from dgr.constructions_pkg.singer import check_prime_power
from dgr.search_pkg.config import SearchConfig
from dgr.search_pkg.exact import find_dgr_exact, WITNESS


class ClaimCheck:
    def __init__(self, I, J, relation, bound):
        self.I = I
        self.J = J
        self.relation = relation  # '=' or '<='
        self.bound = bound
        self.registry_value = None
        self.registry_status = None
        self.search_status = None
        self.witness = None
        self.verdict = 'unchecked'

    def claim(self):
        return f"H({self.I},{self.J}) {self.relation} {self.bound}"

    def to_dict(self):
        return {
            'claim': self.claim(), 'I': self.I, 'J': self.J, 'relation': self.relation, 'bound': self.bound,
            'registry_value': self.registry_value, 'registry_status': self.registry_status,
            'search_status': self.search_status,
            'witness': None if self.witness is None else [list(r) for r in self.witness.canonical().rulers],
            'verdict': self.verdict,
        }


class Theorem4Report:
    def __init__(self, p, claims):
        self.p = p
        self.claims = claims

    @property
    def ok(self):
        return all(c.verdict != 'violation' for c in self.claims)

    def to_dict(self):
        return {'p': self.p, 'ok': self.ok, 'claims': [c.to_dict() for c in self.claims]}


def _registry_verdict(check, entry):
    check.registry_value = entry.value
    check.registry_status = entry.status
    if check.relation == '=':
        if entry.is_exact:
            return 'consistent' if entry.value == check.bound else 'violation'
        if entry.status == 'upper-bound' and entry.value < check.bound:
            return 'violation'
        return 'unchecked'
    # H <= bound: an exact or lower bound above the claim contradicts it
    if entry.status in ('exact', 'lower-bound') and entry.value > check.bound:
        return 'violation'
    if entry.status in ('exact', 'upper-bound') and entry.value <= check.bound:
        return 'consistent'
    return 'unchecked'


def theorem4_check(p, registry=None, config=None):
    """
    For a prime power p: H(p+1,p) = p^2+p, H(p,p-1) <= p^2-2 and H(p-1,p) <= p^2-1, checked
    against the registry and, for p <= config.theorem4_search_max, by direct search.
    H(p+1,p) = p^2+p equals (p+1)p, so a witness at p^2+p proves the equality.
    """
    log = logging.getLogger('nipype.workflow')
    p = check_prime_power(p)
    if config is None:
        config = SearchConfig()
    claims = [
        ClaimCheck(p + 1, p, '=', p * p + p),
        ClaimCheck(p, p - 1, '<=', p * p - 2),
        ClaimCheck(p - 1, p, '<=', p * p - 1),
    ]
    for check in claims:
        entry = registry.get(check.I, check.J) if registry is not None else None
        if entry is not None:
            check.verdict = _registry_verdict(check, entry)
        if p <= config.theorem4_search_max and check.verdict != 'violation':
            result = find_dgr_exact(check.I, check.J, check.bound, config)
            check.search_status = result.status
            if result.status == WITNESS:
                check.witness = result.witness
                check.verdict = 'consistent'
            elif result.status == 'proven-absent':
                check.verdict = 'violation'
        log.info(f"Theorem 4 at p={p}: {check.claim()} -> {check.verdict}")
    return Theorem4Report(p, claims)
