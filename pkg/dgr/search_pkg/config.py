import dataclasses
from typing import Optional

from dgr.utils import Budget

GiB = 1024 ** 3


@dataclasses.dataclass(frozen=True)
class SearchConfig:
    """Budgets and policies shared by the exact, seeded and conjecture searches."""

    budget_secs: Optional[float] = None        # wall-clock budget of a whole call
    node_budget: Optional[int] = None          # search nodes of a whole exact search
    xi_node_budget: Optional[int] = 200_000    # search nodes per seeded candidate ξ
    attempt_budget_secs: Optional[float] = None  # wall-clock budget per (k, m) attempt
    threads: int = 1
    k_policy: str = 'auto'                     # 'auto', an integer, or a descending list '3,2,1'
    seed_order: str = 'near'                   # 'near' (|b| ascending) or 'subset'
    symmetry: bool = True
    use_g_bounds: bool = True
    memory_cap_bytes: int = 2 * GiB
    pool_cap: int = 1000
    subset_cap: int = 10 ** 8
    conjecture4_ruler_cap: int = 2_000_000
    m0: Optional[int] = None
    max_m: Optional[int] = None
    max_n: Optional[int] = None
    theorem4_search_max: int = 3
    checkpoint_path: Optional[str] = None
    chunk_size: int = 64

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)

    def make_budget(self):
        return Budget(secs=self.budget_secs, nodes=self.node_budget)

    @classmethod
    def from_opts(cls, opts):
        search_budget = getattr(opts, 'search_budget', None) or {}
        fields = {
            'budget_secs': getattr(opts, 'budget_secs', None),
            'node_budget': search_budget.get('nodes'),
            'xi_node_budget': search_budget.get('xi_nodes', cls.xi_node_budget),
            'attempt_budget_secs': search_budget.get('attempt_secs'),
            'threads': getattr(opts, 'threads', 1),
            'k_policy': str(getattr(opts, 'k_policy', 'auto')),
            'seed_order': getattr(opts, 'seed_order', 'near'),
            'symmetry': not getattr(opts, 'no_symmetry', False),
            'm0': getattr(opts, 'm0', None),
            'max_m': getattr(opts, 'max_m', None),
            'pool_cap': getattr(opts, 'pool_cap', cls.pool_cap),
            'checkpoint_path': getattr(opts, 'checkpoint', None),
        }
        if getattr(opts, 'memory_cap_gb', None) is not None:
            fields['memory_cap_bytes'] = int(opts.memory_cap_gb * GiB)
        return cls(**fields)


def resolve_k_policy(policy, I):
    """Descending list of k values to try when extending (I,J,n)-DGRs; every k lies in 1..I."""
    policy = str(policy).strip()
    if policy == 'auto':
        start = max(1, I - 2)
        return list(range(start, 0, -1))
    try:
        values = [int(v) for v in policy.split(',') if v.strip() != '']
    except ValueError:
        raise ValueError(f"--k_policy accepts 'auto', an integer or a comma-separated list of integers, {policy!r} was provided.")
    if len(values) == 1:
        values = list(range(values[0], 0, -1))
    for k in values:
        if k < 1 or k > I:
            raise ValueError(f"k={k} is out of range; the pool has I={I} rulers per DGR.")
    return values
