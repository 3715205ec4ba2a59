from dgr.constructions_pkg.doubling import needed_range, regular_closure


class TauRecord:
    """
    Bounds on tau(J), the least I0 with H(I,J) = IJ for every I >= I0. `upper` is None when
    no I0 is established. The published bounds are merged in, keeping the tighter side.
    """

    def __init__(self, J, lower, upper, computed_lower, computed_upper, table=None, supporting=None):
        self.J = J
        self.lower = lower
        self.upper = upper
        self.computed_lower = computed_lower
        self.computed_upper = computed_upper
        self.table = table
        self.supporting = supporting or {}

    @property
    def exact(self):
        return self.upper is not None and self.lower == self.upper

    def __str__(self):
        if self.upper is None:
            return f"tau({self.J}) >= {self.lower}"
        if self.exact:
            return f"tau({self.J}) = {self.lower}"
        return f"{self.lower} <= tau({self.J}) <= {self.upper}"

    def to_dict(self):
        return {
            'J': self.J, 'lower': self.lower, 'upper': self.upper,
            'computed_lower': self.computed_lower, 'computed_upper': self.computed_upper,
            'table': None if self.table is None else {'lower': self.table.lower, 'upper': self.table.upper},
            'supporting': {str(I): v for I, v in sorted(self.supporting.items())},
            'note': None if self.upper is not None else 'no regular range established, upper bound unknown',
        }


def tau_bounds(J, registry, merge_table=True):
    """
    upper: least I0 such that H(I,J) = IJ is exact for every I in I0..2I0-1 (the rest
    follows by concatenation); lower: 1 + the largest I with an exact H(I,J) > IJ.
    """
    regular = set()
    irregular = set()
    supporting = {}
    for entry in registry.for_J(J):
        if not entry.is_exact:
            continue
        supporting[entry.I] = entry.value
        if entry.value == entry.I * J:
            regular.add(entry.I)
        else:
            irregular.add(entry.I)

    computed_upper = None
    for I0 in sorted(regular):
        if I0 > max(irregular, default=0) and all(I in regular for I in needed_range(I0)):
            computed_upper = I0
            break
    computed_lower = max(irregular, default=0) + 1

    lower, upper = computed_lower, computed_upper
    table = registry.tau.get(J) if merge_table else None
    if table is not None:
        lower = max(lower, table.lower)
        upper = table.upper if upper is None else min(upper, table.upper)
    if upper is not None and lower > upper:
        raise ValueError(f"The bounds on tau({J}) are inconsistent: lower {lower} > upper {upper}.")
    return TauRecord(J, lower, upper, computed_lower, computed_upper, table=table, supporting=supporting)


# the same quantity is also written iota(J)
iota_bounds = tau_bounds


def materialize_regular(J, witnesses, max_I):
    """
    Build and validate regular (I,J,IJ)-DGRs for I <= max_I from the regular `witnesses`
    ({I: DgrSet}); returns the constructed map and the I values left without a witness.
    """
    regular = {I: d for I, d in witnesses.items() if d.J == J and d.n == I * J and len(d.marks) == d.n}
    closure = regular_closure(regular, max_I)
    start = min(regular, default=max_I + 1)
    missing = [I for I in range(start, max_I + 1) if I not in closure]
    return closure, missing
