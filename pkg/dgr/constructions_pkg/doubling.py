from dgr.core_pkg.dgr_set import DgrSet, validate_dgr, shift_dgr


def check_regular(d):
    report = validate_dgr(d)
    if not report:
        raise ValueError(f"The DGR is not valid: {report.reason}.")
    if d.n != d.I * d.J or len(d.marks) != d.n:
        raise ValueError(f"""Only regular DGRs can be doubled: the ({d.I},{d.J},{d.n})-DGR does not
cover {{1..{d.I * d.J}}} exactly.""")
    return d


def double_regular(d):
    """A regular (I0,J,I0J)-DGR together with its I0J-step shift is a regular (2I0,J,2I0J)-DGR."""
    check_regular(d)
    step = d.I * d.J
    doubled = DgrSet(d.rulers + shift_dgr(d, step).rulers, n=2 * step)
    report = validate_dgr(doubled)
    if not report:
        raise RuntimeError(f"Doubling produced an invalid DGR ({report.reason}).")
    return doubled


def iterate_doubling(d, times):
    sets = []
    for _ in range(times):
        d = double_regular(d)
        sets.append(d)
    return sets


def needed_range(I0):
    # with regular DGRs at I0..2I0-1, concatenation covers every I >= I0
    if I0 < 1:
        raise ValueError(f"I0 must be a positive integer, {I0} was provided.")
    return range(I0 + 1, 2 * I0)


def concatenate_regular(d1, d2):
    """A regular (I1,J,I1J)-DGR followed by a regular (I2,J,I2J)-DGR shifted by I1J."""
    check_regular(d1)
    check_regular(d2)
    if d1.J != d2.J:
        raise ValueError(f"Only DGRs with the same J can be concatenated, J={d1.J} and J={d2.J} were provided.")
    joined = DgrSet(d1.rulers + shift_dgr(d2, d1.n).rulers, n=d1.n + d2.n)
    report = validate_dgr(joined)
    if not report:
        raise RuntimeError(f"Concatenation produced an invalid DGR ({report.reason}).")
    return joined


def regular_closure(regular_sets, max_I):
    """
    Regular DGRs for every I <= max_I reachable from `regular_sets` (a {I: DgrSet} map of
    regular DGRs sharing J) by concatenation, doubling included.
    """
    closure = {I: check_regular(d) for I, d in regular_sets.items() if I <= max_I}
    for I in range(1, max_I + 1):
        if I in closure:
            continue
        for I1 in sorted(closure):
            if I1 >= I:
                break
            if I - I1 in closure:
                closure[I] = concatenate_regular(closure[I1], closure[I - I1])
                break
    return {I: closure[I] for I in sorted(closure)}
