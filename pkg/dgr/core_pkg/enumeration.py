from dgr.core_pkg.ruler import Ruler, MarkUniverse
from dgr.utils import mask_to_marks


def trivial_min_lengths(J):
    # a t-mark Golomb ruler has t(t-1)/2 distinct positive differences, so length >= t(t-1)/2
    return [t * (t - 1) // 2 for t in range(J + 1)]


def _candidate_marks(universe, excluded, max_mark):
    if isinstance(universe, int):
        universe = MarkUniverse(n=universe)
    if isinstance(excluded, int):
        excluded_mask = excluded
    else:
        excluded_mask = 0
        for a in excluded:
            excluded_mask |= 1 << a
    allowed = universe.mask & ~excluded_mask
    marks = mask_to_marks(allowed)
    if max_mark is not None:
        marks = [a for a in marks if a <= max_mark]
    return marks


def enumerate_rulers(J, universe, excluded=(), first=None, max_mark=None, min_lengths=None, after=None):
    """
    Yield every J-mark Golomb ruler with marks in universe minus excluded, each once,
    in lexicographic order of the mark sequence.

    universe: a MarkUniverse, or an integer n for {1..n}.
    excluded: iterable of marks, or an integer bitmask (bit a set = mark a excluded).
    first: only rulers whose smallest mark is `first`.
    max_mark: only rulers with every mark <= max_mark.
    min_lengths: min_lengths[t] is a lower bound on the length of any t-mark Golomb
        ruler (e.g. G(t) from the optimal-ruler registry), used for pruning.
    after: resume point; only rulers lexicographically greater than `after` are yielded.
    """
    if J < 1:
        raise ValueError(f"Rulers need at least one mark, J={J} was provided.")
    candidates = _candidate_marks(universe, excluded, max_mark)
    return _ruler_stream(J, candidates, first=first, min_lengths=min_lengths, after=after)


def _ruler_stream(J, candidates, first=None, min_lengths=None, after=None):
    L = len(candidates)
    if L < J:
        return
    if min_lengths is None or len(min_lengths) <= J:
        min_lengths = trivial_min_lengths(J)
    top = candidates[-1]

    if first is None:
        starts = range(L - J + 1)
    else:
        starts = [i for i in range(L - J + 1) if candidates[i] == first]
    if after is not None:
        after = tuple(after)
        starts = [i for i in starts if candidates[i] >= after[0]]

    if J == 1:
        for i in starts:
            if after is None or (candidates[i],) > after:
                yield Ruler.trusted((candidates[i],))
        return

    marks = [0] * J
    diffs = [0] * J  # diffs[t]: bitmask of differences among marks[0..t]
    nxt = [0] * (J + 1)
    for i0 in starts:
        a0 = candidates[i0]
        if a0 + min_lengths[J] > top:
            break
        marks[0] = a0
        diffs[0] = 0
        depth = 1
        nxt[1] = i0 + 1
        # resuming: follow the `after` prefix as long as it matches
        resume = after is not None and a0 == after[0]
        if resume:
            nxt[1] = _seek(candidates, after[1], i0 + 1)
        while depth >= 1:
            i = nxt[depth]
            if i > L - (J - depth):
                depth -= 1
                resume = False
                continue
            c = candidates[i]
            if c + min_lengths[J - depth] > top:
                depth -= 1
                resume = False
                continue
            nxt[depth] = i + 1
            d = diffs[depth - 1]
            ok = True
            for p in range(depth):
                bit = 1 << (c - marks[p])
                if d & bit:
                    ok = False
                    break
                d |= bit
            if not ok:
                continue
            marks[depth] = c
            if depth == J - 1:
                if resume and tuple(marks) <= after:
                    continue
                yield Ruler.trusted(marks)
                continue
            diffs[depth] = d
            depth += 1
            if resume and tuple(marks[:depth]) == after[:depth]:
                nxt[depth] = _seek(candidates, after[depth], i + 1)
            else:
                resume = False
                nxt[depth] = i + 1


def _seek(candidates, value, lo):
    # index of the first candidate >= value, starting at lo
    i = lo
    while i < len(candidates) and candidates[i] < value:
        i += 1
    return i


def count_rulers(J, universe, excluded=(), limit=None, **kwargs):
    """Count the ruler stream; stops early once the count exceeds `limit`."""
    count = 0
    for _ in enumerate_rulers(J, universe, excluded, **kwargs):
        count += 1
        if limit is not None and count > limit:
            break
    return count
