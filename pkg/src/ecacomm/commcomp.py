"""Exact deterministic two-party communication complexity at desk scale."""

from __future__ import annotations

import itertools

from .core import GuardExceeded

TABLE_GUARD = 1 << 20    # max |X| * |Y| accepted by cc_exact
DISTINCT_GUARD = 16      # max distinct rows/columns after deduplication


class FunctionTable:
    """A finite two-party function as an explicit |X| x |Y| matrix."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows, cols, entries):
        rows = list(rows)
        cols = list(cols)
        entries = tuple(tuple(row) for row in entries)
        if len(set(rows)) != len(rows) or len(set(cols)) != len(cols):
            raise ValueError("row and column input lists must be duplicate-free")
        if len(entries) != len(rows) or any(len(r) != len(cols) for r in entries):
            raise ValueError("entry matrix shape must match the input lists")
        self.rows = rows
        self.cols = cols
        self.entries = entries

    def value(self, x, y):
        return self.entries[self.rows.index(x)][self.cols.index(y)]

    def transpose(self) -> "FunctionTable":
        return FunctionTable(self.cols, self.rows, zip(*self.entries))

    def __repr__(self):
        return f"FunctionTable({len(self.rows)}x{len(self.cols)})"


def _dedup(entries):
    """Distinct rows then distinct columns of a matrix, sorted for canonicity."""
    rows = sorted(set(entries))
    cols = sorted(set(zip(*rows)))
    return tuple(sorted(set(zip(*cols))))


def _fooling_bound(mat, rows, cols) -> int:
    """Depth lower bound from a greedily grown fooling set on the live cells."""
    best = 1
    values = {mat[i][j] for i in rows for j in cols}
    for z in values:
        pairs = []
        for i in rows:
            for j in cols:
                if mat[i][j] != z:
                    continue
                if all(mat[i][jj] != z or mat[ii][j] != z for ii, jj in pairs):
                    pairs.append((i, j))
        best = max(best, len(pairs))
    return (best - 1).bit_length()


def cc_exact(table: FunctionTable, cap: int = 24):
    """Exact deterministic communication complexity, or None when it exceeds cap.

    Depth counts internal tree nodes only; announcing the answer at a leaf is
    free, so a non-constant function known to one party still costs 1. The
    recursion explores every two-part split of the live rows or columns,
    memoized on (row bitmask, column bitmask) and pruned by the distinct-value
    and fooling-set lower bounds.
    """
    nr, nc = len(table.rows), len(table.cols)
    if nr * nc > TABLE_GUARD:
        raise GuardExceeded(f"table size {nr}x{nc} exceeds the guard")
    # Inputs with identical rows (columns) are interchangeable; collapsing them
    # does not change the complexity and keeps the bitmasks short.
    mat = _dedup(table.entries)
    if not mat or not mat[0]:
        return 0
    nr, nc = len(mat), len(mat[0])
    if nr > DISTINCT_GUARD or nc > DISTINCT_GUARD:
        raise GuardExceeded(f"{nr}x{nc} distinct rows/columns exceed the guard")

    memo: dict = {}

    def live(mask, n):
        return [i for i in range(n) if mask >> i & 1]

    def solve(rmask, cmask, budget):
        # Exact depth when it is <= budget, else None.
        rows = live(rmask, nr)
        cols = live(cmask, nc)
        values = {mat[i][j] for i in rows for j in cols}
        if len(values) == 1:
            return 0
        lb = (len(values) - 1).bit_length()
        lb = max(lb, _fooling_bound(mat, rows, cols))
        if budget < lb:
            return None
        hit = memo.get((rmask, cmask))
        if hit is not None:
            exact, tried = hit
            if exact is not None:
                return exact if exact <= budget else None
            if budget <= tried:
                return None

        best = None

        def try_splits(amask_parts, other_mask, row_side):
            nonlocal best
            first, rest = amask_parts
            for pick in range(1 << len(rest)):
                amask = first
                bmask = 0
                for k, idx in enumerate(rest):
                    if pick >> k & 1:
                        amask |= 1 << idx
                    else:
                        bmask |= 1 << idx
                if bmask == 0:
                    continue
                child_budget = (budget - 1) if best is None else (best - 2)
                if row_side:
                    a = solve(amask, other_mask, child_budget)
                    b = solve(bmask, other_mask, child_budget) if a is not None else None
                else:
                    a = solve(other_mask, amask, child_budget)
                    b = solve(other_mask, bmask, child_budget) if a is not None else None
                if a is None or b is None:
                    continue
                cand = 1 + max(a, b)
                if best is None or cand < best:
                    best = cand
                    if best == lb:
                        return True
            return False

        # Splits that separate the first live row go on the left; that kills
        # the mirror-image duplicates.
        done = try_splits((1 << rows[0], rows[1:]), cmask, True)
        if not done:
            try_splits((1 << cols[0], cols[1:]), rmask, False)

        if best is not None:
            memo[(rmask, cmask)] = (best, 0)
        else:
            prev = memo.get((rmask, cmask), (None, -1))[1]
            memo[(rmask, cmask)] = (None, max(prev, budget))
        return best

    return solve((1 << nr) - 1, (1 << nc) - 1, cap)


# ---------------------------------------------------------------------------
# Protocol trees

class Leaf:
    __slots__ = ("value",)

    def __init__(self, value):
        self.value = value

    def __repr__(self):
        return f"Leaf({self.value!r})"


class Node:
    """Internal node: one party announces one bit, branching on its input."""

    __slots__ = ("speaker", "goes_right", "left", "right")

    def __init__(self, speaker, goes_right, left, right):
        if speaker not in ("A", "B"):
            raise ValueError("speaker must be 'A' or 'B'")
        self.speaker = speaker
        self.goes_right = frozenset(goes_right)
        self.left = left
        self.right = right


def eval_protocol(tree, x, y):
    """Run the tree on one input pair; returns (leaf value, bits used)."""
    bits = 0
    node = tree
    while isinstance(node, Node):
        inp = x if node.speaker == "A" else y
        node = node.right if inp in node.goes_right else node.left
        bits += 1
    return node.value, bits


def tree_depth(tree) -> int:
    if isinstance(tree, Leaf):
        return 0
    return 1 + max(tree_depth(tree.left), tree_depth(tree.right))


def protocol_correct(tree, table: FunctionTable) -> bool:
    return all(
        eval_protocol(tree, x, y)[0] == table.entries[i][j]
        for i, x in enumerate(table.rows)
        for j, y in enumerate(table.cols)
    )


# ---------------------------------------------------------------------------
# Fooling sets

class FoolingSet:
    __slots__ = ("pairs", "value")

    def __init__(self, pairs, value):
        self.pairs = tuple(pairs)
        self.value = value


def fooling_set_check(table: FunctionTable, s: FoolingSet) -> bool:
    """All diagonal pairs hit s.value and every cross pair escapes it somewhere.

    A passing set certifies cc_exact(table) >= ceil(log2 |pairs|).
    """
    for x, y in s.pairs:
        if table.value(x, y) != s.value:
            return False
    for i, (xi, yi) in enumerate(s.pairs):
        for xj, yj in s.pairs[i + 1:]:
            if table.value(xi, yj) == s.value and table.value(xj, yi) == s.value:
                return False
    return True


def cc_of_cut(fn, n: int, cut: int, alphabet: str = "01") -> FunctionTable:
    """Two-party table of a function on length-n words split after position cut."""
    if not 0 <= cut < n:
        raise ValueError(f"cut must satisfy 0 <= cut < {n}")
    if len(alphabet) ** n > TABLE_GUARD:
        raise GuardExceeded(f"{len(alphabet)}^{n} inputs exceed the guard")
    rows = ["".join(p) for p in itertools.product(alphabet, repeat=cut)]
    cols = ["".join(p) for p in itertools.product(alphabet, repeat=n - cut)]
    entries = [[fn(x + y) for y in cols] for x in rows]
    return FunctionTable(rows, cols, entries)
