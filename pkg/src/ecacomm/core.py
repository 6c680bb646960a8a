"""Elementary cellular automata: rules, words, equivalence classes, rescaling."""

from __future__ import annotations

import itertools
from functools import lru_cache

# Upper bound on the number of table entries any exhaustive construction may
# enumerate before giving up.
TABLE_GUARD = 1 << 20


class GuardExceeded(Exception):
    """An exhaustive computation would exceed its configured size guard."""


class Rule:
    """An elementary CA rule: the 0..255 code plus its 8-entry local table."""

    __slots__ = ("code",)

    def __init__(self, code: int):
        if not isinstance(code, int) or isinstance(code, bool) or not 0 <= code <= 255:
            raise ValueError(f"rule code must be an integer in [0, 255], got {code!r}")
        self.code = code

    def table(self, l: int, c: int, r: int) -> int:
        return (self.code >> (4 * l + 2 * c + r)) & 1

    __call__ = table

    def __eq__(self, other):
        return isinstance(other, Rule) and self.code == other.code

    def __hash__(self):
        return hash(("Rule", self.code))

    def __repr__(self):
        return f"Rule({self.code})"


def make_rule(code: int) -> Rule:
    return Rule(code)


def rule_code(rule) -> int:
    """Accept a Rule or a bare integer code and return the validated code."""
    if isinstance(rule, Rule):
        return rule.code
    return Rule(rule).code


def check_word(w: str) -> str:
    if not isinstance(w, str) or any(ch not in "01" for ch in w):
        raise ValueError(f"word must be a string over 0/1, got {w!r}")
    return w


def all_words(length: int):
    """All binary words of the given length, in lexicographic order."""
    return ("".join(bits) for bits in itertools.product("01", repeat=length))


@lru_cache(maxsize=None)
def _subst(code: int) -> dict[str, str]:
    """Neighborhood string of length 3 -> image cell, as strings."""
    return {
        f"{l}{c}{r}": str((code >> (4 * l + 2 * c + r)) & 1)
        for l in (0, 1)
        for c in (0, 1)
        for r in (0, 1)
    }


def step_word(rule, w: str) -> str:
    """One synchronous step on a finite word; the image is 2 cells shorter."""
    sub = _subst(rule_code(rule))
    check_word(w)
    if len(w) < 3:
        return ""
    return "".join(sub[w[i:i + 3]] for i in range(len(w) - 2))


def step_cyclic(rule, u: str) -> str:
    """One step on a cyclic word; indices wrap, length is preserved."""
    sub = _subst(rule_code(rule))
    check_word(u)
    if not u:
        raise ValueError("cyclic word must be nonempty")
    ext = u[-1] + u + u[0]
    return "".join(sub[ext[i:i + 3]] for i in range(len(u)))


def evolve(rule, w: str, t: int) -> list[str]:
    """Iterate step_word t times; returns t+1 rows including the initial word."""
    if t < 0:
        raise ValueError("step count must be nonnegative")
    rows = [check_word(w)]
    for _ in range(t):
        rows.append(step_word(rule, rows[-1]))
    return rows


def evolve_cyclic(rule, u: str, t: int) -> list[str]:
    if t < 0:
        raise ValueError("step count must be nonnegative")
    rows = [check_word(u)]
    for _ in range(t):
        rows.append(step_cyclic(rule, rows[-1]))
    return rows


def cyclic_contains(u: str, pattern: str) -> bool:
    """Does the periodic configuration with cycle u contain the pattern?"""
    if len(pattern) == 0:
        return True
    # Unroll just enough periods to expose every window of |pattern| cells.
    reps = (len(pattern) - 1) // len(u) + 2
    return pattern in (u * reps)[: len(u) + len(pattern) - 1]


def min_rotation(u: str) -> str:
    return min(u[i:] + u[:i] for i in range(len(u)))


def primitive_root(u: str) -> str:
    """Shortest v with u = v^k."""
    n = len(u)
    for d in range(1, n + 1):
        if n % d == 0 and u == u[:d] * (n // d):
            return u[:d]
    return u


# ---------------------------------------------------------------------------
# Rule transformations and isomorphism classes

def mirror_code(rule) -> int:
    """Reflected rule: the new table reads each neighborhood right to left."""
    code = rule_code(rule)
    out = 0
    for l, c, r in itertools.product((0, 1), repeat=3):
        bit = (code >> (4 * r + 2 * c + l)) & 1
        out |= bit << (4 * l + 2 * c + r)
    return out


def complement_code(rule) -> int:
    """Rule conjugated by the 0/1 exchange."""
    code = rule_code(rule)
    out = 0
    for l, c, r in itertools.product((0, 1), repeat=3):
        bit = 1 - ((code >> (4 * (1 - l) + 2 * (1 - c) + (1 - r))) & 1)
        out |= bit << (4 * l + 2 * c + r)
    return out


def equivalence_class(rule) -> list[int]:
    """Orbit of a rule under mirror and complement, sorted ascending."""
    code = rule_code(rule)
    m = mirror_code(code)
    c = complement_code(code)
    return sorted({code, m, c, complement_code(m)})


def canonical_code(rule) -> int:
    return equivalence_class(rule)[0]


def classify() -> list[list[int]]:
    """Partition all 256 rules into isomorphism classes, sorted by representative.

    Each class is sorted ascending, so class[0] is the canonical code.
    """
    seen: set[int] = set()
    classes = []
    for code in range(256):
        if code in seen:
            continue
        cls = equivalence_class(code)
        seen.update(cls)
        classes.append(cls)
    return classes


# ---------------------------------------------------------------------------
# General CAs, rescaling, subautomata

class GeneralCA:
    """A q-state radius-r one-dimensional CA given by an explicit local table."""

    __slots__ = ("states", "radius", "table")

    def __init__(self, states: int, radius: int, table: dict):
        if states < 1 or radius < 0:
            raise ValueError("need states >= 1 and radius >= 0")
        width = 2 * radius + 1
        if len(table) != states ** width:
            raise ValueError(f"table must cover all {states ** width} neighborhoods")
        for key, val in table.items():
            if len(key) != width or not 0 <= val < states:
                raise ValueError(f"bad table entry {key!r} -> {val!r}")
        self.states = states
        self.radius = radius
        self.table = dict(table)

    def __eq__(self, other):
        return (
            isinstance(other, GeneralCA)
            and self.states == other.states
            and self.radius == other.radius
            and self.table == other.table
        )

    def __repr__(self):
        return f"GeneralCA(states={self.states}, radius={self.radius})"


def eca_as_general(rule) -> GeneralCA:
    code = rule_code(rule)
    table = {
        (l, c, r): (code >> (4 * l + 2 * c + r)) & 1
        for l, c, r in itertools.product((0, 1), repeat=3)
    }
    return GeneralCA(2, 1, table)


def step_general(ca: GeneralCA, cells: tuple) -> tuple:
    width = 2 * ca.radius + 1
    if len(cells) < width:
        return ()
    return tuple(ca.table[cells[i:i + width]] for i in range(len(cells) - width + 1))


def pad_radius(ca: GeneralCA, radius: int) -> GeneralCA:
    """Widen the neighborhood with dummy dependence; the local map is unchanged."""
    if radius < ca.radius:
        raise ValueError("cannot shrink the radius")
    if radius == ca.radius:
        return ca
    extra = radius - ca.radius
    width = 2 * radius + 1
    if ca.states ** width > TABLE_GUARD:
        raise GuardExceeded(f"padded table would need {ca.states ** width} entries")
    table = {
        nb: ca.table[nb[extra: width - extra]]
        for nb in itertools.product(range(ca.states), repeat=width)
    }
    return GeneralCA(ca.states, radius, table)


def rescale(ca: GeneralCA, m: int, t: int, z: int) -> GeneralCA:
    """The CA obtained by grouping blocks of m cells, running t steps, shifting by z.

    The result has q^m states and radius ceil((t*r + |z|) / m), the smallest
    radius whose unpacked neighborhood covers the dependency cone.
    """
    if m < 1 or t < 1:
        raise ValueError("need m >= 1 and t >= 1")
    q, r = ca.states, ca.radius
    radius = -(-(t * r + abs(z)) // m)
    blocks = q ** m
    width = 2 * radius + 1
    if blocks ** width > TABLE_GUARD:
        raise GuardExceeded(f"rescaled table would need {blocks ** width} entries")

    digits = list(itertools.product(range(q), repeat=m))

    def pack(cells: tuple) -> int:
        out = 0
        for s in cells:
            out = out * q + s
        return out

    # After t steps the surviving cells start t*r in from the left edge of the
    # unpacked neighborhood; the output block reads m cells there, offset by z.
    offset = radius * m - t * r + z
    table = {}
    for nb in itertools.product(range(blocks), repeat=width):
        cells = tuple(d for s in nb for d in digits[s])
        for _ in range(t):
            cells = step_general(ca, cells)
        table[nb] = pack(cells[offset: offset + m])
    return GeneralCA(blocks, radius, table)


def same_behavior(a: GeneralCA, b: GeneralCA) -> bool:
    """Equal as local maps once padded to a common radius."""
    if a.states != b.states:
        return False
    radius = max(a.radius, b.radius)
    return pad_radius(a, radius).table == pad_radius(b, radius).table


def is_subautomaton(g: GeneralCA, f: GeneralCA):
    """Injective state map phi with f(phi(x1)..phi(xw)) = phi(g(x1..xw)), or None.

    Radii must already agree; use pad_radius on the narrower CA first.
    """
    if g.radius != f.radius:
        raise ValueError("radii must match; use pad_radius first")
    if g.states > f.states:
        return None
    width = 2 * g.radius + 1
    neighborhoods = list(itertools.product(range(g.states), repeat=width))
    count = 1
    for i in range(g.states):
        count *= f.states - i
    if count * len(neighborhoods) > TABLE_GUARD:
        raise GuardExceeded("injection search space too large")
    for image in itertools.permutations(range(f.states), g.states):
        phi = dict(enumerate(image))
        if all(
            f.table[tuple(phi[s] for s in nb)] == phi[g.table[nb]]
            for nb in neighborhoods
        ):
            return phi
    return None


def simulates(f: GeneralCA, g: GeneralCA, max_block: int, max_steps: int, max_shift: int):
    """Search rescaling parameters under which g embeds into f.

    Returns the first witness (m, t, z, phi) or None when the bounded search
    space is exhausted. A candidate rescaling too large to enumerate raises
    GuardExceeded, which is distinct from a clean miss.
    """
    for m in range(1, max_block + 1):
        for t in range(1, max_steps + 1):
            for z in sorted(range(-max_shift, max_shift + 1), key=lambda v: (abs(v), v)):
                scaled = rescale(f, m, t, z)
                if g.states > scaled.states:
                    continue
                radius = max(g.radius, scaled.radius)
                phi = is_subautomaton(pad_radius(g, radius), pad_radius(scaled, radius))
                if phi is not None:
                    return (m, t, z, phi)
    return None
