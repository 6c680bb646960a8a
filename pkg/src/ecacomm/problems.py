"""The Pred and SInv decision problems with desk-scale oracles."""

from __future__ import annotations

from functools import lru_cache

from .commcomp import FunctionTable, cc_exact, cc_of_cut
from .core import GuardExceeded, all_words, check_word, rule_code, step_cyclic, step_word

PRED_GUARD = 17          # max input length accepted by build_pred_table
ORBIT_GUARD = 16         # max background cycle length for background_orbit


# ---------------------------------------------------------------------------
# Pred: the center cell after n steps from a width-(2n+1) input

def pred_value(rule, word: str) -> int:
    """Evolve a length-(2n+1) word down to its single center cell."""
    code = rule_code(rule)
    check_word(word)
    if len(word) % 2 == 0:
        raise ValueError(f"input length must be odd, got {len(word)}")
    return _pred_cached(code, word)


@lru_cache(maxsize=None)
def _pred_cached(code: int, word: str) -> int:
    while len(word) > 1:
        word = step_word(code, word)
    return int(word)


def build_pred_table(rule, n: int, cut: int) -> FunctionTable:
    """Two-party table of the n-step center value, split after position cut."""
    code = rule_code(rule)
    size = 2 * n + 1
    if size > PRED_GUARD:
        raise GuardExceeded(f"input length {size} exceeds guard {PRED_GUARD}")
    return cc_of_cut(lambda w: pred_value(code, w), size, cut)


def pred_cc(rule, n: int, cap: int = 24):
    """Max over all cuts of the exact complexity of the n-step center value.

    Returns None if any cut exceeds the depth cap.
    """
    code = rule_code(rule)
    worst = 0
    for cut in range(2 * n + 1):
        d = cc_exact(build_pred_table(code, n, cut), cap)
        if d is None:
            return None
        worst = max(worst, d)
    return worst


# ---------------------------------------------------------------------------
# Periodic backgrounds

def background_orbit(rule, u: str) -> tuple[int, int, int]:
    """(transient, period, shift) of the cyclic background's evolution.

    The first time some row equals an earlier row up to rotation ends the
    search; shift is the leftward rotation per period (0 when several fit).
    """
    code = rule_code(rule)
    check_word(u)
    if not u:
        raise ValueError("background cycle must be nonempty")
    if len(u) > ORBIT_GUARD:
        raise GuardExceeded(f"cycle length {len(u)} exceeds guard {ORBIT_GUARD}")
    rows = [u]
    while True:
        nxt = step_cyclic(code, rows[-1])
        for j, prev in enumerate(rows):
            for s in range(len(u)):
                if nxt == prev[s:] + prev[:s]:
                    return (j, len(rows) - j, s)
        rows.append(nxt)


def exact_orbit(rule, u: str) -> tuple[list[str], int, int]:
    """Rows until the first exact (fixed-phase) repeat: (rows, transient, period)."""
    code = rule_code(rule)
    seen: dict[str, int] = {}
    rows = []
    cur = u
    while cur not in seen:
        seen[cur] = len(rows)
        rows.append(cur)
        cur = step_cyclic(code, cur)
    first = seen[cur]
    return rows, first, len(rows) - first


def p_u_cell(u: str, j: int) -> int:
    return int(u[j % len(u)])


def x_equals_background(u: str, x: str) -> bool:
    """Is the perturbation degenerate, i.e. p_u[x] = p_u?"""
    return all(int(x[j]) == p_u_cell(u, j) for j in range(len(x)))


# ---------------------------------------------------------------------------
# SInv: does a finite perturbation of p_u stay within bounded width?

class SInvVerdict:
    """Bounded or Invaded, with Inconclusive(horizon) when the horizon ran out."""

    __slots__ = ("kind", "time", "horizon")

    def __init__(self, kind: str, time=None, horizon=None):
        if kind not in ("bounded", "invaded", "inconclusive"):
            raise ValueError(f"bad verdict kind {kind!r}")
        self.kind = kind
        self.time = time
        self.horizon = horizon

    @property
    def bounded(self) -> bool:
        return self.kind == "bounded"

    @property
    def invaded(self) -> bool:
        return self.kind == "invaded"

    @property
    def inconclusive(self) -> bool:
        return self.kind == "inconclusive"

    def __eq__(self, other):
        return isinstance(other, SInvVerdict) and self.kind == other.kind

    def __hash__(self):
        return hash(self.kind)

    def __repr__(self):
        if self.inconclusive:
            return f"SInvVerdict('inconclusive', horizon={self.horizon})"
        return f"SInvVerdict({self.kind!r}, time={self.time})"


def _rule_bits(code: int) -> tuple:
    return tuple((code >> p) & 1 for p in range(8))


def _step_window(code: int, v: int, width: int) -> int:
    """One step of the int bitboard; the two edge bits come out as garbage."""
    mask = (1 << width) - 1
    a = (v << 1) & mask     # left neighbors, aligned to each cell
    b = v
    c = v >> 1              # right neighbors
    out = 0
    for pat, on in enumerate(_rule_bits(code)):
        if not on:
            continue
        l, cc, r = pat >> 2 & 1, pat >> 1 & 1, pat & 1
        out |= (a if l else ~a) & (b if cc else ~b) & (c if r else ~c)
    return out & mask


def _tile(row: str, lo: int, width: int) -> int:
    period = len(row)
    v = 0
    for k in range(width):
        if row[(lo + k) % period] == "1":
            v |= 1 << k
    return v


_sinv_cache: dict = {}


def sinv_decide(rule, u: str, x: str, horizon: int = 256, width_cap=None) -> SInvVerdict:
    """Decide whether writing x over p_u at positions 0..|x|-1 invades.

    Both orbits run on a window wide enough that no difference can reach its
    edges before the horizon; the background side is extended analytically
    from the cyclic orbit. Bounded: the difference vanishes, or the pair
    (difference content, background phase in space and time) revisits an
    earlier state at width <= width_cap. Invaded: the width sits above the
    cap and has grown strictly over two full background periods. Otherwise
    Inconclusive(horizon).
    """
    code = rule_code(rule)
    check_word(u)
    check_word(x)
    if not u:
        raise ValueError("background cycle must be nonempty")
    period_len = len(u)
    n = len(x)
    if width_cap is None:
        width_cap = 4 * (n + period_len)
    key0 = (code, u, x, horizon, width_cap)
    hit = _sinv_cache.get(key0)
    if hit is not None:
        return hit

    lo, hi = -(horizon + 2), n + horizon + 2
    width = hi - lo
    mask = (1 << width) - 1
    interior = mask & ~1 & ~(1 << (width - 1))

    rows, transient, per = exact_orbit(code, u)
    nrows = len(rows)
    ref_ints: dict[int, int] = {}

    def ref(t: int) -> int:
        i = t if t < nrows else transient + (t - transient) % per
        if i not in ref_ints:
            ref_ints[i] = _tile(rows[i], lo, width)
        return ref_ints[i]

    pert = ref(0)
    for j, ch in enumerate(x):
        k = j - lo
        if ch == "1":
            pert |= 1 << k
        else:
            pert &= ~(1 << k)

    seen: set = set()
    widths: list[int] = []
    verdict = None
    for t in range(horizon + 1):
        diff = ref(t) ^ pert
        if diff == 0:
            verdict = SInvVerdict("bounded", time=t)
            break
        a = (diff & -diff).bit_length() - 1
        b = diff.bit_length() - 1
        # Differences propagate at speed at most 1 from the perturbed cells.
        if a + lo < -t or b + lo > n - 1 + t:
            raise RuntimeError("light cone violated, window bookkeeping is broken")
        w = b - a + 1
        widths.append(w)
        if w <= width_cap:
            i = t if t < nrows else transient + (t - transient) % per
            key = (i, (a + lo) % period_len, diff >> a)
            if key in seen:
                verdict = SInvVerdict("bounded", time=t)
                break
            seen.add(key)
        else:
            stride = max(per, 2)
            if t >= transient + 2 * stride and len(widths) > 2 * stride:
                if (
                    widths[-1] > widths[-1 - stride] > widths[-1 - 2 * stride]
                    and widths[-1 - 2 * stride] > width_cap
                ):
                    verdict = SInvVerdict("invaded", time=t)
                    break
        if t == horizon:
            break
        nxt = _step_window(code, pert, width)
        pert = (nxt & interior) | (ref(t + 1) & ~interior)
    if verdict is None:
        verdict = SInvVerdict("inconclusive", horizon=horizon)
    _sinv_cache[key0] = verdict
    return verdict


def sinv_catalog(max_u: int = 4, max_x: int = 6):
    """The audit universe: every background cycle and perturbation up to the caps."""
    for lu in range(1, max_u + 1):
        for u in all_words(lu):
            for lx in range(1, max_x + 1):
                for x in all_words(lx):
                    yield u, x
