"""Antecedent (preimage) computation for finite words under an ECA rule."""

from __future__ import annotations

from .core import GuardExceeded, all_words, check_word, evolve, rule_code

WORD_GUARD = 24          # longest antecedent length enumerate_preimages will touch
SET_GUARD = 1 << 20      # working-set cap for enumeration and determinization
FORBIDDEN_GUARD = 12


class _Dfa:
    """Deterministic automaton over {0,1} accepting a finite-word language."""

    __slots__ = ("start", "delta", "accept")

    def __init__(self, start, delta, accept):
        self.start = start
        self.delta = delta
        self.accept = accept

    def is_empty(self) -> bool:
        todo = [self.start]
        seen = {self.start}
        while todo:
            s = todo.pop()
            if s in self.accept:
                return False
            for b in (0, 1):
                nxt = self.delta[(s, b)]
                if nxt not in seen:
                    seen.add(nxt)
                    todo.append(nxt)
        return True


def _word_dfa(w: str) -> _Dfa:
    """DFA accepting exactly the word w."""
    n = len(w)
    dead = n + 1
    delta = {}
    for i in range(n):
        want = int(w[i])
        delta[(i, want)] = i + 1
        delta[(i, 1 - want)] = dead
    for b in (0, 1):
        delta[(n, b)] = dead
        delta[(dead, b)] = dead
    return _Dfa(0, delta, {n})


def _preimage_dfa(code: int, dfa: _Dfa) -> _Dfa:
    """DFA for the words whose one-step image lies in dfa's language.

    The nondeterministic construction tracks the last two read cells plus the
    state dfa reaches on the emitted image cells; the first two cells of an
    antecedent emit nothing. Determinized by the subset construction.
    """
    start = frozenset([("e",)])

    def move(states, cell):
        out = set()
        for st in states:
            if st[0] == "e":
                out.add(("p", cell))
            elif st[0] == "p":
                out.add(("s", st[1], cell, dfa.start))
            else:
                _, x, y, s = st
                b = (code >> (4 * x + 2 * y + cell)) & 1
                out.add(("s", y, cell, dfa.delta[(s, b)]))
        return frozenset(out)

    def accepting(states):
        return any(st[0] == "s" and st[3] in dfa.accept for st in states)

    index = {start: 0}
    delta = {}
    accept = set()
    todo = [start]
    if accepting(start):
        accept.add(0)
    while todo:
        states = todo.pop()
        i = index[states]
        for cell in (0, 1):
            nxt = move(states, cell)
            if nxt not in index:
                if len(index) >= SET_GUARD:
                    raise GuardExceeded("preimage automaton grew past the guard")
                index[nxt] = len(index)
                todo.append(nxt)
                if accepting(nxt):
                    accept.add(index[nxt])
            delta[(i, cell)] = index[nxt]
    return _Dfa(0, delta, accept)


def has_antecedent(rule, w: str, t: int = 1) -> bool:
    """Is there a word of length |w| + 2t whose t-step evolution equals w?

    Decided by iterating the one-step preimage construction on the de Bruijn
    overlap graph t times; no candidate antecedents are enumerated.
    """
    code = rule_code(rule)
    check_word(w)
    if t < 1:
        raise ValueError("step count must be at least 1")
    if not w:
        return True
    dfa = _word_dfa(w)
    for _ in range(t):
        dfa = _preimage_dfa(code, dfa)
    return not dfa.is_empty()


def has_antecedent_brute(rule, w: str, t: int = 1) -> bool:
    """Reference oracle: try every candidate of length |w| + 2t."""
    code = rule_code(rule)
    check_word(w)
    n = len(w) + 2 * t
    if 2 ** n > SET_GUARD:
        raise GuardExceeded(f"brute-force search over 2^{n} candidates refused")
    return any(evolve(code, v, t)[-1] == w for v in all_words(n))


def enumerate_preimages(rule, w: str) -> set[str]:
    """Exactly the words v with step_word(rule, v) == w."""
    code = rule_code(rule)
    check_word(w)
    if len(w) + 2 > WORD_GUARD:
        raise GuardExceeded(f"antecedent length {len(w) + 2} exceeds guard {WORD_GUARD}")
    partial = ["00", "01", "10", "11"]
    for target in w:
        want = int(target)
        nxt = []
        for p in partial:
            x, y = int(p[-2]), int(p[-1])
            for r in (0, 1):
                if (code >> (4 * x + 2 * y + r)) & 1 == want:
                    nxt.append(p + str(r))
        if len(nxt) > SET_GUARD:
            raise GuardExceeded("preimage working set grew past the guard")
        partial = nxt
    return set(partial)


def find_antecedent(rule, w: str, t: int = 1):
    """Some t-step antecedent of w, or None; witness extraction for claims."""
    code = rule_code(rule)
    if t == 1:
        pre = enumerate_preimages(code, w)
        return min(pre) if pre else None
    for v in sorted(enumerate_preimages(code, w)):
        ante = find_antecedent(code, v, t - 1)
        if ante is not None:
            return ante
    return None


def forbidden_words(rule, t: int = 1, max_len: int = 8) -> list[str]:
    """Words of length <= max_len with no t-step antecedent, minimal under
    the factor order: a word is listed only if no proper factor is listed."""
    code = rule_code(rule)
    if max_len > FORBIDDEN_GUARD:
        raise GuardExceeded(f"max_len {max_len} exceeds guard {FORBIDDEN_GUARD}")
    found: set[str] = set()
    out = []
    for n in range(1, max_len + 1):
        for w in all_words(n):
            if any(w[i:j] in found for i in range(n) for j in range(i + 1, n + 1)):
                continue
            if not has_antecedent(code, w, t):
                found.add(w)
                out.append(w)
    return out
