"""Catalog of small checkable facts about specific rules.

Each claim is a single mechanical statement (a block image, a missing
antecedent, a shift identity, an audit outcome, ...) that check_claim can
verify exhaustively. Claims marked expect_fail document statements that do
not hold as written; they must keep failing, with a concrete witness.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from importlib import resources

from .commcomp import FoolingSet, cc_of_cut, fooling_set_check
from .core import (
    all_words,
    evolve_cyclic,
    min_rotation,
    primitive_root,
    rule_code,
    step_word,
)
from .preimage import enumerate_preimages, find_antecedent, has_antecedent
from .problems import pred_value, sinv_decide
from .strategies import audit_strategy, get_strategies, get_strategy

BLOCKS = {"A": "00", "B": "01", "C": "10", "D": "11"}


@dataclass(frozen=True)
class Claim:
    id: str
    rule: int
    prop: str
    kind: str
    params: dict
    note: str = ""
    expect_fail: bool = False


@dataclass
class ClaimResult:
    claim: Claim
    passed: bool
    witness: str | None = None
    detail: str = ""

    @property
    def unexpected(self) -> bool:
        return self.passed == self.claim.expect_fail


@dataclass
class CatalogReport:
    results: list

    @property
    def unexpected_failures(self) -> list:
        return [r for r in self.results
                if not r.passed and not r.claim.expect_fail]

    @property
    def unexpected_passes(self) -> list:
        return [r for r in self.results if r.passed and r.claim.expect_fail]

    @property
    def ok(self) -> bool:
        return not self.unexpected_failures and not self.unexpected_passes

    def counts(self) -> dict:
        return {
            "claims": len(self.results),
            "passed": sum(r.passed for r in self.results),
            "failed": sum(not r.passed for r in self.results),
            "expected_failures": sum(
                not r.passed and r.claim.expect_fail for r in self.results),
            "unexpected_failures": len(self.unexpected_failures),
            "unexpected_passes": len(self.unexpected_passes),
        }


# Statement groups and the rules they speak about; run_catalog checks that
# every listed rule carries at least one claim.
PROPOSITIONS = (
    ("linear-rules", (15, 51, 60, 90, 105, 108, 128, 136, 150, 160, 170, 204)),
    ("rule-76-one-step", (76,)),
    ("constant-dependency",
     (0, 1, 2, 4, 8, 10, 12, 19, 24, 34, 36, 38, 42, 46, 72, 76, 108, 127,
      138, 200)),
    ("sinv-rule-5", (5,)),
    ("sinv-rule-7", (7,)),
    ("sinv-rules-13-29", (13, 29)),
    ("sinv-rule-28", (28,)),
    ("sinv-rule-78", (78,)),
    ("sinv-rule-140", (140,)),
    ("sinv-rule-172", (172, 178)),
    ("sinv-rule-32", (32,)),
    ("sinv-rule-156", (156,)),
    ("sinv-rule-27", (27,)),
    ("sinv-rule-44", (44,)),
    ("pred-wall-rules", (23, 50, 77, 178, 232)),
    ("pred-absorbing", (40, 130, 162, 168)),
    ("sinv-rule-104", (104,)),
    ("pred-rule-132", (132,)),
    ("sinv-rule-152", (152,)),
    ("pred-rule-184", (184,)),
    ("pred-rule-56", (56,)),
    ("negative-controls", (30, 110)),
)


def _expand_pattern(pattern: str):
    """Yield concrete words for a pattern whose non-01 letters are free
    binary variables; repeated letters take equal values."""
    letters = []
    for ch in pattern:
        if ch not in "01" and ch not in letters:
            letters.append(ch)
    for values in itertools.product("01", repeat=len(letters)):
        assign = dict(zip(letters, values))
        yield "".join(assign.get(ch, ch) for ch in pattern), assign


def _iterate(code: int, word: str, steps: int) -> str:
    for _ in range(steps):
        word = step_word(code, word)
    return word


def fit_affine(rule) -> tuple | None:
    """Coefficients (a, b, c, d) with f(l,c,r) = a*l ^ b*c ^ c*r ^ d,
    or None when the local table is not xor-affine."""
    code = rule_code(rule)
    d = code & 1
    a = ((code >> 4) & 1) ^ d
    b = ((code >> 2) & 1) ^ d
    c = ((code >> 1) & 1) ^ d
    for n in range(8):
        l, m, r = (n >> 2) & 1, (n >> 1) & 1, n & 1
        if ((code >> n) & 1) != (a * l) ^ (b * m) ^ (c * r) ^ d:
            return None
    return (a, b, c, d)


# ---------------------------------------------------------------------------
# Checkers: each returns (passed, witness, detail)

def _check_maps_to(claim):
    code = claim.rule
    p = claim.params
    steps = p.get("steps", 1)
    images = p.get("images")
    allowed = set(images) if images is not None else {p["image"]}
    for word, assign in _expand_pattern(p["pattern"]):
        got = _iterate(code, word, steps)
        if got not in allowed:
            return False, word, f"image {got!r} not in {sorted(allowed)}"
    return True, None, f"{p['pattern']!r} ok for all assignments"


def _check_wall(claim):
    p = claim.params
    inner = Claim(
        id=claim.id, rule=claim.rule, prop=claim.prop, kind="maps_to",
        params={"pattern": "\x00" + p["pattern"] + "\x01",
                "image": p["image"]},
    )
    # \x00 and \x01 are fresh variable letters that cannot collide
    return _check_maps_to(inner)


def _check_no_antecedent(claim):
    p = claim.params
    steps = p.get("steps", 1)
    if has_antecedent(claim.rule, p["word"], steps):
        return False, find_antecedent(claim.rule, p["word"], steps), \
            "an antecedent exists"
    return True, None, f"{p['word']!r} unreachable in {steps} step(s)"


def _check_antecedents_contain(claim):
    p = claim.params
    pres = enumerate_preimages(claim.rule, p["word"])
    for v in sorted(pres):
        if p["factor"] not in v:
            return False, v, f"antecedent without {p['factor']!r}"
    return True, None, f"{len(pres)} antecedents, all contain {p['factor']!r}"


def _check_stable_pattern(claim):
    p = claim.params
    word, t = p["word"], p.get("t", 1)
    for ctx in all_words(2 * t):
        a, b = ctx[:t], ctx[t:]
        got = _iterate(claim.rule, a + word + b, t)
        if got != word:
            return False, a + word + b, f"evolves to {got!r}"
    return True, None, f"{word!r} stable under all width-{t} contexts"


def _check_nilpotent(claim):
    p = claim.params
    steps, value = p["steps"], p.get("value", "0")
    code = claim.rule
    if step_word(code, value * 3) != value:
        return False, value * 3, "claimed resting value is not a fixed point"
    for length in range(2 * steps + 1, p.get("max_len", 9) + 1):
        for w in all_words(length):
            got = _iterate(code, w, steps)
            if got != value * len(got):
                return False, w, f"reaches {got!r}"
    for length in range(1, p.get("max_cyclic", 6) + 1):
        for u in all_words(length):
            got = evolve_cyclic(code, u, steps)[-1]
            if got != value * length:
                return False, f"cyclic {u}", f"reaches {got!r}"
    return True, None, f"everything rests on {value!r} after {steps} step(s)"


def _check_equals_shift_on_image(claim):
    p = claim.params
    after, power, shift = p["after"], p["power"], p["shift"]
    code = claim.rule
    for length in range(1, p.get("max_len", 12) + 1):
        for v in all_words(length):
            w = _iterate(code, v, after)
            got = _iterate(code, w, power)
            want = w[power + shift: len(w) - power + shift]
            if got != want:
                return False, v, (
                    f"image {w!r}: {got!r} != slice {want!r}")
    return True, None, (
        f"on {after}-step images, {power} more step(s) act as a "
        f"shift by {shift}")


def _check_cyclic_fixed(claim):
    p = claim.params
    got = evolve_cyclic(claim.rule, p["word"], p["steps"])[-1]
    if got != p["word"]:
        return False, p["word"], f"reaches {got!r}"
    return True, None, f"{p['word']!r} returns after {p['steps']} step(s)"


def _check_cyclic_shift_after(claim):
    p = claim.params
    u, steps, shift = p["word"], p["steps"], p["shift"]
    got = evolve_cyclic(claim.rule, u, steps)[-1]
    want = u[shift % len(u):] + u[:shift % len(u)]
    if got != want:
        return False, u, f"reaches {got!r}, not rotation {want!r}"
    return True, None, f"{u!r} rotates by {shift} after {steps} step(s)"


def _check_cyclic_uniform_unless(claim):
    p = claim.params
    value = p.get("value", "0")
    except_roots = set(p.get("except_roots", ()))
    for length in range(1, p.get("max_len", 4) + 1):
        for u in all_words(length):
            if min_rotation(primitive_root(u)) in except_roots:
                continue
            got = evolve_cyclic(claim.rule, u, len(u))[-1]
            if got != value * length:
                return False, u, f"reaches {got!r} after {length} step(s)"
    return True, None, "all other cycles flatten to the resting value"


def _check_table_differs(claim):
    p = claim.params
    other = rule_code(p["other"])
    code = claim.rule
    diff = {
        format(n, "03b")
        for n in range(8)
        if ((code >> n) & 1) != ((other >> n) & 1)
    }
    if diff != set(p["triples"]):
        return False, ",".join(sorted(diff)), (
            f"difference set is {sorted(diff)}, stated {p['triples']}")
    return True, None, f"differs from rule {other} exactly on {p['triples']}"


def _check_affine_rule(claim):
    coeffs = fit_affine(claim.rule)
    if coeffs is None:
        # The four probe neighborhoods force a unique candidate; report the
        # first neighborhood where that candidate misses the table.
        code = claim.rule
        d = code & 1
        a, b, c = ((code >> 4) & 1) ^ d, ((code >> 2) & 1) ^ d, ((code >> 1) & 1) ^ d
        for n in range(8):
            l, m, r = (n >> 2) & 1, (n >> 1) & 1, n & 1
            if ((code >> n) & 1) != (a * l) ^ (b * m) ^ (c * r) ^ d:
                return (False, f"{l}{m}{r}",
                        "no xor-affine form fits the local table")
        raise AssertionError("fit_affine returned None on an affine table")
    a, b, c, d = coeffs
    return True, None, f"f(l,c,r) = {a}l ^ {b}c ^ {c}r ^ {d}"


def _check_block_identity(claim):
    p = claim.params
    code = claim.rule
    middle = p.get("middle", "")
    image = "".join(BLOCKS[x] for x in p["image"])
    n_values = range(p.get("n_min", 0), p.get("n_max", 0) + 1)
    for n in n_values:
        choices = itertools.product(middle, repeat=n) if middle else [()]
        for mid in choices:
            letters = p.get("left", "") + "".join(mid) + p.get("right", "")
            word = "".join(BLOCKS[x] for x in letters)
            steps = n if p.get("steps") == "n" else p["steps"]
            got = _iterate(code, word, steps)
            if got != image:
                return False, word, f"evolves to {got!r}, want {image!r}"
    return True, None, "block identity holds"


def _check_sinv_verdict(claim):
    p = claim.params
    verdict = sinv_decide(claim.rule, p["u"], p["x"])
    if verdict.kind != p["verdict"]:
        return False, f"u={p['u']} x={p['x']}", (
            f"oracle says {verdict.kind} (t={verdict.time}), "
            f"stated {p['verdict']}")
    return True, None, f"oracle agrees: {verdict.kind}"


def _check_audit_passes(claim):
    p = claim.params
    problem = p["problem"]
    variant = p.get("variant")
    if variant is None:
        strategy = get_strategy(claim.rule, problem)
    else:
        strategy = next(
            (s for s in get_strategies(claim.rule, problem)
             if s.variant == variant), None)
    if strategy is None:
        return False, None, "no strategy registered"
    n_max = p.get("n_max", 3)
    report = audit_strategy(
        strategy, n_max=n_max, oracle_rule=p.get("oracle_rule"))
    if not report.correct:
        return False, str(report.mismatches[0]), (
            f"{len(report.mismatches)} mismatches")
    detail = f"max bits {dict(sorted(report.max_bits.items()))}"
    if p.get("require") == "constant":
        hi, lo = n_max, n_max - 2
        if report.max_bits.get(hi) != report.max_bits.get(lo):
            return False, detail, (
                f"bit count moves between n={lo} and n={hi}")
        detail += f"; constant at n={lo},{hi}"
    return True, None, detail


def rule184_fooling_set(n: int):
    """Alice holds A^i B^(n-i), Bob holds B^(n-i) D^i plus a trailing 1;
    all n+1 pairs evaluate alike and every swap escapes."""
    pairs = []
    for i in range(n + 1):
        x = BLOCKS["A"] * i + BLOCKS["B"] * (n - i)
        y = BLOCKS["B"] * (n - i) + BLOCKS["D"] * i + "1"
        pairs.append((x, y))
    value = pred_value(184, pairs[0][0] + pairs[0][1])
    return FoolingSet(pairs=tuple(pairs), value=value)


def _check_fooling_set(claim):
    n = claim.params["n"]
    s = rule184_fooling_set(n)
    size = len(s.pairs)
    if size != n + 1:
        return False, None, f"built {size} pairs, want {n + 1}"
    table = cc_of_cut(lambda w: pred_value(184, w), 4 * n + 1, 2 * n)
    if not fooling_set_check(table, s):
        return False, str(s.pairs[:2]), "fooling property fails"
    return True, None, f"{size} pairs fool the cut table at n={n}"


def _check_suffix_determines(claim):
    p = claim.params
    code = claim.rule
    for n in range(1, p.get("n_max", 3) + 1):
        size = 2 * n + 1
        for cut in range(size):
            seen: dict = {}
            for w in all_words(size):
                suffix = w[cut:]
                if "0" not in suffix:
                    continue
                val = pred_value(code, w)
                prev = seen.get(suffix)
                if prev is None:
                    seen[suffix] = (val, w)
                elif prev[0] != val:
                    return False, f"{prev[1]} / {w} (cut {cut})", (
                        "same 0-holding suffix, different answers")
    return True, None, "a 0-holding suffix pins the answer"


def _check_shrink_to_value(claim):
    p = claim.params
    code = claim.rule
    value, steps = p["value"], p["steps"]
    exceptions = set(p.get("except", ()))
    for w in all_words(p["length"]):
        got = _iterate(code, w, steps)
        if w in exceptions:
            if got == value:
                return False, w, "listed exception also reaches the value"
        elif got != value:
            return False, w, f"reaches {got!r}"
    return True, None, (
        f"all length-{p['length']} words reach {value!r} "
        f"({len(exceptions)} exceptions)")


_CHECKERS = {
    "maps_to": _check_maps_to,
    "wall": _check_wall,
    "no_antecedent": _check_no_antecedent,
    "antecedents_contain": _check_antecedents_contain,
    "stable_pattern": _check_stable_pattern,
    "nilpotent": _check_nilpotent,
    "equals_shift_on_image": _check_equals_shift_on_image,
    "cyclic_fixed": _check_cyclic_fixed,
    "cyclic_shift_after": _check_cyclic_shift_after,
    "cyclic_uniform_unless": _check_cyclic_uniform_unless,
    "table_differs": _check_table_differs,
    "affine_rule": _check_affine_rule,
    "block_identity": _check_block_identity,
    "sinv_verdict": _check_sinv_verdict,
    "audit_passes": _check_audit_passes,
    "fooling_set": _check_fooling_set,
    "suffix_determines": _check_suffix_determines,
    "shrink_to_value": _check_shrink_to_value,
}


def check_claim(claim: Claim) -> ClaimResult:
    checker = _CHECKERS.get(claim.kind)
    if checker is None:
        raise ValueError(f"unknown claim kind {claim.kind!r}")
    passed, witness, detail = checker(claim)
    return ClaimResult(claim=claim, passed=passed, witness=witness,
                       detail=detail)


def load_catalog(path=None) -> list[Claim]:
    """Claims from a JSONL file; the packaged catalog when path is None."""
    if path is None:
        text = (resources.files("ecacomm") / "data" / "claims.jsonl").read_text()
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    claims = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        raw = json.loads(line)
        claims.append(Claim(
            id=raw["id"], rule=raw["rule"], prop=raw["prop"],
            kind=raw["kind"], params=raw.get("params", {}),
            note=raw.get("note", ""), expect_fail=raw.get("expect_fail", False),
        ))
    ids = [c.id for c in claims]
    if len(ids) != len(set(ids)):
        raise ValueError("duplicate claim ids in catalog")
    return claims


def run_catalog(claims=None, rules=None, kinds=None, props=None) -> CatalogReport:
    """Check (a filtered view of) the catalog and report the outcomes."""
    if claims is None:
        claims = load_catalog()
    known_props = {pid for pid, _ in PROPOSITIONS}
    for c in claims:
        if c.prop not in known_props:
            raise ValueError(f"claim {c.id} references unknown group {c.prop}")
    if rules is not None:
        wanted = {rule_code(r) for r in rules}
        claims = [c for c in claims if c.rule in wanted]
    if kinds is not None:
        unknown = set(kinds) - set(_CHECKERS)
        if unknown:
            raise ValueError(f"unknown claim kinds: {sorted(unknown)}")
        claims = [c for c in claims if c.kind in kinds]
    if props is not None:
        unknown = set(props) - known_props
        if unknown:
            raise ValueError(f"unknown statement groups: {sorted(unknown)}")
        claims = [c for c in claims if c.prop in props]
    return CatalogReport(results=[check_claim(c) for c in claims])


def coverage_gaps(claims=None) -> list[int]:
    """Rules named by a statement group but carrying no claim."""
    if claims is None:
        claims = load_catalog()
    covered = {c.rule for c in claims}
    missing = []
    for _, rs in PROPOSITIONS:
        missing.extend(r for r in rs if r not in covered)
    return sorted(set(missing))
