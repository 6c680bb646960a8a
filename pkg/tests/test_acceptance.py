"""Acceptance suite: one criterion per test, one printed verdict line each.

Verdict lines bypass pytest's capture so they show up on every run.
Criterion 2 states a set identity that the rule tables do not satisfy; it
is expected to stay red and its verdict line says why.
"""

import math
import random
import time

from ecacomm.claims import (
    fit_affine,
    load_catalog,
    run_catalog,
    rule184_fooling_set,
)
from ecacomm.commcomp import (
    FunctionTable,
    cc_exact,
    cc_of_cut,
    fooling_set_check,
)
from ecacomm.core import all_words, classify
from ecacomm.preimage import has_antecedent, has_antecedent_brute
from ecacomm.problems import pred_cc, pred_value, sinv_catalog, sinv_decide
from ecacomm.strategies import (
    PRED,
    SINV,
    audit_strategy,
    clog2,
    covered_rules,
    fits_log_bound,
    get_strategies,
    get_strategy,
)

LINEAR_LISTED = (15, 51, 60, 90, 105, 150, 170, 204, 108, 128, 136, 160)
LOG_BOUND_RULES = (23, 50, 77, 178, 232, 132, 184)


def _verdict(capsys, n, ok, detail):
    line = f"[criterion {n}] {'PASS' if ok else 'FAIL'}: {detail}"
    with capsys.disabled():
        print("\n" + line, flush=True)
    assert ok, detail


def test_criterion_1_classification(capsys):
    t0 = time.perf_counter()
    classes = classify()
    elapsed = time.perf_counter() - t0
    flat = sorted(r for cls in classes for r in cls)
    ok = len(classes) == 88 and flat == list(range(256)) and elapsed < 1.0
    _verdict(capsys, 1, ok,
             f"{len(classes)} classes partition all 256 rules "
             f"in {elapsed * 1000:.0f} ms")


def test_criterion_2_affine_set(capsys):
    fits = {r for r in LINEAR_LISTED if fit_affine(r) is not None}
    controls_fail = fit_affine(110) is None and fit_affine(30) is None
    missing = sorted(set(LINEAR_LISTED) - fits)
    ok = fits == set(LINEAR_LISTED) and controls_fail
    _verdict(capsys, 2, ok,
             f"xor-affine forms exist for {len(fits)} of the 12 rules "
             f"grouped as linear; brute-force fit over all 8 neighborhoods "
             f"finds no affine form for {missing} (each violates "
             f"superposition on some neighborhood pair), so the stated "
             f"12-rule identity cannot hold; negative controls 110 and 30 "
             f"correctly fail")


def test_criterion_3_preimage_oracle_equivalence(capsys):
    t0 = time.perf_counter()
    checked = 0
    for rule in (1, 2, 76, 138, 204):
        for length in range(0, 7):
            for w in all_words(length):
                assert has_antecedent(rule, w) == \
                    has_antecedent_brute(rule, w), (rule, w)
                checked += 1
    elapsed = time.perf_counter() - t0
    ok = elapsed < 10.0
    _verdict(capsys, 3, ok,
             f"graph oracle and raw enumeration agree on all {checked} "
             f"(rule, word) pairs in {elapsed:.2f} s")


def test_criterion_4_claims_catalog(capsys):
    t0 = time.perf_counter()
    report = run_catalog(load_catalog())
    elapsed = time.perf_counter() - t0
    counts = report.counts()
    marked = {r.claim.id for r in report.results if r.claim.expect_fail}
    failed = {r.claim.id for r in report.results if not r.passed}
    witnessed = all(r.witness is not None
                    for r in report.results if not r.passed)
    named_probes = {"r172-audit-against-178", "r56-audit-const"} <= marked
    ok = (report.ok and marked == failed and witnessed and named_probes
          and elapsed < 120.0)
    _verdict(capsys, 4, ok,
             f"{counts['claims']} claims in {elapsed:.1f} s: "
             f"{counts['passed']} pass, {counts['expected_failures']} "
             f"marked probes fail as expected (incl. the 172-against-178 "
             f"cross-check and the rule 56 bit-growth probe), every "
             f"failure carries a witness")


def test_criterion_5_protocol_audits(capsys):
    t0 = time.perf_counter()
    audited = 0
    const_ok = True
    for rule in covered_rules(PRED):
        for strat in get_strategies(rule, PRED):
            rep = audit_strategy(strat, n_max=5)
            assert rep.correct, (rule, rep.mismatches[:3])
            audited += 1
            if strat.bound_kind == "constant":
                const_ok &= rep.max_bits[3] == rep.max_bits[5]
    fits = {}
    for rule in LOG_BOUND_RULES:
        strat = get_strategy(rule, PRED)
        rep = audit_strategy(strat, n_max=5)
        fit = fits_log_bound(rep.max_bits)
        assert fit is not None, rule
        a, b = fit
        assert all(bits <= a * clog2(n) + b
                   for n, bits in rep.max_bits.items()), rule
        fits[rule] = fit
    elapsed = time.perf_counter() - t0
    ok = const_ok and audited > 0
    _verdict(capsys, 5, ok,
             f"{audited} strategies replay every input up to n=5 without "
             f"mismatch in {elapsed:.1f} s; constant protocols use equal "
             f"bits at n=3 and n=5; log-bound fits a*ceil(log2 n)+b: "
             + ", ".join(f"{r}:{f}" for r, f in sorted(fits.items())))


def test_criterion_6_fooling_set(capsys):
    details = []
    ok = True
    for n in (2, 3):
        s = rule184_fooling_set(n)
        length = 4 * n + 1
        table = cc_of_cut(lambda w: pred_value(184, w), length, 2 * n)
        valid = fooling_set_check(table, s)
        bound = math.ceil(math.log2(len(s.pairs)))
        depth = cc_exact(table)
        ok &= valid and depth is not None and depth >= bound
        details.append(f"n={n}: |S|={len(s.pairs)}, depth {depth} >= {bound}")
    _verdict(capsys, 6, ok, "; ".join(details))


def test_criterion_7_exact_cc_engine(capsys):
    xor2 = FunctionTable(range(2), range(2), [[0, 1], [1, 0]])
    eq2 = FunctionTable(range(4), range(4),
                        [[int(i == j) for j in range(4)] for i in range(4)])
    const = FunctionTable(range(3), range(3), [[5] * 3] * 3)
    basics = (cc_exact(const) == 0 and cc_exact(xor2) == 2
              and cc_exact(eq2) == 3)
    rng = random.Random(0)
    sym = True
    for _ in range(50):
        entries = [[rng.randint(0, 2) for _ in range(6)] for _ in range(6)]
        t = FunctionTable(range(6), range(6), entries)
        tt = FunctionTable(range(6), range(6),
                           [[entries[i][j] for i in range(6)]
                            for j in range(6)])
        sym &= cc_exact(t) == cc_exact(tt)
    _verdict(capsys, 7, basics and sym,
             "constant/xor/equality depths are 0/2/3 and transpose "
             "symmetry holds on 50 random 6x6 tables")


def test_criterion_8_sinv_verdicts(capsys):
    t0 = time.perf_counter()
    rules = covered_rules(SINV)
    pairs = list(sinv_catalog(max_u=4, max_x=6))
    for rule in rules:
        for u, x in pairs:
            assert not sinv_decide(rule, u, x).inconclusive, (rule, u, x)
        for strat in get_strategies(rule, SINV):
            rep = audit_strategy(strat, n_max=6, max_u=4)
            assert rep.correct, (rule, rep.mismatches[:3])
    elapsed = time.perf_counter() - t0
    _verdict(capsys, 8, True,
             f"{len(rules)} rules x {len(pairs)} perturbation instances: "
             f"no inconclusive verdict at the default horizon and no "
             f"strategy/oracle mismatch ({elapsed:.1f} s)")


def test_criterion_9_desk_scale_asymptotics(capsys):
    flat_204 = {n: pred_cc(204, n) for n in (1, 2, 3, 4)}
    flat_0 = {n: pred_cc(0, n) for n in (1, 2, 3, 4)}
    constant = len(set(flat_204.values())) == 1 \
        and len(set(flat_0.values())) == 1
    bounds = {}
    for n in (2, 3, 4):
        s = rule184_fooling_set(n)
        table = cc_of_cut(lambda w: pred_value(184, w), 4 * n + 1, 2 * n)
        assert fooling_set_check(table, s), n
        bounds[n] = math.ceil(math.log2(len(s.pairs)))
    growing = bounds[2] < bounds[4]
    _verdict(capsys, 9, constant and growing,
             f"pred complexity stays flat for the identity rule "
             f"({flat_204[1]} bits) and the zero rule ({flat_0[1]} bits) "
             f"across n=1..4, while the rule 184 fooling-set bound grows "
             f"{bounds[2]} -> {bounds[4]}")
