import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ecacomm.core import GuardExceeded, all_words, evolve, mirror_code, step_cyclic
from ecacomm.problems import (
    background_orbit,
    build_pred_table,
    exact_orbit,
    p_u_cell,
    pred_cc,
    pred_value,
    sinv_catalog,
    sinv_decide,
    x_equals_background,
)

codes = st.integers(min_value=0, max_value=255)


def test_pred_value_on_reference_rules():
    for n in range(1, 4):
        for w in all_words(2 * n + 1):
            assert pred_value(204, w) == int(w[n])
            assert pred_value(0, w) == 0
            assert pred_value(255, w) == 1
            assert pred_value(170, w) == int(w[-1])


def test_pred_value_rule90_is_endpoint_parity():
    # The xor rule telescopes: after n steps the center sees the cells at
    # offsets given by the parity of binomial coefficients.
    for w in all_words(3):
        assert pred_value(90, w) == int(w[0]) ^ int(w[2])
    for w in all_words(5):
        assert pred_value(90, w) == int(w[0]) ^ int(w[4])
    for w in all_words(7):
        assert pred_value(90, w) == \
            int(w[0]) ^ int(w[2]) ^ int(w[4]) ^ int(w[6])


@given(codes, st.integers(min_value=1, max_value=3),
       st.data())
@settings(max_examples=120)
def test_pred_value_ignores_cells_outside_the_cone(code, n, data):
    w = data.draw(st.text(alphabet="01", min_size=2 * n + 1,
                          max_size=2 * n + 1))
    pad_l = data.draw(st.text(alphabet="01", min_size=n, max_size=n))
    pad_r = data.draw(st.text(alphabet="01", min_size=n, max_size=n))
    rows = evolve(code, pad_l + w + pad_r, n)
    assert int(rows[-1][n]) == pred_value(code, w)


def test_pred_value_rejects_even_width():
    with pytest.raises(ValueError):
        pred_value(110, "0101")


def test_pred_cc_small_values():
    assert pred_cc(0, 2) == 0
    assert pred_cc(204, 3) == 1
    assert pred_cc(90, 1) == 2
    assert pred_cc(90, 2) == 2


@pytest.mark.parametrize("rule", [2, 24, 110, 30, 184])
def test_pred_cc_mirror_invariance(rule):
    for n in (1, 2, 3):
        assert pred_cc(rule, n) == pred_cc(mirror_code(rule), n)


def test_pred_table_guard():
    with pytest.raises(GuardExceeded):
        build_pred_table(110, 9, 0)


def test_background_orbits():
    assert background_orbit(170, "01") == (0, 1, 1)
    assert background_orbit(51, "0") == (0, 2, 0)
    assert background_orbit(204, "0110") == (0, 1, 0)
    with pytest.raises(GuardExceeded):
        background_orbit(110, "01" * 9)


@given(codes, st.text(alphabet="01", min_size=1, max_size=5))
@settings(max_examples=80)
def test_exact_orbit_closes_its_cycle(code, u):
    rows, transient, period = exact_orbit(code, u)
    assert len(rows) == transient + period
    assert step_cyclic(code, rows[-1]) == rows[transient]


def test_background_helpers():
    assert [p_u_cell("011", j) for j in range(5)] == [0, 1, 1, 0, 1]
    assert x_equals_background("011", "0110")
    assert not x_equals_background("011", "1")


def test_known_sinv_verdicts():
    assert sinv_decide(13, "0", "1").kind == "invaded"
    assert sinv_decide(13, "01", "11").kind == "bounded"
    assert sinv_decide(7, "01", "11").kind == "invaded"
    assert sinv_decide(5, "01", "00").kind == "bounded"
    assert sinv_decide(204, "0", "1").kind == "bounded"


def test_degenerate_perturbation_is_bounded_immediately():
    v = sinv_decide(30, "01", "01")
    assert v.kind == "bounded" and v.time == 0


def test_sinv_verdict_stability_under_longer_horizons():
    for rule in (13, 27, 44, 172):
        for u, x in sinv_catalog(max_u=2, max_x=3):
            v = sinv_decide(rule, u, x)
            if not v.inconclusive:
                assert sinv_decide(rule, u, x, horizon=512).kind == v.kind


def test_sinv_catalog_shape():
    pairs = list(sinv_catalog(max_u=2, max_x=2))
    assert len(pairs) == (2 + 4) * (2 + 4)
    assert len(set(pairs)) == len(pairs)
    assert all(u and x for u, x in pairs)


def test_sinv_rejects_empty_background():
    with pytest.raises(ValueError):
        sinv_decide(110, "", "1")
