import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ecacomm.core import (
    GeneralCA,
    GuardExceeded,
    Rule,
    canonical_code,
    classify,
    complement_code,
    cyclic_contains,
    eca_as_general,
    equivalence_class,
    evolve,
    evolve_cyclic,
    is_subautomaton,
    make_rule,
    min_rotation,
    mirror_code,
    pad_radius,
    primitive_root,
    rescale,
    same_behavior,
    simulates,
    step_cyclic,
    step_general,
    step_word,
)

codes = st.integers(min_value=0, max_value=255)
words = st.text(alphabet="01", min_size=0, max_size=12)


def flip(w: str) -> str:
    return "".join("1" if c == "0" else "0" for c in w)


def test_code_round_trip():
    for c in range(256):
        assert make_rule(c).code == c


@pytest.mark.parametrize("bad", [-1, 256, 1.5, "30", None, True, False])
def test_rule_rejects_non_codes(bad):
    with pytest.raises((ValueError, TypeError)):
        Rule(bad)


def test_table_bit_convention():
    r = Rule(110)
    assert [r(l, c, x) for l, c, x in itertools.product((0, 1), repeat=3)] \
        == [(110 >> (4 * l + 2 * c + x)) & 1
            for l, c, x in itertools.product((0, 1), repeat=3)]


def test_step_word_shrinks_by_two():
    assert step_word(110, "11111") == "000"
    assert step_word(110, "01100") == "110"
    assert step_word(110, "01") == ""
    with pytest.raises(ValueError):
        step_word(110, "012")


@given(codes, words)
def test_mirror_commutes_with_step(code, w):
    assert step_word(mirror_code(code), w[::-1]) == step_word(code, w)[::-1]


@given(codes, words)
def test_complement_commutes_with_step(code, w):
    assert step_word(complement_code(code), flip(w)) == flip(step_word(code, w))


@given(codes)
def test_transforms_are_involutions(code):
    assert mirror_code(mirror_code(code)) == code
    assert complement_code(complement_code(code)) == code
    assert mirror_code(complement_code(code)) == complement_code(mirror_code(code))


def test_known_transforms():
    assert mirror_code(2) == 16
    assert mirror_code(24) == 66
    assert complement_code(0) == 255
    assert canonical_code(124) == 110


def test_classify_partitions_256_rules():
    classes = classify()
    assert len(classes) == 88
    flat = [r for cls in classes for r in cls]
    assert sorted(flat) == list(range(256))
    for cls in classes:
        assert cls == sorted(cls)
        for r in cls:
            assert equivalence_class(r) == cls
            assert canonical_code(r) == cls[0]


@given(st.text(alphabet="01", min_size=1, max_size=6),
       st.integers(min_value=1, max_value=4), codes)
def test_cyclic_step_lifts_through_repetition(u, k, code):
    assert step_cyclic(code, u * k) == step_cyclic(code, u) * k


def test_cyclic_preserves_length():
    rows = evolve_cyclic(110, "0100110", 5)
    assert [len(r) for r in rows] == [7] * 6


def test_evolve_row_count_and_exhaustion():
    rows = evolve(110, "10110", 4)
    assert [len(r) for r in rows] == [5, 3, 1, 0, 0]


def test_cyclic_contains_wraps():
    assert cyclic_contains("10", "01")
    assert cyclic_contains("100", "0010")
    assert not cyclic_contains("1", "0")
    assert cyclic_contains("0", "")


def test_root_and_rotation():
    assert primitive_root("010101") == "01"
    assert primitive_root("0110") == "0110"
    assert min_rotation("110") == "011"


def test_rescale_identity_is_the_rule():
    for code in (110, 30, 90):
        ca = eca_as_general(code)
        assert same_behavior(rescale(ca, 1, 1, 0), ca)


def test_rescale_composes_over_time():
    ca = eca_as_general(110)
    twice = rescale(ca, 1, 2, 0)
    once = rescale(ca, 1, 1, 0)
    # Running the one-step table twice must agree with the two-step table on
    # every neighborhood wide enough to determine the output cell.
    width = 2 * twice.radius + 1
    for nb in itertools.product((0, 1), repeat=width):
        assert step_general(once, step_general(once, nb)) == (twice.table[nb],)


def test_rescale_shift_tracks_the_shift_rule():
    # Rule 170 is the left shift, so rescaling it one step against z=-1
    # cancels into the identity on single cells.
    ca = eca_as_general(170)
    scaled = rescale(ca, 1, 1, -1)
    ident = {nb: nb[scaled.radius] for nb in scaled.table}
    assert scaled.table == ident


def test_rescale_blocks_packs_states():
    scaled = rescale(eca_as_general(110), 2, 1, 0)
    assert scaled.states == 4
    assert scaled.radius == 1


def test_pad_radius_keeps_behavior():
    ca = eca_as_general(110)
    wide = pad_radius(ca, 2)
    assert wide.radius == 2
    assert same_behavior(ca, wide)
    with pytest.raises(ValueError):
        pad_radius(wide, 1)


def test_subautomaton_identity_embedding():
    ca = eca_as_general(110)
    phi = is_subautomaton(ca, ca)
    assert phi == {0: 0, 1: 1}


def test_subautomaton_requires_matching_radii():
    with pytest.raises(ValueError):
        is_subautomaton(eca_as_general(110), pad_radius(eca_as_general(110), 2))


def test_simulates_finds_trivial_self_simulation():
    ca = eca_as_general(90)
    found = simulates(ca, ca, max_block=1, max_steps=1, max_shift=0)
    assert found is not None
    m, t, z, phi = found
    assert (m, t, z) == (1, 1, 0)


def test_simulates_reports_clean_miss():
    # A 3-state identity cannot embed into any small rescaling of a 2-state CA
    # with block size 1.
    ident3 = GeneralCA(3, 0, {(s,): s for s in range(3)})
    assert simulates(eca_as_general(110), ident3, 1, 2, 1) is None


def test_rescale_guard_trips_before_blowup():
    with pytest.raises(GuardExceeded):
        rescale(eca_as_general(110), 3, 12, 0)
