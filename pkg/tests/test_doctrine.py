"""Finite doctrine laws, the least closed operator, and the table formats."""

from random import Random

import pytest

from jreal.doctrine import (
    Doctrine,
    DoctrineSyntaxError,
    MonoOp,
    UnsuitableDoctrine,
    Witness,
    arrow,
    candidate_ops,
    derive_e4,
    identity_op,
    lfp_by_intersection,
    lfp_local,
    local_laws,
    make_doctrine,
    mono_op,
    parse_doctrine,
    pitts_f_finite,
    preorder_witness,
    random_doctrine,
    shipped_d4,
    shipped_d8,
    show_doctrine,
    uniformity_finite,
    wedge,
)


def tiny():
    return make_doctrine(
        2,
        {(0, 0): 0, (0, 1): 1, (1, 0): 1, (1, 1): 0},
        {(0, 0): 0, (0, 1): 1},
    )


def test_table_validation():
    with pytest.raises(ValueError, match="out of range"):
        make_doctrine(2, {(0, 3): 0}, {})
    with pytest.raises(ValueError, match="not injective"):
        make_doctrine(2, {}, {(0, 0): 0, (0, 1): 0})
    with pytest.raises(ValueError, match="carrier size"):
        make_doctrine(0, {}, {})


def test_arrow_and_wedge_by_hand():
    d = tiny()
    # row 0 is the identity, row 1 swaps
    assert arrow(d, 0b11, 0b11) == 0b11
    assert arrow(d, 0b01, 0b01) == 0b01
    assert arrow(d, 0b01, 0b10) == 0b10
    assert arrow(d, 0b00, 0b00) == 0b11  # empty domain: every row qualifies
    assert wedge(d, 0b01, 0b11) == 0b11
    assert wedge(d, 0b10, 0b11) == 0b00  # no pairs rooted at 1


def test_mono_op_rejects_non_monotone():
    with pytest.raises(ValueError, match="not monotone"):
        mono_op(2, (0b11, 0b01, 0b00, 0b11))
    op = mono_op(1, (0b0, 0b1))
    assert op[1] == 1


def test_lfp_matches_intersection_formula_on_shipped():
    for d in (shipped_d4(), shipped_d8()):
        j = lfp_local(d, pitts_f_finite(d))
        for a_mask in range(1 << d.size):
            assert j[a_mask] == lfp_by_intersection(d, pitts_f_finite(d), a_mask)


def test_lfp_is_idempotent_and_above_seed():
    for seed in range(6):
        d = random_doctrine(Random(seed), 4)
        j = lfp_local(d, pitts_f_finite(d))
        for a_mask in range(16):
            assert j[j[a_mask]] == j[a_mask]
            assert j[a_mask] & ~j[a_mask] == 0
            # the bottom stage is already inside the closure
            assert wedge(d, 0b1, a_mask) & ~j[a_mask] == 0


def test_lfp_requires_bottom_pairing():
    d = make_doctrine(2, {(0, 0): 0, (0, 1): 1}, {(0, 0): 0})
    with pytest.raises(UnsuitableDoctrine, match="pair\\(0,1\\)"):
        lfp_local(d, identity_op(2))


def test_pitts_f_hand_value():
    # domain scans per threshold on the 4-point doctrine, unioned
    f = pitts_f_finite(shipped_d4())
    assert f[0b0001] == 0b0110


def test_local_laws_on_shipped():
    for d in (shipped_d4(), shipped_d8()):
        j = lfp_local(d, pitts_f_finite(d))
        report = local_laws(d, j)
        assert report.operator_is_local
        assert report.e1 == Witness(0, "E1")
        assert report.e2 == Witness(0, "E2")
        assert report.e3 == Witness(0, "E3")
        assert report.e4 is not None
        assert report.e4_derived is not None
        assert report.e4_derived.element == report.e4.element
        assert report.e4_derivation_note == "derived and verified"


def test_e1_witness_verifies_directly():
    d = shipped_d4()
    j = lfp_local(d, pitts_f_finite(d))
    w = local_laws(d, j).e1
    for a_mask in range(16):
        for b_mask in range(16):
            lhs = arrow(d, a_mask, b_mask)
            rhs = arrow(d, j[a_mask], j[b_mask])
            for f in range(4):
                if lhs >> f & 1:
                    out = d.app_at(w.element, f)
                    assert out is not None and rhs >> out & 1


def test_e4_derivation_needs_ingredients():
    d = shipped_d4()
    j = lfp_local(d, pitts_f_finite(d))
    got, note = derive_e4(d, j, None, Witness(0, "E3"))
    assert got is None and "missing ingredient" in note


def test_random_doctrines_are_lawful():
    for seed in range(10):
        d = random_doctrine(Random(seed), 5)
        f = pitts_f_finite(d)
        j = lfp_local(d, f)
        for a_mask in range(1 << d.size):
            assert j[a_mask] == lfp_by_intersection(d, f, a_mask)
        report = local_laws(d, j)
        assert report.operator_is_local
        assert report.e4_derived is not None


def test_lfp_is_least_among_local_candidates():
    d = shipped_d4()
    j = lfp_local(d, pitts_f_finite(d))
    locals_found = 0
    for _, op in candidate_ops(d):
        if local_laws(d, op).operator_is_local:
            locals_found += 1
            assert preorder_witness(d, j, op) is not None
    assert locals_found >= 2


def test_uniformity_on_shipped_d8():
    d = shipped_d8()
    j = lfp_local(d, pitts_f_finite(d))
    report = uniformity_finite(d, j)
    assert report.verified
    assert report.checked == 256
    assert report.failures == ()


def test_doctrine_format_roundtrip():
    for d in (tiny(), shipped_d4()):
        assert parse_doctrine(show_doctrine(d)) == d
    text = "# comment\ndoctrine 2\napp 0 0 = 0\npair 0 0 = 0\npair 0 1 = 1\n"
    d = parse_doctrine(text)
    assert d.app_at(0, 0) == 0 and d.app_at(1, 1) is None


def test_doctrine_format_errors():
    with pytest.raises(DoctrineSyntaxError, match="header"):
        parse_doctrine("app 0 0 = 0\n")
    with pytest.raises(DoctrineSyntaxError, match="bad line"):
        parse_doctrine("doctrine 2\napp 0 0 0\n")
    with pytest.raises(DoctrineSyntaxError, match="unknown table"):
        parse_doctrine("doctrine 2\nfrob 0 0 = 0\n")
    with pytest.raises(DoctrineSyntaxError, match="not injective"):
        parse_doctrine("doctrine 2\npair 0 0 = 0\npair 0 1 = 0\n")
