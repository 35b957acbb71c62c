"""The fixed-point transform and the iterated character engine.

The convolution path is calibrated against the rank-1 closed form; the
multiplicity path reproduces it exactly in rank 1 and is documented to
deviate in rank 2, where the printed shift bookkeeping loses the
non-dominant lattice directions (see the expected-failure test).
"""
import itertools
from fractions import Fraction as F

import pytest

from qblocks import abengine, blocks, qser, repdata, sl2closed
from qblocks.abengine import (
    atiyah_bott_euler, nested_character, nested_character_mform, nested_min_anchor,
)
from qblocks.blocks import make_block_label, make_shifted, conformal_exponent
from qblocks.errors import QBlocksError
from qblocks.rootsys import (
    build_root_system, minuscule_weights, weyl_group, zero_weight,
    fundamental_weight, scale_weight,
)

RS1 = build_root_system("A", 1)
RS2 = build_root_system("A", 2)


def a1_label(ps, rvec, s):
    return make_block_label(RS1, ps, tuple((r,) for r in rvec),
                            minuscule_weights(RS1)[s - 1])


# -- Atiyah-Bott transform -------------------------------------------------

def test_ab_indicator_at_zero():
    fam = lambda nu: qser.monomial(0, 1, F(5)) if nu == zero_weight(RS2) else None
    out = atiyah_bott_euler(RS2, fam, F(5), 3)
    assert out == qser.monomial(0, 1, F(5))


def test_ab_weight_multiset_returns_dimension():
    for rs, beta in ((RS1, (F(4),)), (RS2, (F(1), F(1))), (RS2, (F(2), F(1)))):
        multiset = repdata.weight_multiset(rs, beta)
        fam = lambda nu, ms=multiset: (
            qser.monomial(0, ms[nu], F(5)) if nu in ms else None)
        bound = int(sum(beta)) + 2
        out = atiyah_bott_euler(rs, fam, F(5), bound)
        assert out == qser.monomial(0, repdata.weyl_dim(rs, beta), F(5))


def test_ab_unreachable_support_gives_zero():
    # support on a non-dominant orbit that no shifted dominant weight hits
    fam = lambda nu: qser.monomial(0, 1, F(5)) if nu == (F(-1),) else None
    out = atiyah_bott_euler(RS1, fam, F(5), 4)
    assert out.is_zero()


def test_ab_iterated_once_vanishes_on_window_fixed_labels():
    # the direct one-level Euler sum of the lattice model vanishes when
    # the label is fixed by the whole reflection group
    for p in (2, 3):
        mus = [make_shifted(RS1, p, (p,))]
        fam = lambda nu: qser.monomial(
            conformal_exponent(RS1, p, mus, nu), 1, F(20))
        out = atiyah_bott_euler(RS1, fam, F(20), 12)
        assert out.is_zero()


# -- convolution path vs the closed form ------------------------------------

def test_nested_one_level_false_theta():
    for p in (2, 3, 5):
        for r in range(1, p):
            t = sl2closed.min_exponent((p,), (r,), 1) + 20
            out = nested_character(a1_label((p,), (r,), 1), t)
            expected = qser.false_theta(p, p - r, t)
            assert out == qser.QSeries(expected.denom, dict(expected.terms),
                                       expected.trunc, -1)


@pytest.mark.parametrize("ps", [(2,), (3,), (5,), (2, 3)])
def test_nested_matches_closed_form(ps):
    for rvec in itertools.product(*(range(1, p) for p in ps)):
        for s in (1, 2):
            t = sl2closed.min_exponent(ps, rvec, s) + 20
            label = a1_label(ps, rvec, s)
            assert nested_character(label, t) == \
                sl2closed.example3_series(ps, rvec, s, t)


def test_nested_thread_count_does_not_change_output():
    label = a1_label((2, 3), (1, 2), 1)
    t = sl2closed.min_exponent((2, 3), (1, 2), 1) + 25
    assert nested_character(label, t, threads=3) == nested_character(label, t)


def test_nested_window_consistency():
    # enlarging the bound and cutting back reproduces the smaller run
    label = make_block_label(RS2, (2, 3), ((1, 2), (2, 1)),
                             minuscule_weights(RS2)[1])
    t = nested_min_anchor(label) + 8
    small = nested_character(label, t)
    big = nested_character(label, t + 6)
    assert small == qser.QSeries(big.denom, dict(big.terms), t, big.eta_power)


def test_nested_rejects_oversized_group_power():
    rs = build_root_system("E", 7)
    label = make_block_label(rs, (2,), ((1,) * 7,), zero_weight(rs))
    with pytest.raises(QBlocksError):
        nested_character(label, F(5))


# -- degenerate (window-fixed) labels ---------------------------------------

def test_window_fixed_labels_leave_monomials():
    # both evaluation paths produce the same single monomial q^(p s^2 / 4),
    # which differs from the closed form's boundary value q^(p (s-1)^2 / 4)
    for p in (2, 3, 5):
        for s in (1, 2):
            label = a1_label((p,), (p,), s)
            t = F(4 * p)
            conv = nested_character(label, t)
            assert conv.items() == [(F(p * s * s, 4), 1)]
            assert nested_character_mform(label, t) == conv
            closed = sl2closed.example3_series((p,), (p,), s, t)
            assert closed.items() == [(F(p * (s - 1) ** 2, 4), 1)]
            assert conv != closed


# -- multiplicity path -------------------------------------------------------

@pytest.mark.parametrize("ps", [(2,), (3,), (2, 3)])
def test_mform_matches_conv_rank_one(ps):
    for rvec in itertools.product(*(range(1, p + 1) for p in ps)):
        for s in (1, 2):
            label = a1_label(ps, rvec, s)
            t = nested_min_anchor(label) + 15
            assert nested_character_mform(label, t) == nested_character(label, t)


@pytest.mark.xfail(strict=True, reason=(
    "the printed multiplicity-form shifts use the label epsilon where the "
    "character model transports weights by w(rho) - rho - epsilon; the two "
    "agree in rank 1 but drop non-dominant lattice directions in rank 2"))
def test_mform_matches_conv_rank_two_as_printed():
    label = make_block_label(RS2, (2,), ((1, 2),), minuscule_weights(RS2)[0])
    t = nested_min_anchor(label) + 8
    assert nested_character_mform(label, t) == nested_character(label, t)


def test_mform_rank_two_deviation_is_on_non_dominant_directions():
    # frozen counterexample: the convolution path carries a term the
    # printed multiplicity path misses
    label = make_block_label(RS2, (2, 3), ((1, 2), (2, 1)),
                             minuscule_weights(RS2)[1])
    t = nested_min_anchor(label) + 11
    conv = dict(nested_character(label, t).items())
    mform = dict(nested_character_mform(label, t).items())
    diffs = {e: (conv.get(e, 0), mform.get(e, 0))
             for e in set(conv) | set(mform) if conv.get(e, 0) != mform.get(e, 0)}
    assert diffs == {F(457, 18): (-2, -1)}


def test_a2_smoke_both_paths():
    # rank-2 engine completes with integer coefficients on both paths
    label = make_block_label(RS2, (2, 3), ((1, 1), (2, 2)),
                             minuscule_weights(RS2)[2])
    t = nested_min_anchor(label) + 9
    conv = nested_character(label, t)
    assert conv.eta_power == -2
    assert all(isinstance(c, int) for _, c in conv.items())
    mform = nested_character_mform(label, t)
    assert all(isinstance(c, int) for _, c in mform.items())


@pytest.mark.parametrize("series,rank,rvec", [
    ("A", 3, (1, 2, 1)), ("D", 4, (1, 1, 1, 1)), ("D", 4, (1, 2, 1, 1))])
def test_higher_rank_engine_smoke(series, rank, rvec):
    rs = build_root_system(series, rank)
    label = make_block_label(rs, (2,), (rvec,), zero_weight(rs))
    t = nested_min_anchor(label) + 4
    out = nested_character(label, t)
    assert out.eta_power == -rank
    assert not out.is_zero()
    assert all(isinstance(c, int) and c != 0 for _, c in out.items())
    # window consistency certifies the box bound
    big = nested_character(label, t + 3)
    assert out == qser.QSeries(big.denom, dict(big.terms), t, big.eta_power)
    assert nested_character(label, t, threads=2) == out


@pytest.mark.parametrize("series,rank", [("A", 2), ("A", 3), ("D", 4)])
def test_window_fixed_boundary_monomial_any_rank(series, rank):
    # fully window-fixed one-level labels telescope to q^((p/2)|rho|^2)
    from qblocks.rootsys import norm_sq
    rs = build_root_system(series, rank)
    p = 2
    label = make_block_label(rs, (p,), ((p,) * rank,), zero_weight(rs))
    out = nested_character(label, nested_min_anchor(label) + 4)
    assert out.items() == [(F(p, 2) * norm_sq(rs, rs.rho), 1)]
