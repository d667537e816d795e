from fractions import Fraction

import pytest

from qshuffle.arith import APoly, FieldConfig, RatFunc, monic_polys
from qshuffle.series import SeriesField, embed_ratfunc, series_eq_to
from qshuffle.shuffle import shuffle_R
from qshuffle.sums import (indices_upto, power_sum, power_sum_below, power_sum_direct,
                           power_sum_val_bound, s_hat_below, verify_chen, verify_shi,
                           verify_zeta_shuffle, zeta_cutoff, zeta_numeric, zeta_partial)
from qshuffle.words import Combo, parse_combo


def cfg_(q):
    return FieldConfig.from_q(q)


def theta(cfg):
    return RatFunc(APoly.theta(cfg))


def test_power_sum_examples():
    cfg = cfg_(2)
    one = RatFunc.one(cfg)
    t = theta(cfg)
    for a in range(1, 5):
        assert power_sum((a,), 0, cfg) == one
    assert power_sum((1,), 1, cfg) == one / (t * t + t)
    assert power_sum((1, 1), 0, cfg).is_zero()
    assert power_sum_below((1,), 1, cfg) == one
    assert power_sum_below((1,), 2, cfg) == one + one / (t * t + t)
    assert power_sum_below((), 4, cfg) == one
    with pytest.raises(ValueError):
        power_sum((), 1, cfg)


def test_chen_example_q2():
    cfg = cfg_(2)
    t = theta(cfg)
    s1 = power_sum((1,), 1, cfg)
    assert s1 * s1 == power_sum((2,), 1, cfg)
    assert power_sum((2,), 1, cfg) == RatFunc.one(cfg) / (t * t + t) ** 2


@pytest.mark.parametrize("q", [2, 3])
def test_factorised_matches_direct(q):
    cfg = cfg_(q)
    for a in indices_upto(5, 3):
        for d in range(4 if q == 2 else 3):
            assert power_sum(a, d, cfg) == power_sum_direct(a, d, cfg), (a, d)


def test_scalar_power_sum_against_naive_sum():
    cfg = cfg_(3)
    for k in (1, 2, 4):
        for d in range(3):
            naive = RatFunc.zero(cfg)
            for f in monic_polys(d, cfg):
                naive = naive + RatFunc(APoly.constant(cfg, 1), f ** k)
            assert power_sum((k,), d, cfg) == naive


@pytest.mark.parametrize("q", [2, 3, 4])
def test_valuation_bounds(q):
    cfg = cfg_(q)
    fld = SeriesField(cfg, prec=60)
    for a in indices_upto(4, 2):
        for d in range(1, 4):
            s = power_sum(a, d, cfg)
            if s.is_zero():
                continue
            v = embed_ratfunc(s, fld).val
            # the loose bound from the definition and the sharper certified one
            assert v >= d * a[0]
            assert v >= power_sum_val_bound(a[0], d, q)


def test_val_bound_is_attained_sometimes():
    # the sharper bound is tight for depth one at q=2, d=1: S_1(1) = 1/(θ^2+θ)
    cfg = cfg_(2)
    v = embed_ratfunc(power_sum((1,), 1, cfg), SeriesField(cfg, prec=20)).val
    assert v == power_sum_val_bound(1, 1, 2) == 2


def test_zeta_one_q2():
    fld = SeriesField(cfg_(2), prec=20)
    z = zeta_numeric((1,), fld)
    assert z.coeff(0) == 1
    # frozen from the exact partial sums (d <= 5)
    assert sorted(z.terms()) == [Fraction(k) for k in (0, 2, 3, 4, 5, 9, 10, 11, 14, 17, 20)]
    assert str(z).startswith("1 + θ^-2 + θ^-3")


@pytest.mark.parametrize("q", [2, 3, 5])
def test_zeta_leading_term(q):
    fld = SeriesField(cfg_(q), prec=15)
    for a in indices_upto(4, 2):
        z = zeta_numeric(a, fld)
        if len(a) == 1:
            assert z.val == 0 and z.coeff(0) == 1


@pytest.mark.parametrize("q", [2, 3])
def test_zeta_stable_under_more_terms(q):
    for prec in (15, 20):
        fld = SeriesField(cfg_(q), prec=prec)
        for a in indices_upto(4, 2):
            z = zeta_numeric(a, fld)
            far = zeta_partial(a, zeta_cutoff(a[0], prec, q) + 2, fld)
            assert series_eq_to(z, far, prec)
            # raising the precision by 5 keeps every digit up to prec
            hi = zeta_numeric(a, SeriesField(cfg_(q), prec=prec + 5))
            assert hi.truncate(prec).to_triples() == z.truncate(prec).to_triples()


def test_zeta_square_q2():
    fld = SeriesField(cfg_(2), prec=20)
    z1 = zeta_numeric((1,), fld)
    assert series_eq_to(z1 * z1, zeta_numeric((2,), fld), 20)


def test_s_hat_examples():
    cfg = cfg_(2)
    prod = shuffle_R(parse_combo("x1", 2), parse_combo("x1", 2), 2)
    assert s_hat_below(prod, 2, cfg) == power_sum_below((1,), 2, cfg) ** 2
    assert s_hat_below(Combo.one(2), 3, cfg) == RatFunc.one(cfg)
    assert s_hat_below(Combo(2), 3, cfg).is_zero()


@pytest.mark.parametrize("q,a,b,d", [(2, (1,), (1,), 3), (3, (1,), (1, 1), 2)])
def test_shi_examples(q, a, b, d):
    cfg = cfg_(q)
    p = cfg.p
    prod = shuffle_R(Combo.word(p, ((), a)), Combo.word(p, ((), b)), q)
    assert s_hat_below(prod, d, cfg) == power_sum_below(a, d, cfg) * power_sum_below(b, d, cfg)


def test_chen_reports():
    rep = verify_chen([3], 4, 2)
    assert rep["schema"] == 1 and rep["failures"] == 0
    assert rep["checked"] == sum(1 for a in range(1, 4) for b in range(1, 5 - a)) * 3


def test_chen_report_shows_both_sides_on_failure(monkeypatch):
    import qshuffle.sums as sums
    monkeypatch.setattr(sums, "delta_terms", lambda a, b, q: ())
    rep = verify_chen([3], 4, 2)
    bad = [c for c in rep["checks"] if not c["pass"]]
    assert bad and all("lhs" in c and "rhs" in c for c in bad)


def test_shi_includes_unit_pairs():
    rep = verify_shi(2, 3, 2, 2)
    assert rep["failures"] == 0
    assert any(c["a"] == "()" for c in rep["checks"])


def test_zeta_shuffle_q4():
    rep = verify_zeta_shuffle(4, 4, prec=12)
    assert rep["failures"] == 0 and rep["checked"] > 0
