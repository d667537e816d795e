import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from qshuffle.arith import APoly, FieldConfig, polys_below
from qshuffle.lattice import (InsufficientDegreeError, LatticeSpec, OmegaPoint, PoleError,
                              choose_degree, class_of, eisenstein_brute, eisenstein_direct,
                              eisenstein_expansion, exp_coeffs, exp_product, goss_cutoff,
                              goss_poly, goss_power_sum, goss_power_sum_direct, goss_sum,
                              goss_sum_below, lattice_power_sum, make_omega_point, pairing,
                              parse_recipe, poly_pow, succ_gt, succ_positive, t_function,
                              verify_depth1_product, verify_goss_identity)
from qshuffle.series import SeriesField, series_eq_to, theta_root
from qshuffle.sums import indices_upto, zeta_numeric
from qshuffle.suite import goss_lattice, rank2_point


def cfg_(q):
    return FieldConfig.from_q(q)


def point(q, r=2, prec=20):
    return make_omega_point(r, cfg=cfg_(q), prec=prec)


# --- points -------------------------------------------------------------------------

def test_default_points():
    assert point(2, 1).vals == [0]
    assert point(2, 2).vals == [Fraction(-1, 2), 0]
    assert point(3, 3).vals == [Fraction(-2, 3), Fraction(-1, 3), 0]
    assert point(2, 3).tail().vals == [Fraction(-1, 3), 0]
    with pytest.raises(ValueError):
        point(2, 1).tail()


def test_recipes():
    assert parse_recipe(["theta^(1/2)", "θ^(1/3)", "1"]) == [Fraction(1, 2), Fraction(1, 3), 0]
    z = make_omega_point(3, recipe=["theta^(1/2)", "theta^(1/3)", "1"], cfg=cfg_(2), prec=10)
    assert z.fld.ram == 6
    with pytest.raises(ValueError):
        parse_recipe(["theta^x"])
    # equal fractional parts defeat the independence certificate
    with pytest.raises(ValueError):
        make_omega_point(3, recipe=["theta^(1/2)", "theta^(1/2)", "1"], cfg=cfg_(2))
    # |z_1| must stay below q
    with pytest.raises(ValueError):
        make_omega_point(2, recipe=["theta^(3/2)", "1"], cfg=cfg_(2))


def test_last_coordinate_must_be_one():
    fld = SeriesField(cfg_(2), ram=2, prec=10)
    with pytest.raises(ValueError):
        OmegaPoint([fld.one(), theta_root(fld, 1, 2)], fld)


# --- pairing and order -------------------------------------------------------------

def test_pairing_example():
    cfg = cfg_(2)
    z = point(2)
    t, one = APoly.theta(cfg), APoly.constant(cfg, 1)
    s = pairing([t, t + one], z)
    expected = z.fld.from_terms({Fraction(-3, 2): 1, Fraction(-1): 1, Fraction(0): 1})
    assert series_eq_to(s, expected, 15)
    assert s.val == Fraction(-3, 2)
    with pytest.raises(ValueError):
        pairing([t], z)


@pytest.mark.parametrize("q", [2, 3])
@given(data=st.data())
def test_pairing_valuation_is_exact(q, data):
    cfg = cfg_(q)
    z = point(q, 3, prec=15)
    f = [APoly(cfg, data.draw(st.lists(st.integers(0, q - 1), max_size=4))) for _ in range(3)]
    if all(fi.is_zero() for fi in f):
        return
    # distinct fractional parts: no cancellation between coordinates
    expected = min(-fi.deg + v for fi, v in zip(f, z.vals) if not fi.is_zero())
    assert pairing(f, z).val == expected


def test_order_examples():
    cfg2, cfg7 = cfg_(2), cfg_(7)
    one, zero = APoly.constant(cfg2, 1), APoly(cfg2)
    assert succ_gt([one, zero], [zero, one])
    assert not succ_gt([zero, one], [one, zero])
    t7, g = APoly.theta(cfg7), APoly(cfg7, [3, 1])
    assert succ_gt([t7, APoly.constant(cfg7, 5)], [APoly.constant(cfg7, 1), g])
    assert not succ_positive([zero, zero])
    assert not succ_gt([zero, zero], [zero, one])
    # non-monic leading entries are not positive
    assert not succ_positive([APoly.constant(cfg_(3), 2), APoly(cfg_(3))])


def test_order_is_a_strict_partial_order_on_classes():
    cfg = cfg_(2)
    polys = polys_below(2, cfg)
    vecs = [f for f in itertools.product(polys, repeat=2) if succ_positive(f)]
    for f in vecs:
        assert not succ_gt(f, f)
        for g in vecs:
            if succ_gt(f, g):
                assert not succ_gt(g, f)
                assert class_of(f) != class_of(g)
                for h in vecs:
                    if succ_gt(g, h):
                        assert succ_gt(f, h)
            elif not succ_gt(g, f):
                # incomparable vectors share a class
                assert class_of(f) == class_of(g)


# --- multiple Eisenstein series ------------------------------------------------------

def test_eisenstein_empty_index():
    z = point(2)
    assert eisenstein_direct((), z, 2) == z.fld.one()
    assert eisenstein_expansion((), z, 2) == z.fld.one()


@pytest.mark.parametrize("q", [2, 3])
def test_direct_matches_brute_force(q):
    z = point(q, prec=15)
    for a in [(1,), (2,), (1, 1), (2, 1), (1, 2)]:
        d = eisenstein_direct(a, z, 1)
        assert d.prec > 0
        assert series_eq_to(d, eisenstein_brute(a, z, 1), d.prec), a


def test_rank_one_is_zeta():
    fld_z = point(2, 1, prec=15)
    for a in indices_upto(3, 2):
        d = eisenstein_direct(a, fld_z, 5, target=12)
        assert series_eq_to(d, zeta_numeric(a, fld_z.fld), 12)


@pytest.mark.parametrize("q,T", [(2, 20), (3, 12)])
def test_direct_matches_expansion(q, T):
    z = make_omega_point(2, cfg=cfg_(q), prec=T + 10)
    D = max(choose_degree(z, 1, T, direct=True), goss_cutoff(1, z))
    for a in indices_upto(3, 2):
        d = eisenstein_direct(a, z, D, target=T)
        assert series_eq_to(d, eisenstein_expansion(a, z, D, target=T), T), a


def test_direct_stable_under_more_degrees_and_precision():
    T = 10
    z = make_omega_point(2, cfg=cfg_(2), prec=T + 10)
    D = choose_degree(z, 1, T, direct=True)
    hi = make_omega_point(2, cfg=cfg_(2), prec=T + 15)
    for a in [(1,), (2, 1)]:
        base = eisenstein_direct(a, z, D, target=T)
        assert series_eq_to(base, eisenstein_direct(a, z, D + 2, target=T), T)
        assert series_eq_to(base, eisenstein_direct(a, hi, D, target=T).rebase(z.fld), T)


def test_insufficient_degree_is_reported():
    z = point(2, prec=30)
    with pytest.raises(InsufficientDegreeError) as exc:
        eisenstein_direct((1,), z, 1, target=25)
    assert exc.value.achievable < 25


# --- Goss power sums ----------------------------------------------------------------

def test_goss_power_sum_empty_and_bounds():
    z = point(2)
    assert goss_power_sum((), 0, z, 3) == z.fld.one()
    assert goss_power_sum((), 2, z, 3).is_zero()
    assert goss_power_sum((1, 1, 1), 1, z, 3).is_zero()
    with pytest.raises(InsufficientDegreeError):
        goss_power_sum((1,), 4, z, 3)
    with pytest.raises(ValueError):
        goss_power_sum((1,), 0, point(2, 1), 3)


@pytest.mark.parametrize("q", [2, 3])
def test_goss_factorised_matches_direct(q):
    z = point(q, prec=15)
    D = 3
    for a in [(1,), (2,), (1, 1), (2, 1), (1, 1, 1)]:
        for d in range(D + 1):
            f = goss_power_sum(a, d, z, D)
            g = goss_power_sum_direct(a, d, z, D)
            assert series_eq_to(f, g, min(f.prec, g.prec)), (a, d)


@pytest.mark.parametrize("q", [2, 3])
def test_goss_power_sum_size(q):
    # each term of G^{=d}(a) has size q^{-a(d+1/2)} at the default rank-2 point
    z = point(q, prec=20)
    for a in range(1, 4):
        for d in range(3):
            g = goss_power_sum((a,), d, z, 3)
            if not g.is_zero():
                assert g.val >= a * (d + Fraction(1, 2))


def test_goss_sum_below_first_layer():
    z = point(2)
    assert series_eq_to(goss_sum_below((1,), 1, z, 3), goss_power_sum((1,), 0, z, 3), 10)
    assert goss_sum_below((), 5, z, 3) == z.fld.one()


def test_goss_sum_stable_in_cutoff():
    z, D = rank2_point(2, 10)
    g = goss_sum((1,), z, D + 2, target=10)
    assert series_eq_to(g, goss_sum((1,), z, D + 2, target=10, extra=2), 10)
    with pytest.raises(InsufficientDegreeError):
        goss_sum((1,), z, goss_cutoff(1, z) - 1)


@pytest.mark.parametrize("q", [2, 3])
def test_depth_one_product_with_more_precision(q):
    z, D = rank2_point(q, 14, D_floor=3)
    for a, b in [(1, 1), (1, 2), (2, 3)]:
        for d in range(4):
            assert verify_depth1_product(a, b, d, z, D, 14)["pass"], (a, b, d)


def test_depth_one_product_detects_a_wrong_coefficient(monkeypatch):
    import qshuffle.lattice as lat
    monkeypatch.setattr(lat, "delta_terms", lambda a, b, q: ())
    for q in (2, 3):
        z, D = rank2_point(q, 10, D_floor=2)
        # for d >= 1 the correction terms vanish below q^-10 here, so d = 0 is the sensitive layer
        assert not all(verify_depth1_product(a, b, 0, z, D, 10)["pass"]
                       for a in (1, 2, 3) for b in (1, 2, 3))


# --- lattices and Goss polynomials -------------------------------------------------------

def test_empty_lattice():
    fld = SeriesField(cfg_(2), ram=2, prec=10)
    lat = LatticeSpec([], 3, fld)
    alphas, diag = exp_coeffs(lat, 2)
    assert all(a.is_zero() for a in alphas) and diag == 0
    x = theta_root(fld, 1, 2)
    assert series_eq_to(t_function(x, lat), x.inverse(), 9)


def test_lattice_rejects_bad_basis():
    fld = SeriesField(cfg_(2), ram=2, prec=10)
    with pytest.raises(ValueError):
        LatticeSpec([fld.one()], -1, fld)
    with pytest.raises(ValueError):
        LatticeSpec([fld.one(), fld.one()], 1, fld)


@pytest.mark.parametrize("q", [2, 3])
def test_exp_coefficients_converge(q):
    fld = SeriesField(cfg_(q), ram=2, prec=20)
    runs = [exp_coeffs(LatticeSpec([fld.one()], D, fld), 1) for D in (1, 2, 3)]
    # a degree-truncated lattice is an F_q-space, so the product is additive
    assert all(diag == 0 for _, diag in runs)
    a1 = [alphas[0] for alphas, _ in runs]
    assert a1[0].prec <= a1[1].prec <= a1[2].prec
    assert series_eq_to(a1[0], a1[2], a1[0].prec)
    assert series_eq_to(a1[1], a1[2], a1[1].prec)
    if q == 2:
        # over F_2 every nonzero polynomial is monic and alpha_1 = sum 1/lambda = zeta(1)
        assert series_eq_to(a1[2], zeta_numeric((1,), fld), a1[2].prec)


@pytest.mark.parametrize("q", [2, 3])
def test_goss_identity_report(q):
    lat = goss_lattice(q, 15)
    rep = verify_goss_identity(2 * q, lat, [theta_root(lat.fld, 1, 2)], 15)
    assert rep["failures"] == 0
    kinds = {c["check"] for c in rep["checks"]}
    assert kinds == {"identity", "monomial", "frobenius"}


@pytest.mark.parametrize("q", [2, 3, 4])
def test_goss_polys_small_k(q):
    lat = goss_lattice(q, 10)
    fld = lat.fld
    alphas, _ = exp_coeffs(lat, 1)
    assert goss_poly(1, alphas, fld).coeffs == [fld.zero(), fld.one()]
    for k in range(1, q + 1):
        assert goss_poly(k, alphas, fld).is_monomial()
    with pytest.raises(ValueError):
        goss_poly(0, alphas, fld)
    with pytest.raises(ValueError):
        goss_poly(q * q + 1, alphas, fld)


def test_goss_poly_frobenius_q2():
    lat = goss_lattice(2, 12)
    fld = lat.fld
    alphas, _ = exp_coeffs(lat, 2)
    g3 = goss_poly(3, alphas, fld)
    sq = poly_pow(g3, 2, fld)
    g6 = goss_poly(6, alphas, fld).coeffs
    assert len(sq) == len(g6)
    assert all(series_eq_to(u, v, 12) for u, v in zip(sq, g6))


def test_exponential_inverts_t():
    lat = goss_lattice(3, 12)
    x = theta_root(lat.fld, 1, 2)
    one = t_function(x, lat) * exp_product(x, lat)
    assert series_eq_to(one, lat.fld.one(), 10)


def test_lattice_sum_errors():
    lat = goss_lattice(2, 10)
    fld = lat.fld
    with pytest.raises(PoleError):
        lattice_power_sum(fld.one(), lat, 1)
    with pytest.raises(InsufficientDegreeError):
        lattice_power_sum(fld.monomial(-(lat.D + 1) * fld.ram, 1), lat, 1)
