"""Power sums S_d, their truncations S_{<d}, and multiple zeta values."""
from __future__ import annotations

import functools
import itertools

from .arith import APoly, FieldConfig, RatFunc, delta_terms, monic_polys
from .series import PuiseuxSeries, SeriesField, embed_ratfunc, series_sum
from .shuffle import shuffle_R
from .words import Combo, all_words, format_index
from ._report import make_report


@functools.lru_cache(maxsize=None)
def _monic_product(d: int, cfg: FieldConfig):
    polys = monic_polys(d, cfg)
    prod = APoly.constant(cfg, 1)
    for f in polys:
        prod = prod * f
    return polys, prod


@functools.lru_cache(maxsize=None)
def _scalar_power_sum(k: int, d: int, cfg: FieldConfig) -> RatFunc:
    # common denominator P = prod of all monic f of degree d
    polys, prod = _monic_product(d, cfg)
    num = APoly(cfg)
    for f in polys:
        num = num + (prod // f) ** k
    return RatFunc(num, prod ** k)


def power_sum(a: tuple, d: int, cfg: FieldConfig) -> RatFunc:
    """S_d(a) = sum over monic f_1,...,f_m with d = deg f_1 > ... > deg f_m."""
    a = tuple(a)
    if not a:
        raise ValueError("S_d is defined for nonempty indices only")
    if d < 0:
        raise ValueError("d must be >= 0")
    return _power_sum(a, d, cfg)


@functools.lru_cache(maxsize=None)
def _power_sum(a: tuple, d: int, cfg: FieldConfig) -> RatFunc:
    if d < len(a) - 1:
        return RatFunc.zero(cfg)
    head = _scalar_power_sum(a[0], d, cfg)
    if len(a) == 1:
        return head
    return head * power_sum_below(a[1:], d, cfg)


def power_sum_below(a: tuple, d: int, cfg: FieldConfig) -> RatFunc:
    """S_{<d}(a) = S_0(a) + ... + S_{d-1}(a); equals 1 for the empty index."""
    a = tuple(a)
    if not a:
        return RatFunc.one(cfg)
    return _power_sum_below(a, d, cfg)


@functools.lru_cache(maxsize=None)
def _power_sum_below(a: tuple, d: int, cfg: FieldConfig) -> RatFunc:
    total = RatFunc.zero(cfg)
    for i in range(len(a) - 1, d):
        total = total + _power_sum(a, i, cfg)
    return total


def power_sum_direct(a: tuple, d: int, cfg: FieldConfig) -> RatFunc:
    """Unfactorised enumeration over every admissible chain (slow oracle)."""
    a = tuple(a)
    total = RatFunc.zero(cfg)
    m = len(a)
    one = APoly.constant(cfg, 1)
    for rest in itertools.combinations(range(d - 1, -1, -1), m - 1):
        degs = (d,) + rest
        for fs in itertools.product(*[monic_polys(k, cfg) for k in degs]):
            den = one
            for f, e in zip(fs, a):
                den = den * f ** e
            total = total + RatFunc(one, den)
    return total


def s_hat_below(c: Combo, d: int, cfg: FieldConfig) -> RatFunc:
    """F_p-linear extension of x_a -> S_{<d}(a), with 1 -> 1."""
    if not c.is_pure_x():
        raise ValueError("s_hat_below is defined on R only")
    total = RatFunc.zero(cfg)
    for w, v in c.terms.items():
        total = total + power_sum_below(w.x, d, cfg) * RatFunc.from_int(cfg, v)
    return total


def power_sum_val_bound(k: int, d: int, q: int) -> int:
    """Certified lower bound on val(S_d(k)) (and on val(S_d(a)) when a_1 = k).

    Expanding f^{-k} around theta^d and summing over the lower coefficients,
    every surviving monomial needs each of them raised to a positive multiple
    of q-1, which forces at least (q-1)(1 + ... + d) extra powers of 1/theta.
    """
    return d * k + (q - 1) * d * (d + 1) // 2


def zeta_cutoff(k: int, prec, q: int) -> int:
    """Largest d whose S_d(a) (with a_1 = k) may still be visible at precision prec."""
    d = 0
    while power_sum_val_bound(k, d + 1, q) <= prec:
        d += 1
    return d


def zeta_numeric(a: tuple, fld: SeriesField, cfg: FieldConfig | None = None,
                 extra: int = 0) -> PuiseuxSeries:
    """zeta_A(a) in K_infinity, exact through fld.prec.

    Terms beyond the cutoff have valuation above the working precision, so the
    truncated sum is exact to fld.prec.  ``extra`` adds further terms (used to
    check stability).
    """
    a = tuple(a)
    cfg = cfg or fld.cfg
    if not a:
        return fld.one()
    dmax = zeta_cutoff(a[0], fld.prec, cfg.q) + extra
    return series_sum((embed_ratfunc(power_sum(a, d, cfg), fld) for d in range(dmax + 1)), fld)


def zeta_partial(a: tuple, D: int, fld: SeriesField) -> PuiseuxSeries:
    """embed(sum_{d <= D} S_d(a)) without any cutoff logic."""
    return series_sum((embed_ratfunc(power_sum(a, d, fld.cfg), fld) for d in range(D + 1)), fld)


# --- verification harnesses ---------------------------------------------------------

def verify_chen(q_list, max_weight: int, max_d: int) -> dict:
    """S_d(a)S_d(b) = S_d(a+b) + sum Delta S_d(i, j) exactly, over a+b <= max_weight."""
    checks = []
    for q in q_list:
        cfg = FieldConfig.from_q(q)
        for a in range(1, max_weight):
            for b in range(1, max_weight - a + 1):
                for d in range(max_d + 1):
                    lhs = power_sum((a,), d, cfg) * power_sum((b,), d, cfg)
                    rhs = power_sum((a + b,), d, cfg)
                    for i, j, dl in delta_terms(a, b, q):
                        rhs = rhs + power_sum((i, j), d, cfg) * RatFunc.from_int(cfg, dl)
                    ok = lhs == rhs
                    entry = {"q": q, "a": a, "b": b, "d": d, "pass": ok}
                    if not ok:
                        entry.update(lhs=str(lhs), rhs=str(rhs))
                    checks.append(entry)
    return make_report("chen", checks, qs=list(q_list), maxWeight=max_weight, maxD=max_d)


def indices_upto(max_weight: int, max_depth: int, include_empty: bool = False) -> list[tuple]:
    out = [()] if include_empty else []
    for w in range(1, max_weight + 1):
        out.extend(u.x for u in all_words(w, pure_x=True) if len(u.x) <= max_depth)
    return out


def verify_shi(q: int, max_weight: int, max_depth: int, max_d: int) -> dict:
    """S_{<d}-image of x_a * x_b equals S_{<d}(a) S_{<d}(b) for wt(a)+wt(b) <= max_weight."""
    cfg = FieldConfig.from_q(q)
    p = cfg.p
    idx = indices_upto(max_weight, max_depth, include_empty=True)
    checks = []
    for a in idx:
        for b in idx:
            if sum(a) + sum(b) > max_weight:
                continue
            prod = shuffle_R(Combo.word(p, ((), a)), Combo.word(p, ((), b)), q)
            for d in range(1, max_d + 1):
                lhs = s_hat_below(prod, d, cfg)
                rhs = power_sum_below(a, d, cfg) * power_sum_below(b, d, cfg)
                ok = lhs == rhs
                entry = {"a": format_index(a), "b": format_index(b), "d": d, "pass": ok}
                if not ok:
                    entry.update(lhs=str(lhs), rhs=str(rhs))
                checks.append(entry)
    return make_report("shi", checks, q=q, maxWeight=max_weight, maxDepth=max_depth, maxD=max_d)


def zeta_of_combo(c: Combo, fld: SeriesField) -> PuiseuxSeries:
    """F_p-linear extension of x_a -> zeta_A(a)."""
    parts = []
    for w, v in c.terms.items():
        parts.append(zeta_numeric(w.x, fld).scale(fld.embed_const(fld.cfg.from_int(v))))
    return series_sum(parts, fld) if parts else fld.zero()


def verify_zeta_shuffle(q: int, max_weight: int, prec: int = 20) -> dict:
    """zeta(a) zeta(b) against the zeta-image of x_a * x_b, digits up to prec."""
    from .series import series_eq_to
    cfg = FieldConfig.from_q(q)
    fld = SeriesField(cfg, prec=prec)
    idx = indices_upto(max_weight - 1, max_weight)
    checks = []
    for a in idx:
        for b in idx:
            if sum(a) + sum(b) > max_weight:
                continue
            lhs = zeta_numeric(a, fld) * zeta_numeric(b, fld)
            prod = shuffle_R(Combo.word(cfg.p, ((), a)), Combo.word(cfg.p, ((), b)), q)
            rhs = zeta_of_combo(prod, fld)
            ok = series_eq_to(lhs, rhs, prec)
            checks.append({"a": format_index(a), "b": format_index(b), "pass": ok})
    return make_report("zeta-shuffle", checks, q=q, maxWeight=max_weight, prec=prec)
