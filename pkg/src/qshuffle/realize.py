"""Realisation of mixed words by Eisenstein and Goss data, and the end-to-end
homomorphism checks."""
from __future__ import annotations

from dataclasses import dataclass, field

from .lattice import (OmegaPoint, eisenstein_expansion, goss_power_sum, goss_sum,
                      goss_sum_below, lower_eval)
from .series import PuiseuxSeries, series_eq_to, series_sum
from .shuffle import e_hat, shuffle_E, shuffle_R
from .words import Combo, MixedWord, format_combo, format_index
from ._report import make_report


@dataclass
class RealizationContext:
    """Rank r >= 2 evaluation data: the point z, degree bound D and lower evaluator."""

    z: OmegaPoint
    D: int
    _memo: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.z.r < 2:
            raise ValueError("realisation needs rank >= 2")

    @property
    def r(self) -> int:
        return self.z.r

    @property
    def fld(self):
        return self.z.fld

    @property
    def p(self) -> int:
        return self.fld.cfg.p

    def lower(self, a: tuple) -> PuiseuxSeries:
        """E_{r-1}(a; z')."""
        a = tuple(a)
        if not a:
            return self.fld.one()
        return lower_eval(a, self.z, self.D)

    def coeff(self, c: int) -> int:
        return self.fld.embed_const(self.fld.cfg.from_int(c))


def _combine(c: Combo, ctx: RealizationContext, fn) -> PuiseuxSeries:
    parts = [fn(w).scale(ctx.coeff(v)) for w, v in c.terms.items()]
    return series_sum(parts, ctx.fld) if parts else ctx.fld.zero()


def g_hat_eq(c: Combo, d: int, ctx: RealizationContext) -> PuiseuxSeries:
    """G^{=d}(x_a y_b) = E_{r-1}(a; z') G_r^{=d}(b; z), extended linearly."""
    def word(w: MixedWord):
        g = goss_power_sum(w.y, d, ctx.z, ctx.D)
        if g.is_zero() and not w.y:
            return g
        return ctx.lower(w.x) * g
    return _combine(c, ctx, word)


def g_hat_below(c: Combo, d: int, ctx: RealizationContext) -> PuiseuxSeries:
    """sum_{i<d} G^{=i}, evaluated per word via G^{<d}(y_b) = G_r^{<d}(b; z)."""
    def word(w: MixedWord):
        return ctx.lower(w.x) * goss_sum_below(w.y, d, ctx.z, ctx.D)
    return _combine(c, ctx, word)


def g_hat(c: Combo, ctx: RealizationContext, extra: int = 0) -> PuiseuxSeries:
    """The limit d -> infinity: E_{r-1}(a; z') G_r(b; z) per word.

    ``extra`` pushes the Goss cutoff further out, for the stability re-check.
    """
    def word(w: MixedWord):
        return ctx.lower(w.x) * goss_sum(w.y, ctx.z, ctx.D, extra=extra)
    return _combine(c, ctx, word)


def e_hat_realize(c: Combo, ctx: RealizationContext, extra: int = 0) -> PuiseuxSeries:
    """E-hat_r = G-hat_r composed with e-hat."""
    return g_hat(e_hat(c), ctx, extra)


def eisenstein(a: tuple, ctx: RealizationContext) -> PuiseuxSeries:
    return eisenstein_expansion(tuple(a), ctx.z, ctx.D)


def verify_ghat_hom(pairs, dmax: int, ctx: RealizationContext, target) -> dict:
    """G^{<d}(a * b) = G^{<d}(a) G^{<d}(b) for each pair of combos and 1 <= d <= dmax."""
    q = ctx.fld.cfg.q
    checks = []
    for a, b in pairs:
        prod = shuffle_E(a, b, q)
        for d in range(1, dmax + 1):
            lhs = g_hat_below(prod, d, ctx)
            rhs = g_hat_below(a, d, ctx) * g_hat_below(b, d, ctx)
            checks.append({"a": format_combo(a), "b": format_combo(b), "d": d,
                           "pass": series_eq_to(lhs, rhs, target)})
    return make_report("ghat", checks, q=q, r=ctx.r, target=str(target))


def verify_main(a: tuple, b: tuple, ctx: RealizationContext, target) -> dict:
    """E_r(a) E_r(b) against E-hat_r(x_a * x_b)."""
    q = ctx.fld.cfg.q
    p = ctx.p
    lhs = eisenstein(a, ctx) * eisenstein(b, ctx)
    prod = shuffle_R(Combo.word(p, ((), tuple(a))), Combo.word(p, ((), tuple(b))), q)
    rhs = e_hat_realize(prod, ctx)
    ok = series_eq_to(lhs, rhs, target)
    # a posteriori: two more degrees and two more Goss layers must not move
    # anything below target
    wider = RealizationContext(ctx.z, ctx.D + 2)
    stable = ok and series_eq_to(rhs, e_hat_realize(prod, wider, extra=2), target)
    cut = ctx.fld.scaled(target)
    entry = {"a": format_index(a), "b": format_index(b), "pass": ok and stable,
             "stable": stable, "prec": str(min(lhs.prec, rhs.prec)),
             "lhs": lhs.truncate(cut).to_triples(), "rhs": rhs.truncate(cut).to_triples()}
    return make_report("verify-main", [entry], q=q, r=ctx.r, target=str(target))
