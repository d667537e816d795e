"""Points of the Drinfeld space, lattice sums, Goss sums and Goss polynomials.

Every lattice sum is truncated to vectors whose entries have degree <= D and
is returned with a certified ``known_prec``: all digits up to that exponent are
provably those of the infinite sum.  Write L(x) = -val(x) (so |x| = q^L(x)).
At a point whose coordinates have pairwise distinct fractional parts of L,
L(<f, z>) = max_i (deg f_i + L(z_i)) exactly, which is what the bounds below
rely on.
"""
from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction

from .arith import delta_terms, monic_polys, polys_below
from .series import (PrecisionError, PuiseuxSeries, SeriesField, embed_poly_array,
                     series_eq_to, series_sum, theta_root)
from .sums import power_sum_val_bound, zeta_numeric
from ._report import make_report


class InsufficientDegreeError(PrecisionError):
    """The degree bound D cannot certify the requested precision."""

    def __init__(self, msg, achievable=None):
        super().__init__(msg, floor=achievable)
        self.achievable = achievable


class PoleError(ArithmeticError):
    pass


# --- points --------------------------------------------------------------------------

class OmegaPoint:
    """(z_1, ..., z_{r-1}, 1) with distinct fractional parts of the valuations."""

    def __init__(self, coords, fld: SeriesField):
        coords = list(coords)
        if not coords:
            raise ValueError("rank must be >= 1")
        if coords[-1] != fld.one():
            raise ValueError("last coordinate must be exactly 1")
        Ls = []
        for z in coords:
            if z.is_zero():
                raise ValueError("coordinates must be nonzero")
            Ls.append(-z.val)
        fracs = [L - math.floor(L) for L in Ls]
        if len(set(fracs)) != len(fracs):
            raise ValueError("independence certificate failed: valuations collide mod 1")
        if any(not (0 <= L < 1) for L in Ls):
            raise ValueError("coordinates must satisfy 1 <= |z_i| < q")
        self.coords = coords
        self.fld = fld
        self.Ls = Ls
        self._cache: dict = {}

    @property
    def r(self) -> int:
        return len(self.coords)

    @property
    def vals(self) -> list[Fraction]:
        return [-L for L in self.Ls]

    def tail(self) -> "OmegaPoint":
        """z' = (z_2, ..., z_r)."""
        if self.r < 2:
            raise ValueError("rank-1 point has no tail")
        key = ("tail",)
        if key not in self._cache:
            self._cache[key] = OmegaPoint(self.coords[1:], self.fld)
        return self._cache[key]

    def with_field(self, fld: SeriesField) -> "OmegaPoint":
        return OmegaPoint([z.rebase(fld) if fld.P <= self.fld.P else _lift(z, fld)
                           for z in self.coords], fld)

    def __repr__(self):
        return "OmegaPoint(" + ", ".join(str(z).rsplit(" + O(", 1)[0] for z in self.coords) + ")"


def _lift(z: PuiseuxSeries, fld: SeriesField) -> PuiseuxSeries:
    # monomial coordinates are exact and can be moved to a finer precision
    if len(z.c) == 1 and z.known_prec == z.fld.P:
        return fld.monomial(z.start, int(z.c[0]))
    raise PrecisionError("cannot raise the precision of a non-monomial coordinate")


_RECIPE = re.compile(r"^\s*(?:1|theta\^\(?(\d+)(?:/(\d+))?\)?|θ\^\(?(\d+)(?:/(\d+))?\)?)\s*$")


def parse_recipe(items) -> list[Fraction]:
    """["theta^(1/2)", "1"] -> [1/2, 0]."""
    out = []
    for s in items:
        m = _RECIPE.match(s)
        if not m:
            raise ValueError(f"bad coordinate {s!r}; expected theta^(a/b)")
        g = [x for x in m.groups() if x is not None]
        out.append(Fraction(0) if not g else Fraction(int(g[0]), int(g[1]) if len(g) > 1 else 1))
    return out


def make_omega_point(r: int, fld: SeriesField | None = None, recipe=None, *, cfg=None,
                     prec=30) -> OmegaPoint:
    """Default point z_i = theta^((r-i)/r); ``recipe`` gives other exponents of theta."""
    if r < 1:
        raise ValueError("rank must be >= 1")
    if recipe is None:
        exps = [Fraction(r - i, r) for i in range(1, r + 1)]
    else:
        exps = [Fraction(e) for e in (parse_recipe(recipe) if isinstance(recipe[0], str) else recipe)]
        if len(exps) != r:
            raise ValueError("recipe length must equal the rank")
    if fld is None:
        ram = math.lcm(*[e.denominator for e in exps])
        fld = SeriesField(cfg, ram=ram, prec=prec)
    coords = [theta_root(fld, e.numerator, e.denominator) for e in exps]
    return OmegaPoint(coords, fld)


# --- pairing and the order ----------------------------------------------------------------

def pairing(f, z: OmegaPoint) -> PuiseuxSeries:
    """<f, z> = sum f_i z_i."""
    if len(f) != z.r:
        raise ValueError("vector length must equal the rank")
    fld = z.fld
    parts = [embed_poly_array(fi.c, fld) * zi for fi, zi in zip(f, z.coords) if not fi.is_zero()]
    return series_sum(parts, fld) if parts else fld.zero()


def _lead_index(f) -> int | None:
    for i, fi in enumerate(f):
        if not fi.is_zero():
            return i
    return None


def succ_positive(f) -> bool:
    """<f, z> > 0: the first nonzero entry is monic."""
    for i in range(len(f)):
        if all(fj.is_zero() for fj in f[:i]) and f[i].is_monic():
            return True
    return False


def succ_gt(f, g) -> bool:
    """<f, z> > <g, z> in the partial order (both must be > 0)."""
    if not (succ_positive(f) and succ_positive(g)):
        return False
    for i in range(len(f)):
        if not all(h.is_zero() for h in list(f[:i]) + list(g[:i])):
            break
        if f[i].is_monic() and g[i].is_monic() and f[i].deg > g[i].deg:
            return True
        if f[i].is_monic() and g[i].is_zero():
            return True
    return False


def class_of(f) -> tuple[int, int]:
    """(i, deg f_i) for the leading index i (1-based); vectors in one class are incomparable."""
    i = _lead_index(f)
    return i + 1, int(f[i].deg)


# --- certified bounds ----------------------------------------------------------------

def _count_below(y: Fraction, q: int) -> int:
    """Number of polynomials (incl. 0) of degree < y."""
    return q ** max(0, math.ceil(y))


def shell_bound(a: int, Ls_sub, D: int, q: int) -> Fraction:
    """Lower bound on the valuation of sum_{v outside V_D} 1/(x+v)^a, L(x) < D+1.

    V_D is the set of sublattice vectors with entries of degree <= D.  Writing
    a far vector as h + v with v in V_D, summing over v kills every term of the
    binomial expansion in which some basis direction of V_D appears with an
    exponent not a positive multiple of q-1.
    """
    m = D + 1
    extra = sum((m - d - L) for L in Ls_sub for d in range(m))
    return Fraction(a * m) + (q - 1) * extra


def exp_bound(Lx: Fraction, Ls_sub, q: int) -> Fraction:
    """L(exp_Lambda(x)) for the sublattice with coordinate sizes Ls_sub.

    The sum over the whole sublattice of 1/(x+lambda)^a is G_a(1/exp(x)) and
    |G_a(t)| <= |t| for |t| <= 1, so this bounds every omitted leading class.
    """
    total = Fraction(Lx)
    for k, Lk in enumerate(Ls_sub):
        d = 0
        while d + Lk < Lx:
            cnt = (q - 1) * q ** d
            for k2, L2 in enumerate(Ls_sub):
                if k2 != k:
                    cnt *= _count_below(d + Lk - L2, q)
            total += (Lx - d - Lk) * cnt
            d += 1
    return total


def _kp_from_bound(B: Fraction, fld: SeriesField) -> int:
    return min(fld.P, math.ceil(B * fld.ram) - 1)


def _certify(s: PuiseuxSeries, B: Fraction, target=None, what="sum") -> PuiseuxSeries:
    return _require(s.truncate(_kp_from_bound(B, s.fld)), target, what)


def _require(s: PuiseuxSeries, target, what: str) -> PuiseuxSeries:
    if target is not None and s.prec < Fraction(target):
        raise InsufficientDegreeError(
            f"insufficient degree bound for {what}: certified to {s.prec}, requested {target}",
            achievable=s.prec)
    return s


# --- class sums ----------------------------------------------------------------------

def _poly_series(z: OmegaPoint, i: int, polys) -> list[PuiseuxSeries]:
    zi = z.coords[i]
    return [embed_poly_array(f.c, z.fld) * zi for f in polys]


def class_sums(z: OmegaPoint, i: int, n: int, D: int, exps) -> dict[int, PuiseuxSeries]:
    """For the class (i+1, n): {a: sum 1/<f, z>^a} over f with f_1..f_i = 0,
    f_{i+1} monic of degree n and later entries of degree <= D (uncertified)."""
    exps = tuple(sorted(set(exps)))
    key = ("class", i, n, D, z.fld.P)
    cache = z._cache.setdefault(key, {})
    missing = [a for a in exps if a not in cache]
    if missing:
        fld = z.fld
        cfg = fld.cfg
        amax = max(missing)
        heads = _poly_series(z, i, monic_polys(n, cfg))
        tails = [fld.zero()]
        for k in range(i + 1, z.r):
            tk = _poly_series(z, k, polys_below(D + 1, cfg))
            tails = [t + u for t in tails for u in tk]
        acc = {a: [] for a in missing}
        for h in heads:
            for t in tails:
                x = h + t
                inv = x.inverse()
                pw = inv
                for a in range(1, amax + 1):
                    if a in acc:
                        acc[a].append(pw)
                    if a < amax:
                        pw = pw * inv
        for a in missing:
            cache[a] = series_sum(acc[a], fld)
    return {a: cache[a] for a in exps}


# --- multiple Eisenstein series, direct ---------------------------------------------------

def direct_bound(a: tuple, z: OmegaPoint, D: int) -> Fraction:
    q = z.fld.cfg.q
    amin = min(a)
    r = z.r
    bounds = [Fraction(power_sum_val_bound(amin, D + 1, q))]
    for i in range(r - 1):
        sub = z.Ls[i + 1:]
        bounds.append(shell_bound(amin, sub, D, q))
        bounds.append(exp_bound(D + 1 + z.Ls[i], sub, q))
    return min(bounds)


def eisenstein_direct(a: tuple, z: OmegaPoint, D: int, target=None) -> PuiseuxSeries:
    """E_r(a; z) summed over chains f_1 > ... > f_m > 0 with entries of degree <= D.

    The order only compares leading positions and leading degrees, so chains
    are strictly decreasing sequences of classes (i, n) and the sum factors
    through per-class sums.
    """
    a = tuple(a)
    fld = z.fld
    if not a:
        return fld.one()
    r = z.r
    # classes in decreasing order: (1, D), ..., (1, 0), (2, D), ..., (r, 0)
    classes = [(i, n) for i in range(r) for n in range(D, -1, -1)]
    sums = {c: class_sums(z, c[0], c[1], D, a) for c in classes}
    m = len(a)
    # F[c] = sum over chains starting at class c for the suffix a[k:]
    F = {c: sums[c][a[m - 1]] for c in classes}
    for k in range(m - 2, -1, -1):
        G = {}
        below = fld.zero()
        for c in reversed(classes):
            G[c] = sums[c][a[k]] * below
            below = below + F[c]
        F = G
    total = series_sum(F.values(), fld)
    return _certify(total, direct_bound(a, z, D), target, "eisenstein_direct")


def eisenstein_brute(a: tuple, z: OmegaPoint, D: int) -> PuiseuxSeries:
    """Chain enumeration with succ_gt over all vectors (tiny D only; test oracle)."""
    fld = z.fld
    cfg = fld.cfg
    polys = polys_below(D + 1, cfg)
    vecs = [f for f in itertools.product(polys, repeat=z.r) if succ_positive(f)]
    vals = {id(f): pairing(f, z).inverse() for f in vecs}

    def rec(k, prev):
        if k == len(a):
            return fld.one()
        parts = []
        for f in vecs:
            if prev is None or succ_gt(prev, f):
                parts.append((vals[id(f)] ** a[k]) * rec(k + 1, f))
        return series_sum(parts, fld)

    return rec(0, None)


# --- Goss power sums and multiple Goss sums ------------------------------------------------

def goss_bound(a: tuple, z: OmegaPoint, D: int) -> Fraction:
    """Certified precision of G^{=d}(a; z) for d <= D from the shell bound."""
    return shell_bound(min(a), z.Ls[1:], D, z.fld.cfg.q)


def goss_power_sum(a: tuple, d: int, z: OmegaPoint, D: int, target=None) -> PuiseuxSeries:
    """G_r^{=d}(a; z) via G^{=d}(a) = G^{=d}(a_1) G^{<d}(a^(1))."""
    a = tuple(a)
    fld = z.fld
    if z.r < 2:
        raise ValueError("Goss sums need rank >= 2")
    if not a:
        return fld.one() if d == 0 else fld.zero()
    if d > D:
        raise InsufficientDegreeError(f"d={d} exceeds the degree bound D={D}")
    key = ("G=", a, d, D, fld.P)
    if key not in z._cache:
        if d < len(a) - 1:
            val = fld.zero()
        else:
            head = class_sums(z, 0, d, D, (a[0],))[a[0]]
            val = head if len(a) == 1 else head * goss_sum_below(a[1:], d, z, D)
            val = _certify(val, goss_bound(a, z, D))
        z._cache[key] = val
    return _require(z._cache[key], target, "goss_power_sum")


def goss_sum_below(a: tuple, d: int, z: OmegaPoint, D: int, target=None) -> PuiseuxSeries:
    """G_r^{<d}(a; z); equals 1 for the empty index."""
    a = tuple(a)
    fld = z.fld
    if not a:
        return fld.one()
    parts = [goss_power_sum(a, i, z, D) for i in range(len(a) - 1, d)]
    s = series_sum(parts, fld) if parts else fld.zero()
    return _require(s, target, "goss_sum_below")


def goss_cutoff(a1: int, z: OmegaPoint, prec=None) -> int:
    """Last d whose G^{=d} can be visible at precision prec (default fld.prec)."""
    prec = z.fld.prec if prec is None else Fraction(prec)
    q = z.fld.cfg.q
    d = 0
    while exp_bound(d + 1 + z.Ls[0], z.Ls[1:], q) <= prec:
        d += 1
    return d


def goss_sum(a: tuple, z: OmegaPoint, D: int, target=None, extra: int = 0) -> PuiseuxSeries:
    """Multiple Goss sum G_r(a; z) with a certified d-cutoff."""
    a = tuple(a)
    fld = z.fld
    if not a:
        return fld.one()
    dstar = goss_cutoff(a[0], z) + extra
    if dstar > D:
        raise InsufficientDegreeError(
            f"Goss sum needs degree bound >= {dstar}, got D={D}")
    s = goss_sum_below(a, dstar + 1, z, D)
    B = exp_bound(dstar + 1 + z.Ls[0], z.Ls[1:], fld.cfg.q)
    return _certify(s, B, target, "goss_sum")


def goss_power_sum_direct(a: tuple, d: int, z: OmegaPoint, D: int) -> PuiseuxSeries:
    """Unfactorised chain enumeration of the Goss power sum (test oracle)."""
    a = tuple(a)
    fld = z.fld
    m = len(a)
    parts = []
    for rest in itertools.combinations(range(d - 1, -1, -1), m - 1):
        degs = (d,) + rest
        factors = [class_sums(z, 0, n, D, (k,))[k] for n, k in zip(degs, a)]
        prod = fld.one()
        for f in factors:
            prod = prod * f
        parts.append(prod)
    s = series_sum(parts, fld) if parts else fld.zero()
    return _certify(s, goss_bound(a, z, D))


# --- lattices, exponential, Goss polynomials ------------------------------------------------------

@dataclass
class LatticeSpec:
    """The A-lattice spanned by ``basis``, enumerated with entries of degree <= D."""

    basis: list
    D: int
    fld: SeriesField
    _pts: list | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.D < 0:
            raise ValueError("D must be >= 0")
        self.Ls = [-b.val for b in self.basis]
        fr = [L - math.floor(L) for L in self.Ls]
        if len(set(fr)) != len(fr) or any(not (0 <= L < 1) for L in self.Ls):
            raise ValueError("lattice basis needs distinct fractional valuations in (-1, 0]")

    @classmethod
    def of_point(cls, z: OmegaPoint, D: int) -> "LatticeSpec":
        return cls(list(z.coords), D, z.fld)

    def points(self) -> list[PuiseuxSeries]:
        """All lattice vectors with entries of degree <= D (0 first)."""
        if self._pts is None:
            cfg = self.fld.cfg
            pts = [self.fld.zero()]
            for b in self.basis:
                mult = [embed_poly_array(f.c, self.fld) * b for f in polys_below(self.D + 1, cfg)]
                pts = [p + u for p in pts for u in mult]
            self._pts = pts
        return self._pts


def exp_coeffs(lat: LatticeSpec, imax: int, cap: int = 4096):
    """Coefficients alpha_1..alpha_imax of x * prod(1 - x/lambda) over the truncated lattice.

    Returns (alphas, diag) where diag is the largest |coefficient| among the
    non-q-power terms up to degree q^imax (zero for an exact F_q-linear product).
    """
    fld = lat.fld
    q = fld.cfg.q
    top = q ** imax
    if top > cap:
        raise ValueError(f"q^imax = {top} exceeds the cap {cap}")
    coeffs = [fld.zero()] * (top + 1)
    coeffs[1] = fld.one()
    for lam in lat.points()[1:]:
        mu = -lam.inverse()
        new = list(coeffs)
        for j in range(2, top + 1):
            if not coeffs[j - 1].is_zero():
                new[j] = coeffs[j] + mu * coeffs[j - 1]
        coeffs = new
    alphas = [coeffs[q ** i] for i in range(1, imax + 1)]
    if lat.basis:
        m = lat.D + 1
        Lmin = m + min(lat.Ls)
        # L(e_V(lambda)) for the smallest far lambda
        Lv = Lmin + sum((Lmin - L) for L in _point_sizes(lat) if L is not None)
        alphas = [_certify(a, (q - 1) * Lv) for a in alphas]
    diag = 0.0
    for j in range(2, top + 1):
        if not _is_q_power(j, q):
            diag = max(diag, coeffs[j].abs())
    return alphas, diag


def _point_sizes(lat: LatticeSpec):
    """L of every nonzero truncated lattice vector (None for zero), symbolically."""
    q = lat.fld.cfg.q
    degs = [None] + list(range(lat.D + 1))
    counts = [1] + [(q - 1) * q ** d for d in range(lat.D + 1)]
    out = []
    for combo in itertools.product(range(len(degs)), repeat=len(lat.Ls)):
        sizes = [degs[c] + L for c, L in zip(combo, lat.Ls) if degs[c] is not None]
        n = 1
        for c in combo:
            n *= counts[c]
        if sizes:
            out.extend([max(sizes)] * n)
    return out


def _is_q_power(j: int, q: int) -> bool:
    while j % q == 0:
        j //= q
    return j == 1


@dataclass
class GossPoly:
    k: int
    coeffs: list  # coeffs[j] multiplies t^j

    def __call__(self, t: PuiseuxSeries) -> PuiseuxSeries:
        acc = t.fld.zero()
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def is_monomial(self) -> bool:
        return all(c.is_zero() for c in self.coeffs[:-1]) and self.coeffs[-1] == self.coeffs[-1].fld.one()


def goss_poly(k: int, alphas, fld: SeriesField) -> GossPoly:
    """G_k via G_k = t (G_{k-1} + alpha_1 G_{k-q} + alpha_2 G_{k-q^2} + ...)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    q = fld.cfg.q
    need = 0
    while q ** (need + 1) < k:
        need += 1
    if len(alphas) < need:
        raise ValueError(f"G_{k} needs {need} exponential coefficients, got {len(alphas)}")
    polys = {0: []}
    for n in range(1, k + 1):
        acc = list(polys[n - 1])
        i = 1
        while q ** i < n:
            prev = polys[n - q ** i]
            acc = _padd(acc, [alphas[i - 1] * c for c in prev], fld)
            i += 1
        polys[n] = [fld.zero()] + acc if n > 1 else [fld.zero(), fld.one()]
    return GossPoly(k, polys[k])


def _padd(u, v, fld):
    n = max(len(u), len(v))
    return [(u[i] if i < len(u) else fld.zero()) + (v[i] if i < len(v) else fld.zero())
            for i in range(n)]


def poly_pow(g: GossPoly, e: int, fld: SeriesField) -> list:
    res = [fld.one()]
    for _ in range(e):
        out = [fld.zero()] * (len(res) + len(g.coeffs) - 1)
        for i, c in enumerate(res):
            for j, d in enumerate(g.coeffs):
                if not c.is_zero() and not d.is_zero():
                    out[i + j] = out[i + j] + c * d
        res = out
    return res


def lattice_power_sum(x: PuiseuxSeries, lat: LatticeSpec, k: int) -> PuiseuxSeries:
    """sum over truncated lattice points of 1/(x+lambda)^k, certified."""
    fld = lat.fld
    Lx = -x.val
    if Lx >= lat.D + 1:
        raise InsufficientDegreeError(f"|x| too large for D={lat.D}")
    parts = []
    for lam in lat.points():
        y = x + lam
        if y.is_zero() or y.val > fld.prec:
            raise PoleError("evaluation point within precision of a lattice point")
        parts.append(y.inverse() ** k)
    s = series_sum(parts, fld)
    if not lat.basis:
        return s
    return _certify(s, shell_bound(k, lat.Ls, lat.D, fld.cfg.q))


def t_function(x: PuiseuxSeries, lat: LatticeSpec) -> PuiseuxSeries:
    """t_Lambda(x) = sum 1/(x+lambda) = 1/exp_Lambda(x)."""
    return lattice_power_sum(x, lat, 1)


def exp_product(x: PuiseuxSeries, lat: LatticeSpec) -> PuiseuxSeries:
    """x * prod(1 - x/lambda) over the truncated lattice (uncertified tail)."""
    acc = x
    for lam in lat.points()[1:]:
        acc = acc * (1 - x * lam.inverse())
    return acc


def verify_goss_identity(kmax: int, lat: LatticeSpec, xs, target) -> dict:
    """G_k(t(x)) against the truncated lattice sum, plus G_k = t^k (k <= q) and G_pk = G_k^p."""
    fld = lat.fld
    q, p = fld.cfg.q, fld.cfg.p
    imax = 0
    while q ** (imax + 1) < kmax:
        imax += 1
    alphas, _ = exp_coeffs(lat, max(imax, 1))
    polys = {k: goss_poly(k, alphas, fld) for k in range(1, kmax + 1)}
    checks = []
    for xi, x in enumerate(xs):
        t = t_function(x, lat)
        for k in range(1, kmax + 1):
            lhs = polys[k](t)
            rhs = lattice_power_sum(x, lat, k)
            checks.append({"check": "identity", "x": xi, "k": k,
                           "pass": series_eq_to(lhs, rhs, target)})
    for k in range(1, min(q, kmax) + 1):
        checks.append({"check": "monomial", "k": k, "pass": polys[k].is_monomial()})
    for k in range(1, kmax // p + 1):
        pw = poly_pow(polys[k], p, fld)
        big = polys[p * k].coeffs
        ok = len(pw) == len(big) and all(series_eq_to(u, v, target) for u, v in zip(pw, big))
        checks.append({"check": "frobenius", "k": k, "pass": ok})
    return make_report("goss-identity", checks, q=q, kmax=kmax, target=str(target))


# --- expansion and the depth-one product ------------------------------------------------

def lower_eval(a: tuple, z: OmegaPoint, D: int) -> PuiseuxSeries:
    """E_{r-1}(a; z'): zeta values when r = 2, the expansion otherwise."""
    zt = z.tail()
    if zt.r == 1:
        key = ("zeta", tuple(a), z.fld.P)
        if key not in z._cache:
            z._cache[key] = zeta_numeric(a, z.fld)
        return z._cache[key]
    return eisenstein_expansion(a, zt, D)


def eisenstein_expansion(a: tuple, z: OmegaPoint, D: int, target=None) -> PuiseuxSeries:
    """E_r(a; z) = E_{r-1}(a; z') + sum_i E_{r-1}(a^(i); z') G_r(a_(i); z)."""
    a = tuple(a)
    fld = z.fld
    if not a:
        return fld.one()
    if z.r == 1:
        return zeta_numeric(a, fld)
    key = ("Eexp", a, D, fld.P)
    if key not in z._cache:
        parts = [lower_eval(a, z, D)]
        for i in range(1, len(a) + 1):
            parts.append(lower_eval(a[i:], z, D) * goss_sum(a[:i], z, D))
        z._cache[key] = series_sum(parts, fld)
    return _require(z._cache[key], target, "eisenstein_expansion")


def verify_depth1_product(a: int, b: int, d: int, z: OmegaPoint, D: int, target) -> dict:
    q = z.fld.cfg.q
    fld = z.fld
    lhs = goss_power_sum((a,), d, z, D) * goss_power_sum((b,), d, z, D)
    parts = [goss_power_sum((a + b,), d, z, D)]
    for i, j, dl in delta_terms(a, b, q):
        c = fld.embed_const(fld.cfg.from_int(dl))
        parts.append((lower_eval((j,), z, D) * goss_power_sum((i,), d, z, D)).scale(c))
        parts.append(goss_power_sum((i, j), d, z, D).scale(c))
    rhs = series_sum(parts, fld)
    ok = series_eq_to(lhs, rhs, target)
    entry = {"a": a, "b": b, "d": d, "pass": ok}
    if not ok:
        entry.update(lhs=lhs.to_triples(), rhs=rhs.to_triples())
    return entry


def choose_degree(z: OmegaPoint, amin: int, target, direct: bool = False, floor: int = 0) -> int:
    """Smallest D >= floor whose certified bounds exceed target."""
    q = z.fld.cfg.q
    D = floor
    while True:
        B = direct_bound((amin,), z, D) if direct else shell_bound(amin, z.Ls[1:], D, q)
        if B > Fraction(target):
            return D
        D += 1

