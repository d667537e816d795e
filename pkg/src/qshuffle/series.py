"""Truncated Puiseux series in theta^(-1/e) with coefficients in F_{q^m}.

Exponents count powers of 1/theta.  Internally every exponent is scaled by
the ramification index ``e`` so that all bookkeeping is integral; a series is
a dense coefficient array starting at scaled exponent ``start`` together with
``known_prec``, the largest scaled exponent through which it is trusted.
"""
from __future__ import annotations

import functools
import math
import re
from fractions import Fraction

import numpy as np

from .arith import APoly, FieldConfig, RatFunc, field

DEFAULT_PREC = 30
GUARD = 10


class PrecisionError(ArithmeticError):
    """Raised when a result would be read beyond its certified precision."""

    def __init__(self, msg, floor=None):
        super().__init__(msg)
        self.floor = floor


def _ps_inv(cfg: FieldConfig, a: np.ndarray, n: int) -> np.ndarray:
    """First n coefficients of 1/a as a power series (a[0] != 0), by Newton."""
    b = np.array([cfg.inv(int(a[0]))], dtype=np.int64)
    k = 1
    while k < n:
        k = min(2 * k, n)
        ab = cfg.conv(a[:k], b)[:k]
        r = cfg.vneg(ab)
        r[0] = cfg.add(int(r[0]), 1)
        corr = cfg.conv(b, r)[:k]
        nb = np.zeros(k, dtype=np.int64)
        nb[: len(b)] = b
        b = cfg.vadd(nb, corr)
    return b[:n]


@functools.lru_cache(maxsize=None)
def _embedding(cfg: FieldConfig, m: int):
    """(F_{q^m} config, table sending codes of F_q to codes of F_{q^m})."""
    if m == 1:
        return cfg, None
    ext = field(cfg.p, cfg.e * m)
    if cfg.e == 1:
        return ext, np.arange(cfg.q, dtype=np.int64)
    # find a root beta of cfg.modulus in ext, then map sum c_i alpha^i -> sum c_i beta^i
    for beta in range(ext.q):
        acc, pw = 0, 1
        for c in cfg.modulus:
            acc = ext.add(acc, ext.mul(ext.from_int(c), pw))
            pw = ext.mul(pw, beta)
        if acc == 0:
            break
    else:  # pragma: no cover
        raise ArithmeticError("modulus has no root in the extension")
    table = np.zeros(cfg.q, dtype=np.int64)
    for x in range(cfg.q):
        acc, pw = 0, 1
        for c in cfg.coords(x):
            acc = ext.add(acc, ext.mul(c, pw))
            pw = ext.mul(pw, beta)
        table[x] = acc
    return ext, table


class SeriesField:
    """F_{q^m}((theta^(-1/ram))) truncated at absolute precision ``prec``."""

    def __init__(self, cfg: FieldConfig, m: int = 1, ram: int = 1, prec=DEFAULT_PREC):
        if m < 1 or ram < 1:
            raise ValueError("m and ram must be >= 1")
        prec = Fraction(prec)
        if prec <= 0:
            raise ValueError("precision must be positive")
        self.cfg = cfg
        self.m = m
        self.ram = ram
        self.prec = prec
        self.base, self._emb = _embedding(cfg, m)
        self.P = math.floor(prec * ram)

    def __repr__(self):
        return f"SeriesField(q={self.cfg.q}, m={self.m}, ram={self.ram}, prec={self.prec})"

    def __eq__(self, other):
        return isinstance(other, SeriesField) and (self.cfg, self.m, self.ram, self.P) == (
            other.cfg, other.m, other.ram, other.P)

    def __hash__(self):
        return hash((self.cfg, self.m, self.ram, self.P))

    def with_prec(self, prec) -> "SeriesField":
        return SeriesField(self.cfg, self.m, self.ram, prec)

    def embed_const(self, x: int) -> int:
        return x if self._emb is None else int(self._emb[x])

    def embed_array(self, a: np.ndarray) -> np.ndarray:
        return a if self._emb is None else self._emb[a]

    def scaled(self, exponent) -> int:
        s = Fraction(exponent) * self.ram
        if s.denominator != 1:
            raise ValueError(f"exponent {exponent} not representable with ram={self.ram}")
        return int(s)

    def zero(self, known_prec: int | None = None) -> "PuiseuxSeries":
        kp = self.P if known_prec is None else known_prec
        return PuiseuxSeries(self, np.zeros(0, dtype=np.int64), kp + 1, kp)

    def one(self) -> "PuiseuxSeries":
        return self.monomial(0)

    def monomial(self, scaled_exp: int, coeff: int = 1) -> "PuiseuxSeries":
        """coeff * theta^(-scaled_exp/ram); coeff is a code of F_{q^m}."""
        if scaled_exp > self.P or coeff == 0:
            return self.zero()
        return PuiseuxSeries(self, np.array([coeff], dtype=np.int64), scaled_exp, self.P)

    def from_terms(self, terms: dict, known_prec=None) -> "PuiseuxSeries":
        """Build from {exponent (power of 1/theta): F_{q^m} code}."""
        kp = self.P if known_prec is None else min(self.P, math.floor(Fraction(known_prec) * self.ram))
        items = {self.scaled(k): v for k, v in terms.items() if v}
        items = {k: v for k, v in items.items() if k <= kp}
        if not items:
            return self.zero(kp)
        lo, hi = min(items), max(items)
        arr = np.zeros(hi - lo + 1, dtype=np.int64)
        for k, v in items.items():
            arr[k - lo] = v
        return PuiseuxSeries(self, arr, lo, kp)


class PuiseuxSeries:
    __slots__ = ("fld", "c", "start", "known_prec")

    def __init__(self, fld: SeriesField, c: np.ndarray, start: int, known_prec: int):
        # normalise: drop leading/trailing zeros and terms beyond known_prec
        c = c[: max(0, known_prec - start + 1)]
        nz = np.flatnonzero(c)
        if len(nz) == 0:
            c = c[:0]
            start = known_prec + 1
        else:
            start += int(nz[0])
            c = c[nz[0]: nz[-1] + 1]
        self.fld = fld
        self.c = c
        self.start = start
        self.known_prec = known_prec

    # -- inspection -------------------------------------------------------------

    def is_zero(self) -> bool:
        """True when no coefficient up to known_prec is nonzero."""
        return len(self.c) == 0

    @property
    def sval(self) -> float:
        """Scaled valuation; +inf for an effective zero."""
        return math.inf if self.is_zero() else self.start

    @property
    def val(self):
        return math.inf if self.is_zero() else Fraction(self.start, self.fld.ram)

    @property
    def prec(self) -> Fraction:
        return Fraction(self.known_prec, self.fld.ram)

    def abs(self) -> float:
        if self.is_zero():
            return 0.0
        return float(self.fld.cfg.q) ** float(-self.val)

    def terms(self) -> dict:
        """{exponent of 1/theta (Fraction): F_{q^m} code}, nonzero terms only."""
        r = self.fld.ram
        return {Fraction(self.start + int(i), r): int(self.c[i]) for i in np.flatnonzero(self.c)}

    def coeff(self, exponent) -> int:
        k = self.fld.scaled(exponent)
        if k > self.known_prec:
            raise PrecisionError(f"coefficient at {exponent} beyond known precision {self.prec}")
        i = k - self.start
        return int(self.c[i]) if 0 <= i < len(self.c) else 0

    def dense(self, lo: int, hi: int) -> np.ndarray:
        """Coefficients at scaled exponents lo..hi inclusive."""
        out = np.zeros(hi - lo + 1, dtype=np.int64)
        a, b = max(lo, self.start), min(hi, self.start + len(self.c) - 1)
        if a <= b:
            out[a - lo: b - lo + 1] = self.c[a - self.start: b - self.start + 1]
        return out

    def truncate(self, known_prec: int) -> "PuiseuxSeries":
        """Forget everything beyond scaled exponent known_prec."""
        return PuiseuxSeries(self.fld, self.c, self.start, min(known_prec, self.known_prec))

    def rebase(self, fld: SeriesField) -> "PuiseuxSeries":
        """Same coefficients viewed in a field with different precision."""
        if (fld.cfg, fld.m, fld.ram) != (self.fld.cfg, self.fld.m, self.fld.ram):
            raise ValueError("incompatible series fields")
        return PuiseuxSeries(fld, self.c, self.start, min(self.known_prec, fld.P))

    # -- arithmetic --------------------------------------------------------------

    def _check(self, other):
        if isinstance(other, PuiseuxSeries):
            if other.fld != self.fld:
                raise ValueError("series from different fields")
            return other
        if isinstance(other, int):
            return self.fld.monomial(0, self.fld.embed_const(self.fld.cfg.from_int(other)))
        if isinstance(other, (RatFunc, APoly)):
            return embed_ratfunc(other, self.fld)
        raise TypeError(f"cannot combine PuiseuxSeries with {type(other).__name__}")

    def __add__(self, other):
        other = self._check(other)
        kp = min(self.known_prec, other.known_prec)
        if self.is_zero():
            return other.truncate(kp)
        if other.is_zero():
            return self.truncate(kp)
        lo = min(self.start, other.start)
        hi = min(kp, max(self.start + len(self.c), other.start + len(other.c)) - 1)
        if hi < lo:
            return self.fld.zero(kp)
        base = self.fld.base
        arr = base.vadd(self.dense(lo, hi), other.dense(lo, hi))
        return PuiseuxSeries(self.fld, arr, lo, kp)

    __radd__ = __add__

    def __neg__(self):
        return PuiseuxSeries(self.fld, self.fld.base.vneg(self.c), self.start, self.known_prec)

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        other = self._check(other)
        v1 = self.start if not self.is_zero() else self.known_prec
        v2 = other.start if not other.is_zero() else other.known_prec
        kp = min(self.known_prec + v2, other.known_prec + v1, self.fld.P)
        if self.is_zero() or other.is_zero():
            return self.fld.zero(kp)
        n = kp - (self.start + other.start) + 1
        if n <= 0:
            return self.fld.zero(kp)
        arr = self.fld.base.conv(self.c[:n], other.c[:n])[:n]
        return PuiseuxSeries(self.fld, arr, self.start + other.start, kp)

    __rmul__ = __mul__

    def scale(self, x: int) -> "PuiseuxSeries":
        """Multiply by the F_{q^m} code x (exact)."""
        if x == 0:
            return self.fld.zero(self.known_prec)
        return PuiseuxSeries(self.fld, self.fld.base.vscale(x, self.c), self.start, self.known_prec)

    def shift(self, scaled: int) -> "PuiseuxSeries":
        """Multiply by theta^(-scaled/ram), tracking precision like __mul__."""
        kp = min(self.known_prec + scaled, self.fld.P)
        return PuiseuxSeries(self.fld, self.c, self.start + scaled, kp)

    def inverse(self) -> "PuiseuxSeries":
        if self.is_zero():
            raise PrecisionError("inverse of a series that vanishes to known precision",
                                 floor=Fraction(self.known_prec + 1, self.fld.ram))
        v = self.start
        kp = min(self.fld.P, self.known_prec - 2 * v)
        n = kp + v + 1
        if n <= 0:
            return self.fld.zero(kp)
        a = self.dense(v, v + n - 1)
        return PuiseuxSeries(self.fld, _ps_inv(self.fld.base, a, n), -v, kp)

    def __truediv__(self, other):
        return self * self._check(other).inverse()

    def __rtruediv__(self, other):
        return self._check(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.fld.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def frobenius(self) -> "PuiseuxSeries":
        """x -> x^p, computed coefficientwise (exact in characteristic p)."""
        base = self.fld.base
        p = base.p
        if self.is_zero():
            return self.fld.zero(min(self.fld.P, p * self.known_prec))
        if base.e == 1:
            coeffs = self.c
        else:
            coeffs = np.array([base.pow(int(x), p) for x in self.c], dtype=np.int64)
        arr = np.zeros(p * (len(self.c) - 1) + 1, dtype=np.int64)
        arr[::p] = coeffs
        # (x + O(t^k))^p = x^p + O(t^{pk}) in characteristic p
        kp = min(self.fld.P, p * (self.known_prec + 1) - 1)
        return PuiseuxSeries(self.fld, arr, p * self.start, kp)

    # -- comparison / display ----------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        return (self.fld == other.fld and self.start == other.start
                and self.known_prec == other.known_prec and np.array_equal(self.c, other.c))

    def __hash__(self):
        return hash((self.start, self.known_prec, self.c.tobytes()))

    def to_triples(self) -> list[tuple[int, int, int]]:
        """Sorted (exponent numerator, exponent denominator, coefficient) triples."""
        return [(k.numerator, k.denominator, v) for k, v in sorted(self.terms().items())]

    def __repr__(self):
        return f"PuiseuxSeries({self}, known_prec={self.prec})"

    def __str__(self):
        parts = []
        for k, v in sorted(self.terms().items()):
            mono = _theta_pow(-k)
            if not mono:
                parts.append(str(v))
            else:
                parts.append(mono if v == 1 else f"{v} * {mono}")
        parts.append(f"O({_theta_pow(-(self.prec + Fraction(1, self.fld.ram))) or '1'})")
        return " + ".join(parts)


def _theta_pow(ex: Fraction) -> str:
    if ex == 0:
        return ""
    if ex.denominator == 1:
        return "θ" if ex == 1 else f"θ^{ex}"
    return f"θ^({ex})"


_TERM = re.compile(r"^(?:(\d+)\s*\*\s*)?(?:θ|theta)(?:\^\(?(-?\d+(?:/\d+)?)\)?)?$|^(\d+)$")


def parse_series(text: str, fld: SeriesField) -> PuiseuxSeries:
    """Inverse of ``str`` for series over ``fld``."""
    terms = {}
    known = None
    for raw in text.split(" + "):
        tok = raw.strip()
        if tok.startswith("O(") and tok.endswith(")"):
            inner = tok[2:-1].strip()
            ex = Fraction(0) if inner == "1" else _parse_mono(inner)
            known = -ex - Fraction(1, fld.ram)
            continue
        m = _TERM.match(tok)
        if not m:
            raise ValueError(f"cannot parse series term {tok!r}")
        if m.group(3) is not None:
            terms[Fraction(0)] = int(m.group(3))
        else:
            c = int(m.group(1)) if m.group(1) else 1
            ex = Fraction(m.group(2)) if m.group(2) else Fraction(1)
            terms[-ex] = c
    return fld.from_terms(terms, known_prec=known)


def _parse_mono(tok: str) -> Fraction:
    m = _TERM.match(tok)
    if not m or m.group(3) is not None or m.group(1):
        raise ValueError(f"cannot parse monomial {tok!r}")
    return Fraction(m.group(2)) if m.group(2) else Fraction(1)


def embed_poly_array(c: np.ndarray, fld: SeriesField) -> PuiseuxSeries:
    """Exact embedding of the polynomial with coefficient codes c (low first)."""
    if len(c) == 0:
        return fld.zero()
    d = len(c) - 1
    e = fld.ram
    arr = np.zeros(d * e + 1, dtype=np.int64)
    arr[::e] = fld.embed_array(c[::-1])
    return PuiseuxSeries(fld, arr, -d * e, fld.P)


def embed_ratfunc(r, fld: SeriesField) -> PuiseuxSeries:
    """Expansion of r in K_infinity, exact up to fld.prec."""
    if isinstance(r, APoly):
        return embed_poly_array(r.c, fld)
    if r.den.deg == 0:
        return embed_poly_array(r.num.c, fld)
    if r.is_zero():
        return fld.zero()
    dn, dd = r.num.deg, r.den.deg
    # r = theta^(dn-dd) * N(u)/D(u) with u = 1/theta and D(0) = 1
    n_terms = math.floor(fld.prec) + dn - dd + 1
    if n_terms <= 0:
        return fld.zero()
    cfg = r.cfg
    nu = r.num.c[::-1]
    du = r.den.c[::-1]
    inv = _ps_inv(cfg, np.concatenate([du, np.zeros(max(0, n_terms - len(du)), dtype=np.int64)]),
                  n_terms)
    ser = cfg.conv(nu[:n_terms], inv)[:n_terms]
    e = fld.ram
    arr = np.zeros((len(ser) - 1) * e + 1, dtype=np.int64)
    arr[::e] = fld.embed_array(ser)
    return PuiseuxSeries(fld, arr, (dd - dn) * e, fld.P)


def theta_root(fld: SeriesField, num: int, den: int) -> PuiseuxSeries:
    """The monomial theta^(num/den)."""
    if den <= 0 or fld.ram % den:
        raise ValueError(f"denominator {den} must divide ram={fld.ram}")
    return fld.monomial(-num * (fld.ram // den))


def series_eq_to(x: PuiseuxSeries, y: PuiseuxSeries, upto) -> bool:
    """True iff x - y has no nonzero coefficient at exponents <= upto."""
    k = x.fld.scaled(upto) if Fraction(upto) * x.fld.ram == int(Fraction(upto) * x.fld.ram) \
        else math.floor(Fraction(upto) * x.fld.ram)
    if k > x.known_prec or k > y.known_prec:
        raise PrecisionError(
            f"comparison up to {upto} exceeds known precision "
            f"{min(x.prec, y.prec)}")
    d = (x - y).truncate(k)
    return d.is_zero()


def series_sum(items, fld: SeriesField) -> PuiseuxSeries:
    """Sum of many series with one dense accumulation."""
    items = list(items)
    if not items:
        return fld.zero()
    kp = min(s.known_prec for s in items)
    nz = [s for s in items if not s.is_zero()]
    if not nz:
        return fld.zero(kp)
    lo = min(s.start for s in nz)
    if lo > kp:
        return fld.zero(kp)
    base = fld.base
    acc = np.zeros(kp - lo + 1, dtype=np.int64)
    if base.e == 1:
        for s in nz:
            n = min(len(s.c), kp - s.start + 1)
            if n > 0:
                acc[s.start - lo: s.start - lo + n] += s.c[:n]
        acc %= base.p
    else:
        for s in nz:
            n = min(len(s.c), kp - s.start + 1)
            if n > 0:
                seg = slice(s.start - lo, s.start - lo + n)
                acc[seg] = base.vadd(acc[seg], s.c[:n])
    return PuiseuxSeries(fld, acc, lo, kp)
