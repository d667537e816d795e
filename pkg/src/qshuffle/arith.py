"""Exact arithmetic over F_p, F_q = F_{p^e}, A = F_q[theta] and K = F_q(theta).

Field elements are encoded as integers in ``[0, q)``: the element
``c_0 + c_1*alpha + ... + c_{e-1}*alpha^(e-1)`` (``alpha`` a root of the
configured modulus) is stored as ``c_0 + c_1*p + ... + c_{e-1}*p^(e-1)``.
Coefficient vectors of polynomials are numpy ``int64`` arrays, lowest degree
first, so that polynomial and series kernels vectorise.
"""
from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass

import numpy as np


class FieldError(ValueError):
    """Invalid finite-field configuration."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for d in range(2, math.isqrt(n) + 1):
        if n % d == 0:
            return False
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Split ``q = p**e``; raise FieldError when q is not a prime power."""
    if q < 2:
        raise FieldError(f"q={q} is not a prime power")
    for p in range(2, q + 1):
        if q % p == 0:
            e, r = 0, q
            while r % p == 0:
                r //= p
                e += 1
            if r != 1 or not is_prime(p):
                raise FieldError(f"q={q} is not a prime power")
            return p, e
    raise FieldError(f"q={q} is not a prime power")  # pragma: no cover


# --- tiny dense polynomial helpers over F_p (tuples, low degree first) ------

def _fp_trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


def _fp_mod(a, b, p):
    a = _fp_trim(a)
    b = _fp_trim(b)
    inv = pow(b[-1], -1, p)
    while len(a) >= len(b):
        c = a[-1] * inv % p
        shift = len(a) - len(b)
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bi) % p
        a = _fp_trim(a)
    return a


def _fp_irreducible(f, p) -> bool:
    """Trial division by every monic polynomial of degree <= deg(f)/2."""
    n = len(f) - 1
    for d in range(1, n // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not _fp_mod(f, list(low) + [1], p):
                return False
    return True


def smallest_irreducible(p: int, e: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree e over F_p.

    Candidates are ordered by their coefficient vector ``(c_0, ..., c_{e-1})``.
    """
    for low in itertools.product(range(p), repeat=e):
        f = list(low) + [1]
        if _fp_irreducible(f, p):
            return tuple(f)
    raise FieldError(f"no irreducible of degree {e} over F_{p}")  # pragma: no cover


class FieldConfig:
    """The finite field F_q, q = p**e, modelled as F_p[alpha]/(modulus).

    Instances are cached per ``(p, e, modulus)``; use :func:`field` or
    :meth:`from_q` rather than calling the constructor repeatedly.
    """

    def __init__(self, p: int, e: int = 1, modulus=None):
        if not is_prime(p):
            raise FieldError(f"p={p} is not prime")
        if e < 1:
            raise FieldError("extension degree must be >= 1")
        if modulus is None:
            modulus = smallest_irreducible(p, e)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != e + 1 or modulus[-1] != 1:
            raise FieldError("modulus must be monic of degree e")
        if not _fp_irreducible(list(modulus), p):
            raise FieldError(f"modulus {modulus} is reducible over F_{p}")
        self.p = p
        self.e = e
        self.q = p ** e
        self.modulus = modulus
        self._build_tables()

    @classmethod
    def from_q(cls, q: int) -> "FieldConfig":
        return field(*prime_power(q))

    def __repr__(self):
        return f"FieldConfig(p={self.p}, e={self.e}, modulus={self.modulus})"

    def __eq__(self, other):
        return isinstance(other, FieldConfig) and (self.p, self.e, self.modulus) == (
            other.p, other.e, other.modulus)

    def __hash__(self):
        return hash((self.p, self.e, self.modulus))

    def __reduce__(self):
        return (field, (self.p, self.e, self.modulus))

    # -- tables -------------------------------------------------------------

    def _build_tables(self):
        p, e, q = self.p, self.e, self.q
        codes = np.arange(q, dtype=np.int64)
        self._pw = p ** np.arange(e, dtype=np.int64)
        coords = (codes[:, None] // self._pw[None, :]) % p  # q x e
        self._coords = coords
        neg = ((-coords) % p) @ self._pw
        self.neg_table = neg.astype(np.int64)
        if e == 1:
            self.add_table = None
            self.mul_table = None
            inv = np.zeros(q, dtype=np.int64)
            for x in range(1, q):
                inv[x] = pow(x, -1, p)
            self.inv_table = inv
            return
        self.add_table = (((coords[:, None, :] + coords[None, :, :]) % p) @ self._pw)
        # multiplication by alpha as an e x e matrix acting on coordinate rows
        comp = np.zeros((e, e), dtype=np.int64)
        for i in range(e - 1):
            comp[i, i + 1] = 1
        comp[e - 1, :] = [(-c) % p for c in self.modulus[:e]]
        powers = [np.eye(e, dtype=np.int64)]
        for _ in range(1, e):
            powers.append((powers[-1] @ comp) % p)
        mul = np.empty((q, q), dtype=np.int64)
        for x in range(q):
            m = sum(int(coords[x, i]) * powers[i] for i in range(e)) % p
            mul[x] = ((coords @ m) % p) @ self._pw
        self.mul_table = mul
        inv = np.zeros(q, dtype=np.int64)
        for x in range(1, q):
            inv[x] = int(np.nonzero(mul[x] == 1)[0][0])
        self.inv_table = inv
        # alpha^k reductions for k in [e, 2e-2], as coordinate vectors
        red = []
        cur = [(-c) % p for c in self.modulus[:e]]
        for _ in range(e - 1):
            red.append(list(cur))
            top = cur[-1]
            cur = [0] + cur[:-1]
            cur = [(c + top * (-m)) % p for c, m in zip(cur, self.modulus[:e])]
        self._alpha_red = red

    # -- scalar operations ----------------------------------------------------

    def coords(self, x: int) -> tuple[int, ...]:
        return tuple(int(c) for c in self._coords[x])

    def from_coords(self, c) -> int:
        if len(c) != self.e:
            raise FieldError("coordinate vector has wrong length")
        return int(sum((int(v) % self.p) * int(w) for v, w in zip(c, self._pw)))

    def add(self, x: int, y: int) -> int:
        if self.e == 1:
            return (x + y) % self.p
        return int(self.add_table[x, y])

    def sub(self, x: int, y: int) -> int:
        return self.add(x, int(self.neg_table[y]))

    def neg(self, x: int) -> int:
        return int(self.neg_table[x])

    def mul(self, x: int, y: int) -> int:
        if self.e == 1:
            return x * y % self.p
        return int(self.mul_table[x, y])

    def inv(self, x: int) -> int:
        if x == 0:
            raise ZeroDivisionError("inverse of 0 in F_q")
        return int(self.inv_table[x])

    def from_int(self, n: int) -> int:
        """Image of the integer n in the prime field."""
        return n % self.p

    def pow(self, x: int, k: int) -> int:
        if k < 0:
            x, k = self.inv(x), -k
        r = 1
        while k:
            if k & 1:
                r = self.mul(r, x)
            x = self.mul(x, x)
            k >>= 1
        return r

    def elements(self) -> range:
        return range(self.q)

    # -- vectorised operations on coefficient arrays ---------------------------

    def vadd(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.e == 1:
            return (a + b) % self.p
        return self.add_table[a, b]

    def vneg(self, a: np.ndarray) -> np.ndarray:
        if self.e == 1:
            return (-a) % self.p
        return self.neg_table[a]

    def vsub(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.e == 1:
            return (a - b) % self.p
        return self.add_table[a, self.neg_table[b]]

    def vscale(self, c: int, a: np.ndarray) -> np.ndarray:
        if self.e == 1:
            return (c * a) % self.p
        return self.mul_table[c, a]

    def vmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.e == 1:
            return (a * b) % self.p
        return self.mul_table[a, b]

    def conv(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Coefficient array of the product of two polynomials."""
        if len(a) == 0 or len(b) == 0:
            return np.zeros(0, dtype=np.int64)
        p = self.p
        if self.e == 1:
            return np.convolve(a, b) % p
        e = self.e
        ca = self._coords[a]
        cb = self._coords[b]
        n = len(a) + len(b) - 1
        acc = np.zeros((n, 2 * e - 1), dtype=np.int64)
        for s in range(e):
            if not ca[:, s].any():
                continue
            for t in range(e):
                acc[:, s + t] += np.convolve(ca[:, s], cb[:, t])
        acc %= p
        out = acc[:, :e].copy()
        for k in range(e, 2 * e - 1):
            col = acc[:, k]
            if col.any():
                out += col[:, None] * np.asarray(self._alpha_red[k - e], dtype=np.int64)[None, :]
        out %= p
        return out @ self._pw


@functools.lru_cache(maxsize=None)
def field(p: int, e: int = 1, modulus=None) -> FieldConfig:
    return FieldConfig(p, e, modulus)


@dataclass(frozen=True)
class FqElem:
    """A single element of F_q (thin wrapper used at API boundaries)."""

    cfg: FieldConfig
    code: int

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.cfg.coords(self.code)

    def __add__(self, o):
        return FqElem(self.cfg, self.cfg.add(self.code, o.code))

    def __sub__(self, o):
        return FqElem(self.cfg, self.cfg.sub(self.code, o.code))

    def __mul__(self, o):
        return FqElem(self.cfg, self.cfg.mul(self.code, o.code))

    def __neg__(self):
        return FqElem(self.cfg, self.cfg.neg(self.code))

    def inverse(self):
        return FqElem(self.cfg, self.cfg.inv(self.code))

    def __bool__(self):
        return self.code != 0


# --- combinatorial coefficients ---------------------------------------------

def lucas_binom(m: int, n: int, p: int) -> int:
    """C(m, n) mod p, digit by digit in base p."""
    if n < 0 or m < 0 or n > m:
        return 0
    r = 1
    while m or n:
        mi, ni = m % p, n % p
        if ni > mi:
            return 0
        r = r * math.comb(mi, ni) % p
        m //= p
        n //= p
    return r


def delta(i: int, j: int, a: int, b: int, p: int) -> int:
    """(-1)^(a-1) C(j-1, a-1) + (-1)^(b-1) C(j-1, b-1), reduced mod p."""
    if i + j != a + b:
        raise ValueError(f"delta needs i+j == a+b, got {(i, j, a, b)}")
    if min(i, j, a, b) < 1:
        raise ValueError("delta indices must be positive")
    s1 = lucas_binom(j - 1, a - 1, p) * (1 if (a - 1) % 2 == 0 else -1)
    s2 = lucas_binom(j - 1, b - 1, p) * (1 if (b - 1) % 2 == 0 else -1)
    return (s1 + s2) % p


@functools.lru_cache(maxsize=None)
def delta_terms(a: int, b: int, q: int) -> tuple[tuple[int, int, int], ...]:
    """Nonzero (i, j, Delta^{i,j}_{a,b}) with i+j = a+b, i, j >= 1 and (q-1) | j."""
    p, _ = prime_power(q)
    out = []
    for j in range(1, a + b):
        if j % (q - 1):
            continue
        c = delta(a + b - j, j, a, b, p)
        if c:
            out.append((a + b - j, j, c))
    return tuple(out)


def partial_fraction_terms(a: int, b: int) -> list[tuple[int, int, str, int]]:
    """Integer coefficients of the expansion of 1/(f^a g^b) in powers of 1/(f-g).

    Each entry ``(i, j, side, c)`` stands for ``c / ((f-g)^j * side^i)`` with
    ``side`` either ``"f"`` or ``"g"``; i, j >= 1 and i + j = a + b.
    """
    if a < 1 or b < 1:
        raise ValueError("exponents must be positive")
    out = []
    for j in range(1, a + b):
        i = a + b - j
        cf = (-1) ** b * math.comb(j - 1, b - 1)
        cg = (-1) ** ((j - a) % 2) * math.comb(j - 1, a - 1)
        if cf:
            out.append((i, j, "f", cf))
        if cg:
            out.append((i, j, "g", cg))
    return out


# --- polynomials -------------------------------------------------------------

def _trim(c: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(c)
    if len(nz) == 0:
        return c[:0]
    return c[: nz[-1] + 1]


def _as_array(coeffs) -> np.ndarray:
    return np.asarray(coeffs, dtype=np.int64).reshape(-1)


class APoly:
    """Polynomial in theta over F_q, stored with no trailing zeros."""

    __slots__ = ("cfg", "c", "_hash")

    def __init__(self, cfg: FieldConfig, coeffs=()):
        c = _trim(_as_array(coeffs))
        if len(c) and (c.min() < 0 or c.max() >= cfg.q):
            raise FieldError("coefficient codes must lie in [0, q)")
        c.flags.writeable = False
        self.cfg = cfg
        self.c = c
        self._hash = None

    @classmethod
    def _raw(cls, cfg, c):
        obj = cls.__new__(cls)
        c = _trim(c)
        c.flags.writeable = False
        obj.cfg = cfg
        obj.c = c
        obj._hash = None
        return obj

    @classmethod
    def constant(cls, cfg, x: int) -> "APoly":
        return cls._raw(cfg, np.array([x], dtype=np.int64))

    @classmethod
    def theta(cls, cfg) -> "APoly":
        return cls._raw(cfg, np.array([0, 1], dtype=np.int64))

    @classmethod
    def monomial(cls, cfg, n: int, x: int = 1) -> "APoly":
        c = np.zeros(n + 1, dtype=np.int64)
        c[n] = x
        return cls._raw(cfg, c)

    @property
    def deg(self) -> float:
        """Degree; the zero polynomial has degree -inf."""
        return len(self.c) - 1 if len(self.c) else -math.inf

    @property
    def lead(self) -> int:
        return int(self.c[-1]) if len(self.c) else 0

    @property
    def coeffs(self) -> list[FqElem]:
        return [FqElem(self.cfg, int(x)) for x in self.c]

    def is_zero(self) -> bool:
        return len(self.c) == 0

    def is_monic(self) -> bool:
        return self.lead == 1

    def __bool__(self):
        return len(self.c) > 0

    def __eq__(self, other):
        if isinstance(other, int):
            other = APoly.constant(self.cfg, self.cfg.from_int(other))
        if not isinstance(other, APoly):
            return NotImplemented
        return self.cfg == other.cfg and np.array_equal(self.c, other.c)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.cfg.q, self.c.tobytes()))
        return self._hash

    def key(self) -> tuple[int, ...]:
        return tuple(int(x) for x in self.c)

    def _check(self, other):
        if not isinstance(other, APoly):
            if isinstance(other, int):
                return APoly.constant(self.cfg, self.cfg.from_int(other))
            raise TypeError(f"cannot combine APoly with {type(other).__name__}")
        if other.cfg != self.cfg:
            raise FieldError("polynomials over different fields")
        return other

    def __add__(self, other):
        other = self._check(other)
        a, b = self.c, other.c
        if len(a) < len(b):
            a, b = b, a
        out = a.copy()
        out[: len(b)] = self.cfg.vadd(out[: len(b)], b)
        return APoly._raw(self.cfg, out)

    __radd__ = __add__

    def __neg__(self):
        return APoly._raw(self.cfg, self.cfg.vneg(self.c))

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        other = self._check(other)
        return APoly._raw(self.cfg, self.cfg.conv(self.c, other.c))

    __rmul__ = __mul__

    def scale(self, x: int) -> "APoly":
        return APoly._raw(self.cfg, self.cfg.vscale(x, self.c))

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = APoly.constant(self.cfg, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __divmod__(self, other):
        other = self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        cfg = self.cfg
        a = self.c.copy()
        b = other.c
        db = len(b) - 1
        if len(a) <= db:
            return APoly._raw(cfg, np.zeros(0, dtype=np.int64)), self
        quo = np.zeros(len(a) - db, dtype=np.int64)
        inv_lead = cfg.inv(int(b[-1]))
        for k in range(len(a) - 1 - db, -1, -1):
            c = int(a[k + db])
            if c == 0:
                continue
            if inv_lead != 1:
                c = cfg.mul(c, inv_lead)
            quo[k] = c
            a[k: k + db + 1] = cfg.vsub(a[k: k + db + 1], cfg.vscale(c, b))
        return APoly._raw(cfg, quo), APoly._raw(cfg, a[:db])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def monic(self) -> "APoly":
        if self.is_zero() or self.lead == 1:
            return self
        return self.scale(self.cfg.inv(self.lead))

    def gcd(self, other) -> "APoly":
        """Monic gcd (zero only when both inputs vanish)."""
        a, b = self, self._check(other)
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def __repr__(self):
        return f"APoly({self})"

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for n in range(len(self.c) - 1, -1, -1):
            x = int(self.c[n])
            if not x:
                continue
            mono = "" if n == 0 else ("θ" if n == 1 else f"θ^{n}")
            if not mono:
                parts.append(str(x))
            elif x == 1:
                parts.append(mono)
            else:
                parts.append(f"{x}*{mono}")
        return " + ".join(parts)


def monic_polys(d: int, cfg: FieldConfig) -> list[APoly]:
    """All q^d monic polynomials of degree d, ordered by (c_0, ..., c_{d-1})."""
    if d < 0:
        raise ValueError("degree must be >= 0")
    return [APoly._raw(cfg, np.array(low + (1,), dtype=np.int64))
            for low in itertools.product(range(cfg.q), repeat=d)]


def polys_below(d: int, cfg: FieldConfig) -> list[APoly]:
    """All q^d polynomials of degree < d (zero first), same ordering."""
    if d < 1:
        raise ValueError("degree bound must be >= 1")
    return [APoly._raw(cfg, np.array(c, dtype=np.int64))
            for c in itertools.product(range(cfg.q), repeat=d)]


# --- rational functions --------------------------------------------------------

class RatFunc:
    """Element num/den of K = F_q(theta) in lowest terms with monic den."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, *, _reduced=False):
        if isinstance(num, int):
            raise TypeError("use RatFunc.from_int for integer constants")
        cfg = num.cfg
        if den is None:
            den = APoly.constant(cfg, 1)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if not _reduced:
            if num.is_zero():
                den = APoly.constant(cfg, 1)
            else:
                g = num.gcd(den)
                if g.deg > 0:
                    num = num // g
                    den = den // g
                lead = den.lead
                if lead != 1:
                    inv = cfg.inv(lead)
                    num = num.scale(inv)
                    den = den.scale(inv)
        self.num = num
        self.den = den

    @classmethod
    def from_int(cls, cfg, n: int) -> "RatFunc":
        return cls(APoly.constant(cfg, cfg.from_int(n)), _reduced=True) if n % cfg.p else cls.zero(cfg)

    @classmethod
    def zero(cls, cfg) -> "RatFunc":
        return cls(APoly(cfg), APoly.constant(cfg, 1), _reduced=True)

    @classmethod
    def one(cls, cfg) -> "RatFunc":
        return cls(APoly.constant(cfg, 1), APoly.constant(cfg, 1), _reduced=True)

    @property
    def cfg(self):
        return self.num.cfg

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            if other.cfg != self.cfg:
                raise FieldError("rational functions over different fields")
            return other
        if isinstance(other, APoly):
            return RatFunc(other, _reduced=True)
        if isinstance(other, int):
            return RatFunc.from_int(self.cfg, other)
        raise TypeError(f"cannot combine RatFunc with {type(other).__name__}")

    def __eq__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other):
        other = self._coerce(other)
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        g = self.den.gcd(other.den)
        if g.deg == 0:
            return RatFunc(self.num * other.den + other.num * self.den,
                           self.den * other.den, _reduced=True).__normal_lead()
        d1 = self.den // g
        d2 = other.den // g
        return RatFunc(self.num * d2 + other.num * d1, self.den * d2)

    def __normal_lead(self):
        # coprime denominators: numerator may still vanish
        if self.num.is_zero():
            return RatFunc.zero(self.cfg)
        return self

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        if self.is_zero() or other.is_zero():
            return RatFunc.zero(self.cfg)
        g1 = self.num.gcd(other.den)
        g2 = other.num.gcd(self.den)
        n1, d2 = (self.num // g1, other.den // g1) if g1.deg > 0 else (self.num, other.den)
        n2, d1 = (other.num // g2, self.den // g2) if g2.deg > 0 else (other.num, self.den)
        num = n1 * n2
        den = d1 * d2
        return RatFunc(num, den, _reduced=True) if den.lead == 1 else RatFunc(num, den)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in K")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero in K")
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        # lowest terms are preserved by powers
        return RatFunc(self.num ** k, self.den ** k, _reduced=True)

    def __repr__(self):
        return f"RatFunc({self})"

    def __str__(self):
        if self.den.deg == 0:
            return str(self.num)
        return f"({self.num})/({self.den})"
