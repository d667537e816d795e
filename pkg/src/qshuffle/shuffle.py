"""The q-shuffle products on R (x-words) and E (mixed words), the map e_hat,
associators and the exhaustive associativity sweep.

Internally products are computed on plain dicts ``{word: coeff}`` with words
being ``tuple`` (x-words) or ``(ytuple, xtuple)`` pairs; results are cached per
q and must never be mutated by callers.  The public functions wrap these in
:class:`~qshuffle.words.Combo`.
"""
from __future__ import annotations

import itertools
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .arith import delta_terms, prime_power
from .words import Combo, EMPTY, MixedWord, all_words, format_word

_R_CACHE: dict[int, dict] = {}
_Y_CACHE: dict[int, dict] = {}
_E_CACHE: dict[int, dict] = {}


def clear_caches() -> None:
    _R_CACHE.clear()
    _Y_CACHE.clear()
    _E_CACHE.clear()


def _acc(out: dict, key, c: int, p: int) -> None:
    v = (out.get(key, 0) + c) % p
    if v:
        out[key] = v
    else:
        out.pop(key, None)


# --- the product on R --------------------------------------------------------

def sh_r(a: tuple, b: tuple, q: int) -> dict:
    """x_a * x_b in R as {x-index: coeff}.  Recursion on dep(a) + dep(b)."""
    if not a:
        return {b: 1}
    if not b:
        return {a: 1}
    cache = _R_CACHE.setdefault(q, {})
    hit = cache.get((a, b))
    if hit is not None:
        return hit
    p = prime_power(q)[0]
    a1, ar = a[0], a[1:]
    b1, br = b[0], b[1:]
    out: dict = {}
    for w, c in sh_r(ar, b, q).items():
        _acc(out, (a1,) + w, c, p)
    for w, c in sh_r(a, br, q).items():
        _acc(out, (b1,) + w, c, p)
    mid = sh_r(ar, br, q)
    for w, c in mid.items():
        _acc(out, (a1 + b1,) + w, c, p)
    for i, j, dl in delta_terms(a1, b1, q):
        for w, c in mid.items():
            # dep(w) + 1 < dep(a) + dep(b), so the recursion descends
            assert len(w) + 1 < len(a) + len(b)
            for w2, c2 in sh_r(w, (j,), q).items():
                _acc(out, (i,) + w2, dl * c * c2, p)
    cache[(a, b)] = out
    return out


def sh_r_combo(a: tuple, comb: dict, q: int) -> dict:
    """x_a * (sum c_w x_w)."""
    p = prime_power(q)[0]
    out: dict = {}
    for w, c in comb.items():
        for v, c2 in sh_r(a, w, q).items():
            _acc(out, v, c * c2, p)
    return out


# --- the product on E ----------------------------------------------------------

def sh_y(a: tuple, b: tuple, q: int) -> dict:
    """y_a * y_b in E as {(y, x): coeff}.  Recursion on dep(a) + dep(b)."""
    if not a:
        return {(b, ()): 1}
    if not b:
        return {(a, ()): 1}
    cache = _Y_CACHE.setdefault(q, {})
    hit = cache.get((a, b))
    if hit is not None:
        return hit
    p = prime_power(q)[0]
    a1, ar = a[0], a[1:]
    b1, br = b[0], b[1:]
    out: dict = {}
    for (y, x), c in sh_y(ar, b, q).items():
        _acc(out, ((a1,) + y, x), c, p)
    for (y, x), c in sh_y(a, br, q).items():
        _acc(out, ((b1,) + y, x), c, p)
    mid = sh_y(ar, br, q)
    for (y, x), c in mid.items():
        _acc(out, ((a1 + b1,) + y, x), c, p)
    for i, j, dl in delta_terms(a1, b1, q):
        for w, c in mid.items():
            # y-depth of w is below dep(a) + dep(b) - 1, so both calls descend
            assert len(w[0]) + 1 < len(a) + len(b)
            for (y, x), c2 in sh_e(w, ((), (j,)), q).items():
                _acc(out, ((i,) + y, x), dl * c * c2, p)
            for (y, x), c2 in sh_e(w, ((j,), ()), q).items():
                _acc(out, ((i,) + y, x), dl * c * c2, p)
    cache[(a, b)] = out
    return out


def sh_e(u: tuple, v: tuple, q: int) -> dict:
    """(y_Y1 x_X1) * (y_Y2 x_X2) in E.

    The pure-y product is expanded first; each of its terms y_V x_W then
    absorbs the x-part as y_V (x_W * (x_X1 * x_X2)).
    """
    y1, x1 = u
    y2, x2 = v
    if not y1 and not x1:
        return {v: 1}
    if not y2 and not x2:
        return {u: 1}
    cache = _E_CACHE.setdefault(q, {})
    hit = cache.get((u, v))
    if hit is not None:
        return hit
    p = prime_power(q)[0]
    xx = sh_r(x1, x2, q)
    out: dict = {}
    if not y1 and not y2:
        for x, c in xx.items():
            _acc(out, ((), x), c, p)
    else:
        for (yv, xw), c in sh_y(y1, y2, q).items():
            for x, c2 in sh_r_combo(xw, xx, q).items():
                _acc(out, (yv, x), c * c2, p)
    cache[(u, v)] = out
    return out


def _to_raw(c: Combo) -> dict:
    return {(w.y, w.x): v for w, v in c.terms.items()}


def _from_raw(p: int, d: dict) -> Combo:
    return Combo(p, {MixedWord(y, x): v for (y, x), v in d.items()})


def mul_raw(a: dict, b: dict, q: int) -> dict:
    p = prime_power(q)[0]
    out: dict = {}
    for u, c in a.items():
        for v, c2 in b.items():
            for w, c3 in sh_e(u, v, q).items():
                _acc(out, w, c * c2 * c3, p)
    return out


def _check_q(q: int, *combos: Combo) -> int:
    p = prime_power(q)[0]
    for c in combos:
        if c.p != p:
            raise ValueError(f"combo over F_{c.p} used with q={q}")
    return p


def shuffle_R(a: Combo, b: Combo, q: int) -> Combo:
    """Bilinear q-shuffle product on R; inputs must be pure x-combinations."""
    p = _check_q(q, a, b)
    if not (a.is_pure_x() and b.is_pure_x()):
        raise ValueError("shuffle_R needs combinations of pure x-words")
    out: dict = {}
    for u, c in a.terms.items():
        for v, c2 in b.terms.items():
            for w, c3 in sh_r(u.x, v.x, q).items():
                _acc(out, w, c * c2 * c3, p)
    return Combo(p, {MixedWord((), w): c for w, c in out.items()})


def shuffle_E(a: Combo, b: Combo, q: int) -> Combo:
    """Bilinear q-shuffle product on E."""
    p = _check_q(q, a, b)
    return _from_raw(p, mul_raw(_to_raw(a), _to_raw(b), q))


def prepend_y(w: int, c: Combo) -> Combo:
    """y_w * (word) as concatenation, i.e. the left multiplication y_w b."""
    return Combo(c.p, {MixedWord((w,) + u.y, u.x): v for u, v in c.terms.items()})


def e_hat_word(a: tuple) -> dict:
    """e_hat(x_a) = x_a + sum_i y_{a_(i)} x_{a^(i)} as {(y, x): 1}."""
    out = {((), a): 1}
    for i in range(1, len(a) + 1):
        out[(a[:i], a[i:])] = 1
    return out


def e_hat(c: Combo) -> Combo:
    if not c.is_pure_x():
        raise ValueError("e_hat is defined on R only")
    out: dict = {}
    for w, v in c.terms.items():
        for u, c2 in e_hat_word(w.x).items():
            _acc(out, u, v * c2, c.p)
    return _from_raw(c.p, out)


def associator_raw(a: tuple, b: tuple, c: tuple, q: int) -> dict:
    p = prime_power(q)[0]
    left = mul_raw(sh_e(a, b, q), {c: 1}, q)
    right = mul_raw({a: 1}, sh_e(b, c, q), q)
    out = dict(left)
    for w, v in right.items():
        _acc(out, w, -v, p)
    return out


def associator(a: Combo, b: Combo, c: Combo, q: int) -> Combo:
    """(a*b)*c - a*(b*c) in E."""
    p = _check_q(q, a, b, c)
    ra, rb, rc = _to_raw(a), _to_raw(b), _to_raw(c)
    left = mul_raw(mul_raw(ra, rb, q), rc, q)
    right = mul_raw(ra, mul_raw(rb, rc, q), q)
    return _from_raw(p, left) - _from_raw(p, right)


# --- the sweep ------------------------------------------------------------------

@dataclass
class SweepReport:
    q: int
    max_total_weight: int
    triples_checked: int = 0
    failures: list = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self, timing: bool = False) -> dict:
        d = {
            "schema": 1,
            "kind": "assoc-sweep",
            "q": self.q,
            "maxTotalWeight": self.max_total_weight,
            "triplesChecked": self.triples_checked,
            "failures": [
                {"triple": [format_word(w) for w in t], "associator": str(c)}
                for t, c in self.failures
            ],
        }
        if timing:
            d["elapsed"] = round(self.elapsed, 3)
        return d

    def to_json(self, timing: bool = False) -> str:
        return json.dumps(self.to_dict(timing), sort_keys=True)


def _words_upto(w: int) -> list[MixedWord]:
    return [u for k in range(1, w + 1) for u in all_words(k)]


def sweep_triples(q: int, max_total_weight: int):
    """Deterministic enumeration of ordered word triples of bounded total weight."""
    words = _words_upto(max_total_weight - 2)
    for a in words:
        for b in words:
            if a.weight + b.weight > max_total_weight - 1:
                continue
            for c in words:
                if a.weight + b.weight + c.weight <= max_total_weight:
                    yield a, b, c


def _sweep_chunk(args):
    q, W, firsts = args
    p = prime_power(q)[0]
    words = _words_upto(W - 2)
    checked = 0
    fails = []
    for a in firsts:
        for b in words:
            if a.weight + b.weight > W - 1:
                continue
            for c in words:
                if a.weight + b.weight + c.weight > W:
                    continue
                checked += 1
                r = associator_raw(tuple(a), tuple(b), tuple(c), q)
                if r:
                    fails.append(((a, b, c), _from_raw(p, r)))
    return checked, fails


def assoc_sweep(q: int, max_total_weight: int, workers: int = 1) -> SweepReport:
    """Check every associator of nonempty words with total weight <= the bound."""
    if max_total_weight < 3:
        raise ValueError("maxTotalWeight must be >= 3")
    prime_power(q)
    t0 = time.perf_counter()
    firsts = _words_upto(max_total_weight - 2)
    if workers <= 1:
        chunks = [_sweep_chunk((q, max_total_weight, firsts))]
    else:
        parts = [firsts[i::workers] for i in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as ex:
            chunks = list(ex.map(_sweep_chunk, [(q, max_total_weight, part) for part in parts]))
    rep = SweepReport(q, max_total_weight)
    for n, f in chunks:
        rep.triples_checked += n
        rep.failures.extend(f)
    order = {w: i for i, w in enumerate(firsts)}
    rep.failures.sort(key=lambda t: tuple(order.get(w, 0) for w in t[0]))
    rep.elapsed = time.perf_counter() - t0
    return rep


# --- identities checked under the associator certificate -------------------------------

def check_ehat_hom(q: int, max_weight: int) -> list:
    """Pairs of x-words (wt sum <= max_weight) where e_hat(a*b) != e_hat(a)*e_hat(b)."""
    p = prime_power(q)[0]
    words = [w for k in range(1, max_weight) for w in all_words(k, pure_x=True)]
    bad = []
    for a, b in itertools.product(words, repeat=2):
        if a.weight + b.weight > max_weight:
            continue
        lhs = e_hat(shuffle_R(Combo.word(p, a), Combo.word(p, b), q))
        rhs = shuffle_E(e_hat(Combo.word(p, a)), e_hat(Combo.word(p, b)), q)
        if lhs != rhs:
            bad.append((a, b))
    return bad


def check_prepend(q: int, max_w: int = 3, max_weight: int = 5) -> list:
    """Triples (w, b, a) with y_w (b*a) != (y_w b)*a, b in E, a in R."""
    p = prime_power(q)[0]
    e_words = [EMPTY] + _words_upto(max_weight)
    r_words = [EMPTY] + [w for k in range(1, max_weight + 1) for w in all_words(k, pure_x=True)]
    bad = []
    for w in range(1, max_w + 1):
        for b in e_words:
            for a in r_words:
                if b.weight + a.weight > max_weight:
                    continue
                B, A = Combo.word(p, b), Combo.word(p, a)
                if prepend_y(w, shuffle_E(B, A, q)) != shuffle_E(prepend_y(w, B), A, q):
                    bad.append((w, b, a))
    return bad


def check_observation(q: int, max_weight: int = 6) -> list:
    """Words x_a x_A (wt <= max_weight) violating e_hat(x_a x_A) = x_a x_A + y_a e_hat(x_A)."""
    p = prime_power(q)[0]
    bad = []
    for k in range(2, max_weight + 1):
        for w in all_words(k, pure_x=True):
            if len(w.x) < 2:
                continue
            a, rest = w.x[0], w.x[1:]
            lhs = e_hat(Combo.word(p, w))
            rhs = Combo.word(p, w) + prepend_y(a, e_hat(Combo.word(p, ((), rest))))
            if lhs != rhs:
                bad.append(w)
    return bad


def _ehat_x(p: int, j: int) -> Combo:
    return e_hat(Combo.word(p, ((), (j,))))


def check_mixed_recursion(q: int, max_weight: int = 6) -> list:
    """Literal form of the y-recursion for products of mixed words y_A x_V * y_B x_W."""
    p = prime_power(q)[0]
    words = [w for w in _words_upto(max_weight - 1) if w.y]
    bad = []
    for u, v in itertools.product(words, repeat=2):
        if u.weight + v.weight > max_weight:
            continue
        a1, b1 = u.y[0], v.y[0]
        ut = Combo.word(p, (u.y[1:], u.x))
        vt = Combo.word(p, (v.y[1:], v.x))
        U, V = Combo.word(p, u), Combo.word(p, v)
        rhs = (prepend_y(a1, shuffle_E(ut, V, q)) + prepend_y(b1, shuffle_E(U, vt, q))
               + prepend_y(a1 + b1, shuffle_E(ut, vt, q)))
        mid = shuffle_E(ut, vt, q)
        for i, j, dl in delta_terms(a1, b1, q):
            rhs = rhs + prepend_y(i, shuffle_E(mid, _ehat_x(p, j), q)).scale(dl)
        if shuffle_E(U, V, q) != rhs:
            bad.append((u, v))
    return bad


def check_y_ehat(q: int, max_weight: int = 6) -> list:
    """Literal form of the recursion for (y_a e_hat(x_A)) * (y_b e_hat(x_B))."""
    p = prime_power(q)[0]
    bad = []
    xs = [()] + [w.x for k in range(1, max_weight) for w in all_words(k, pure_x=True)]
    for a in range(1, max_weight):
        for b in range(1, max_weight):
            for A in xs:
                for B in xs:
                    if a + b + sum(A) + sum(B) > max_weight:
                        continue
                    eA = e_hat(Combo.word(p, ((), A)))
                    eB = e_hat(Combo.word(p, ((), B)))
                    yA, yB = prepend_y(a, eA), prepend_y(b, eB)
                    rhs = (prepend_y(a, shuffle_E(eA, yB, q)) + prepend_y(b, shuffle_E(yA, eB, q))
                           + prepend_y(a + b, shuffle_E(eA, eB, q)))
                    mid = shuffle_E(eA, eB, q)
                    for i, j, dl in delta_terms(a, b, q):
                        rhs = rhs + prepend_y(i, shuffle_E(mid, _ehat_x(p, j), q)).scale(dl)
                    if shuffle_E(yA, yB, q) != rhs:
                        bad.append((a, b, A, B))
    return bad
