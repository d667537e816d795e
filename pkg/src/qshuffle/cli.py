"""Command-line front end.

Exit codes: 0 when every check passes, 1 on failures, 2 when a result is
inconclusive (the associator certificate is missing), 3 on bad input.
"""
from __future__ import annotations

import argparse
import math
import os
import random
import sys
from dataclasses import dataclass
from fractions import Fraction

from .arith import FieldConfig, FieldError, prime_power
from .lattice import (LatticeSpec, PoleError, choose_degree, eisenstein_direct,
                      eisenstein_expansion, exp_coeffs, goss_cutoff, goss_poly,
                      make_omega_point, parse_recipe, shell_bound, verify_depth1_product,
                      verify_goss_identity)
from .realize import RealizationContext, g_hat, g_hat_below, verify_ghat_hom, verify_main
from .series import PrecisionError, SeriesField, theta_root
from .shuffle import assoc_sweep, e_hat, shuffle_E, shuffle_R
from .sums import verify_chen, verify_shi, zeta_numeric
from .words import (Combo, ParseError, all_words, format_combo, parse_combo, parse_index)
from ._report import dumps, make_report

GUARD = 10
EXIT_OK, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_INPUT = 0, 1, 2, 3


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    q: int
    prec: int
    D: int | None
    max_weight: int | None
    rank: int
    point: list | None
    fmt: str
    workers: int
    seed: int
    out: str | None

    @property
    def cfg(self) -> FieldConfig:
        return FieldConfig.from_q(self.q)

    @property
    def p(self) -> int:
        return self.cfg.p


def _env_int(name: str, default: int) -> int:
    v = os.environ.get(name)
    if v is None:
        return default
    try:
        return int(v)
    except ValueError:
        raise ConfigError(f"{name} must be an integer, got {v!r}")


def _resolve_q(ns) -> int:
    if ns.p is not None:
        q = ns.p ** ns.e
    else:
        q = ns.q
    try:
        prime_power(q)
    except (FieldError, ValueError) as exc:
        raise ConfigError(f"invalid q={q}: {exc}")
    return q


def make_config(ns) -> RunConfig:
    prec = ns.prec if ns.prec is not None else _env_int("QSHUFFLE_PREC", 20)
    workers = ns.workers if ns.workers is not None else _env_int("QSHUFFLE_WORKERS", 1)
    if prec < 1:
        raise ConfigError("precision must be positive")
    if workers < 1:
        raise ConfigError("workers must be >= 1")
    point = None
    if ns.point:
        point = [s.strip() for s in ns.point.split(",")]
        try:
            parse_recipe(point)
        except ValueError as exc:
            raise ConfigError(str(exc))
    return RunConfig(q=_resolve_q(ns), prec=prec, D=ns.D, max_weight=ns.max_weight,
                     rank=ns.rank, point=point, fmt="json" if ns.json else ns.format,
                     workers=workers, seed=ns.seed, out=ns.out)


# --- helpers -------------------------------------------------------------------------

def _point(rc: RunConfig, rank: int | None = None, extra_ram: int = 1):
    r = rank or rc.rank
    if rc.point is not None and len(rc.point) != r:
        raise ConfigError(f"--point needs {r} coordinates, got {len(rc.point)}")
    exps = parse_recipe(rc.point) if rc.point else [Fraction(r - i, r) for i in range(1, r + 1)]
    ram = math.lcm(extra_ram, *[e.denominator for e in exps])
    fld = SeriesField(rc.cfg, ram=ram, prec=rc.prec + GUARD)
    try:
        return make_omega_point(r, fld, exps)
    except ValueError as exc:
        raise ConfigError(str(exc))


def _degree(rc: RunConfig, z, amin: int = 1, direct: bool = False) -> int:
    if rc.D is not None:
        return rc.D
    D = choose_degree(z, amin, rc.prec, direct=direct)
    if z.r < 2:
        return D
    D = max(D, goss_cutoff(amin, z))
    t = z
    while t.r > 2:
        t = t.tail()
        D = max(D, goss_cutoff(amin, t))
    return D


def _lattice(rc: RunConfig, z) -> LatticeSpec:
    if rc.D is not None:
        D = rc.D
    else:
        D = 0
        while shell_bound(1, z.Ls, D, rc.q) <= rc.prec:
            D += 1
    return LatticeSpec(list(z.coords), D, z.fld)


def _combo(text: str, rc: RunConfig) -> Combo:
    return parse_combo(text, rc.p)


def _series_out(kind: str, s, rc: RunConfig, **meta) -> dict:
    return {"schema": 1, "kind": kind, "q": rc.q, **meta, "prec": str(s.prec),
            "series": s.to_triples(), "text": str(s)}


# --- verbs ---------------------------------------------------------------------------

def cmd_shuffle(ns, rc):
    a, b = _combo(ns.left, rc), _combo(ns.right, rc)
    if a.is_pure_x() and b.is_pure_x():
        res, ring = shuffle_R(a, b, rc.q), "R"
    else:
        res, ring = shuffle_E(a, b, rc.q), "E"
    return {"schema": 1, "kind": "shuffle", "q": rc.q, "ring": ring,
            "result": format_combo(res)}, 0


def cmd_ehat(ns, rc):
    c = _combo(ns.word, rc)
    if not c.is_pure_x():
        raise ConfigError("ehat takes a combination of x-words")
    return {"schema": 1, "kind": "ehat", "q": rc.q, "result": format_combo(e_hat(c))}, 0


def cmd_assoc_sweep(ns, rc):
    rep = assoc_sweep(rc.q, rc.max_weight or 7, workers=rc.workers)
    return rep.to_dict(), 0 if rep.ok else 1


def cmd_chen(ns, rc):
    return verify_chen([rc.q], rc.max_weight or 7, ns.max_d), None


def cmd_shi(ns, rc):
    return verify_shi(rc.q, rc.max_weight or 6, ns.max_depth, ns.max_d), None


def cmd_zeta(ns, rc):
    a = parse_index(ns.index)
    if not a:
        raise ConfigError("zeta needs a nonempty index")
    fld = SeriesField(rc.cfg, prec=rc.prec)
    return _series_out("zeta", zeta_numeric(a, fld), rc, index=ns.index), 0


def cmd_eisenstein(ns, rc):
    a = parse_index(ns.index)
    z = _point(rc)
    direct = ns.method == "direct"
    D = _degree(rc, z, min(a) if a else 1, direct=direct)
    if direct:
        s = eisenstein_direct(a, z, D, target=rc.prec)
    else:
        s = eisenstein_expansion(a, z, D, target=rc.prec)
    return _series_out("eisenstein", s.truncate(z.fld.scaled(rc.prec)), rc, index=ns.index,
                       rank=z.r, D=D, method=ns.method), 0


def cmd_goss_poly(ns, rc):
    z = _point(rc)
    lat = _lattice(rc, z)
    q = rc.q
    imax = 1
    while q ** imax < ns.k:
        imax += 1
    alphas, _ = exp_coeffs(lat, imax)
    g = goss_poly(ns.k, alphas, lat.fld)
    coeffs = [{"degree": j, "series": c.to_triples(), "text": str(c)}
              for j, c in enumerate(g.coeffs) if not c.is_zero()]
    return {"schema": 1, "kind": "goss-poly", "q": q, "k": ns.k, "rank": z.r, "D": lat.D,
            "coefficients": coeffs}, 0


def cmd_goss_identity(ns, rc):
    r = len(rc.point) if rc.point else rc.rank
    # theta^(1/2r) differs from every lattice vector in the fractional part of its size
    z = _point(rc, extra_ram=2 * r)
    lat = _lattice(rc, z)
    x = theta_root(z.fld, 1, 2 * r)
    return verify_goss_identity(ns.k or 2 * rc.q, lat, [x], rc.prec), None


def cmd_depth1_product(ns, rc):
    z = _point(rc, rank=2)
    D = _degree(rc, z)
    checks = []
    for a in ([ns.a] if ns.a else range(1, 4)):
        for b in ([ns.b] if ns.b else range(1, 4)):
            for d in ([ns.d] if ns.d is not None else range(3)):
                checks.append(verify_depth1_product(a, b, d, z, D, rc.prec))
    return make_report("depth1-product", checks, q=rc.q, D=D, target=rc.prec), None


def cmd_ghat(ns, rc):
    if rc.rank < 2:
        raise ConfigError("ghat needs rank >= 2")
    z = _point(rc)
    ctx = RealizationContext(z, _degree(rc, z))
    if ns.combo is not None:
        c = _combo(ns.combo, rc)
        s = g_hat_below(c, ns.d, ctx) if ns.d is not None else g_hat(c, ctx)
        return _series_out("ghat", s, rc, combo=format_combo(c), d=ns.d, D=ctx.D), 0
    rng = random.Random(rc.seed)
    pool = [w for k in range(1, 4) for w in all_words(k)]
    cands = [(u, v) for u in pool for v in pool if u.weight + v.weight <= 4]
    pairs = [(Combo.word(rc.p, u), Combo.word(rc.p, v))
             for u, v in rng.sample(cands, min(ns.samples, len(cands)))]
    rep = verify_ghat_hom(pairs, ns.d or 2, ctx, rc.prec)
    rep["seed"] = rc.seed
    return rep, None


def cmd_verify_main(ns, rc):
    if rc.rank < 2:
        raise ConfigError("verify-main needs rank >= 2")
    a, b = parse_index(ns.left), parse_index(ns.right)
    z = _point(rc)
    ctx = RealizationContext(z, _degree(rc, z, min(a + b) if a + b else 1))
    return verify_main(a, b, ctx, rc.prec), None


def cmd_all(ns, rc):
    from .suite import FAIL, INCONCLUSIVE, run_all
    rows = []
    for n, title, status, _ in run_all(rc.workers):
        rows.append({"criterion": n, "title": title, "status": status})
        if rc.fmt == "text" and rc.out is None:
            print(f"[{status.upper():>12}] {n:2d}. {title}", flush=True)
    statuses = {r["status"] for r in rows}
    code = 1 if FAIL in statuses else 2 if INCONCLUSIVE in statuses else 0
    return {"schema": 1, "kind": "all", "criteria": rows}, code


# --- plumbing ------------------------------------------------------------------------

def _render_text(rep: dict) -> str:
    kind = rep.get("kind")
    if "text" in rep:
        return rep["text"]
    if "result" in rep:
        return rep["result"]
    if kind == "assoc-sweep":
        lines = [f"q={rep['q']} maxTotalWeight={rep['maxTotalWeight']} "
                 f"triples={rep['triplesChecked']} failures={len(rep['failures'])}"]
        lines += [f"  {' | '.join(f['triple'])}: {f['associator']}" for f in rep["failures"]]
        return "\n".join(lines)
    if kind == "goss-poly":
        return " + ".join(f"({c['text']})*t^{c['degree']}" for c in rep["coefficients"]) or "0"
    if kind == "all":
        bad = [r for r in rep["criteria"] if r["status"] != "pass"]
        return f"{len(rep['criteria']) - len(bad)}/{len(rep['criteria'])} criteria passed"
    lines = [f"{kind}: {rep['checked']} checked, {rep['failures']} failures"]
    for c in rep.get("checks", []):
        if not c["pass"]:
            lines.append("  FAIL " + ", ".join(f"{k}={v}" for k, v in c.items() if k != "pass"))
    return "\n".join(lines)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("configuration")
    g.add_argument("--q", type=int, default=2, help="field size (prime power)")
    g.add_argument("--p", type=int, help="characteristic; use with --e instead of --q")
    g.add_argument("--e", type=int, default=1, help="extension degree")
    g.add_argument("--prec", type=int, help="target precision (env QSHUFFLE_PREC, default 20)")
    g.add_argument("--D", type=int, help="degree bound for lattice sums (default: certified choice)")
    g.add_argument("--max-weight", type=int, dest="max_weight")
    g.add_argument("--rank", type=int, default=2)
    g.add_argument("--point", help='comma separated coordinates, e.g. "theta^(1/2),1"')
    g.add_argument("--format", choices=["text", "json"], default="text")
    g.add_argument("--json", action="store_true", help="same as --format json")
    g.add_argument("--out", help="write the report to this file")
    g.add_argument("--workers", type=int, help="worker processes (env QSHUFFLE_WORKERS, default 1)")
    g.add_argument("--seed", type=int, default=0)

    ap = _Parser(prog="qshuffle", description="q-shuffle algebra and multiple Eisenstein series checks")
    sub = ap.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def verb(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(fn=fn)
        return sp

    sp = verb("shuffle", cmd_shuffle, "q-shuffle product of two words or combinations")
    sp.add_argument("left")
    sp.add_argument("right")
    verb("ehat", cmd_ehat, "the map e-hat on an x-word").add_argument("word")
    verb("assoc-sweep", cmd_assoc_sweep, "exhaustive associativity check")
    sp = verb("chen", cmd_chen, "exact depth-one power sum products")
    sp.add_argument("--max-d", type=int, default=3)
    sp = verb("shi", cmd_shi, "exact truncated shuffle homomorphism")
    sp.add_argument("--max-d", type=int, default=3)
    sp.add_argument("--max-depth", type=int, default=2)
    verb("zeta", cmd_zeta, "multiple zeta value as a series in 1/theta").add_argument("index")
    sp = verb("eisenstein", cmd_eisenstein, "multiple Eisenstein series at a point")
    sp.add_argument("index")
    sp.add_argument("--method", choices=["expansion", "direct"], default="expansion")
    sp = verb("goss-poly", cmd_goss_poly, "Goss polynomial of the lattice spanned by the point")
    sp.add_argument("--k", type=int, required=True)
    sp = verb("goss-identity", cmd_goss_identity, "Goss polynomial identity at x = theta^(1/2)")
    sp.add_argument("--k", type=int, help="largest k (default 2q)")
    sp = verb("depth1-product", cmd_depth1_product, "depth-one Goss sum products")
    sp.add_argument("--a", type=int)
    sp.add_argument("--b", type=int)
    sp.add_argument("--d", type=int)
    sp = verb("ghat", cmd_ghat, "realise a combination, or spot-check multiplicativity")
    sp.add_argument("combo", nargs="?")
    sp.add_argument("--d", type=int, help="truncation degree (value of G-hat below d)")
    sp.add_argument("--samples", type=int, default=8)
    sp = verb("verify-main", cmd_verify_main, "E_r(a) E_r(b) against the realised shuffle")
    sp.add_argument("left")
    sp.add_argument("right")
    verb("all", cmd_all, "the full acceptance suite")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    ns = ap.parse_args(argv)
    try:
        rc = make_config(ns)
        rep, code = ns.fn(ns, rc)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ConfigError, PoleError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except PrecisionError as exc:
        print(f"precision error: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    if code is None:
        code = EXIT_FAIL if rep["failures"] else EXIT_OK
    text = dumps(rep) if rc.fmt == "json" else _render_text(rep)
    if rc.out:
        with open(rc.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
