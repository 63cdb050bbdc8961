"""Command-line front end: ``schurlab <verb> ...``.

Every verb prints JSON to stdout.  Exit status is 0 when all checks pass,
1 when a check fails and 2 on bad input.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from . import free_space as fs
from .numbers import (
    DEFAULT_PRECISION,
    ComplexRational,
    Enclosure,
    I,
    as_fraction,
    decimal_str,
    fraction_json,
    root_of_unity,
)
from .seq_quantities import (
    STAGED,
    GENERATORS,
    diam_and_separation,
    generate,
    lower_l1_complex,
    lower_l1_real,
    rosenthal_stage_check,
    staged_report,
    VectorFamily,
)
from .spaces import L1Complex, sign_sup_norm
from .subset_selection import best_subset_bruteforce, halfplane_select, roots_witness
from .sums import build_witness_x, build_witness_z, telescoping_identity

PRECISION_ENV = "SCHURLAB_PRECISION"

EXACT, WITHIN, FAILED = "exact", "within-tolerance", "failed"


class InputError(Exception):
    pass


# ---------------------------------------------------------------------------
# serialisation


class Encoder:
    def __init__(self, prec: Fraction):
        self.digits = max(1, math.ceil(-math.log10(prec)))

    def __call__(self, v):
        if isinstance(v, bool) or v is None or isinstance(v, str):
            return v
        if isinstance(v, (int, Fraction)):
            return fraction_json(Fraction(v), self.digits)
        if isinstance(v, float):
            return "inf" if math.isinf(v) else repr(v)
        if isinstance(v, Enclosure):
            if v.is_exact:
                return self(v.lo)
            return {"lo": self(v.lo), "hi": self(v.hi)}
        if isinstance(v, ComplexRational):
            return {"re": self(v.re), "im": self(v.im)}
        if isinstance(v, dict):
            return {str(k): self(x) for k, x in v.items()}
        if isinstance(v, (list, tuple)):
            return [self(x) for x in v]
        raise TypeError(f"cannot serialise {type(v).__name__}")


def _dump(obj) -> None:
    json.dump(obj, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _to_float(v) -> float:
    if isinstance(v, Enclosure):
        return float(v.mid)
    return float(v)


# ---------------------------------------------------------------------------
# claims


@dataclass(frozen=True)
class Claim:
    """A constant with the rule that decides whether a computed value matches it.

    ``run(stage, prec)`` returns ``(computed, status)``.
    """

    id: str
    paper: str
    default_stage: Optional[int]
    run: Callable


def _exact(value, expected) -> str:
    return EXACT if value == expected else FAILED


def _tolerance(value, target: float, tol: float) -> str:
    return WITHIN if abs(_to_float(value) - target) <= tol else FAILED


def _rudin_ratio(stage, prec):
    w = roots_witness(stage, verify=stage <= 8)
    return w.ratio, _tolerance(w.ratio, 1 / math.pi, 2e-4)


def _rudin_oracle(stage, prec):
    rng = random.Random(stage)
    worst = None
    for _ in range(200):
        lam = _random_complex(rng, rng.randint(1, 10))
        sel = halfplane_select(lam, prec)
        _, brute = best_subset_bruteforce(lam, prec)
        if abs(sel.value.mid - brute.mid) > prec or (sel.total.hi > 0 and float(sel.ratio.lo) < 1 / math.pi):
            return sel.ratio, FAILED
        if sel.total.hi > 0 and (worst is None or sel.ratio.lo < worst.lo):
            worst = sel.ratio
    return worst, EXACT


def _cantor(stage, prec):
    n = stage
    alpha = [root_of_unity(k, 2 * n) * Fraction(1, n) for k in range(n)]
    v, _ = sign_sup_norm(alpha, prec=prec)
    return v, _tolerance(v, 2 / math.pi, 0.005 * 2 / math.pi)


def _complexified(stage, prec):
    fn = STAGED["complexified-equivalence"][0]
    lo_const = fn(stage)  # 1 / (upper bound on the complex lower estimate)
    ok = _to_float(lo_const) >= math.pi / 2 - 0.02 and _to_float(lo_const) <= math.pi / 2
    return {"lower": lo_const, "upper": "inf"}, WITHIN if ok else FAILED


def _rotated_real(stage, prec):
    fam = VectorFamily(L1Complex(1), [[1], [I]])
    v = lower_l1_real(fam)
    return v, _tolerance(v, 1 / math.sqrt(2), 1e-9)


def _rotated_complex(stage, prec):
    br = lower_l1_complex(VectorFamily(L1Complex(1), [[1], [I]]))
    return br.upper, _exact(br.upper, 0)


def _l1_cjr(stage, prec):
    v = lower_l1_real(generate("l1-basis", stage))
    return v, _exact(v, 1)


def _exlf_values(stage):
    space = fs.exlf_space(stage)
    return space, [fs.free_norm_primal({k: 1, -k: -1}, space) for k in range(1, stage + 1)]


def _exlf_pair(stage, prec):
    _, vals = _exlf_values(stage)
    return max(vals), _exact(set(vals), {Fraction(2)})


def _exlf_delta(stage, prec):
    space = fs.exlf_space(stage)
    vals = {fs.free_norm_primal({s * k: 1}, space) for k in range(1, stage + 1) for s in (1, -1)}
    return max(vals), _exact(vals, {Fraction(1)})


def _exlf3_member(stage, prec):
    rep = fs.schur_witness_report("exlf3", stage)
    vals = set(rep.member_norms)
    return max(vals), _exact(vals, {Fraction(3)})


def _exlf3_separation(stage, prec):
    rep = fs.schur_witness_report("exlf3", stage)
    vals = set(rep.pair_distances.values())
    return min(vals), _exact(vals, {Fraction(4)})


def _exlf3_lp1(stage, prec):
    cert = fs.exceptional_pair_certificate(fs.exlf3_space(stage), range(1, stage + 1))
    vals = set(cert.lp1.values())
    return cert.lp1_max, _exact(vals, {Fraction(1)})


def _exlf_lp2(stage, prec):
    eps = Fraction(1, 4)
    cert = fs.exceptional_pair_certificate(fs.exlf_space(stage), range(1, stage + 1), eps=eps)
    return cert.lp2_max, EXACT if cert.lp2_ok else FAILED


def _sandwich(stage, prec):
    rng = random.Random(stage)
    worst = None
    for _ in range(20):
        a = Fraction(rng.randint(1, 4))
        b = a + Fraction(rng.randint(0, 4 * int(a)), 4)
        space = fs.random_separated_space(rng, rng.randint(2, 6), a, b)
        samples = [fs.random_free_vector(rng, space.labels) for _ in range(5)]
        rep = fs.separated_sandwich_check(space, a, b, samples)
        if not rep.holds:
            return None, FAILED
        for mu, lo, v, hi in rep.rows:
            if v:
                r = v / fs.l1_mass(mu)
                worst = r if worst is None else min(worst, r)
    return worst, EXACT


def _chain_x(stage, prec):
    vals = {build_witness_x(n, k).norm - n for n in range(1, stage + 1) for k in range(1, 101)}
    return build_witness_x(stage, 1).norm, _exact(vals, {Fraction(1)})


def _chain_z(stage, prec):
    vals = {build_witness_z(n, m).norm for n in range(1, stage + 1) for m in range(1, 65)}
    return max(vals), _exact(vals, {Fraction(1)})


def _telescoping(stage, prec):
    ok = all(telescoping_identity(stage, m) for m in range(1, 129))
    return 1, EXACT if ok else FAILED


CLAIMS: dict[str, Claim] = {
    c.id: c
    for c in [
        Claim("rudin.ratio", "1/pi", 64, _rudin_ratio),
        Claim("rudin.oracle", ">= 1/pi", 7, _rudin_oracle),
        Claim("cantor.dcj", "2/pi", 16, _cantor),
        Claim("complexified.equivalence", ">= pi/2", 8, _complexified),
        Claim("rotated.cjr", "1/sqrt(2)", 1, _rotated_real),
        Claim("rotated.cj", "0", 1, _rotated_complex),
        Claim("l1.cjr", "1", 10, _l1_cjr),
        Claim("exlf.delta-norm", "1", 5, _exlf_delta),
        Claim("exlf.pair-distance", "2", 5, _exlf_pair),
        Claim("exlf3.member-norm", "3", 6, _exlf3_member),
        Claim("exlf3.separation", "4", 6, _exlf3_separation),
        Claim("exlf3.lp1", "1", 6, _exlf3_lp1),
        Claim("exlf.lp2", "<= 3/4", 5, _exlf_lp2),
        Claim("free.sandwich", "a/2 <= |mu|/|mu|_1 <= b/2", 11, _sandwich),
        Claim("chain.x", "n+1", 4, _chain_x),
        Claim("chain.z", "1", 4, _chain_z),
        Claim("chain.telescoping", "1", 8, _telescoping),
    ]
}


def _run_claim(args):
    cid, stage, prec = args
    claim = CLAIMS[cid]
    stage = claim.default_stage if stage is None else stage
    try:
        computed, status = claim.run(stage, prec)
    except (ArithmeticError, ValueError, AssertionError) as exc:
        computed, status = f"error: {exc}", FAILED
    return cid, claim.paper, computed, stage, status


def run_claims(ids, stage=None, prec=DEFAULT_PRECISION, jobs=1) -> list[tuple]:
    work = [(cid, stage, prec) for cid in ids]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_run_claim, work))
    return [_run_claim(w) for w in work]


# ---------------------------------------------------------------------------
# configuration


def _settings(args) -> dict:
    """Flags override the config file, which overrides defaults (env var included)."""
    env = os.environ.get(PRECISION_ENV)
    out = {"precision": Fraction(env) if env else DEFAULT_PRECISION, "seed": 0}
    if getattr(args, "config", None):
        cfg = _load_json(args.config)
        if not isinstance(cfg, dict):
            raise InputError("config file must hold a flat JSON object")
        for k, v in cfg.items():
            if k == "precision":
                out[k] = Fraction(str(v))
            elif k == "seed":
                out[k] = int(v)
    if getattr(args, "precision", None) is not None:
        out["precision"] = Fraction(args.precision)
    if getattr(args, "seed", None) is not None:
        out["seed"] = args.seed
    if not 0 < out["precision"] < 1:
        raise InputError("precision must lie in (0, 1)")
    return out


# ---------------------------------------------------------------------------
# verbs


def _random_complex(rng: random.Random, m: int) -> list[ComplexRational]:
    return [ComplexRational(Fraction(rng.randint(-9, 9), rng.randint(1, 5)), Fraction(rng.randint(-9, 9), rng.randint(1, 5))) for _ in range(m)]


def _parse_complex(v) -> ComplexRational:
    try:
        return ComplexRational.of(v)
    except (TypeError, ValueError, KeyError, ZeroDivisionError) as exc:
        raise InputError(f"bad complex number {v!r}: {exc}") from exc


def cmd_rudin(args, cfg) -> int:
    enc = Encoder(cfg["precision"])
    prec = cfg["precision"]
    if args.witness is not None:
        if args.witness < 1:
            raise InputError("--witness needs n >= 1")
        rows = []
        for n in sorted({1, 2, 4, 8, 16, 32, args.witness}):
            if n > args.witness:
                continue
            w = roots_witness(n, verify=n <= 8)
            rows.append({"n": n, "best_value": enc(w.best_value), "ratio": enc(w.ratio)})
        final = roots_witness(args.witness, verify=args.witness <= 8)
        status = _tolerance(final.ratio, 1 / math.pi, 2e-4) if args.witness >= 64 else WITHIN
        if _to_float(final.ratio) <= 1 / math.pi:
            status = FAILED
        _dump(
            {
                "entries": [{"claim": "rudin.ratio", "paper": "1/pi", "computed": enc(final.ratio), "stage": args.witness, "status": status}],
                "stages": rows,
                "target": repr(1 / math.pi),
            }
        )
        return 0 if status != FAILED else 1
    if args.input:
        data = _load_json(args.input)
        if not isinstance(data, list) or not data:
            raise InputError("input must be a nonempty JSON list of complex numbers")
        instances = [[_parse_complex(v) for v in data]]
    elif args.random is not None:
        if not 1 <= args.random <= 20:
            raise InputError("--random needs 1 <= m <= 20")
        rng = random.Random(cfg["seed"])
        instances = [_random_complex(rng, args.random) for _ in range(args.count)]
    else:
        raise InputError("one of --witness, --input or --random is required")
    out, failed = [], False
    for lam in instances:
        sel = halfplane_select(lam, prec)
        row = {"subset": list(sel.subset), "subset_sum": enc(sel.subset_sum), "total": enc(sel.total), "ratio": enc(sel.ratio)}
        status = EXACT
        if len(lam) <= 20:
            subset, value = best_subset_bruteforce(lam, prec)
            row["bruteforce"] = enc(value)
            if abs(value.mid - sel.value.mid) > prec:
                status = FAILED
        if sel.total.hi > 0 and float(sel.ratio.lo) < 1 / math.pi:
            status = FAILED
        row["status"] = status
        failed |= status == FAILED
        out.append(row)
    _dump({"instances": out})
    return 1 if failed else 0


def _emit_report(rows, cfg, args, runtime):
    enc = Encoder(cfg["precision"])
    entries = [{"claim": c, "paper": p, "computed": enc(v), "stage": s, "status": st} for c, p, v, s, st in rows]
    meta = {"seed": cfg["seed"], "precision": enc(cfg["precision"])}
    if args.timing:
        meta["runtime_seconds"] = round(runtime, 3)
    _dump({"metadata": meta, "entries": entries})
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["claim", "paper", "computed", "stage", "status"])
            for c, p, v, s, st in rows:
                w.writerow([c, p, _csv_value(v, enc), s, st])


def _csv_value(v, enc) -> str:
    if isinstance(v, (Fraction, int)):
        return decimal_str(Fraction(v), enc.digits)
    if isinstance(v, Enclosure):
        return f"[{decimal_str(v.lo, enc.digits)}, {decimal_str(v.hi, enc.digits)}]"
    return json.dumps(enc(v))


def cmd_constants(args, cfg) -> int:
    if args.list:
        _dump([{"claim": c.id, "paper": c.paper, "stage": c.default_stage} for c in CLAIMS.values()])
        return 0
    ids = list(CLAIMS) if args.all or not args.claims else args.claims
    unknown = [c for c in ids if c not in CLAIMS]
    if unknown:
        raise InputError(f"unknown claim(s): {', '.join(unknown)}; use --list")
    t0 = time.perf_counter()
    rows = run_claims(ids, args.stage, cfg["precision"], args.jobs)
    _emit_report(rows, cfg, args, time.perf_counter() - t0)
    return 1 if any(r[4] == FAILED for r in rows) else 0


def cmd_quantities(args, cfg) -> int:
    enc = Encoder(cfg["precision"])
    try:
        fam = generate(args.tag, args.stage)
    except KeyError as exc:
        raise InputError(str(exc.args[0])) from exc
    out = {"tag": args.tag, "stage": args.stage, "members": len(fam)}
    what = set(args.what)
    ok = True
    if "separation" in what or "all" in what:
        diam, sep = diam_and_separation(fam)
        out["diameter"], out["separation"] = enc(diam), enc(sep)
    real_ok = fam.model.polyhedral or len(fam) <= 3
    if ("lower-real" in what or "all" in what) and real_ok:
        out["lower_real"] = enc(lower_l1_real(fam))
    if ("lower-complex" in what or "all" in what) and fam.model.scalars == "complex":
        br = lower_l1_complex(fam, phases=args.phases)
        out["lower_complex"] = {"lower": enc(br.lower), "upper": enc(br.upper), "lower_method": br.lower_method}
    if "rosenthal" in what or ("all" in what and real_ok):
        try:
            rep = rosenthal_stage_check(fam)
            out["rosenthal"] = {"holds": rep.holds, "tight": rep.tight}
        except AssertionError as exc:
            out["rosenthal"] = {"holds": False, "error": str(exc)}
            ok = False
    _dump(out)
    return 0 if ok else 1


def cmd_staged(args, cfg) -> int:
    enc = Encoder(cfg["precision"])
    try:
        sv = staged_report(args.tag, args.max)
    except KeyError as exc:
        raise InputError(str(exc.args[0])) from exc
    _dump(
        {
            "tag": sv.tag,
            "direction": sv.direction,
            "target": None if sv.target is None else repr(sv.target),
            "tolerance": repr(sv.tolerance),
            "stages": [{"stage": n, "value": enc(v)} for n, v in sv.stages],
            "monotone": sv.monotone(),
            "final_error": None if sv.last_error() is None else repr(sv.last_error()),
            "ok": sv.ok,
        }
    )
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["stage", "value"])
            for n, v in sv.stages:
                w.writerow([n, repr(_to_float(v))])
    return 0 if sv.ok else 1


def _load_space(args) -> fs.FiniteMetricSpace:
    if args.space:
        try:
            return fs.FiniteMetricSpace.from_json(_load_json(args.space))
        except fs.MetricError as exc:
            raise InputError(f"{exc} (points {exc.points})") from exc
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"bad space file: {exc}") from exc
    if args.example not in fs.EXAMPLES:
        raise InputError(f"unknown example {args.example!r}; known: {', '.join(fs.EXAMPLES)}")
    return fs.EXAMPLES[args.example](args.n)


def _label(space, key: str):
    for lab in space.labels:
        if str(lab) == key:
            return lab
    raise InputError(f"unknown point {key!r}")


def cmd_free_norm(args, cfg) -> int:
    enc = Encoder(cfg["precision"])
    space = _load_space(args)
    raw = _load_json(args.vector) if args.vector else {}
    if not isinstance(raw, dict):
        raise InputError("vector file must map point labels to rationals")
    try:
        mu = {_label(space, k): as_fraction(v) for k, v in raw.items()}
        mu = fs.free_vector(space, mu)
    except (TypeError, ValueError, KeyError, ZeroDivisionError) as exc:
        raise InputError(f"bad vector: {exc}") from exc
    methods = ["primal", "dual", "formula"] if args.method == "all" else [args.method]
    values = {}
    for m in methods:
        if m == "primal":
            values[m] = fs.free_norm_primal(mu, space)
        elif m == "dual":
            values[m] = fs.free_norm_dual(mu, space)
        else:
            formula = {"exlf": fs.exlf_norm_formula, "mprime": fs.mprime_norm_formula}.get(args.example or "")
            if formula is None:
                if args.method == "formula":
                    raise InputError("closed-form norms exist only for --example exlf and mprime")
                continue
            values[m] = formula(mu)
    agree = len(set(values.values())) <= 1
    _dump({"values": {k: enc(v) for k, v in values.items()}, "agree": agree})
    return 0 if agree else 1


def cmd_certify(args, cfg) -> int:
    enc = Encoder(cfg["precision"])
    if args.example not in ("exlf", "exlf3"):
        raise InputError("certify supports exlf and exlf3")
    if args.n < 3:
        raise InputError("--n must be >= 3")
    eps = None
    if args.eps is not None:
        eps = Fraction(args.eps)
    elif args.example == "exlf":
        eps = Fraction(1, 4)
    space = fs.EXAMPLES[args.example](args.n)
    cert = fs.exceptional_pair_certificate(space, range(1, args.n + 1), eps=eps, name=args.example)
    if args.example == "exlf3":
        lp1_ok = all(v == 1 for v in cert.lp1.values())
    else:
        lp1_ok = cert.lp1_ok
    ok = lp1_ok and cert.lp2_ok
    out = {
        "example": args.example,
        "n": args.n,
        "eps": enc(eps) if eps is not None else None,
        "lp1": [{"pairs": list(k), "optimum": enc(v)} for k, v in sorted(cert.lp1.items())],
        "lp1_max": enc(cert.lp1_max),
        "lp2_max": enc(cert.lp2_max) if cert.lp2 else None,
        "lp2_count": len(cert.lp2),
        "lp2_infeasible": sum(v is None for v in cert.lp2.values()),
        "verdict": "pass" if ok else "fail",
    }
    _dump(out)
    return 0 if ok else 1


def cmd_sums(args, cfg) -> int:
    enc = Encoder(cfg["precision"])
    rows, ok = [], True
    for n in range(1, args.n + 1):
        x = build_witness_x(n, args.k)
        z = build_witness_z(n, args.m)
        tele = telescoping_identity(n, args.m)
        ok &= x.norm == n + 1 and z.norm == 1 and tele
        rows.append({"n": n, "x_norm": enc(x.norm), "z_norm": enc(z.norm), "telescoping": tele})
    _dump({"m": args.m, "k": args.k, "rows": rows, "ok": ok})
    return 0 if ok else 1


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="schurlab", description=__doc__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", help=f"enclosure width and decimal precision (env {PRECISION_ENV})")
    common.add_argument("--seed", type=int)
    common.add_argument("--config", help="flat JSON file with precision/seed defaults")
    sub = p.add_subparsers(dest="verb", required=True)

    r = sub.add_parser("rudin", parents=[common], help="subset selection with a large sum")
    r.add_argument("--witness", type=int, metavar="N", help="roots-of-unity configuration up to stage N")
    r.add_argument("--input", metavar="FILE", help="JSON list of complex rationals")
    r.add_argument("--random", type=int, metavar="M", help="random instances of size M")
    r.add_argument("--count", type=int, default=1)
    r.set_defaults(func=cmd_rudin)

    c = sub.add_parser("constants", parents=[common], help="run the registered constant checks")
    c.add_argument("claims", nargs="*")
    c.add_argument("--all", action="store_true")
    c.add_argument("--list", action="store_true")
    c.add_argument("--stage", type=int)
    c.add_argument("--csv", metavar="FILE")
    c.add_argument("--jobs", type=int, default=1)
    c.add_argument("--timing", action="store_true", help="include runtime in the metadata")
    c.set_defaults(func=cmd_constants)

    q = sub.add_parser("quantities", parents=[common], help="finite-stage quantities of a generated family")
    q.add_argument("tag", choices=sorted(GENERATORS))
    q.add_argument("--stage", type=int, default=4)
    q.add_argument("--what", nargs="+", default=["all"], choices=["all", "separation", "lower-real", "lower-complex", "rosenthal"])
    q.add_argument("--phases", type=int, default=8)
    q.set_defaults(func=cmd_quantities)

    s = sub.add_parser("staged", parents=[common], help="staged convergence toward a known constant")
    s.add_argument("tag", choices=sorted(STAGED))
    s.add_argument("--max", type=int, default=16)
    s.add_argument("--csv", metavar="FILE")
    s.set_defaults(func=cmd_staged)

    f = sub.add_parser("free-norm", parents=[common], help="norm in a Lipschitz-free space")
    src = f.add_mutually_exclusive_group(required=True)
    src.add_argument("--space", metavar="FILE")
    src.add_argument("--example", choices=sorted(fs.EXAMPLES))
    f.add_argument("--n", type=int, default=3)
    f.add_argument("--vector", metavar="FILE", help="JSON map label -> rational")
    f.add_argument("--method", choices=["primal", "dual", "formula", "all"], default="all")
    f.set_defaults(func=cmd_free_norm)

    ce = sub.add_parser("certify", parents=[common], help="LP certificates for the graph examples")
    ce.add_argument("example")
    ce.add_argument("--n", type=int, default=3)
    ce.add_argument("--eps")
    ce.set_defaults(func=cmd_certify)

    su = sub.add_parser("sums", parents=[common], help="chain-norm witnesses")
    su.add_argument("--n", type=int, default=4)
    su.add_argument("--m", type=int, default=8)
    su.add_argument("--k", type=int, default=1)
    su.set_defaults(func=cmd_sums)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _settings(args)
        return args.func(args, cfg)
    except InputError as exc:
        print(f"schurlab: error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, ZeroDivisionError) as exc:
        print(f"schurlab: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
