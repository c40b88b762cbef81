"""Command-line front end.

Every command prints a single JSON document (sorted keys, schema tag 1)
unless jsonl or csv output is selected; exact rationals are rendered as
"num/den" strings so nothing is lost to binary rounding. Exit codes:
0 success, 1 a computation check failed, 2 bad usage (precondition or
budget violations included).
"""

from __future__ import annotations

import argparse
import csv as _csv
import dataclasses
import json
import math
import os
import sys
from fractions import Fraction

import mpmath as mp

from . import __version__, dickman, expsums, series, sieve, special, verify
from .arith import build_spf_table, memory_budget_mb
from .bigreal import BigRealWithError
from .errors import BudgetError, PreconditionError

SCHEMA = 1


@dataclasses.dataclass
class RunConfig:
    """Knobs shared across commands (mostly via global flags)."""

    precision_bits: int = 192
    budget_mb: int | None = None
    term_budget: int = 10**9
    table_limit: int = 10**8
    preset: str = "desk"
    fmt: str = "json"
    seed: int = 0
    threads: int = max(1, os.cpu_count() or 1)

    def resolved_budget_mb(self) -> int:
        return self.budget_mb if self.budget_mb is not None else memory_budget_mb()


# -- serialization -------------------------------------------------------------


def to_jsonable(x):
    if x is None or isinstance(x, (bool, int, str)):
        return x
    if isinstance(x, float):
        return x
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, mp.mpf):
        return mp.nstr(x, 25)
    if isinstance(x, (complex, mp.mpc)):
        return {"re": to_jsonable(x.real if isinstance(x, complex) else mp.mpf(x.real)),
                "im": to_jsonable(x.imag if isinstance(x, complex) else mp.mpf(x.imag))}
    if isinstance(x, BigRealWithError):
        return {"value": mp.nstr(x.value, 40), "err": mp.nstr(x.err, 10)}
    if dataclasses.is_dataclass(x) and not isinstance(x, type):
        return {f.name: to_jsonable(getattr(x, f.name)) for f in dataclasses.fields(x)}
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set)):
        return [to_jsonable(v) for v in x]
    if hasattr(x, "item"):  # numpy scalars
        return to_jsonable(x.item())
    return str(x)


def emit(payload, cfg: RunConfig, command: str, rows_key: str | None = None) -> None:
    """Print the payload as json, jsonl, or csv.

    jsonl and csv need tabular content: rows_key names the list of row
    dicts inside the payload (remaining fields go to a trailing summary
    line in jsonl and are dropped in csv).
    """
    data = to_jsonable(payload)
    if cfg.fmt == "json":
        doc = {"schema": SCHEMA, "command": command, "result": data}
        print(json.dumps(doc, sort_keys=True))
        return
    if rows_key is None or rows_key not in data:
        # non-tabular payloads degrade to a single jsonl line / one-col csv
        if cfg.fmt == "jsonl":
            print(json.dumps({"schema": SCHEMA, "command": command, "result": data}, sort_keys=True))
        else:
            w = _csv.writer(sys.stdout)
            w.writerow(["result"])
            w.writerow([json.dumps(data, sort_keys=True)])
        return
    rows = data[rows_key]
    rest = {k: v for k, v in data.items() if k != rows_key}
    if cfg.fmt == "jsonl":
        for row in rows:
            print(json.dumps(row, sort_keys=True))
        if rest:
            print(json.dumps({"type": "summary", **rest}, sort_keys=True))
        return
    # csv
    header: list[str] = []
    for row in rows:
        for k in row:
            if k not in header:
                header.append(k)
    w = _csv.writer(sys.stdout)
    w.writerow(header)
    for row in rows:
        w.writerow([json.dumps(row.get(k)) if isinstance(row.get(k), (dict, list)) else row.get(k) for k in header])


# -- command bodies --------------------------------------------------------------


def cmd_alpha(args, cfg: RunConfig) -> int:
    val = series.alpha_k(args.k, target_precision=args.bits)
    payload = {
        "k": args.k,
        "bits": args.bits,
        "value": val,
        "digits7": val.leading_decimal(7),
        "err_upper": mp.nstr(val.err, 8),
    }
    emit(payload, cfg, "alpha")
    return 0


def cmd_prop1(args, cfg: RunConfig) -> int:
    p = args.p
    payload: dict = {"p": p}
    payload["stat_plain"] = series.prop1_statistic_exact(p)
    if args.r is not None:
        payload["r"] = args.r
        payload["stat_r"] = series.prop1_statistic_with_r_exact(p, args.r)
    if args.expansion and p >= 11:
        exp = series.tail_expansion(p)
        payload["expansion_terms"] = list(exp.terms)
        payload["remainder_bound"] = exp.remainder_bound
    if args.residuals:
        rows = series.expansion_residuals(p, r=args.r, j_max=args.j_max)
        payload["residuals"] = [
            {
                "label": row["label"],
                "value": row["value"],
                "value_float": float(row["value"]),
                "bound": row["bound"],
                "within": None if row["bound"] is None else abs(row["value"]) <= row["bound"],
            }
            for row in rows
        ]
    emit(payload, cfg, "prop1")
    return 0


def cmd_rho(args, cfg: RunConfig) -> int:
    if args.ten_thirds:
        rep = dickman.rho_ten_thirds_quadrature()
        emit(rep, cfg, "rho")
        return 0
    if args.table:
        sol = dickman.rho_solution(u_max=args.u if args.u is not None else 20.0, grid_step=args.step, tol=args.tol)
        rows = [{"u": u, "rho": v, "err": e} for (u, v, e) in sol.values]
        emit({"grid_step": sol.grid_step, "rows": rows}, cfg, "rho", rows_key="rows")
        return 0
    if args.u is None:
        raise PreconditionError("rho needs --u, --table, or --ten-thirds")
    val = dickman.rho(args.u, tol=args.tol)
    emit({"u": args.u, "tol": args.tol, "rho": val}, cfg, "rho")
    return 0


def cmd_psi(args, cfg: RunConfig) -> int:
    sc = dickman.smooth_count(args.x, args.y, with_exact=not args.no_exact, budget_mb=cfg.budget_mb)
    payload = {
        "x": sc.x,
        "y": sc.y,
        "exact": sc.exact,
        "approx": sc.approx,
        "band": sc.band,
    }
    if sc.exact is not None:
        approx = float(sc.approx.value)
        payload["relative_gap"] = abs(sc.exact / approx - 1) if approx else None
    emit(payload, cfg, "psi")
    return 0


def cmd_sieve_weights(args, cfg: RunConfig) -> int:
    ws = sieve.beta_sieve_weights(args.d, args.z)
    payload: dict = {
        "level_D": ws.level_D,
        "z": ws.z,
        "s": ws.s,
        "upper_support": len(ws.lambda_plus),
        "lower_support": len(ws.lambda_minus),
    }
    rc = 0
    if args.n_limit:
        rep = sieve.verify_sandwich(ws, args.n_limit)
        payload["sandwich"] = rep
        rc = 0 if rep["ok"] else 1
    if args.dump_weights:
        payload["lambda_plus"] = {str(k): v for k, v in sorted(ws.lambda_plus.items())}
        payload["lambda_minus"] = {str(k): v for k, v in sorted(ws.lambda_minus.items())}
    emit(payload, cfg, "sieve weights")
    return rc


def cmd_sieve_ff(args, cfg: RunConfig) -> int:
    s = args.s
    payload = {"s": s}
    if 1 <= s <= 6:
        payload["F"] = sieve.linear_F(s)
    if 0 <= s <= 6:
        payload["f"] = sieve.linear_f(s)
    if "F" in payload and "f" in payload:
        payload["F_minus_f"] = sieve.linear_F(s) - sieve.linear_f(s)
    emit(payload, cfg, "sieve Ff")
    return 0


def cmd_sieve_flemma(args, cfg: RunConfig) -> int:
    t = sieve.FundamentalLemmaTruncation(z=args.z, R=args.r, parity=args.parity)
    rep = sieve.fundamental_lemma_check(t, args.n_limit)
    emit(rep, cfg, "sieve flemma")
    return 0 if rep["ok"] else 1


def cmd_sieve_vector(args, cfg: RunConfig) -> int:
    if args.tuple:
        vals = [Fraction(v) for v in args.tuple]
        ok = sieve.vector_sieve_check(*vals)
        emit({"tuple": vals, "holds": ok}, cfg, "sieve vector")
        return 0 if ok else 1
    rep = sieve.vector_sieve_random_trials(args.trials, seed=cfg.seed)
    emit(rep, cfg, "sieve vector")
    return 0 if rep["ok"] else 1


def cmd_sieve_mertens(args, cfg: RunConfig) -> int:
    if args.x is not None:
        rep = sieve.mertens_window_report(args.x, args.epsilon)
        emit(rep, cfg, "sieve mertens")
        return 0
    if args.a is None or args.b is None:
        raise PreconditionError("mertens needs either --x/--epsilon or --a/--b")
    payload = {
        "a": args.a,
        "b": args.b,
        "product": sieve.mertens_product(args.a, args.b),
        "reciprocal_sum": sieve.prime_reciprocal_sum(args.a, args.b),
    }
    emit(payload, cfg, "sieve mertens")
    return 0


def _spec_from_args(args) -> expsums.PhaseSpec:
    if args.kind == "basic":
        if args.A is None or args.B is None:
            raise PreconditionError("basic phase needs --A and --B")
        return expsums.make_basic_phase(args.A, args.B, args.lo, args.hi)
    if args.kind == "lemma61":
        for name in ("h", "m", "r"):
            if getattr(args, name) is None:
                raise PreconditionError(f"lemma61 phase needs --{name}")
        return expsums.make_lemma61_phase(args.h, args.m, args.r, args.lo, args.hi, v=args.v)
    raise PreconditionError("weyl checks run on basic or lemma61 specs")


def cmd_expsum_basic(args, cfg: RunConfig) -> int:
    spec = expsums.make_basic_phase(args.A, args.B, args.lo, args.hi)
    res = expsums.eval_phase(
        spec,
        threads=cfg.threads,
        engine=args.engine,
        prec_bits=args.prec_bits,
        term_budget=cfg.term_budget,
    )
    emit({"spec": spec, "result": res}, cfg, "expsum basic")
    return 0


def cmd_expsum_lemma61(args, cfg: RunConfig) -> int:
    spec = expsums.make_lemma61_phase(args.h, args.m, args.r, args.lo, args.hi, v=args.v)
    res = expsums.eval_phase(spec, engine=args.engine, prec_bits=args.prec_bits, term_budget=cfg.term_budget)
    payload = {"spec": spec, "result": res}
    if args.check_rewrite:
        payload["change_of_variables"] = expsums.lemma61_change_of_variables(spec)
        payload["progression_oracle_abs"] = expsums.lemma61_ap_oracle(spec)
    emit(payload, cfg, "expsum lemma61")
    return 0


def cmd_expsum_weyl(args, cfg: RunConfig) -> int:
    spec = _spec_from_args(args)
    rep = expsums.weyl_difference_check(spec, K=args.K, L=args.L)
    emit(rep, cfg, "expsum weyl")
    ok = rep["first_ok"] and (args.L is None or rep["second_ok"])
    return 0 if ok else 1


def cmd_expsum_scan(args, cfg: RunConfig) -> int:
    rep = expsums.cancellation_scan(args.family, count=args.count, seed=cfg.seed)
    emit(rep, cfg, "expsum scan", rows_key="rows")
    return 0


def cmd_expsum_window(args, cfg: RunConfig) -> int:
    w = expsums.smoothing_window(Fraction(args.delta), args.J)
    rep = {
        "delta": w.delta,
        "J": args.J,
        "fourier0": w.fourier0(),
        "value_at_0": w.value(0),
        "value_at_delta": w.value(w.delta),
        "value_at_3delta": w.value(3 * w.delta),
        "decay": w.decay_check(h_max=args.h_max),
    }
    emit(rep, cfg, "expsum window")
    return 0 if rep["decay"]["ok"] else 1


def _params_for(args, cfg: RunConfig) -> sieve.ScaleParams:
    overrides = {}
    if args.z_small is not None:
        overrides["z_small"] = args.z_small
    if args.z_lo is not None:
        overrides["z_quarter_lo"] = args.z_lo
    if args.z_hi is not None:
        overrides["z_quarter_hi"] = args.z_hi
    return sieve.make_scale_params(args.x, preset=cfg.preset, overrides=overrides or None)


def _spf_for(params: sieve.ScaleParams, cfg: RunConfig):
    try:
        return build_spf_table(params.x + 3, budget_mb=cfg.budget_mb)
    except BudgetError:
        return None


def cmd_special_enumerate(args, cfg: RunConfig) -> int:
    params = _params_for(args, cfg)
    records = special.enumerate_S(params, _spf_for(params, cfg))
    rows = []
    for rec in records:
        rows.append(
            {
                "p": rec.p,
                "class": rec.klass,
                "r": rec.r,
                "factors_p1": list(rec.factor_p1.pairs),
                "factors_p2": list(rec.factor_p2.pairs),
                "factors_odd_half": list(rec.factor_p3.pairs),
                "stat_plain": rec.stat_plain,
                "stat_plain_float": float(rec.stat_plain),
                "stat_r": rec.stat_r,
                "stat_r_float": None if rec.stat_r is None else float(rec.stat_r),
            }
        )
    part = special.partition_check(records, params)
    payload = {
        "rows": rows,
        "parameters": params,
        "count": len(records),
        "class_counts": part["class_counts"],
        "partition_ok": part["ok"],
    }
    emit(payload, cfg, "special enumerate", rows_key="rows")
    return 0 if part["ok"] else 1


def cmd_special_sigmas(args, cfg: RunConfig) -> int:
    params = _params_for(args, cfg)
    counters = special.count_sigmas(params, args.delta, spf=_spf_for(params, cfg))
    payload = {
        "sigma1": counters.sigma1,
        "sigma2": counters.sigma2,
        "sigma3": counters.sigma3,
        "sigma4": counters.sigma4,
        "S_total": counters.S_total,
        "delta": counters.delta,
        "witness_gap": counters.witness_gap(),
        "pair_bound_holds": counters.sigma2 <= counters.sigma3 + counters.sigma4,
        "parameters": params,
    }
    emit(payload, cfg, "special sigmas")
    return 0


def cmd_special_hist(args, cfg: RunConfig) -> int:
    params = _params_for(args, cfg)
    records = special.enumerate_S(params, _spf_for(params, cfg))
    rep = special.near_integer_histogram(records, bins=args.bins)
    rows = [
        {
            "bin_lo": rep["edges"][i],
            "bin_hi": rep["edges"][i + 1],
            "plain": rep["plain_counts"][i],
            "with_r": rep["r_counts"][i],
        }
        for i in range(rep["bins"])
    ]
    payload = {
        "rows": rows,
        "n_plain": rep["n_plain"],
        "n_r": rep["n_r"],
        "ks_plain": rep["ks_plain"],
        "ks_r": rep["ks_r"],
    }
    emit(payload, cfg, "special hist", rows_key="rows")
    return 0


def cmd_verify_all(args, cfg: RunConfig) -> int:
    if args.list:
        emit({"checks": verify.check_names()}, cfg, "verify-all")
        return 0
    ctx: dict = {}
    if args.inject_bad_weights:
        ctx["inject_bad_weights"] = True
    names = [args.only] if args.only else verify.check_names()
    results = []
    all_ok = True
    for name in names:
        res = verify.run_check(name, ctx)
        print(res.line(), file=sys.stderr)
        results.append(res)
        all_ok = all_ok and res.ok
    emit({"results": results, "all_ok": all_ok}, cfg, "verify-all", rows_key="results")
    return 0 if all_ok else 1


# -- parser ------------------------------------------------------------------------


def _fraction_arg(s: str):
    return s  # coerced downstream; kept as str so exact forms survive


class _SubParser(argparse.ArgumentParser):
    """Subcommand parser that accepts the global flags after the name.

    add_subparsers on a _SubParser instance reuses this class, so nested
    subcommands (sieve weights, expsum scan, ...) inherit the flags too.
    """

    shared_parent = None

    def __init__(self, **kw):
        parents = list(kw.pop("parents", []))
        if _SubParser.shared_parent is not None:
            parents.append(_SubParser.shared_parent)
        super().__init__(parents=parents, **kw)


def _add_global_flags(p: argparse.ArgumentParser, suppress: bool) -> None:
    # the same flags live on the root parser (with real defaults) and on
    # every subcommand (defaulting to SUPPRESS so a subcommand parse
    # cannot clobber a value given before the subcommand name)
    d = argparse.SUPPRESS if suppress else None
    p.add_argument("--format", choices=("json", "jsonl", "csv"), default=d if suppress else "json", dest="fmt")
    p.add_argument("--preset", choices=("desk", "paper"), default=d if suppress else "desk")
    p.add_argument("--seed", type=int, default=d if suppress else 0)
    p.add_argument("--threads", type=int, default=d, help="worker processes for large sums")
    p.add_argument("--budget-mb", type=int, default=d, help="memory budget (default: ALPHA4_BUDGET_MB or 512)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="alpha4",
        description="Desk-scale companion computations for the factorial series of sigma_4.",
    )
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _add_global_flags(ap, suppress=False)
    gp = argparse.ArgumentParser(add_help=False)
    _add_global_flags(gp, suppress=True)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_SubParser)
    _SubParser.shared_parent = gp

    p = sub.add_parser("alpha", help="certified value of the factorial series")
    p.add_argument("--k", type=int, default=4)
    p.add_argument("--bits", type=int, default=128)
    p.set_defaults(fn=cmd_alpha)

    p = sub.add_parser("prop1", help="near-integer statistic and expansion residuals at a prime")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--r", type=int, default=None)
    p.add_argument("--expansion", action="store_true")
    p.add_argument("--residuals", action="store_true")
    p.add_argument("--j-max", type=int, default=32)
    p.set_defaults(fn=cmd_prop1)

    p = sub.add_parser("rho", help="the smooth-density function")
    p.add_argument("--u", type=float, default=None)
    p.add_argument("--tol", type=float, default=dickman.DEFAULT_TOL)
    p.add_argument("--ten-thirds", action="store_true", help="both evaluation routes at u = 10/3")
    p.add_argument("--table", action="store_true")
    p.add_argument("--step", type=float, default=0.25)
    p.set_defaults(fn=cmd_rho)

    p = sub.add_parser("psi", help="smooth counts, exact and approximate")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--y", type=float, required=True)
    p.add_argument("--no-exact", action="store_true")
    p.set_defaults(fn=cmd_psi)

    ps = sub.add_parser("sieve", help="weights, limit functions, sandwiches")
    ssub = ps.add_subparsers(dest="subcommand", required=True)

    p = ssub.add_parser("weights", help="build beta=2 weights and check the sandwich")
    p.add_argument("--d", type=float, required=True)
    p.add_argument("--z", type=int, required=True)
    p.add_argument("--n-limit", type=int, default=None)
    p.add_argument("--dump-weights", action="store_true")
    p.set_defaults(fn=cmd_sieve_weights)

    p = ssub.add_parser("Ff", help="linear-sieve limit functions")
    p.add_argument("--s", type=float, required=True)
    p.set_defaults(fn=cmd_sieve_ff)

    p = ssub.add_parser("flemma", help="truncated Moebius sandwich check")
    p.add_argument("--z", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--parity", choices=("even", "odd"), required=True)
    p.add_argument("--n-limit", type=int, default=10**5)
    p.set_defaults(fn=cmd_sieve_flemma)

    p = ssub.add_parser("vector", help="two-variable sandwich checks")
    p.add_argument("--trials", type=int, default=10**6)
    p.add_argument("--tuple", nargs=6, metavar=("D1M", "D1", "D1P", "D2M", "D2", "D2P"), default=None)
    p.set_defaults(fn=cmd_sieve_vector)

    p = ssub.add_parser("mertens", help="prime reciprocal sums over quarter-power windows")
    p.add_argument("--x", type=int, default=None)
    p.add_argument("--epsilon", type=float, default=0.02)
    p.add_argument("--a", type=float, default=None)
    p.add_argument("--b", type=float, default=None)
    p.set_defaults(fn=cmd_sieve_mertens)

    pe = sub.add_parser("expsum", help="exponential sums and related checks")
    esub = pe.add_subparsers(dest="subcommand", required=True)

    p = esub.add_parser("basic", help="sum the single-variable phase")
    p.add_argument("--A", type=_fraction_arg, required=True)
    p.add_argument("--B", type=_fraction_arg, required=True)
    p.add_argument("--lo", type=int, default=0)
    p.add_argument("--hi", type=int, required=True)
    p.add_argument("--engine", choices=("exact", "mpf"), default=None)
    p.add_argument("--prec-bits", type=int, default=None)
    p.set_defaults(fn=cmd_expsum_basic)

    p = esub.add_parser("lemma61", help="sum the progression phase")
    p.add_argument("--h", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--v", type=int, default=None)
    p.add_argument("--lo", type=int, default=0)
    p.add_argument("--hi", type=int, required=True)
    p.add_argument("--engine", choices=("exact", "mpf"), default=None)
    p.add_argument("--prec-bits", type=int, default=None)
    p.add_argument("--check-rewrite", action="store_true")
    p.set_defaults(fn=cmd_expsum_lemma61)

    p = esub.add_parser("weyl", help="differencing displays for a phase spec")
    p.add_argument("--kind", choices=("basic", "lemma61"), default="basic")
    p.add_argument("--A", type=_fraction_arg, default=None)
    p.add_argument("--B", type=_fraction_arg, default=None)
    p.add_argument("--h", type=int, default=None)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--r", type=int, default=None)
    p.add_argument("--v", type=int, default=None)
    p.add_argument("--lo", type=int, default=0)
    p.add_argument("--hi", type=int, required=True)
    p.add_argument("--K", type=int, required=True)
    p.add_argument("--L", type=int, default=None)
    p.set_defaults(fn=cmd_expsum_weyl)

    p = esub.add_parser("scan", help="cancellation survey across a phase family")
    p.add_argument("--family", choices=("random", "resonant", "lemma61"), default="random")
    p.add_argument("--count", type=int, default=12)
    p.set_defaults(fn=cmd_expsum_scan)

    p = esub.add_parser("window", help="smoothing window values, transform, decay")
    p.add_argument("--delta", type=str, default="1/100")
    p.add_argument("--J", type=int, default=4)
    p.add_argument("--h-max", type=int, default=10**6)
    p.set_defaults(fn=cmd_expsum_window)

    pp = sub.add_parser("special", help="the sifted prime set and its statistics")
    psub = pp.add_subparsers(dest="subcommand", required=True)

    for name, fn in (("enumerate", cmd_special_enumerate), ("sigmas", cmd_special_sigmas), ("hist", cmd_special_hist)):
        p = psub.add_parser(name)
        p.add_argument("--x", type=int, required=True)
        p.add_argument("--z-small", type=int, default=None)
        p.add_argument("--z-lo", type=int, default=None)
        p.add_argument("--z-hi", type=int, default=None)
        if name == "sigmas":
            p.add_argument("--delta", type=float, required=True)
        if name == "hist":
            p.add_argument("--bins", type=int, default=20)
        p.set_defaults(fn=fn)

    p = sub.add_parser("verify-all", help="run the acceptance checks end to end")
    p.add_argument("--list", action="store_true")
    p.add_argument("--only", type=str, default=None)
    p.add_argument("--inject-bad-weights", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(fn=cmd_verify_all)

    return ap


def dispatch(argv: list[str]) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    cfg = RunConfig(
        preset=args.preset,
        fmt=args.fmt,
        seed=args.seed,
        budget_mb=args.budget_mb,
    )
    if getattr(args, "threads", None):
        cfg.threads = args.threads
    try:
        return args.fn(args, cfg)
    except (PreconditionError, BudgetError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
