"""Command-line front end.

Single binary, subcommand style: density / measure / verify / sn. A config
file of key=value lines supplies defaults, explicit flags win, and every
output embeds the effective configuration plus the seed so identical
invocations produce byte-identical JSON. Exit codes: 0 success or PASS,
1 FAIL or internal error, 2 usage or parse error, 3 INCONCLUSIVE.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import asdict, dataclass
from fractions import Fraction

from . import supernatural as sn
from .analytic import FAIL, INCONCLUSIVE, PASS
from .density import (
    axiom_suite,
    density_alpha,
    density_analytic,
    density_buck,
    density_uniform,
)
from .measure import ModulusChain, closure_measure_trace, euler_product, multiples_measure_ie
from .setdsl import BudgetExceeded, DslError, DslSyntaxError, compile_set
from .verify import (
    VerificationReport,
    asdmltp_verify,
    counterexample_cover,
    davenport_erdos,
    dirichlet_coverage,
    eulerian_check,
    mt_criterion,
    omega_bound_measure,
    poonen_stoll_tail,
    prime_power_family,
    union_dense_check,
)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_INCONCLUSIVE = 3

THEOREM_IDS = (
    "davenport-erdos", "dirichlet", "omega", "eulerian", "asdmltp",
    "poonen-stoll", "mt", "counterexample", "union-dense", "axioms",
)


@dataclass
class RunConfig:
    """Effective parameters of one invocation, echoed into every output."""

    command: str
    set_text: str | None = None
    positive_only: bool | None = None
    dimension: int | None = None
    residue_budget: int | None = None
    truncation: int | None = None
    r_max: int | None = None
    prime_bound: int | None = None
    chain: str | None = None
    s_grid: tuple[float, ...] | None = None
    output: str = "json"
    seed: int = 0
    threads: int = 1
    extra: dict | None = None

    def validate(self) -> None:
        for name in ("residue_budget", "truncation", "r_max", "prime_bound", "threads"):
            v = getattr(self, name)
            if v is not None and v < 1:
                raise ValueError(f"{name} must be positive, got {v}")

    def to_json(self) -> dict:
        d = {k: v for k, v in asdict(self).items() if v is not None}
        if "s_grid" in d:
            d["s_grid"] = list(d["s_grid"])
        return d


def _num(text: str) -> int:
    """Integer argument that also accepts scientific notation like 1e7."""
    try:
        v = int(text)
    except ValueError:
        f = float(text)
        v = int(round(f))
        if abs(f - v) > 1e-9 * max(1.0, abs(f)):
            raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    return v


def _int_list(text: str) -> list[int]:
    return [_num(t) for t in text.split(",") if t.strip()]


def _float_list(text: str) -> list[float]:
    return [float(t) for t in text.split(",") if t.strip()]


def _read_config_file(path: str) -> dict[str, str]:
    out: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for ln, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{ln}: expected key=value")
            k, _, v = line.partition("=")
            out[k.strip()] = v.strip().strip('"')
    return out


class _Resolver:
    """Flag > config file > built-in default, recording the effective value."""

    def __init__(self, args: argparse.Namespace, file_cfg: dict[str, str]):
        self.args = args
        self.file_cfg = file_cfg

    def get(self, key: str, cast, default=None):
        v = getattr(self.args, key, None)
        if v is None and key in self.file_cfg:
            raw = self.file_cfg[key]
            v = cast(raw) if cast is not None else raw
        return default if v is None else v


def _parse_chain(text: str) -> ModulusChain:
    t = text.strip().lower()
    if t == "primorial":
        return ModulusChain.primorial()
    if t == "factorial":
        return ModulusChain.factorial()
    if t.startswith("primorial") and t[len("primorial"):].lstrip("^").isdigit():
        return ModulusChain.primorial_power(int(t[len("primorial"):].lstrip("^")))
    if t.startswith("explicit:"):
        return ModulusChain.explicit(_int_list(t[len("explicit:"):]))
    if all(c.isdigit() or c == "," for c in t):
        return ModulusChain.explicit(_int_list(t))
    raise ValueError(f"unknown chain spec {text!r}")


def _fraction_json(v: Fraction) -> dict:
    return {"num": v.numerator, "den": v.denominator, "float": float(v)}


def _emit(payload: dict, cfg: RunConfig, fmt: str) -> None:
    payload = dict(payload)
    payload["config"] = cfg.to_json()
    payload["seed"] = cfg.seed
    if fmt == "json":
        print(json.dumps(payload, sort_keys=True, indent=2, default=_json_default))
    elif fmt == "csv":
        csv = payload.pop("csv", None)
        if csv is None:
            raise ValueError("this command has no CSV form; use --output json")
        sys.stdout.write(csv)
    else:
        payload.pop("csv", None)
        for key in sorted(payload):
            print(f"{key}: {_render(payload[key])}")


def _json_default(o):
    if isinstance(o, Fraction):
        return _fraction_json(o)
    if isinstance(o, (frozenset, set)):
        return sorted(o)
    raise TypeError(f"not serializable: {type(o)!r}")


def _render(v) -> str:
    if isinstance(v, Fraction):
        return f"{v} = {float(v):.10g}"
    if isinstance(v, dict):
        return json.dumps(v, sort_keys=True, default=_json_default)
    if isinstance(v, list):
        return ", ".join(_render(x) for x in v)
    return str(v)


# ------------------------------------------------------------- subcommands


def _cmd_density(res: _Resolver) -> int:
    set_text = res.get("set", str)
    if not set_text:
        raise DslSyntaxError("density needs --set", 0, "set expression")
    method = res.get("method", str, "asymptotic")
    r_max = res.get("r", _num, 10**6)
    cutoff = res.get("cutoff", _num, 10**5)
    fmt = res.get("output", str, "json")
    cfg = RunConfig(
        command="density", set_text=set_text, r_max=r_max,
        chain=res.get("chain", str), output=fmt, seed=res.get("seed", _num, 0),
        threads=res.get("threads", _num, 1),
        extra={"method": method},
    )
    cfg.validate()
    cs = compile_set(set_text)
    r_grid = sorted({max(1, r_max // 2**i) for i in range(5)})
    methods = {
        "asymptotic": lambda: density_alpha(cs, 0, r_grid),
        "logarithmic": lambda: density_alpha(cs, -1, r_grid),
        "alpha": lambda: density_alpha(cs, res.get("alpha", float, -1.0), r_grid),
        "uniform": lambda: density_uniform(
            cs, sorted({max(1, r_max // 10), max(2, r_max // 5)}), r_max
        ),
        "analytic": lambda: density_analytic(
            cs, res.get("s_grid", _float_list, [1.5, 1.25, 1.1, 1.05]), cutoff
        ),
        "buck": lambda: density_buck(
            cs, _parse_chain(res.get("chain", str, "primorial")),
            res.get("level_cutoff", _num, 10**4),
            truncation=res.get("truncation", _num),
        ),
    }
    wanted = list(methods) if method == "all" else [method]
    unknown = [m for m in wanted if m not in methods]
    if unknown:
        raise ValueError(f"unknown method {unknown[0]!r}; choose from {', '.join(methods)} or all")
    if method == "all":
        wanted = ["asymptotic", "logarithmic", "uniform", "analytic", "buck"]
    reports = {m: methods[m]().to_json() for m in wanted}
    rows = ["method,lower,upper,certified"]
    for m in wanted:
        rep = reports[m]
        rows.append(f"{m},{rep['lower_est']:.10g},{rep['upper_est']:.10g},{rep['certified']}")
    _emit({"reports": reports, "csv": "\n".join(rows) + "\n"}, cfg, fmt)
    return EXIT_OK


def _cmd_measure(res: _Resolver) -> int:
    fmt = res.get("output", str, "json")
    seed = res.get("seed", _num, 0)
    multiples = res.get("multiples", _int_list)
    euler = res.get("euler", str)
    if multiples:
        cfg = RunConfig(command="measure", output=fmt, seed=seed,
                        threads=res.get("threads", _num, 1),
                        extra={"multiples": multiples})
        cfg.validate()
        v = multiples_measure_ie(multiples)
        _emit({"measure": _fraction_json(v), "certified": True,
               "csv": f"measure\n{v.numerator}/{v.denominator}\n"}, cfg, fmt)
        return EXIT_OK
    if euler:
        cutoff = res.get("cutoff", _num, 10**4)
        cfg = RunConfig(command="measure", prime_bound=cutoff, output=fmt, seed=seed,
                        threads=res.get("threads", _num, 1),
                        extra={"euler": euler})
        cfg.validate()
        br = euler_product(euler, cutoff)
        _emit({"bracket": br.to_json(), "notes": list(br.notes),
               "csv": f"lo,hi,certified\n{br.lo:.12g},{br.hi:.12g},{br.certified}\n"},
              cfg, fmt)
        return EXIT_OK
    set_text = res.get("set", str)
    if not set_text:
        raise DslSyntaxError("measure needs --set, --multiples or --euler", 0, "input")
    chain_text = res.get("chain", str, "primorial")
    level_cap = res.get("levels", _num, 10)
    cutoff = res.get("cutoff", _num, 10**6)
    truncation = res.get("truncation", _num)
    cfg = RunConfig(command="measure", set_text=set_text, chain=chain_text,
                    truncation=truncation, output=fmt, seed=seed,
                    threads=res.get("threads", _num, 1),
                    extra={"levels": level_cap, "cutoff": cutoff})
    cfg.validate()
    cs = compile_set(set_text)
    chain = _parse_chain(chain_text)
    trace = closure_measure_trace(cs, chain, cutoff, truncation=truncation)
    records = trace.records[:level_cap]
    payload = {
        "levels": [
            {"modulus": r.modulus, "measure": _fraction_json(r.measure), "mode": r.mode}
            for r in records
        ],
        "certified": trace.certified,
        "notes": list(trace.notes),
        "csv": trace.to_csv(),
    }
    _emit(payload, cfg, fmt)
    return EXIT_OK


def _verdict_exit(verdict: str) -> int:
    return {PASS: EXIT_OK, FAIL: EXIT_FAIL, INCONCLUSIVE: EXIT_INCONCLUSIVE}[verdict]


def _axioms_report(res: _Resolver, seed: int) -> VerificationReport:
    cases = res.get("cases", _num, 100)
    pair = res.get("pair", str, "exact")
    suite = axiom_suite(cases, seed=seed, pair=pair,
                        estimator_cases=res.get("estimator_cases", _num, 0))
    failing = suite.failing_axioms
    if pair == "exact":
        ok = suite.all_axioms_pass
        expect = "all axioms hold"
    else:
        ok = failing == ["ideal-scaling"]
        expect = "all axioms except ideal-scaling hold"
    verdict = PASS if ok else FAIL
    quantities = suite.to_json()
    narrative = [f"{cases} random periodic sets, pair={pair}; expected: {expect}"]
    if failing:
        narrative.append(f"failing axioms: {failing}")
    return VerificationReport("axioms", {"cases": cases, "seed": seed, "pair": pair},
                              quantities, verdict, tuple(narrative))


def _cmd_verify(res: _Resolver) -> int:
    theorem = res.get("theorem", str)
    if theorem not in THEOREM_IDS:
        raise ValueError(
            f"unknown theorem id {theorem!r}; valid ids: {', '.join(THEOREM_IDS)}"
        )
    fmt = res.get("output", str, "json")
    seed = res.get("seed", _num, 0)
    tol = res.get("tol", float)

    if theorem == "davenport-erdos":
        family = res.get("family", str, "p^2")
        pmax = res.get("pmax", _num, 31)
        if family.startswith("p^") and family[2:].isdigit():
            k = int(family[2:])
            mods, tail = prime_power_family(k, pmax), k
        elif family == "p":
            mods, tail = prime_power_family(1, pmax), 1
        else:
            mods, tail = _int_list(family), None
        rep = davenport_erdos(
            mods, r_max=res.get("rmax", _num, 10**6), tol=tol or 5e-3,
            tail_exponent=tail,
            certified_grid_points=res.get("certified_points", _num, 0),
        )
    elif theorem == "dirichlet":
        rep = dirichlet_coverage(res.get("mmax", _num, 100), res.get("pbound", _num, 10**5))
    elif theorem == "omega":
        rep = omega_bound_measure(res.get("k", _num, 2), res.get("pbound", _num, 13))
    elif theorem == "eulerian":
        set_text = res.get("set", str)
        if not set_text:
            raise DslSyntaxError("verify eulerian needs --set", 0, "set expression")
        rep = eulerian_check(compile_set(set_text),
                             res.get("mlist", _int_list, [12]),
                             expect=res.get("expect", str, "product"))
    elif theorem == "asdmltp":
        rep = asdmltp_verify(res.get("moduli", _int_list, [4, 9, 25]),
                             r_max=res.get("rmax", _num, 10**6),
                             m_check=res.get("mcheck", _num),
                             tol=tol or 1e-2)
    elif theorem == "poonen-stoll":
        rep = poonen_stoll_tail(res.get("spec", str, "kfree"),
                                k=res.get("k", _num, 2),
                                prime_cutoffs=res.get("cutoffs", _int_list, [10, 100, 1000]),
                                tol=tol or 1e-2)
    elif theorem == "mt":
        set_text = res.get("set", str)
        if not set_text:
            raise DslSyntaxError("verify mt needs --set", 0, "set expression")
        rep = mt_criterion(compile_set(set_text),
                           _parse_chain(res.get("chain", str, "primorial")),
                           res.get("cutoff", _num, 10**4),
                           r_max=res.get("rmax", _num, 10**6),
                           tol=tol or 1e-2,
                           truncation=res.get("truncation", _num))
    elif theorem == "counterexample":
        rep = counterexample_cover(res.get("base", _num, 4), res.get("terms", _num, 10))
    elif theorem == "union-dense":
        raw = res.get("supports", str)
        if not raw:
            raise DslSyntaxError("verify union-dense needs --supports", 0, "prime sets")
        sups = [_int_list(part) for part in raw.split(";") if part.strip()]
        rep = union_dense_check(sups, family_flag=bool(res.get("family_flag", None, False)))
    else:
        rep = _axioms_report(res, seed)

    cfg = RunConfig(command="verify", output=fmt, seed=seed,
                    threads=res.get("threads", _num, 1),
                    extra={"theorem": theorem})
    cfg.validate()
    _emit({"report": rep.to_json(),
           "csv": f"theorem,verdict\n{rep.theorem},{rep.verdict}\n"}, cfg, fmt)
    return _verdict_exit(rep.verdict)


_SEQ_TERMS = {
    "factorial": lambda k: math.factorial(k),
    "factorial_shift": lambda k: math.factorial(k) + k,
    "primorial": lambda k: math.prod(_nth_primes(k)),
}


def _nth_primes(k: int) -> list[int]:
    from . import _primes

    out = []
    for p in _primes.iter_primes():
        out.append(int(p))
        if len(out) == k:
            return out
    return out


def _cmd_sn(res: _Resolver) -> int:
    op = res.get("sn_op", str)
    fmt = res.get("output", str, "json")
    cfg = RunConfig(command="sn", output=fmt, seed=res.get("seed", _num, 0),
                    threads=res.get("threads", _num, 1),
                    extra={"op": op})
    if op == "mul":
        a, b = res.args.operands
        v = sn.mul(sn.parse_supernatural(a), sn.parse_supernatural(b))
        _emit({"result": sn.to_text(v), "csv": f"result\n{sn.to_text(v)}\n"}, cfg, fmt)
        return EXIT_OK
    if op == "rho":
        (k,) = res.args.operands
        v = sn.rho(int(k))
        _emit({"result": sn.to_text(v), "csv": f"result\n{sn.to_text(v)}\n"}, cfg, fmt)
        return EXIT_OK
    # limit: valuation trajectories of a named sequence
    name = res.get("seq", str, "factorial")
    if name not in _SEQ_TERMS:
        raise ValueError(f"unknown sequence {name!r}; choose from {', '.join(sorted(_SEQ_TERMS))}")
    terms = res.get("terms", _num, 30)
    pmax = res.get("pmax", _num, 7)
    window = res.get("window", _num, 5)
    seq = [_SEQ_TERMS[name](k) for k in range(1, terms + 1)]
    prof = sn.limit_profile(seq, pmax, window)
    rows = ["prime,last_valuation,status"]
    table = {}
    for p in sorted(prof.valuations):
        last = prof.valuations[p][-1]
        rows.append(f"{p},{last},{prof.status[p]}")
        table[str(p)] = {"last_valuation": last, "status": prof.status[p],
                         "trajectory_tail": list(prof.valuations[p][-window:])}
    _emit({"sequence": name, "terms": terms, "profile": table,
           "csv": "\n".join(rows) + "\n"}, cfg, fmt)
    return EXIT_OK


# ------------------------------------------------------------- entry point


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="zhat",
        description="Densities, profinite closure measures, and theorem "
                    "harnesses for integer sets.",
    )
    p.add_argument("--config", help="key=value config file; flags override it")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", choices=("json", "csv", "table"), default=None)
    common.add_argument("--seed", type=_num, default=None)
    common.add_argument("--threads", type=_num, default=None,
                        help="upper bound on library parallelism; results do not depend on it")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("density", parents=[common], help="density estimates for a DSL set")
    d.add_argument("--set")
    d.add_argument("--method", default=None,
                   help="asymptotic|logarithmic|alpha|uniform|analytic|buck|all")
    d.add_argument("--alpha", type=float, default=None)
    d.add_argument("--r", type=_num, default=None, help="largest radius in the grid")
    d.add_argument("--cutoff", type=_num, default=None, help="Dirichlet series cutoff")
    d.add_argument("--s-grid", dest="s_grid", type=_float_list, default=None)
    d.add_argument("--chain", default=None)
    d.add_argument("--level-cutoff", dest="level_cutoff", type=_num, default=None)
    d.add_argument("--N", dest="truncation", type=_num, default=None)

    m = sub.add_parser("measure", parents=[common], help="closure measure traces, IE values, Euler brackets")
    m.add_argument("--set")
    m.add_argument("--chain", default=None)
    m.add_argument("--levels", type=_num, default=None, help="max level count in the trace")
    m.add_argument("--cutoff", type=_num, default=None, help="modulus bound / prime cutoff")
    m.add_argument("--multiples", type=_int_list, default=None)
    m.add_argument("--euler", default=None, help='local factor, e.g. "1-1/p^2"')
    m.add_argument("--N", dest="truncation", type=_num, default=None)

    v = sub.add_parser("verify", parents=[common], help="theorem harnesses with PASS/FAIL/INCONCLUSIVE verdicts")
    v.add_argument("theorem", help="|".join(THEOREM_IDS))
    v.add_argument("--family", default=None, help='"p^2", "p", or explicit "4,6"')
    v.add_argument("--pmax", type=_num, default=None)
    v.add_argument("--rmax", type=_num, default=None)
    v.add_argument("--tol", type=float, default=None)
    v.add_argument("--certified-points", dest="certified_points", type=_num, default=None)
    v.add_argument("--mmax", type=_num, default=None)
    v.add_argument("--pbound", type=_num, default=None)
    v.add_argument("--k", type=_num, default=None)
    v.add_argument("--set", default=None)
    v.add_argument("--mlist", type=_int_list, default=None)
    v.add_argument("--expect", default=None)
    v.add_argument("--moduli", type=_int_list, default=None)
    v.add_argument("--mcheck", type=_num, default=None)
    v.add_argument("--spec", default=None)
    v.add_argument("--cutoffs", type=_int_list, default=None)
    v.add_argument("--chain", default=None)
    v.add_argument("--cutoff", type=_num, default=None)
    v.add_argument("--N", dest="truncation", type=_num, default=None)
    v.add_argument("--base", type=_num, default=None)
    v.add_argument("--terms", type=_num, default=None)
    v.add_argument("--supports", default=None, help='semicolon-separated prime lists: "2,3;3,5"')
    v.add_argument("--family-flag", dest="family_flag", action="store_true", default=None)
    v.add_argument("--cases", type=_num, default=None)
    v.add_argument("--pair", default=None, help="exact|deformed")
    v.add_argument("--estimator-cases", dest="estimator_cases", type=_num, default=None)

    s = sub.add_parser("sn", parents=[common], help="supernatural number arithmetic and limits")
    ss = s.add_subparsers(dest="sn_op", required=True)
    mul = ss.add_parser("mul", parents=[common])
    mul.add_argument("operands", nargs=2)
    rho = ss.add_parser("rho", parents=[common])
    rho.add_argument("operands", nargs=1)
    lim = ss.add_parser("limit", parents=[common])
    lim.add_argument("--seq", default=None)
    lim.add_argument("--pmax", type=_num, default=None)
    lim.add_argument("--terms", type=_num, default=None)
    lim.add_argument("--window", type=_num, default=None)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if e.code else EXIT_OK
    file_cfg: dict[str, str] = {}
    if args.config:
        try:
            file_cfg = _read_config_file(args.config)
        except (OSError, ValueError) as e:
            print(f"config error: {e}", file=sys.stderr)
            return EXIT_USAGE
    res = _Resolver(args, file_cfg)
    try:
        if args.command == "density":
            return _cmd_density(res)
        if args.command == "measure":
            return _cmd_measure(res)
        if args.command == "verify":
            return _cmd_verify(res)
        return _cmd_sn(res)
    except DslSyntaxError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (DslError, BudgetExceeded, ValueError, OverflowError) as e:
        usage = isinstance(e, ValueError)
        print(f"{'usage' if usage else 'error'}: {e}", file=sys.stderr)
        return EXIT_USAGE if usage else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
