"""Command-line front end: ``dynr verify | identities | catalog | validate``."""

from __future__ import annotations

import argparse
import json
import re
import sys
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import liealg
from .errors import DimensionError, DynrError, ParseError
from .holofun import DELTA_POLE, ode_series_solve, taylor_coefficients
from .identities import MAX_SWEEP_ORDER, SweepSummary, identity_sweep
from .matfun import NODES
from .rmat import METHODS, TOL_RESIDUAL, antisymmetry_residual, canonical_r, realness_check
from .ybe import cdybe_residual, equivariance_residual, mcdybe_tensor_residual, random_omegas

SCHEMA_VERSION = 1
SUITES = ("validate", "rmatrix", "cdybe", "tensor", "equivariance", "identities",
          "uniqueness", "realness")
DEFAULT_SUITES = ("validate", "rmatrix", "cdybe", "tensor", "equivariance")
# suites that need omega and the regular domain
OMEGA_SUITES = ("rmatrix", "cdybe", "tensor", "equivariance", "realness")
TOL_ANTISYMMETRY = 1e-10
TOL_REALNESS = 1e-10
TENSOR_FACTOR = 10.0
UNIQUENESS_ORDER = 11


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    algebra: str = "sl2"
    omega: str = "random:20:42"
    method: str = "spectral"
    tol: float = TOL_RESIDUAL
    delta: float = DELTA_POLE
    nodes: int = NODES
    seed: int = 0
    output: str = "text"
    suites: tuple = DEFAULT_SUITES
    max_order: int = 4
    timing: bool = False

    def __post_init__(self):
        bad = [s for s in self.suites if s not in SUITES]
        if bad:
            raise UsageError(f"unknown suite(s) {', '.join(bad)}; choose from {', '.join(SUITES)}")
        if self.method not in METHODS:
            raise UsageError(f"unknown method {self.method!r}")
        if not 0 <= self.max_order <= MAX_SWEEP_ORDER:
            raise UsageError(f"--max-order must lie in [0, {MAX_SWEEP_ORDER}]")


@dataclass
class SuiteResult:
    name: str
    tolerance: float
    entries: list = field(default_factory=list)
    error: str | None = None
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return self.error is None and all(e["pass"] for e in self.entries)

    def as_dict(self, timing: bool) -> dict:
        d = {"name": self.name, "tolerance": self.tolerance, "pass": self.passed,
             "entries": self.entries}
        if self.error is not None:
            d["error"] = self.error
        if timing:
            d["seconds"] = self.seconds
        return d


# ---------------------------------------------------------------- parsing

def load(name: str) -> liealg.LieAlgebra:
    """Catalog name (``sl2``, ``abelian(3)``, ``direct_sum(sl2,sl2)``) or algebra file path."""
    path = Path(name)
    if path.is_file():
        return liealg.load_algebra(path)
    try:
        return liealg.catalog(name)
    except KeyError as exc:
        raise UsageError(f"{exc.args[0]} (and no such file)") from None
    except ValueError as exc:
        raise UsageError(str(exc)) from None


_NUM = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_COEF = re.compile(rf"\s*(\([^()]*\)|{_NUM}i?|i(?=\s*\*))\s*(\*)?\s*")


def parse_complex(token: str) -> complex:
    t = token.strip().replace(" ", "")
    if t.startswith("(") and t.endswith(")"):
        t = t[1:-1]
    if not t:
        raise ParseError("empty number")
    t = t.replace("I", "i")
    if t in ("i", "+i", "-i"):
        t = t.replace("i", "1i")
    t = re.sub(r"([+-])i$", r"\g<1>1i", t)
    try:
        return complex(t.replace("i", "j"))
    except ValueError:
        raise ParseError(f"cannot parse complex number {token!r}") from None


def parse_combination(text: str, labels) -> np.ndarray:
    """``0.3*H + 1.2*E``-style linear combinations of basis labels."""
    by_len = sorted(labels, key=len, reverse=True)
    out = np.zeros(len(labels), dtype=complex)
    pos, first = 0, True
    s = text.strip()
    if not s:
        raise ParseError("empty omega")
    while pos < len(s):
        while pos < len(s) and s[pos].isspace():
            pos += 1
        sign = 1
        if pos < len(s) and s[pos] in "+-":
            sign = -1 if s[pos] == "-" else 1
            pos += 1
            while pos < len(s) and s[pos].isspace():
                pos += 1
        elif not first:
            raise ParseError(f"expected '+' or '-' at position {pos} in {text!r}")
        coef = 1 + 0j
        m = _COEF.match(s, pos)
        if m:
            coef = parse_complex(m.group(1))
            pos = m.end()
        label = next((lab for lab in by_len if s.startswith(lab, pos)), None)
        if label is None:
            raise ParseError(f"expected a basis label at position {pos} in {text!r}")
        out[list(labels).index(label)] += sign * coef
        pos += len(label)
        first = False
    return out


def parse_omega(spec: str, a: liealg.LieAlgebra) -> list:
    """Omega list from ``random:<count>:<seed>``, coordinates, or a label combination."""
    spec = spec.strip()
    if spec.startswith("random:"):
        parts = spec.split(":")
        if len(parts) != 3:
            raise ParseError("random omega must look like random:<count>:<seed>")
        try:
            count, seed = int(parts[1]), int(parts[2])
        except ValueError:
            raise ParseError(f"bad random omega {spec!r}") from None
        if count < 1:
            raise ParseError("random omega count must be positive")
        return random_omegas(a, count, seed)
    try:
        coords = [parse_complex(t) for t in spec.split(",")]
    except ParseError:
        coords = None
    if coords is not None:
        if len(coords) != a.dim:
            raise ParseError(f"omega has {len(coords)} coordinates, algebra has dimension {a.dim}")
        return [np.array(coords, dtype=complex)]
    return [parse_combination(spec, a.labels)]


# ---------------------------------------------------------------- suites

def _c(z):
    z = complex(z)
    return [z.real, z.imag]


def _omega_entries(name, omegas, fn, tol):
    entries = []
    for i, w in enumerate(omegas):
        e = {"trial": i, "omega": [_c(v) for v in w]}
        try:
            res = float(fn(w))
            e.update(residual=res, pass_=res < tol)
        except DynrError as exc:
            e.update(residual=None, pass_=False, error=f"{type(exc).__name__}: {exc}")
        e["pass"] = e.pop("pass_")
        entries.append(e)
    return entries


def _suite_validate(a, cfg, omegas):
    rep = liealg.validate(a)
    d = {k: v for k, v in rep.as_dict().items() if k != "passed"}
    return SuiteResult("validate", rep.tol, [dict(d, **{"pass": rep.passed})])


def _suite_rmatrix(a, cfg, omegas):
    def fn(w):
        return antisymmetry_residual(a, canonical_r(a, w, cfg.method, nodes=cfg.nodes,
                                                    delta=cfg.delta).R)
    return SuiteResult("rmatrix", TOL_ANTISYMMETRY,
                       _omega_entries("rmatrix", omegas, fn, TOL_ANTISYMMETRY))


def _suite_cdybe(a, cfg, omegas):
    def fn(w):
        return cdybe_residual(a, w, cfg.method, tol=cfg.tol, nodes=cfg.nodes, delta=cfg.delta).max
    return SuiteResult("cdybe", cfg.tol, _omega_entries("cdybe", omegas, fn, cfg.tol))


def _suite_tensor(a, cfg, omegas):
    tol = TENSOR_FACTOR * cfg.tol

    def fn(w):
        return mcdybe_tensor_residual(a, w, cfg.method, nodes=cfg.nodes, delta=cfg.delta)
    return SuiteResult("tensor", tol, _omega_entries("tensor", omegas, fn, tol))


def _suite_equivariance(a, cfg, omegas):
    rng = np.random.default_rng(cfg.seed)
    Ss = [rng.uniform(-1, 1, a.dim) for _ in omegas]
    it = iter(Ss)

    def fn(w):
        return equivariance_residual(a, w, next(it), cfg.method, nodes=cfg.nodes, delta=cfg.delta)
    entries = _omega_entries("equivariance", omegas, fn, cfg.tol)
    for e, S in zip(entries, Ss):
        e["S"] = [float(v) for v in S]
    return SuiteResult("equivariance", cfg.tol, entries)


def _suite_realness(a, cfg, omegas):
    if not a.is_real:
        return SuiteResult("realness", TOL_REALNESS, error="algebra is not real")
    if any(np.any(w.imag != 0) for w in omegas):
        return SuiteResult("realness", TOL_REALNESS, error="omega must be real")

    def fn(w):
        return realness_check(a, w.real, method=cfg.method, delta=cfg.delta)
    return SuiteResult("realness", TOL_REALNESS,
                       _omega_entries("realness", omegas, fn, TOL_REALNESS))


def _suite_identities(a, cfg, omegas):
    return identities_result(cfg.max_order, cfg.seed)


def identities_result(max_order, seed) -> SuiteResult:
    summary = SweepSummary(identity_sweep(max_order, seed))
    entries = []
    for name, (total, bad, worst) in summary.by_name().items():
        entries.append({"identity": name, "cases": total, "failures": bad,
                        "max_residual": worst, "pass": bad == 0})
    failing = [c.as_dict() for c in summary.failures]
    res = SuiteResult("identities", 0.0, entries)
    if failing:
        res.entries.append({"identity": "failing_cases", "cases": failing, "pass": False})
    return res


def _suite_uniqueness(a, cfg, omegas):
    sol = ode_series_solve(UNIQUENESS_ORDER)
    ref = taylor_coefficients()[1:UNIQUENESS_ORDER + 1]
    entries = [{"order": n, "ode": str(s), "bernoulli": str(r), "pass": s == r}
               for n, (s, r) in enumerate(zip(sol, ref), start=1)]
    entries.append({"order": "even", "pass": all(s == Fraction(0) for s in sol[1::2])})
    return SuiteResult("uniqueness", 0.0, entries)


_RUNNERS = {
    "validate": _suite_validate, "rmatrix": _suite_rmatrix, "cdybe": _suite_cdybe,
    "tensor": _suite_tensor, "equivariance": _suite_equivariance,
    "identities": _suite_identities, "uniqueness": _suite_uniqueness,
    "realness": _suite_realness,
}


def run(cfg: RunConfig):
    """Run the requested suites; returns ``(report dict, exit code)``."""
    a = load(cfg.algebra)
    omegas = parse_omega(cfg.omega, a) if any(s in OMEGA_SUITES for s in cfg.suites) else []
    results = []
    valid = True
    if "validate" in cfg.suites or any(s in OMEGA_SUITES for s in cfg.suites):
        t0 = time.perf_counter()
        v = _suite_validate(a, cfg, omegas)
        v.seconds = time.perf_counter() - t0
        valid = v.passed
        if "validate" in cfg.suites:
            results.append(v)
    for name in sorted(set(cfg.suites) - {"validate"}):
        t0 = time.perf_counter()
        if name in OMEGA_SUITES and not valid:
            r = SuiteResult(name, 0.0, error="algebra failed validation; suite not run")
        else:
            r = _RUNNERS[name](a, cfg, omegas)
        r.seconds = time.perf_counter() - t0
        results.append(r)
    results.sort(key=lambda r: r.name)
    ok = all(r.passed for r in results)
    config = asdict(cfg)
    config["suites"] = sorted(cfg.suites)
    config.pop("output")
    config.pop("timing")
    report = {"schema_version": SCHEMA_VERSION, "config": config,
              "suites": [r.as_dict(cfg.timing) for r in results], "pass": ok}
    return report, (0 if ok else 1)


# ---------------------------------------------------------------- output

def format_text(report: dict) -> str:
    lines = []
    cfg = report["config"]
    if cfg.get("omega"):
        lines.append(f"algebra {cfg['algebra']}  omega {cfg['omega']}  method {cfg['method']}"
                     f"  seed {cfg['seed']}")
    elif "algebra" in cfg:
        lines.append(f"algebra {cfg['algebra']}")
    for s in report["suites"]:
        verdict = "PASS" if s["pass"] else "FAIL"
        if s.get("error"):
            lines.append(f"{verdict}  {s['name']}: {s['error']}")
            continue
        res = [e.get("residual") for e in s["entries"] if e.get("residual") is not None]
        if res:
            lines.append(f"{verdict}  {s['name']}: max residual {max(res):.3e} "
                         f"(tol {s['tolerance']:g}, {len(res)} trials)")
        elif s["name"] == "identities":
            lines.append(f"{verdict}  identities:")
            for e in s["entries"]:
                if e["identity"] == "failing_cases":
                    for c in e["cases"]:
                        lines.append(f"        failed {c['name']} params={c['params']} "
                                     f"residual={c['residual']}")
                else:
                    lines.append(f"        {e['identity']:<11} {e['cases']:5d} cases  "
                                 f"{e['failures']} failures  max residual {e['max_residual']:.2e}")
        else:
            lines.append(f"{verdict}  {s['name']}")
        for e in s["entries"]:
            if "error" in e:
                lines.append(f"        trial {e['trial']}: {e['error']}")
    lines.append("overall: " + ("PASS" if report["pass"] else "FAIL"))
    return "\n".join(lines)


def emit(report: dict, output: str):
    if output == "json":
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        print(format_text(report))


def catalog_list() -> str:
    lines = []
    for name, (build, desc) in liealg.CATALOG.items():
        a = liealg.catalog("direct_sum(sl2,sl2)") if name == "direct_sum" else build()
        lines.append(f"{name:<11} dim {a.dim:<2} basis {','.join(a.labels):<24} {desc}")
    return "\n".join(lines)


# ---------------------------------------------------------------- entry point

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dynr", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, omega=True):
        sp.add_argument("--algebra", default="sl2", help="catalog name or algebra file")
        if omega:
            sp.add_argument("--omega", default="random:20:42",
                            help="coordinates 'a,b,c', combination '0.3*H + 1.2*E', "
                                 "or random:<count>:<seed>")
            sp.add_argument("--method", default="spectral", choices=METHODS)
            sp.add_argument("--tol", type=float, default=TOL_RESIDUAL)
            sp.add_argument("--delta", type=float, default=DELTA_POLE,
                            help="pole exclusion distance")
            sp.add_argument("--nodes", type=int, default=NODES, help="initial quadrature nodes")
            sp.add_argument("--seed", type=int, default=0)
            sp.add_argument("--suites", default=",".join(DEFAULT_SUITES),
                            help=f"comma-separated subset of {','.join(SUITES)}")
            sp.add_argument("--max-order", type=int, default=4)
        sp.add_argument("--output", default="text", choices=("text", "json"))
        sp.add_argument("--timing", action="store_true", help="include wall times in JSON")

    common(sub.add_parser("verify", help="run verification suites"))
    sp = sub.add_parser("identities", help="run the identity sweep")
    sp.add_argument("--max-order", type=int, default=MAX_SWEEP_ORDER)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--output", default="text", choices=("text", "json"))
    sp.add_argument("--timing", action="store_true")
    sub.add_parser("catalog", help="list built-in algebras")
    common(sub.add_parser("validate", help="check structure constants and form"), omega=False)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "catalog":
            print(catalog_list())
            return 0
        if args.command == "identities":
            if not 0 <= args.max_order <= MAX_SWEEP_ORDER:
                raise UsageError(f"--max-order must lie in [0, {MAX_SWEEP_ORDER}]")
            t0 = time.perf_counter()
            r = identities_result(args.max_order, args.seed)
            r.seconds = time.perf_counter() - t0
            report = {"schema_version": SCHEMA_VERSION,
                      "config": {"max_order": args.max_order, "seed": args.seed},
                      "suites": [r.as_dict(args.timing)], "pass": r.passed}
            emit(report, args.output)
            return 0 if r.passed else 1
        if args.command == "validate":
            cfg = RunConfig(algebra=args.algebra, output=args.output, suites=("validate",),
                            omega="", timing=args.timing)
        else:
            suites = tuple(s.strip() for s in args.suites.split(",") if s.strip())
            cfg = RunConfig(args.algebra, args.omega, args.method, args.tol, args.delta,
                            args.nodes, args.seed, args.output, suites, args.max_order,
                            args.timing)
        report, code = run(cfg)
    except (UsageError, ParseError, DimensionError) as exc:
        print(f"dynr: error: {exc}", file=sys.stderr)
        return 2
    except DynrError as exc:
        print(f"dynr: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    emit(report, cfg.output)
    return code


if __name__ == "__main__":
    sys.exit(main())
