"""Command-line front end.

    bsmotive virtual --m 2 --potential "X^2*Y+Y*X^2" --nmax 2
    bsmotive virtual --m 2 --potential "X^3+Y^3" --separable --nmax 2
    bsmotive verify --m 2 --n 2 --primes 2,3
    bsmotive cells --m 2 --n 2
    bsmotive derive --m 3 --potential "X*Y*Z+X*Z*Y"
    bsmotive cache inspect

Exit codes: 0 ok, 1 usage or input error, 2 stratifier stuck, 3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import oracle
from .cache import CACHE_ENV, ResultsCache, default_cache_path
from .cells import enumerate_cells, cell_weights_json
from .motive import MotiveExpr
from .ncpoly import NCSyntaxError, NotHomogeneous, Superpotential, jacobi_relations
from .pipeline import (MODES, DeltaTable, NotSeparable, cell_trace, delta_bs,
                       render_factored, separated_factors)
from .stratify import Stratifier, StuckError, WeightError

EXIT_OK, EXIT_USAGE, EXIT_STUCK, EXIT_FAIL = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


@dataclass
class RunConfig:
    potential: str | None = None
    m: int = 2
    nmax: int = 2
    mode: str = "equivariant"
    oracle_primes: list[int] = field(default_factory=lambda: [2, 3])
    budget: int = oracle.DEFAULT_BUDGET
    cache_path: Path | None = None
    output: str = "text"
    explain: bool = False
    separable: bool = False
    workers: int = 1

    def validate(self):
        if self.nmax < 1:
            raise UsageError("--nmax/--n must be >= 1")
        if self.m < 1:
            raise UsageError("--m must be >= 1")
        if self.mode not in MODES:
            raise UsageError(f"--mode must be one of {', '.join(MODES)}")
        bad = [q for q in self.oracle_primes if not oracle.is_prime(q)]
        if bad:
            raise UsageError(f"not prime: {', '.join(map(str, bad))}")
        if self.budget < 1:
            raise UsageError("--budget must be positive")

    def superpotential(self) -> Superpotential:
        if not self.potential:
            raise UsageError("--potential is required")
        try:
            return Superpotential.parse(self.potential, self.m)
        except (NCSyntaxError, NotHomogeneous, ValueError) as exc:
            raise UsageError(str(exc)) from exc


def _primes(text: str) -> list[int]:
    try:
        return [int(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad prime list {text!r}")


def _emit(out, text: str = ""):
    print(text, file=out)


# -- virtual ----------------------------------------------------------------------


def cmd_virtual(cfg: RunConfig, out=sys.stdout) -> int:
    W = cfg.superpotential()
    cache = ResultsCache(cfg.cache_path) if cfg.cache_path else None
    if cfg.separable:
        return _virtual_separable(cfg, W, cache, out)
    stratifier = Stratifier(explain=cfg.explain)
    table = DeltaTable(W, cfg.mode, cache=cache, stratifier=stratifier)
    try:
        table.compute(cfg.nmax)
    finally:
        if cfg.explain:
            for line in stratifier.trace:
                print(line, file=sys.stderr)
    rows = [(n, table.delta_bs[n], table.delta_m[n], table.virtual_rep[n]) for n in range(1, cfg.nmax + 1)]
    if cfg.output == "json":
        doc = {
            "potential": W.render(), "m": W.m, "d": W.degree, "mode": cfg.mode,
            "rows": [{"n": n, "delta_bs": b.to_json(), "delta_m": dm.to_json(), "virtual": v.to_json()}
                     for n, b, dm, v in rows],
        }
        _emit(out, json.dumps(doc, sort_keys=True))
        return EXIT_OK
    if cfg.output == "latex":
        _emit(out, r"\begin{align*}")
        for n, b, dm, v in rows:
            _emit(out, rf"[BS_{{{n}}}(0)]-[BS_{{{n}}}(1)] &= {b.to_latex()} \\")
            _emit(out, rf"[M_{{{n}}}(0)]-[M_{{{n}}}(1)] &= {dm.to_latex()} \\")
            _emit(out, rf"[\mathbf{{rep}}_{{{n}}} R_W]_{{virt}} &= {v.to_latex()} \\")
        _emit(out, r"\end{align*}")
        return EXIT_OK
    _emit(out, f"potential: {W.render()}  (m={W.m}, d={W.degree}, mode={cfg.mode})")
    for n, b, dm, v in rows:
        _emit(out, f"dBS_{n}: {b.render()}")
        _emit(out, f"dM_{n}: {dm.render()}")
        _emit(out, f"rep_{n} virtual: {v.render()}")
    return EXIT_OK


def _virtual_separable(cfg: RunConfig, W: Superpotential, cache, out) -> int:
    try:
        comps = W.components()
        per_n = [(n, separated_factors(W, n, cfg.mode, cache)) for n in range(1, cfg.nmax + 1)]
    except NotSeparable as exc:
        raise UsageError(str(exc)) from exc
    totals = []
    for n, factors in per_n:
        total = MotiveExpr.const(1)
        for value, mult in factors:
            total = total * value ** mult
        totals.append((n, factors, total))
    if cfg.output == "json":
        doc = {
            "potential": W.render(), "m": W.m, "d": W.degree, "mode": cfg.mode,
            "components": [{"generators": list(g), "potential": V.render()} for g, V in comps],
            "rows": [{"n": n, "virtual": t.to_json(), "factored": render_factored(f)} for n, f, t in totals],
        }
        _emit(out, json.dumps(doc, sort_keys=True))
        return EXIT_OK
    if cfg.output == "latex":
        _emit(out, r"\begin{align*}")
        for n, _, t in totals:
            _emit(out, rf"[\mathbf{{rep}}_{{{n}}} R_W]_{{virt}} &= {t.to_latex()} \\")
        _emit(out, r"\end{align*}")
        return EXIT_OK
    _emit(out, f"potential: {W.render()}  (m={W.m}, d={W.degree}, mode={cfg.mode})")
    _emit(out, "components: " + "; ".join(f"{V.render()} on {list(g)}" for g, V in comps))
    for n, factors, t in totals:
        _emit(out, f"rep_{n} expanded: {t.render()}")
        _emit(out, f"rep_{n} virtual: {render_factored(factors)}")
    return EXIT_OK


# -- verify -----------------------------------------------------------------------


@dataclass
class Check:
    name: str
    status: str  # PASS / FAIL / SKIP
    detail: str
    elapsed: float = 0.0


def _verify_checks(cfg: RunConfig, n: int) -> list[Check]:
    checks = []
    cells = enumerate_cells(cfg.m, n)
    for q in cfg.oracle_primes:
        expected = sum(q ** c.dim for c in cells)
        t0 = time.perf_counter()
        try:
            got = oracle.count_stable_pairs(cfg.m, n, q, budget=cfg.budget, workers=cfg.workers)
        except oracle.TooLarge as exc:
            checks.append(Check(f"cells vs stable pairs m={cfg.m} n={n} q={q}", "SKIP", str(exc)))
            continue
        dt = time.perf_counter() - t0
        status = "PASS" if got == expected else "FAIL"
        checks.append(Check(f"cells vs stable pairs m={cfg.m} n={n} q={q}", status,
                            f"{got} = {expected}" if got == expected else f"{got} != {expected}", dt))
    if not cfg.potential:
        return checks
    W = cfg.superpotential()
    for cell in cells:
        f = cell_trace(W, cell)
        ambient = list(cell.variables(W.degree).values())
        st = Stratifier()
        value = st.delta(f, ambient)
        for q in cfg.oracle_primes:
            name = f"cell {cell.to_json()['nodes']} delta q={q}"
            if not oracle.prime_compatible(st.records, q):
                checks.append(Check(name, "SKIP", "prime incompatible with a root-extraction step"))
                continue
            t0 = time.perf_counter()
            try:
                diff = (oracle.count_hypersurface(f, 0, q, ambient, cfg.budget)
                        - oracle.count_hypersurface(f, 1, q, ambient, cfg.budget))
            except (oracle.TooLarge, ValueError) as exc:
                checks.append(Check(name, "SKIP", str(exc)))
                continue
            want = value.evaluate_count(q)
            checks.append(Check(name, "PASS" if diff == want else "FAIL",
                                f"count difference {diff}, motive {value.render()} -> {want}",
                                time.perf_counter() - t0))
    st = Stratifier()
    total = delta_bs(W, n, "plain", st)
    for q in cfg.oracle_primes:
        name = f"dBS_{n} vs constrained stable pairs q={q}"
        if not oracle.prime_compatible(st.records, q):
            checks.append(Check(name, "SKIP", "prime incompatible with a root-extraction step"))
            continue
        t0 = time.perf_counter()
        try:
            diff = (oracle.count_stable_pairs(cfg.m, n, q, (W, 0), cfg.budget, workers=cfg.workers)
                    - oracle.count_stable_pairs(cfg.m, n, q, (W, 1), cfg.budget, workers=cfg.workers))
        except (oracle.TooLarge, ValueError) as exc:
            checks.append(Check(name, "SKIP", str(exc)))
            continue
        want = total.evaluate_count(q)
        checks.append(Check(name, "PASS" if diff == want else "FAIL",
                            f"count difference {diff}, motive {total.render()} -> {want}",
                            time.perf_counter() - t0))
    return checks


def cmd_verify(cfg: RunConfig, out=sys.stdout) -> int:
    if cfg.potential:
        cfg.superpotential()
    checks = _verify_checks(cfg, cfg.nmax)
    if cfg.output == "json":
        for c in checks:
            _emit(out, json.dumps({"check": c.name, "status": c.status, "detail": c.detail,
                                   "elapsed": round(c.elapsed, 3)}, sort_keys=True))
    else:
        for c in checks:
            _emit(out, f"{c.status} {c.name}: {c.detail} ({c.elapsed:.2f}s)")
    failed = sum(c.status == "FAIL" for c in checks)
    if cfg.output != "json":
        passed = sum(c.status == "PASS" for c in checks)
        _emit(out, f"{passed} passed, {failed} failed, {len(checks) - passed - failed} skipped")
    return EXIT_FAIL if failed else EXIT_OK


# -- cells / derive / cache -------------------------------------------------------


def cmd_cells(m: int, n: int, fmt: str = "text", d: int | None = None, out=sys.stdout) -> int:
    if m < 1 or n < 1:
        raise UsageError("--m and --n must be >= 1")
    cells = enumerate_cells(m, n)
    if fmt == "json":
        docs = []
        for c in cells:
            doc = c.to_json()
            if d:
                doc["weights"] = cell_weights_json(c, d)
            docs.append(doc)
        _emit(out, json.dumps({"m": m, "n": n, "cells": docs}, sort_keys=True))
        return EXIT_OK
    _emit(out, f"{len(cells)} cell{'s' if len(cells) != 1 else ''} for m={m}, n={n}")
    for c in cells:
        doc = c.to_json()
        _emit(out, f"nodes {{{', '.join(doc['nodes'])}}}  leaves {{{', '.join(doc['leaves'])}}}  dim {c.dim}")
        names = "XYZ" if m <= 3 else None
        for u, M in enumerate(doc["matrices"], start=1):
            label = names[u - 1] if names else f"X{u}"
            width = max(len(str(e)) for row in M for e in row)
            for r, row in enumerate(M):
                prefix = f"  {label} = " if r == 0 else " " * (len(label) + 5)
                _emit(out, prefix + "[" + " ".join(str(e).rjust(width) for e in row) + "]")
        if d:
            _emit(out, "  weights: " + ", ".join(f"{k}:{v}" for k, v in cell_weights_json(c, d).items()))
    return EXIT_OK


def cmd_derive(potential: str, m: int, out=sys.stdout) -> int:
    try:
        W = Superpotential.parse(potential, m)
    except (NCSyntaxError, NotHomogeneous, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    names = "XYZ" if m <= 3 else [f"X{i}" for i in range(1, m + 1)]
    _emit(out, f"potential: {W.render()}")
    for i, rel in enumerate(jacobi_relations(W), start=1):
        _emit(out, f"d{names[i - 1]}: {rel.render()}")
    return EXIT_OK


def cmd_cache(action: str, path: Path | None, out=sys.stdout) -> int:
    if path is None:
        raise UsageError(f"no cache path: pass --cache or set {CACHE_ENV}")
    cache = ResultsCache(path)
    if action == "clear":
        n = len(cache)
        cache.clear()
        _emit(out, f"cleared {n} entries from {path}")
        return EXIT_OK
    _emit(out, f"{path}: {len(cache)} entries")
    for key in sorted(cache.entries):
        _emit(out, f"{key} -> {cache.get(key).render()}")
    return EXIT_OK


# -- argument parsing -------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="bsmotive", description="Virtual motives of superpotential algebras via tree cells.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, n_flag="--nmax"):
        sp.add_argument("--m", type=int, default=2, help="number of generators")
        sp.add_argument("--potential", help='e.g. "X^2*Y+Y*X^2"')
        sp.add_argument(n_flag, dest="nmax", type=int, default=2)
        sp.add_argument("--mode", choices=MODES, default="equivariant")
        sp.add_argument("--cache", type=Path, default=default_cache_path())
        sp.add_argument("--output", choices=("text", "json", "latex"), default="text")

    v = sub.add_parser("virtual", help="dBS_n, dM_n and virtual motives for n = 1..nmax")
    common(v)
    v.add_argument("--separable", action="store_true", help="use separation of variables")
    v.add_argument("--explain", action="store_true", help="print the stratifier trace to stderr")

    ver = sub.add_parser("verify", help="brute-force F_q cross-checks")
    common(ver, "--n")
    ver.add_argument("--primes", type=_primes, default=[2, 3])
    ver.add_argument("--budget", type=int, default=oracle.DEFAULT_BUDGET)
    ver.add_argument("--workers", type=int, default=1)

    c = sub.add_parser("cells", help="tree cells with matrices and dimensions")
    c.add_argument("--m", type=int, default=2)
    c.add_argument("--n", type=int, default=2)
    c.add_argument("--d", type=int, help="also show mu_d weights of coordinates")
    c.add_argument("--output", choices=("text", "json"), default="text")

    dv = sub.add_parser("derive", help="cyclic derivatives of a potential")
    dv.add_argument("--m", type=int, default=2)
    dv.add_argument("--potential", required=True)

    ca = sub.add_parser("cache", help="inspect or clear the results cache")
    ca.add_argument("action", choices=("inspect", "clear"))
    ca.add_argument("--cache", type=Path, default=default_cache_path())
    return p


def _config(args) -> RunConfig:
    cfg = RunConfig(
        potential=args.potential, m=args.m, nmax=args.nmax, mode=args.mode,
        cache_path=args.cache, output=args.output,
        explain=getattr(args, "explain", False), separable=getattr(args, "separable", False),
    )
    if hasattr(args, "primes"):
        cfg.oracle_primes, cfg.budget, cfg.workers = args.primes, args.budget, args.workers
    cfg.validate()
    return cfg


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "virtual":
            return cmd_virtual(_config(args), out)
        if args.command == "verify":
            return cmd_verify(_config(args), out)
        if args.command == "cells":
            if args.d is not None and args.d < 2:
                raise UsageError("--d must be >= 2")
            return cmd_cells(args.m, args.n, args.output, args.d, out)
        if args.command == "derive":
            return cmd_derive(args.potential, args.m, out)
        return cmd_cache(args.action, args.cache, out)
    except UsageError as exc:
        print(f"bsmotive: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except WeightError as exc:
        print(f"bsmotive: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except StuckError as exc:
        doc = exc.to_json()
        print("bsmotive: stratifier stuck", file=sys.stderr)
        print(json.dumps(doc, indent=1, sort_keys=True), file=sys.stderr)
        return EXIT_STUCK


if __name__ == "__main__":
    sys.exit(main())
