"""Command-line entry point.

Every command writes a ``key = value`` report (to stdout or ``--out``).
Failures exit with 2 (PARSE), 3 (PRECOND) or 4 (SEARCH) and print
``error[CATEGORY]: message`` on stderr.
"""

from __future__ import annotations

import argparse
import logging
import sys
from fractions import Fraction
from pathlib import Path

from . import report
from .bounds import CALCULATORS
from .errors import ParseError, PolypartError, PreconditionError
from .hamsandwich import lift_and_bisect_cut
from .incidence import (FAMILIES, IncidenceInstance, count_incidences, generate,
                        incidence_bound, run_level1)
from .partition import classify, partition, partition_on_variety
from .poly import parse_polynomial, read_points, signs, write_points
from .variety import load_variety
from .veronese import hilbert_from_points

EXIT = {"PARSE": 2, "PRECOND": 3, "SEARCH": 4}


# helpers ---------------------------------------------------------------------

def parse_params(text: str | None) -> dict:
    """``k=v,k=v`` with integer (or rational) values."""
    out: dict = {}
    if not text:
        return out
    for item in text.split(","):
        if not item.strip():
            continue
        if "=" not in item:
            raise ParseError(f"parameter {item!r} is not key=value")
        k, v = (s.strip() for s in item.split("=", 1))
        try:
            out[k] = int(v)
        except ValueError:
            try:
                out[k] = Fraction(v)
            except (ValueError, ZeroDivisionError):
                raise ParseError(f"parameter {k} has non-numeric value {v!r}") from None
    return out


def read_surfaces(path, dimension: int | None = None) -> list:
    """One polynomial per line in the inline ``coeff e1 .. ed; ...`` form."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    out = []
    for raw in text.splitlines():
        line = raw.strip()
        if line.startswith("#"):
            words = line[1:].split()
            if len(words) == 2 and words[0] == "dimension" and dimension is None:
                dimension = int(words[1])
            continue
        if line:
            out.append(parse_polynomial(line, dimension))
            dimension = out[-1].dimension
    return out


def write_surfaces(polys, path, dimension: int) -> None:
    lines = [f"# dimension {dimension}"] + [g.to_inline() for g in polys]
    Path(path).write_text("\n".join(lines) + "\n")


def _emit(entries, out) -> None:
    text = report.dumps(entries)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _config(args, *names) -> list:
    cfg = {"command": args.command}
    for n in names:
        v = getattr(args, n)
        cfg[n] = "none" if v is None else v
    return report.config_entries(cfg)


def _polys_entries(polys) -> list:
    return [(f"poly.{i}", g.to_inline()) for i, g in enumerate(polys)]


def _pattern(key) -> str:
    return "".join("+" if s > 0 else "-" for s in key)


def partition_entries(res) -> list:
    cells = sorted(res.cells.items())
    return [
        ("stages", res.stages),
        ("degrees", res.degrees),
        ("product_degree", res.product_degree),
        ("budget", res.budget),
        ("budget_check", res.budget_ok),
        ("cell_count", len(res.cells)),
        ("max_cell", res.max_cell),
        ("balance_bound", res.balance_bound),
        ("balanced", res.balanced),
        ("residue_size", len(res.residue)),
        ("conserved", res.conserved()),
        ("kernel_fallback", res.kernel_stage is not None),
        ("cells", [f"{_pattern(k) or '.'}:{len(v)}" for k, v in cells]),
    ] + _polys_entries(res.polynomials)


# commands --------------------------------------------------------------------

def cmd_partition(args):
    P = read_points(args.points)
    res = partition(P, args.degree, seed=args.seed, max_iterations=args.max_iterations,
                    restarts=args.restarts)
    _emit(_config(args, "points", "degree", "seed", "max_iterations", "restarts")
          + partition_entries(res), args.out)


def cmd_partition_variety(args):
    X = load_variety(args.variety)
    P = read_points(args.points, X.dimension)
    c1 = None if args.c1 is None else Fraction(args.c1)
    res = partition_on_variety(P, X, args.degree, seed=args.seed, c1=c1,
                               max_iterations=args.max_iterations, restarts=args.restarts)
    _emit(_config(args, "points", "variety", "degree", "seed", "c1", "max_iterations", "restarts")
          + partition_entries(res), args.out)


def cmd_hamsandwich(args):
    files = [s for s in args.points.split(",") if s.strip()]
    sets = [read_points(f) for f in files]
    g, cut = lift_and_bisect_cut(sets, args.degree, seed=args.seed,
                                 max_iterations=args.max_iterations, restarts=args.restarts)
    counts = []
    for S in sets:
        s = signs(g, S.points)
        counts.append(f"{s.count(-1)}/{s.count(0)}/{s.count(1)}")
    _emit(_config(args, "points", "degree", "seed") + [
        ("sets", len(sets)), ("sizes", [len(S) for S in sets]),
        ("counts", counts), ("valid", cut.is_valid()),
        ("poly.0", g.to_inline())], args.out)


def cmd_hilbert(args):
    P = read_points(args.points)
    h = hilbert_from_points(P, args.degree)
    _emit(_config(args, "points", "degree") + [
        ("value", h.value), ("rank_source", h.rank_source), ("saturated", h.saturated)], args.out)


def cmd_bounds(args, extra):
    fn, names = CALCULATORS[args.name]
    p = argparse.ArgumentParser(prog=f"polypart bounds {args.name}")
    for n in names:
        p.add_argument(f"--{n.replace('_', '-')}", dest=n, default=None)
    vals = p.parse_args(extra)
    call = []
    for n in names:
        raw = getattr(vals, n)
        if raw is None:
            if n == "c":
                call.append(1)
                continue
            raise ParseError(f"bounds {args.name} needs --{n.replace('_', '-')}")
        try:
            if n == "degs":
                call.append([int(x) for x in raw.split(",") if x.strip()])
            elif n == "c":
                call.append(Fraction(raw))
            else:
                call.append(int(raw))
        except ValueError:
            raise ParseError(f"--{n} expects a number, got {raw!r}") from None
    print(fn(*call))


def _instance_from_args(args) -> IncidenceInstance:
    if args.family:
        params = parse_params(args.params)
        if args.family != "grid_lines_2d":
            params.setdefault("seed", args.seed)
        return generate(args.family, **params)
    if not (args.points and args.surfaces):
        raise PreconditionError("give --family, or both --points and --surfaces")
    P = read_points(args.points)
    H = read_surfaces(args.surfaces, P.dimension)
    c = args.c if args.c is not None else max((int(h.degree) for h in H), default=1)
    return IncidenceInstance(P, H, args.k, c, "files")


def cmd_incidence(args):
    inst = _instance_from_args(args)
    cfg = _config(args, "family", "params", "points", "surfaces", "k", "seed")
    entries = [("family", inst.family)]
    if inst.d == 4 and not args.no_partition:
        rep = run_level1(inst, seed=args.seed)
        entries += rep.items()
    else:
        count = count_incidences(inst)
        bound = incidence_bound(inst.m, inst.n, inst.d, inst.k)
        entries += [("d", inst.d), ("m", inst.m), ("n", inst.n), ("k", inst.k), ("count", count),
                    ("bound", bound), ("ratio", count / bound if bound else 0.0)]
    _emit(cfg + entries, args.report)


def cmd_generate(args):
    params = parse_params(args.params)
    if args.family != "grid_lines_2d":
        params.setdefault("seed", args.seed)
    inst = generate(args.family, **params)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_points(inst.points, out / "points.txt")
    write_surfaces(inst.surfaces, out / "surfaces.txt", inst.d)
    _emit(_config(args, "family", "params", "seed") + [
        ("m", inst.m), ("n", inst.n), ("k", inst.k), ("c", inst.c),
        ("points", str(out / "points.txt")), ("surfaces", str(out / "surfaces.txt")),
        ("notes", inst.notes)], None)


def verify_report(path) -> list[tuple[str, bool]]:
    """Re-derive the checkable fields of a report from its recorded inputs."""
    kv = report.read(path)
    cmd = kv.get("config.command")
    checks: list = []
    if cmd in ("partition", "partition-variety"):
        P = read_points(kv["config.points"])
        polys = []
        i = 0
        while f"poly.{i}" in kv:
            polys.append(parse_polynomial(kv[f"poly.{i}"], P.dimension))
            i += 1
        cells, residue = classify(P, polys)
        degs = [int(g.degree) for g in polys]
        checks += [
            ("stages", int(kv["stages"]) == len(polys)),
            ("degrees", kv["degrees"].split() == [str(x) for x in degs]),
            ("budget_check", sum(degs) <= int(kv["config.degree"])),
            ("cell_count", int(kv["cell_count"]) == len(cells)),
            ("max_cell", int(kv["max_cell"]) == max((len(v) for v in cells.values()), default=0)),
            ("residue_size", int(kv["residue_size"]) == len(residue)),
            ("conserved", len(residue) + sum(map(len, cells.values())) == len(P)),
        ]
        if kv.get("kernel_fallback") != "true":
            bound = -(-len(P) // 2 ** len(polys))
            checks.append(("balanced", all(len(v) <= bound for v in cells.values())))
    elif cmd == "hamsandwich":
        files = [s for s in kv["config.points"].split(",") if s.strip()]
        sets = [read_points(f) for f in files]
        g = parse_polynomial(kv["poly.0"], sets[0].dimension)
        ok = True
        for S in sets:
            s = signs(g, S.points)
            ok &= s.count(1) <= len(S) // 2 and s.count(-1) <= len(S) // 2
        checks += [("bisecting", ok), ("degree", g.degree <= int(kv["config.degree"]))]
    elif cmd == "hilbert":
        P = read_points(kv["config.points"])
        h = hilbert_from_points(P, int(kv["config.degree"]))
        checks.append(("value", int(kv["value"]) == h.value))
    else:
        raise ParseError(f"report {path} has no verifiable command (got {cmd!r})")
    return checks


def cmd_verify(args):
    if args.report:
        checks = verify_report(args.report)
        for name, ok in checks:
            print(f"{name} = {'pass' if ok else 'FAIL'}")
        return 0 if all(ok for _, ok in checks) else 1
    from .acceptance import run_all, run_criterion
    wanted = [int(x) for x in args.criteria.split(",")] if args.criteria else None
    results = [run_criterion(n) for n in wanted] if wanted else run_all()
    for r in results:
        print(r.line())
    return 0 if all(r.passed for r in results) else 1


# parser ----------------------------------------------------------------------

def _search_flags(p):
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-iterations", type=int, default=4000)
    p.add_argument("--restarts", type=int, default=12)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="polypart", description="Polynomial partitioning toolkit.")
    ap.add_argument("-v", "--verbose", action="count", default=0)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("partition", help="partition points in R^d")
    p.add_argument("--points", required=True)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--out")
    _search_flags(p)

    p = sub.add_parser("partition-variety", help="partition points on a variety")
    p.add_argument("--points", required=True)
    p.add_argument("--variety", required=True)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--c1")
    p.add_argument("--out")
    _search_flags(p)

    p = sub.add_parser("hamsandwich", help="bisect several point sets with one polynomial")
    p.add_argument("--points", required=True, help="comma-separated point files")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--out")
    _search_flags(p)

    p = sub.add_parser("hilbert", help="Hilbert function of a point set")
    p.add_argument("--points", required=True)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--out")

    p = sub.add_parser("bounds", help="evaluate a bound calculator")
    p.add_argument("name", choices=sorted(CALCULATORS))

    p = sub.add_parser("incidence", help="count incidences and compare with the bound")
    p.add_argument("--family", choices=sorted(FAMILIES))
    p.add_argument("--params")
    p.add_argument("--points")
    p.add_argument("--surfaces")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--c", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-partition", action="store_true",
                   help="skip the level-one partition for instances in R^4")
    p.add_argument("--report")

    p = sub.add_parser("generate", help="write an incidence instance to files")
    p.add_argument("--family", required=True, choices=sorted(FAMILIES))
    p.add_argument("--params")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", required=True)

    p = sub.add_parser("verify", help="run acceptance checks or re-check a report")
    p.add_argument("--criteria", help="comma-separated criterion numbers")
    p.add_argument("--report")
    return ap


COMMANDS = {
    "partition": cmd_partition,
    "partition-variety": cmd_partition_variety,
    "hamsandwich": cmd_hamsandwich,
    "hilbert": cmd_hilbert,
    "incidence": cmd_incidence,
    "generate": cmd_generate,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    ap = build_parser()
    args, extra = ap.parse_known_args(argv)
    if extra and args.command != "bounds":
        ap.error(f"unrecognized arguments: {' '.join(extra)}")
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "bounds":
            cmd_bounds(args, extra)
            return 0
        return COMMANDS[args.command](args) or 0
    except PolypartError as exc:
        print(f"error[{exc.category}]: {exc}", file=sys.stderr)
        return EXIT[exc.category]
    except (KeyError, ValueError) as exc:
        # malformed report or input that slipped past the typed parsers
        print(f"error[PARSE]: {exc}", file=sys.stderr)
        return EXIT["PARSE"]


if __name__ == "__main__":
    sys.exit(main())
