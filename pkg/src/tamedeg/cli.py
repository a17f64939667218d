"""Command line interface.

Exit codes: 0 success, 1 audit found violations, 2 bad input,
3 enumeration cap exceeded, 4 internal invariant failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from .blocs import (
    ReductionError,
    audit_structural_lemmas,
    audit_codimension,
    dump_run,
    periodic_closure,
    render_table,
    run_classification,
    run_from_json,
    target_family,
)
from .calibration import relabel_for
from .catalog import Catalog, CatalogError
from .emit import bold_set, dumps, emit_dot, extension_predicate, poset_to_json
from .order import CapExceeded, DegenOrder, OrderError
from .quiver import QuiverError, from_type
from .tubes import (
    TubeCategory,
    TubeError,
    extension_poset,
    generic_extension_e,
    make_bloc,
    periodic_shift,
)

EXIT_AUDIT, EXIT_PARSE, EXIT_CAP, EXIT_INTERNAL = 1, 2, 3, 4


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    type_name: str | None
    sink: int | None
    tube_period: int | None
    cap: int | None

    def __post_init__(self):
        if self.cap is not None and self.cap <= 0:
            raise UsageError("caps must be positive")
        if self.tube_period is None and self.type_name is None:
            raise UsageError("give --type (with --sink) or --tube p=N")

    def catalog(self) -> Catalog:
        if self.tube_period is not None:
            return TubeCategory(self.tube_period)
        return Catalog(from_type(self.type_name, sink=self.sink))


def _tube_arg(text: str) -> int:
    key, _, val = text.partition("=")
    if key.strip() != "p" or not val.strip().isdigit():
        raise argparse.ArgumentTypeError("expected p=N")
    return int(val)


def _config(args) -> RunConfig:
    return RunConfig(getattr(args, "type", None), getattr(args, "sink", None),
                     getattr(args, "tube", None), getattr(args, "cap", None))


def _write(path: str | None, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


# --- commands -----------------------------------------------------------------------

def cmd_hom(args) -> int:
    cat = _config(args).catalog()
    order = DegenOrder(cat)
    x, y = cat.parse(args.X), cat.parse(args.Y)
    h = order.homs
    print(f"hom={h.hom_sum(x, y)} ext={h.ext_sum(x, y)}")
    return 0


def cmd_homtable(args) -> int:
    cat = _config(args).catalog()
    h = DegenOrder(cat).homs
    mods = [cat.parse_indec(t)[0] for t in args.modules]
    width = max(len(m.text()) for m in mods)
    print(" " * width + " | " + " ".join(m.text() for m in mods))
    for a in mods:
        cells = [str(h.hom(a, b)).rjust(len(b.text())) for b in mods]
        print(a.text().ljust(width) + " | " + " ".join(cells))
    return 0


def cmd_poset(args) -> int:
    cfg = _config(args)
    cat = cfg.catalog()
    order = DegenOrder(cat)
    u, v = cat.parse_indec(args.U)[0], cat.parse_indec(args.V)[0]
    n = cat.msum([u, v])
    tube = None
    if args.tube_only or cfg.tube_period is not None:
        if u.kind != "R" or v.kind != "R" or u.a != v.a:
            raise UsageError("--tube-only needs U and V in one tube")
        tube = u.a
    elems = order.deformations(n, tube=tube, cap=cfg.cap)
    poset = order.poset(n, elems)
    bold = bold_set(poset, extension_predicate(order, u, v))
    if args.dot:
        _write(args.dot, emit_dot(poset, bold))
    if args.json:
        _write(args.json, dumps(poset_to_json(poset, bold)))
    if "-" not in (args.dot, args.json):
        print(f"target {n.text()}: {len(poset.elements)} elements, {len(poset.covers)} covers, {len(bold)} bold")
    return 0


def cmd_extposet(args) -> int:
    cat = _config(args).catalog()
    u, v = cat.parse_indec(args.U)[0], cat.parse_indec(args.V)[0]
    ep = extension_poset(cat, u, v)
    print(f"r={ep.r} S={ep.S_set}")
    for m in ep.E_set:
        print(f"  {m.text()}")
    if ep.minimal is not None:
        print(f"minimal {ep.minimal.text()} codim {ep.minimal_codim}")
    else:
        print("only the split extension")
    return 0


def cmd_eshift(args) -> int:
    cat = _config(args).catalog()
    order = DegenOrder(cat)
    m = cat.parse(args.M)
    for _ in range(args.times):
        m = generic_extension_e(order, m, args.mu)
    print(m.text())
    return 0


def cmd_periodic_shift(args) -> int:
    cat = _config(args).catalog()
    order = DegenOrder(cat)
    u, v = cat.parse_indec(args.U)[0], cat.parse_indec(args.V)[0]
    m = cat.parse(args.M)
    b = make_bloc(order, u, v, m)
    img = periodic_shift(order, b, mu=args.mu, homogeneous=args.homogeneous)
    print(f"{img.M.text()} < {img.U.text()} + {img.V.pretty()} (codim {img.codim})")
    return 0


def cmd_classify(args) -> int:
    cfg = _config(args)
    if cfg.tube_period is not None:
        raise UsageError("classify needs a quiver type")
    cat = cfg.catalog()
    order = DegenOrder(cat)
    q = cat.quiver
    sink = args.sink if args.sink is not None else q.sinks[0]
    u = cat.parse_indec(args.U)[0] if args.U else cat.P(sink)
    kinds = tuple(k.strip() for k in args.kinds.split(","))
    verts = [args.vertex] if args.vertex else None
    targets = target_family(cat, args.vrange, kinds, verts)
    rel = relabel_for(q.label, sink, [t.period for t in cat.tubes]) if cat.affine else None
    run = run_classification(order, u, targets, "general" if args.general else "tubes", cfg.cap,
                             q.label, sink, rel)
    if args.periodic:
        run = periodic_closure(order, run, args.periodic)
    if args.audit:
        audit_codimension(order, run)
        audit_structural_lemmas(order, run)
    if args.json:
        _write(args.json, dump_run(run))
    if args.json != "-":
        sys.stdout.write(render_table(order, run))
    return 0


def cmd_audit(args) -> int:
    data = json.loads(Path(args.run).read_text())
    order, run = run_from_json(data)
    reps = [audit_codimension(order, run)] + list(audit_structural_lemmas(order, run).values())
    bad = 0
    for rep in reps:
        status = "ok" if rep.ok else "FAIL"
        print(f"{rep.name}: {status} ({rep.checked} checks, {len(rep.violations)} violations)")
        for v in rep.violations:
            print(f"  {v}")
        bad += len(rep.violations)
    if args.out:
        _write(args.out, dump_run(run))
    return EXIT_AUDIT if bad else 0


# --- parser ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tamedeg", description="Degenerations of representations of tame quivers.")
    sub = ap.add_subparsers(dest="command", required=True)

    def quiver_opts(p, tube=True):
        p.add_argument("--type", help="quiver type, e.g. E6, D8, A~3, A_3")
        p.add_argument("--sink", type=int, help="the sink vertex (one-sink orientation)")
        if tube:
            p.add_argument("--tube", type=_tube_arg, metavar="p=N", help="work in a single tube of period N")
        p.add_argument("--cap", type=int, help="bound on enumerated candidates")

    p = sub.add_parser("hom", help="hom and ext between two modules")
    quiver_opts(p)
    p.add_argument("X")
    p.add_argument("Y")
    p.set_defaults(func=cmd_hom)

    p = sub.add_parser("homtable", help="table of hom dimensions")
    quiver_opts(p)
    p.add_argument("modules", nargs="+")
    p.set_defaults(func=cmd_homtable)

    p = sub.add_parser("poset", help="deformation poset of U + V")
    quiver_opts(p)
    p.add_argument("U")
    p.add_argument("V")
    p.add_argument("--tube-only", action="store_true", help="only deformations inside the tube of U and V")
    p.add_argument("--dot", help="write the Hasse diagram as DOT ('-' for stdout)")
    p.add_argument("--json", help="write the poset as JSON ('-' for stdout)")
    p.set_defaults(func=cmd_poset)

    p = sub.add_parser("extposet", help="middle terms of extensions between two tube modules")
    quiver_opts(p)
    p.add_argument("U")
    p.add_argument("V")
    p.set_defaults(func=cmd_extposet)

    p = sub.add_parser("eshift", help="apply the generic extension operator e of a tube")
    quiver_opts(p)
    p.add_argument("M")
    p.add_argument("--mu", type=int, default=1, help="tube id")
    p.add_argument("--times", type=int, default=1)
    p.set_defaults(func=cmd_eshift)

    p = sub.add_parser("periodic-shift", help="image of a bloc under the periodic shift")
    quiver_opts(p, tube=False)
    p.add_argument("U")
    p.add_argument("V")
    p.add_argument("M")
    p.add_argument("--mu", type=int, help="tube carrying R (default: the first eligible one)")
    p.add_argument("--homogeneous", action="store_true")
    p.set_defaults(func=cmd_periodic_shift)

    p = sub.add_parser("classify", help="building blocs M < U + V over a family of targets V")
    quiver_opts(p, tube=False)
    p.add_argument("--vrange", type=int, default=1, help="targets tau^k I(i) (or tau^-k P(i)) with 0 <= k <= N; negative gives no targets")
    p.add_argument("--kinds", default="I", help="comma separated target kinds among I, R, P")
    p.add_argument("--vertex", type=int, help="only targets at this vertex")
    p.add_argument("--U", help="the module U (default: the simple projective)")
    p.add_argument("--general", action="store_true", help="all blocs, not only those in one non-homogeneous tube")
    p.add_argument("--periodic", type=int, metavar="K", help="add periodic images up to tau-shift K")
    p.add_argument("--audit", action="store_true", help="run the audits and store them in the JSON")
    p.add_argument("--json", help="write the run as JSON ('-' for stdout)")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("audit", help="re-check a stored classification run")
    p.add_argument("run")
    p.add_argument("--out", help="write the run with its audit results")
    p.set_defaults(func=cmd_audit)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, CatalogError, QuiverError, json.JSONDecodeError, FileNotFoundError) as exc:
        print(f"tamedeg: error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except CapExceeded as exc:
        print(f"tamedeg: cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (OrderError, TubeError, ReductionError, AssertionError) as exc:
        print(f"tamedeg: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
