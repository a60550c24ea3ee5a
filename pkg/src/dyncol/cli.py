"""``dyncol`` command line.

Exit codes: 0 pass / verified / witness produced, 1 a check failed or no
witness was found, 2 usage, format, precondition or capacity errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from . import refuter
from .cnf import CnfFormula, encode_gamma_cnf, encode_r_dynamic_cnf
from .colouring import (
    Colouring,
    colours_used,
    is_proper,
    is_r_dynamic,
    read_colouring,
    witness_proper,
    witness_r_dynamic,
    witness_total_dominating,
    write_colouring,
)
from .construction import (
    Budget,
    Part,
    build,
    construction_params,
    export,
    load_labeled,
    with_explicit_m,
)
from .errors import (
    CapacityError,
    DyncolError,
    FormatError,
    NoWitnessFound,
    ParameterError,
    WitnessUnavailable,
)
from .graph import induced_subgraph, is_clique, read_dimacs, regular_degree
from .sampling import sample_proper_colourings, sample_sparse_sets
from .sat import SAT, UNSAT, solve
from .solvers import is_total_dominating

CLAIM_GROUPS = ("chi", "chi-r", "gamma", "witness-only")


# --- vertex-set files ---------------------------------------------------------


def write_vertex_set(members, path, colours: dict | None = None, header: str = "set") -> None:
    lines = [f"c {header}"]
    for v in sorted(members):
        lines.append(f"{v + 1} {colours[v]}" if colours else f"{v + 1}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii")


def read_vertex_set(path, vertex_count: int) -> tuple[frozenset, dict]:
    """Lines ``<vertex>`` or ``<vertex> <colour>``; returns members and colours."""
    members: set[int] = set()
    colours: dict[int, int] = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="ascii").splitlines(), 1):
        parts = raw.split()
        if not parts or parts[0] == "c":
            continue
        try:
            nums = [int(x) for x in parts]
        except ValueError:
            raise FormatError(f"line {lineno}: expected integers, got {raw!r}") from None
        if len(nums) > 2 or not 1 <= nums[0] <= vertex_count:
            raise FormatError(f"line {lineno}: bad set line {raw!r}")
        v = nums[0] - 1
        if v in members:
            raise FormatError(f"line {lineno}: vertex {nums[0]} listed twice")
        members.add(v)
        if len(nums) == 2:
            colours[v] = nums[1]
    if colours and len(colours) != len(members):
        raise FormatError("either every member carries a colour or none does")
    return frozenset(members), colours


# --- build --------------------------------------------------------------------


def _budget(args) -> Budget:
    return Budget(vertices=args.budget_vertices, edges=args.budget_edges)


def _params(args):
    if args.m is not None:
        return with_explicit_m(args.r, args.n, args.m, budget=_budget(args))
    return construction_params(args.r, args.n, args.delta, budget=_budget(args))


def _default_stem(p) -> str:
    return f"G_r{p.r}_n{p.n}_m{p.m}"


def cmd_build(args) -> int:
    params = _params(args)
    lg = build(params, budget=_budget(args))
    stem = Path(args.output or _default_stem(params))
    stem.parent.mkdir(parents=True, exist_ok=True)
    graph_path, labels_path = export(lg, stem)
    written = [graph_path, labels_path]
    if args.witnesses:
        proper = stem.with_name(stem.name + ".proper.clr")
        write_colouring(witness_proper(lg), proper)
        written.append(proper)
        try:
            dyn = stem.with_name(stem.name + ".rdyn.clr")
            write_colouring(witness_r_dynamic(lg), dyn)
            written.append(dyn)
        except WitnessUnavailable as exc:
            print(f"note: no r-dynamic witness: {exc}")
        members, colouring, _ = witness_total_dominating(lg)
        tds = stem.with_name(stem.name + ".tds.set")
        write_vertex_set(members, tds, dict(enumerate(colouring)), header="total-dominating")
        written.append(tds)
    print(f"vertices {lg.graph.vertex_count}")
    print(f"edges {lg.graph.edge_count}")
    print(f"degree {regular_degree(lg.graph)}")
    print(f"m {params.m} N {params.N}")
    print(f"pigeonhole_ok {str(params.pigeonhole_ok).lower()}")
    print(f"domination_ok {str(params.domination_ok).lower()}")
    for path in written:
        print(f"wrote {path}")
    return 0


# --- check --------------------------------------------------------------------


def cmd_check(args) -> int:
    g = read_dimacs(args.graph)
    if args.clique:
        members, _ = read_vertex_set(args.file, g.vertex_count)
        if not is_clique(g, sorted(members)):
            print("not a clique")
            return 1
        print(f"ok: clique of size {len(members)}")
        return 0
    if args.domination:
        members, colours = read_vertex_set(args.file, g.vertex_count)
        missing = is_total_dominating(g, members)
        if missing is not None:
            print(f"UndominatedVertex({missing + 1})")
            return 1
        msg = f"ok: total dominating set of size {len(members)}"
        if colours:
            sub, remap = induced_subgraph(g, members)
            c = Colouring([colours[v] for v in sorted(members)])
            violation = is_proper(sub, c)
            if violation is not None:
                inverse = {new: old for old, new in remap.items()}
                print(f"induced ImproperEdge({inverse[violation.u] + 1}, {inverse[violation.v] + 1})")
                return 1
            msg += f"; induced subgraph properly coloured with {colours_used(c)} colours"
        print(msg)
        return 0
    c = read_colouring(args.file, g.vertex_count)
    violation = is_proper(g, c)
    if violation is None and args.dynamic is not None:
        violation = is_r_dynamic(g, c, args.dynamic)
    if violation is not None:
        print(violation)
        return 1
    kind = f"{args.dynamic}-dynamic" if args.dynamic is not None else "proper"
    print(f"ok: {kind} colouring with {colours_used(c)} colours")
    return 0


# --- refute -------------------------------------------------------------------


def cmd_refute(args) -> int:
    lg = load_labeled(args.graph, args.labels, budget=_budget(args))
    out = Path(args.output)
    if args.domination:
        members, _ = read_vertex_set(args.file, lg.graph.vertex_count)
        try:
            outcome = refuter.refute_domination(lg, members)
        except NoWitnessFound as exc:
            print(f"NoWitnessFound: {exc}; histogram {exc.histogram}")
            return 1
        text, data = refuter.domination_certificate(lg, outcome)
    else:
        c = read_colouring(args.file, lg.graph.vertex_count)
        r = args.dynamic if args.dynamic is not None else lg.params.r
        try:
            ref = refuter.refute_dynamic(lg, c, r)
        except NoWitnessFound as exc:
            print(f"NoWitnessFound: {exc}; histogram {exc.histogram}")
            return 1
        text, data = refuter.dynamic_certificate(ref)
    paths = refuter.write_certificate(text, data, out)
    sys.stdout.write(text)
    print(f"wrote {paths[0]} and {paths[1]}")
    return 0


# --- encode / solve -----------------------------------------------------------


def cmd_encode(args) -> int:
    g = read_dimacs(args.graph)
    if args.gamma is not None:
        f = encode_gamma_cnf(g, args.gamma)
    else:
        pins = []
        if args.labels:
            lg = load_labeled(args.graph, args.labels, budget=_budget(args))
            pins = [lg.index_of(Part(i, 1, 1)) for i in range(1, lg.params.n + 1)]
        f = encode_r_dynamic_cnf(g, args.dynamic, args.k, symmetry=pins)
    f.write(args.output)
    print(f"wrote {args.output}: {f.variable_count} variables, {len(f.clauses)} clauses")
    return 0


def cmd_solve(args) -> int:
    f = CnfFormula.read(args.cnf)
    result = solve(f, backend=args.backend, timeout=args.sat_timeout)
    print(f"s {result.status} solver={result.solver} seconds={result.seconds:.3f}")
    if result.reason:
        print(f"reason: {result.reason}")
    if args.expect:
        return 0 if result.status == args.expect.upper() else 1
    return 0 if result.status in (SAT, UNSAT) else 1


# --- verify-theorems ------------------------------------------------------------


@dataclass
class Entry:
    claim: str
    method: str
    status: str  # verified | refuted | unknown
    evidence: str
    detail: str = ""
    optional: bool = False
    seconds: float = 0.0


class Report:
    def __init__(self, outdir: Path, params):
        self.outdir = outdir
        self.params = params
        self.entries: list[Entry] = []

    def add(self, entry: Entry) -> Entry:
        self.entries.append(entry)
        tag = " (optional)" if entry.optional else ""
        print(
            f"{entry.claim:<14} {entry.method:<11} {entry.status:<9} {entry.seconds:8.2f}s  "
            f"{entry.detail}{tag}"
        )
        return entry

    @property
    def exit_code(self) -> int:
        for e in self.entries:
            if e.status == "refuted" or (e.status == "unknown" and not e.optional):
                return 1
        return 0

    def render(self) -> str:
        p = self.params
        lines = [
            "dyncol verification report",
            f"params r={p.r} n={p.n} delta={p.delta} m={p.m} N={p.N}",
            f"pigeonhole_ok={str(p.pigeonhole_ok).lower()} domination_ok={str(p.domination_ok).lower()}",
            "",
        ]
        for e in self.entries:
            opt = " optional" if e.optional else ""
            lines.append(f"{e.claim} | {e.method} | {e.status}{opt} | {e.evidence} | {e.detail}")
        lines.append("")
        status = {e.claim: e.status for e in self.entries}
        targets = [("chi", p.n), (f"chi_{p.r}", p.r * p.n), ("gamma", p.n)]
        for (name, value), prefix in zip(targets, ("chi", "chi_r", "gamma")):
            pair = (status.get(f"{prefix}.lower"), status.get(f"{prefix}.upper"))
            if pair == (None, None):
                continue
            if pair == ("verified", "verified"):
                verdict = "verified"
            elif "refuted" in pair:
                verdict = "refuted"
            elif pair[1] == "verified":
                verdict = f"upper bound only (<= {value})"
            else:
                verdict = "unknown"
            lines.append(f"{name} = {value}: {verdict}")
        lines.append(f"overall {'verified' if self.exit_code == 0 else 'not verified'}")
        return "\n".join(lines) + "\n"

    def timings(self) -> dict:
        return {e.claim: round(e.seconds, 3) for e in self.entries}


def _timed(fn):
    start = time.perf_counter()
    entry = fn()
    entry.seconds = time.perf_counter() - start
    return entry


def _claim_groups(text: str) -> set[str]:
    groups = {g.strip() for g in text.split(",") if g.strip()}
    unknown = groups - set(CLAIM_GROUPS)
    if unknown:
        raise ParameterError(f"unknown claim group(s): {', '.join(sorted(unknown))}")
    return groups


def _sat_lower_bound(claim, formula, path, timeout, backend, optional, what):
    formula.write(path)
    result = solve(formula, backend=backend, timeout=timeout)
    detail = f"{what}: {result.status} by {result.solver}"
    if result.status == UNSAT:
        status = "verified"
    elif result.status == SAT:
        status = "refuted"
    else:
        status = "unknown"
        detail += f" ({result.reason})"
    return Entry(claim, "SAT", status, path.name, detail, optional)


def cmd_verify_theorems(args) -> int:
    groups = _claim_groups(args.claims)
    witness_only = "witness-only" in groups
    if witness_only or not groups:
        groups |= {"chi", "chi-r", "gamma"}
    params = _params(args)
    outdir = Path(args.output)
    outdir.mkdir(parents=True, exist_ok=True)
    lg = build(params, budget=_budget(args))
    graph_path, _ = export(lg, outdir / "graph")
    report = Report(outdir, params)
    p = params
    g = lg.graph
    hard = p.r >= 3 or p.n >= 3  # lower bounds may exceed desk budgets
    timeout = args.sat_timeout
    backend = args.backend

    def regular():
        d = regular_degree(g)
        ok = d == p.degree and d > p.delta
        return Entry("regular", "witness", "verified" if ok else "refuted", graph_path.name,
                     f"{d}-regular, degree > delta={p.delta}")

    report.add(_timed(regular))

    if "chi" in groups:
        def chi_lower():
            clique = [lg.index_of(Part(i, 1, 1)) for i in range(1, p.n + 1)]
            path = outdir / "chi.clique.set"
            write_vertex_set(clique, path, header="clique")
            ok = is_clique(g, clique)
            return Entry("chi.lower", "witness", "verified" if ok else "refuted", path.name,
                         f"clique of size {p.n}: chi >= {p.n}")

        def chi_upper():
            c = witness_proper(lg)
            path = outdir / "witness.proper.clr"
            write_colouring(c, path)
            ok = is_proper(g, c) is None and colours_used(c) == p.n
            return Entry("chi.upper", "witness", "verified" if ok else "refuted", path.name,
                         f"proper {colours_used(c)}-colouring: chi <= {p.n}")

        report.add(_timed(chi_lower))
        report.add(_timed(chi_upper))

    if "chi-r" in groups:
        def chir_upper():
            path = outdir / "witness.rdyn.clr"
            try:
                c = witness_r_dynamic(lg)
            except WitnessUnavailable as exc:
                return Entry("chi_r.upper", "witness", "unknown", "-", str(exc))
            write_colouring(c, path)
            ok = is_proper(g, c) is None and is_r_dynamic(g, c, p.r) is None
            return Entry("chi_r.upper", "witness", "verified" if ok else "refuted", path.name,
                         f"{p.r}-dynamic {colours_used(c)}-colouring: chi_r <= {p.r * p.n}")

        report.add(_timed(chir_upper))

        def chir_refuter():
            sample_dir = outdir / "dynamic-samples"
            sample_dir.mkdir(exist_ok=True)
            colourings = [witness_proper(lg)]
            if args.samples:
                colourings += list(sample_proper_colourings(
                    lg, p.r * p.n - 1, args.samples, seed=args.seed, backend=backend))
            failures = 0
            for s, c in enumerate(colourings):
                write_colouring(c, sample_dir / f"colouring{s:03d}.clr")
                try:
                    ref = refuter.refute_dynamic(lg, c, p.r)
                except NoWitnessFound:
                    failures += 1
                    continue
                if not refuter.check_dynamic_refutation(lg, c, ref, p.r):
                    failures += 1
                    continue
                refuter.write_certificate(*refuter.dynamic_certificate(ref), sample_dir / f"cert{s:03d}.txt")
            status = "verified" if failures == 0 else ("refuted" if p.pigeonhole_ok else "unknown")
            return Entry("chi_r.refuter", "refuter", status, sample_dir.name,
                         f"{len(colourings) - failures}/{len(colourings)} proper "
                         f"(<= {p.r * p.n - 1})-colourings refuted", optional=not p.pigeonhole_ok)

        if witness_only:
            report.add(Entry("chi_r.lower", "SAT", "unknown", "-", "not requested", optional=True))
        else:
            report.add(_timed(chir_refuter))

            def chir_lower():
                k = p.r * p.n - 1
                pins = [lg.index_of(Part(i, 1, 1)) for i in range(1, p.n + 1)]
                f = encode_r_dynamic_cnf(g, p.r, k, symmetry=pins)
                return _sat_lower_bound("chi_r.lower", f, outdir / f"chi_r.k{k}.cnf",
                                        timeout, backend, hard, f"no {p.r}-dynamic {k}-colouring")

            report.add(_timed(chir_lower))

    if "gamma" in groups:
        def gamma_upper():
            members, colouring, _ = witness_total_dominating(lg)
            path = outdir / "witness.tds.set"
            write_vertex_set(members, path, dict(enumerate(colouring)), header="total-dominating")
            sub, _ = induced_subgraph(g, members)
            ok = is_total_dominating(g, members) is None and is_proper(sub, colouring) is None
            return Entry("gamma.upper", "witness", "verified" if ok else "refuted", path.name,
                         f"total dominating set, induced chi <= {p.n}")

        report.add(_timed(gamma_upper))

        if witness_only:
            report.add(Entry("gamma.lower", "SAT", "unknown", "-", "not requested", optional=True))
        else:
            def gamma_refuter():
                sample_dir = outdir / "domination-samples"
                sample_dir.mkdir(exist_ok=True)
                failures = 0
                sets = list(sample_sparse_sets(lg, max(args.samples, 1), seed=args.seed))
                for s, members in enumerate(sets):
                    write_vertex_set(members, sample_dir / f"set{s:03d}.set")
                    try:
                        outcome = refuter.refute_domination(lg, members)
                    except NoWitnessFound:
                        failures += 1
                        continue
                    if not refuter.check_domination_outcome(lg, members, outcome):
                        failures += 1
                        continue
                    refuter.write_certificate(*refuter.domination_certificate(lg, outcome),
                                              sample_dir / f"cert{s:03d}.txt")
                status = "verified" if failures == 0 else ("refuted" if p.domination_ok else "unknown")
                return Entry("gamma.refuter", "refuter", status, sample_dir.name,
                             f"{len(sets) - failures}/{len(sets)} sparse sets refuted",
                             optional=not p.domination_ok)

            report.add(_timed(gamma_refuter))

            def gamma_lower():
                t = p.n - 1
                f = encode_gamma_cnf(g, t, symmetry=True)
                return _sat_lower_bound("gamma.lower", f, outdir / f"gamma.t{t}.cnf",
                                        timeout, backend, hard,
                                        f"no total dominating set with induced chi <= {t}")

            report.add(_timed(gamma_lower))

    (outdir / "report.txt").write_text(report.render(), encoding="ascii")
    (outdir / "timings.json").write_text(json.dumps(report.timings(), indent=1) + "\n", encoding="ascii")
    print(f"wrote {outdir / 'report.txt'}")
    return report.exit_code


# --- argument parsing ------------------------------------------------------------


def _add_budget(p):
    p.add_argument("--budget-vertices", type=int, default=Budget.vertices)
    p.add_argument("--budget-edges", type=int, default=Budget.edges)


def _add_construction(p):
    p.add_argument("-r", type=int, required=True, help="dynamism level r >= 2")
    p.add_argument("-n", type=int, required=True, help="chromatic target n >= 2")
    p.add_argument("--delta", type=int, default=2, help="degree lower bound (default 2)")
    p.add_argument("-m", type=int, default=None, help="explicit block count (overrides the default m)")
    _add_budget(p)


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dyncol", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="write the construction as DIMACS graph + label sidecar")
    _add_construction(p)
    p.add_argument("-o", "--output", help="output stem (writes STEM.col and STEM.labels)")
    p.add_argument("--witnesses", action="store_true", help="also write the witness colourings / set")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("check", help="validate a colouring, total dominating set or clique")
    p.add_argument("graph")
    p.add_argument("file", help="colouring file, or vertex-set file with --domination/--clique")
    p.add_argument("--dynamic", type=int, metavar="R", help="also require r-dynamism")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--domination", action="store_true")
    mode.add_argument("--clique", action="store_true")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("refute", help="produce a pigeonhole refutation certificate")
    p.add_argument("graph")
    p.add_argument("labels")
    p.add_argument("file", help="colouring (dynamic mode) or vertex set (--domination)")
    p.add_argument("--dynamic", type=int, metavar="R", help="dynamism level (default: label header)")
    p.add_argument("--domination", action="store_true")
    p.add_argument("-o", "--output", default="certificate.txt")
    _add_budget(p)
    p.set_defaults(func=cmd_refute)

    p = sub.add_parser("encode", help="write a DIMACS CNF for a colouring decision")
    p.add_argument("graph")
    p.add_argument("--labels", help="label sidecar; pins Part(i,1,1) to colour i")
    p.add_argument("--dynamic", type=int, default=2, metavar="R")
    p.add_argument("-k", type=int, help="palette size for the r-dynamic encoding")
    p.add_argument("--gamma", type=int, metavar="T", help="encode gamma <= T instead")
    p.add_argument("-o", "--output", required=True)
    _add_budget(p)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("solve", help="decide a DIMACS CNF with the configured backend")
    p.add_argument("cnf")
    p.add_argument("--backend", choices=["external", "pysat", "dpll"])
    p.add_argument("--sat-timeout", type=float, default=None)
    p.add_argument("--expect", choices=["sat", "unsat"])
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify-theorems", help="run the full verification pipeline")
    _add_construction(p)
    p.add_argument("--claims", default="chi,chi-r,gamma",
                   help=f"comma-separated subset of {', '.join(CLAIM_GROUPS)}")
    p.add_argument("-o", "--output", default="verify-out", help="output directory")
    p.add_argument("--sat-timeout", type=float, default=600.0, metavar="SECONDS")
    p.add_argument("--backend", choices=["external", "pysat", "dpll"])
    p.add_argument("--samples", type=int, default=10, help="refuter samples per claim")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify_theorems)
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    if args.command == "encode" and args.gamma is None and args.k is None:
        parser.error("encode needs -k or --gamma")
    try:
        return args.func(args)
    except (ParameterError, CapacityError, FormatError, DyncolError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
