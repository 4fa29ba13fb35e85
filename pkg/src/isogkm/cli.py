"""``isogkm`` command-line front end.

Exit codes: 0 success, 2 parse error, 3 validation failure, 4 lift mismatch,
5 formality verdict disagreement, 6 numerical verification failure.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__, cohomology, files, flows, gkm, matops
from .sparsity import GraphParseError, LieType, NotGeneric, SparsityGraph, Spectrum, parse_graph, parse_lambda

EXIT_PARSE = 2
EXIT_INVALID = 3
EXIT_LIFT = 4
EXIT_DISAGREE = 5
EXIT_VERIFY = 6


class CliError(Exception):
    def __init__(self, message: str, code: int):
        self.code = code
        super().__init__(message)


# ---------------------------------------------------------------------------
# helpers


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}", EXIT_PARSE) from None


def _sparsity(path: str) -> SparsityGraph:
    try:
        return parse_graph(_read(path))
    except GraphParseError as exc:
        raise CliError(f"{path}: {exc}", EXIT_PARSE) from None


def _gkm_file(path: str) -> gkm.GKMGraph:
    try:
        return files.loads_graph(_read(path))
    except (files.GraphFileError, GraphParseError) as exc:
        raise CliError(f"{path}: {exc}", EXIT_PARSE) from None
    except NotGeneric as exc:
        raise CliError(f"{path}: {exc}", EXIT_INVALID) from None


def _spectrum(text: str | None, mode: LieType, n: int) -> Spectrum | None:
    if text is None:
        return None
    try:
        lam = parse_lambda(text, mode)
    except NotGeneric as exc:
        raise CliError(str(exc), EXIT_INVALID) from None
    except ValueError as exc:
        raise CliError(f"--lambda: {exc}", EXIT_PARSE) from None
    if len(lam) != n:
        raise CliError(f"--lambda has {len(lam)} values, graph has n={n}", EXIT_INVALID)
    return lam


def _default_spectrum(n: int, mode: LieType) -> Spectrum:
    return parse_lambda(",".join(str(n - k) for k in range(n)), mode)


def _timestamp(paths: Sequence[str]) -> str:
    """``SOURCE_DATE_EPOCH`` if set, else the newest input mtime, so reruns on
    unchanged inputs produce identical bytes."""
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    if epoch is None:
        times = [Path(p).stat().st_mtime for p in paths if p != "-" and Path(p).exists()]
        epoch = int(max(times)) if times else 0
    return datetime.fromtimestamp(int(epoch), timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def _manifest(args, inputs: Sequence[str], lam: Spectrum | None = None, seed: int | None = None) -> dict:
    return {
        "command": args.command,
        "inputs": list(inputs),
        "lambda": None if lam is None else files.spectrum_to_list(lam),
        "seed": seed,
        "version": __version__,
        "timestamp": _timestamp(inputs),
    }


def _emit(text: str, out: str | None) -> None:
    if out and out != "-":
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _report(kind: str, manifest: dict, body: dict, args) -> None:
    doc = {"schema": files.REPORT_SCHEMA, "kind": kind, "manifest": manifest, **body}
    _emit(files.dumps(doc, pretty=getattr(args, "pretty", False)), getattr(args, "out", None))


# ---------------------------------------------------------------------------
# commands


def cmd_build(args) -> int:
    g = _sparsity(args.graph)
    mode = LieType(args.type)
    lam = _spectrum(args.lam, mode, g.n)
    if mode is LieType.A:
        if args.via_lift:
            raise CliError("--via-lift only applies to --type D", EXIT_INVALID)
        gr = gkm.build_type_A(g, lam)
    else:
        gr = gkm.build_type_D(g, lam)
        if args.via_lift:
            lifted = gkm.lift_to_type_D(gkm.build_type_A(g, lam))
            if not lifted.same_as(gr):
                diff = set(lifted.edges) ^ set(gr.edges)
                raise CliError(f"lifted graph differs from direct build ({len(diff)} edges)", EXIT_LIFT)
        if args.component != "all":
            plus, minus = gkm.split_components(gr)
            gr = plus if args.component == "plus" else minus
    report = gkm.validate_gkm(gr)
    if not report.ok:
        bad = report.failures()[0]
        raise CliError(f"validation failed: {bad.name}: {bad.detail}", EXIT_INVALID)
    _emit(files.dumps(files.graph_to_dict(gr), pretty=args.pretty), args.out)
    return 0


def cmd_analyze(args) -> int:
    paths = [args.graph] + ([args.other] if args.other else [])
    graphs = [_gkm_file(p) for p in paths]
    gr = graphs[0]
    if args.other and not args.formality:
        raise CliError("a second graph file is only used with --formality", EXIT_PARSE)
    body: dict = {}
    seed = None
    if args.betti:
        lam = _spectrum(args.lam, gr.mode, gr.n) or gr.lam or _default_spectrum(gr.n, gr.mode)
        seed = args.seed
        rng = random.Random(seed)
        try:
            xi = cohomology.random_direction(gr, lam, rng)
            mc = cohomology.morse_counts(gr, lam, xi)
        except cohomology.NonGenericDirection as exc:
            raise CliError(str(exc), EXIT_INVALID) from None
        body["betti"] = {"counts": list(mc.counts), "direction": [str(x) for x in xi]}
    if args.ranks:
        D = args.max_degree if args.max_degree is not None else cohomology.default_max_degree(gr)
        try:
            table = cohomology.graded_ranks(gr, D)
        except cohomology.CapExceeded as exc:
            raise CliError(str(exc), EXIT_INVALID) from None
        body["ranks"] = {str(d): r for d, r in sorted(table.ranks.items())}
    disagree = False
    if args.formality:
        verdicts = []
        for p, g in zip(paths, graphs):
            try:
                v = cohomology.formality_verdict(g, args.max_degree)
            except cohomology.CapExceeded as exc:
                raise CliError(str(exc), EXIT_INVALID) from None
            verdicts.append({"input": p, **v.to_dict()})
        body["formality"] = verdicts
        if len(verdicts) == 2:
            disagree = verdicts[0]["verdict"] != verdicts[1]["verdict"]
            body["agree"] = not disagree
    if not body:
        raise CliError("choose at least one of --betti, --ranks, --formality", EXIT_PARSE)
    _report("analyze", _manifest(args, paths, gr.lam, seed), body, args)
    if disagree:
        print(
            f"verdicts differ: {body['formality'][0]['verdict']} vs {body['formality'][1]['verdict']}",
            file=sys.stderr,
        )
        return EXIT_DISAGREE
    return 0


def cmd_verify(args) -> int:
    g = _sparsity(args.graph)
    lam = _spectrum(args.lam, LieType.D, g.n)
    report = matops.verify(g, lam, samples=args.samples, seed=args.seed)
    _report("verify", _manifest(args, [args.graph], lam, args.seed), report.to_dict(), args)
    bad = report.first_failure()
    if bad is not None:
        print(f"claim failed: {bad.name} (residual {bad.max_residual:.3e} > {bad.tolerance:.1e})", file=sys.stderr)
        return EXIT_VERIFY
    return 0


def cmd_export(args) -> int:
    gr = _gkm_file(args.graph)
    try:
        text = files.export(gr, args.format)
    except files.UnknownFormat as exc:
        raise CliError(str(exc), EXIT_PARSE) from None
    _emit(text, args.out)
    return 0


def _start_from_file(path: str, g: SparsityGraph) -> list[np.ndarray]:
    try:
        doc = json.loads(_read(path))
        mats = doc["matrices"] if isinstance(doc, dict) else [doc]
        out = [np.array(m, dtype=float) for m in mats]
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise CliError(f"{path}: bad start file: {exc}", EXIT_PARSE) from None
    for A in out:
        if A.shape != (2 * g.n, 2 * g.n) or np.max(np.abs(A + A.T)) > 1e-12:
            raise CliError(f"{path}: start matrices must be {2 * g.n}x{2 * g.n} skew-symmetric", EXIT_INVALID)
        if matops.shape_residual(A, g) > 1e-12:
            raise CliError(f"{path}: start matrix is not Gamma-shaped", EXIT_INVALID)
    return out


def cmd_flow(args) -> int:
    g = _sparsity(args.graph)
    lam = _spectrum(args.lam, LieType.D, g.n)
    try:
        cfg = flows.FlowConfig(g, step_size=args.step, max_steps=args.max_steps, convergence_tol=args.tol)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_INVALID) from None
    rng = np.random.default_rng(args.seed)
    if args.start == "file":
        if not args.start_file:
            raise CliError("--start file needs --start-file", EXIT_PARSE)
        starts = _start_from_file(args.start_file, g)
        for A in starts:
            if matops.spectrum_distance(A, lam) > matops.PROFILE.spectrum:
                raise CliError("start matrix does not have the given spectrum", EXIT_INVALID)
    else:
        starts = flows.start_points(args.start, g, lam, args.count, rng)
    inputs = [args.graph] + ([args.start_file] if args.start == "file" else [])
    manifest = _manifest(args, inputs, lam, args.seed)
    lines = []
    for k, A in enumerate(starts):
        try:
            rec = flows.run_flow(A, lam.values, cfg).to_dict()
            rec["status"] = "converged" if rec["converged"] else "NoConvergence"
        except flows.ShapeLeak as exc:
            rec = {"status": "ShapeLeak", "detail": str(exc)}
        lines.append(json.dumps({"trajectory": k, "manifest": manifest, **rec}, sort_keys=True))
    _emit("\n".join(lines) + "\n", args.out)
    return 0


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="isogkm", description="GKM graphs of isospectral matrix manifolds.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="build a GKM graph from an edge list")
    b.add_argument("graph", help="edge-list file ('-' for stdin)")
    b.add_argument("--type", choices=["A", "D"], required=True)
    b.add_argument("--lambda", dest="lam", help="comma-separated spectrum")
    b.add_argument("--via-lift", action="store_true", help="also build D by lifting A and compare")
    b.add_argument("--component", choices=["all", "plus", "minus"], default="all")
    b.add_argument("--out")
    b.add_argument("--pretty", action="store_true")
    b.set_defaults(func=cmd_build)

    a = sub.add_parser("analyze", help="Betti counts, graded ranks, formality")
    a.add_argument("graph", help="graph file written by 'build'")
    a.add_argument("other", nargs="?", help="second graph file for --formality comparison")
    a.add_argument("--betti", action="store_true")
    a.add_argument("--ranks", action="store_true")
    a.add_argument("--formality", action="store_true")
    a.add_argument("--max-degree", type=int)
    a.add_argument("--lambda", dest="lam")
    a.add_argument("--seed", type=int, default=0)
    a.add_argument("--out")
    a.add_argument("--pretty", action="store_true")
    a.set_defaults(func=cmd_analyze)

    v = sub.add_parser("verify", help="numerical checks of the matrix-level claims")
    v.add_argument("graph", help="edge-list file")
    v.add_argument("--lambda", dest="lam", required=True)
    v.add_argument("--samples", type=int, default=100)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--out")
    v.add_argument("--pretty", action="store_true")
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("export", help="render a graph file")
    e.add_argument("graph")
    e.add_argument("--format", default="dot")
    e.add_argument("--out")
    e.set_defaults(func=cmd_export)

    f = sub.add_parser("flow", help="double-bracket flow trajectories")
    f.add_argument("graph", help="edge-list file")
    f.add_argument("--lambda", dest="lam", required=True)
    f.add_argument("--start", choices=["fixed", "sphere", "embed", "file"], default="sphere")
    f.add_argument("--start-file")
    f.add_argument("--count", type=int, default=10)
    f.add_argument("--seed", type=int, default=0)
    f.add_argument("--step", type=float, default=1e-3)
    f.add_argument("--max-steps", type=int, default=1_000_000)
    f.add_argument("--tol", type=float, default=1e-10)
    f.add_argument("--out")
    f.set_defaults(func=cmd_flow)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"isogkm {args.command}: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
