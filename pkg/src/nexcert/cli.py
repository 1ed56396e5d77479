"""Command-line front end.

Exit codes: 0 Surjective/Unique, 1 NotSurjective/NotUnique,
2 Inconclusive/SufficientOnly, 3 errors (including usage errors).
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import re
import sys

import numpy as np

from . import __version__
from .certificate import SCHEMA_VERSION, FaceWitness, Verdict
from .certify import (
    certify_surjective,
    certify_unique,
    certify_unique_eigenvector,
    certify_unique_subtopical,
    certify_unique_via_semiderivative,
    certify_via_recession,
    face_lattice_map,
    illumination_check,
    invariant_face_search,
)
from .errors import CertifierError
from .exact import zeros
from .gallery import example_sup_face, half, midpoint_map, min_clip, shrink_sqrt
from .mapexpr import Normalize, normalize_topical
from .oracle import (
    avoided_cone_samples,
    minimal_displacement_estimate,
    multistart_fixed_points,
    random_targets,
)
from .polynorm import builtin_norm
from .raylimits import NumericPolicy
from .serialize import ProblemFile, load_problem
from .topical import METHODS, build_Ginf, certify_subtopical, certify_topical

EXIT = {
    Verdict.SURJECTIVE: 0,
    Verdict.UNIQUE: 0,
    Verdict.NOT_SURJECTIVE: 1,
    Verdict.NOT_UNIQUE: 1,
    Verdict.INCONCLUSIVE: 2,
    Verdict.SUFFICIENT_ONLY: 2,
}
EXIT_ERROR = 3

DEMO_ALIASES = {"example-4.2": "sup-face"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="nexcert", description="Certify surjective displacement and unique fixed points of polyhedral-norm nonexpansive maps.")
    p.add_argument("problem", nargs="?", help="JSON problem file")
    p.add_argument("--demo", help="built-in example, e.g. 'sup-face n=3 K={0} L={1}', 'shrink-sqrt', 'min-clip', 'midpoint', 'half n=3'")
    p.add_argument("--demo-arg", action="append", default=[], metavar="KEY=VALUE", help="extra demo parameter (repeatable)")
    p.add_argument("--query", help="override the query type (demos default to their natural query)")
    p.add_argument("--method", choices=METHODS, help="method for topical queries")
    p.add_argument("--verify", action="store_true", help="append an oracle cross-check section")
    p.add_argument("--export-graph", metavar="PATH", help="write G_inf of the map in DOT format")
    p.add_argument("--tmax", type=int, metavar="K", help="number of doublings for numeric limits")
    p.add_argument("--seed", type=int, help="seed for sampling (overrides the problem file)")
    p.add_argument("--tol", type=float, default=1e-8, help="oracle residual tolerance (default 1e-8)")
    p.add_argument("--max-iter", type=int, default=100_000, help="oracle iteration budget")
    p.add_argument("--output", "-o", metavar="PATH", help="write the report here instead of stdout")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return p


# -- demos ---------------------------------------------------------------------


def _parse_set(v: str) -> frozenset:
    v = v.strip().strip("{}")
    return frozenset(int(x) for x in re.split(r"[,\s]+", v) if x)


def _demo_args(text: str, extra) -> tuple[str, dict]:
    tokens = text.split()
    if not tokens:
        raise CertifierError("empty demo name")
    name = DEMO_ALIASES.get(tokens[0], tokens[0])
    args = {}
    for tok in tokens[1:] + list(extra):
        if "=" not in tok:
            raise CertifierError(f"demo argument {tok!r} is not KEY=VALUE")
        k, v = tok.split("=", 1)
        args[k.strip()] = v.strip()
    return name, args


def demo_problem(text: str, extra=()) -> ProblemFile:
    name, a = _demo_args(text, extra)
    if name == "sup-face":
        n = int(a.get("n", 3))
        K = _parse_set(a.get("K", "{0}"))
        L = _parse_set(a.get("L", "{1}"))
        return ProblemFile(example_sup_face(n, K, L), {"type": "surjective"}, builtin_norm("sup", n))
    if name == "shrink-sqrt":
        return ProblemFile(shrink_sqrt(1), {"type": "surjective"}, builtin_norm("sup", 1))
    if name == "min-clip":
        n = int(a.get("n", 2))
        c = a.get("c", "1")
        return ProblemFile(min_clip((c,) * n), {"type": "subtopical"}, builtin_norm("sup", n))
    if name == "midpoint":
        n = int(a.get("n", 2))
        return ProblemFile(midpoint_map(n), {"type": "unique", "u": zeros(n)}, builtin_norm("sup", n))
    if name == "half":
        n = int(a.get("n", 3))
        return ProblemFile(half(n), {"type": "subtopical"}, builtin_norm("sup", n))
    raise CertifierError(f"unknown demo {name!r}; choose sup-face, shrink-sqrt, min-clip, midpoint or half")


# -- dispatch ------------------------------------------------------------------


def _need_norm(problem):
    if problem.norm is None:
        raise CertifierError(f"query {problem.query['type']!r} needs a norm")
    return problem.norm


def run_query(problem: ProblemFile, method: str | None = None):
    q, f, pol = problem.query, problem.map, problem.policy
    t = q["type"]
    assume = problem.assume_nonexpansive
    if t == "surjective":
        return certify_surjective(f, _need_norm(problem), pol, assume)
    if t == "unique":
        return certify_unique(f, _need_norm(problem), q.get("u", zeros(f.dim)), assume)
    if t == "unique_subtopical":
        return certify_unique_subtopical(f, q.get("u", zeros(f.dim)))
    if t == "eigenvector":
        return certify_unique_eigenvector(f, q.get("u", zeros(f.dim)))
    if t == "topical":
        return certify_topical(f, method or q.get("method", "hypergraph"), pol, dual=bool(q.get("dual", False)))
    if t == "subtopical":
        return certify_subtopical(f, pol)
    if t == "recession":
        return certify_via_recession(f, _need_norm(problem), pol, assume)
    if t == "semiderivative":
        return certify_unique_via_semiderivative(f, _need_norm(problem), q.get("u", zeros(f.dim)), assume)
    if t == "illumination":
        return illumination_check(f, _need_norm(problem), int(q.get("budget", 200)), int(q.get("seed", problem.seed)))
    if t == "face_lattice":
        return invariant_face_search(face_lattice_map(f, _need_norm(problem)))
    raise CertifierError(f"unknown query type {t!r}")


def _oracle_setting(problem):
    """Map and norm on which fixed points of ``f + u`` are searched."""
    t = problem.query["type"]
    f = problem.map
    if t == "topical":
        return normalize_topical(f), builtin_norm("variation", f.dim)
    if t in ("subtopical", "unique_subtopical") or problem.norm is None:
        return f, builtin_norm("sup", f.dim)
    return f, problem.norm


def verify(problem: ProblemFile, cert, tol: float, max_iter: int) -> dict:
    """Oracle cross-check; heuristic by nature."""
    f, norm = _oracle_setting(problem)
    seed = problem.seed
    out = {"heuristic": True, "tol": tol, "max_iter": max_iter}
    if cert.verdict is Verdict.SURJECTIVE and problem.query["type"] in ("surjective", "topical", "subtopical", "recession"):
        reports = [minimal_displacement_estimate(f, u, norm, tol, max_iter) for u in random_targets(f.dim, 10, seed)]
        out["check"] = "fixed points of f + u for random u"
        out["found"] = sum(r.found for r in reports)
        out["runs"] = [r.as_dict() for r in reports]
        out["agrees"] = out["found"] == len(reports)
    elif cert.verdict is Verdict.NOT_SURJECTIVE:
        witness = cert.witness
        if not isinstance(witness, FaceWitness):
            witness = certify_surjective(f, norm, problem.policy, assume_nonexpansive=True).witness
        if not isinstance(witness, FaceWitness) or witness.cone_value is None:
            out["check"] = "skipped: no face witness with a finite cone value"
            return out
        pts = avoided_cone_samples(norm, witness.face, witness.cone_value, 5, seed)
        reports = [minimal_displacement_estimate(f, -z, norm, tol, max_iter) for z in pts]
        out["check"] = "residual floor at avoided-cone targets"
        out["runs"] = [r.as_dict() for r in reports]
        out["min_residual"] = min(r.residual for r in reports)
        out["agrees"] = all(not r.found and r.residual >= 1e-3 for r in reports)
    elif cert.verdict in (Verdict.UNIQUE, Verdict.NOT_UNIQUE) and problem.query["type"] != "eigenvector":
        pts = multistart_fixed_points(f, norm, 20, seed, tol, max_iter)
        out["check"] = "multistart fixed points"
        out["distinct_fixed_points"] = len(pts)
        out["points"] = [[float(v) for v in p] for p in pts]
        out["agrees"] = len(pts) == 1 if cert.verdict is Verdict.UNIQUE else len(pts) >= 2
    else:
        out["check"] = "skipped"
    return out


def _problem_summary(problem: ProblemFile) -> dict:
    try:
        return problem.to_dict()
    except TypeError:
        return {"query": problem.query["type"]}


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if hasattr(obj, "numerator") and not isinstance(obj, (int, float)):
        return str(obj)
    return obj


def run(argv=None) -> tuple[int, str, str | None]:
    """Returns (exit code, report text, output path or None)."""
    args = build_parser().parse_args(argv)
    if bool(args.problem) == bool(args.demo):
        raise CertifierError("give exactly one of a problem file or --demo")
    if args.problem:
        problem = load_problem(args.problem)
    else:
        problem = demo_problem(args.demo, args.demo_arg)
    if args.query:
        q = {"type": args.query}
        if args.query in ("unique", "unique_subtopical", "eigenvector", "semiderivative"):
            q["u"] = problem.query.get("u", zeros(problem.map.dim))
        problem.query = q
    if args.seed is not None:
        problem.seed = args.seed
    if args.tmax is not None:
        problem.policy = dataclasses.replace(problem.policy, max_doublings=args.tmax)
    if args.method and problem.query["type"] != "topical":
        problem.query = {"type": "topical", "method": args.method}

    cert = run_query(problem, args.method)
    report = {
        "schema_version": SCHEMA_VERSION,
        "problem": _problem_summary(problem),
        "certificate": cert.as_dict(),
        "thresholds": {**problem.policy.as_dict(), "oracle_tol": args.tol, "oracle_max_iter": args.max_iter},
        "seed": problem.seed,
    }
    if args.verify:
        report["oracle"] = verify(problem, cert, args.tol, args.max_iter)
    if args.export_graph:
        T = problem.map.inner if isinstance(problem.map, Normalize) else problem.map
        if not T.order_preserving:
            raise CertifierError("graph export needs an order-preserving map")
        with open(args.export_graph, "w", encoding="utf-8") as fh:
            fh.write(build_Ginf(T, problem.policy).to_dot())
        report["graph"] = args.export_graph
    code = EXIT[cert.verdict]
    report["exit_code"] = code
    return code, json.dumps(_jsonable(report), indent=2, sort_keys=True), args.output


def main(argv=None) -> int:
    try:
        code, text, out = run(argv)
        if out:
            with open(out, "w", encoding="utf-8") as fh:
                fh.write(text + "\n")
        else:
            print(text)
        return code
    except (CertifierError, OSError) as exc:
        print(json.dumps({"error": str(exc), "type": type(exc).__name__}, sort_keys=True), file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
