"""``chipdist`` command-line front end.

Every subcommand reads one instance (a file path, or stdin when the path is
omitted or ``-``) and writes one JSON report to stdout.  Exit status is 0 on
success, 1 when a verification fails and 2 on usage or input errors.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import suites
from ._backend import BACKEND
from .chips import (
    AllFiredPeriod,
    ChipCountBound,
    ChipDistribution,
    RepeatedConfiguration,
    StepBoundExceeded,
    classify,
    distance_search,
    run_legal_game,
)
from .divisor import (
    Divisor,
    canonical_divisor,
    has_effective_equivalent,
    q_reduce,
    rank,
    riemann_roch_residual,
    witness_check,
)
from .errors import ChipDistError, ParseError
from .feedback import minfas_exact, under_acyclic_orientation
from .graphs import (
    Digraph,
    Graph,
    parse_instance,
    random_eulerian_digraph,
    random_graph,
    to_instance,
)
from .reductions import (
    base_distribution,
    divisor_subdivide,
    phi_transform,
    subdivide,
    verify_phi_lemma,
)

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


class UsageError(ChipDistError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


# ------------------------------------------------------------------ helpers

def _read(path):
    if path in (None, "-"):
        text = sys.stdin.read()
    else:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read {path}: {exc}") from exc
    return parse_instance(text)


def _chips(inst) -> ChipDistribution:
    chips = inst.chips if inst.chips is not None else (0,) * inst.host.n
    return ChipDistribution(inst.host, chips)


def _divisor(inst) -> Divisor:
    if inst.divisor is None:
        raise UsageError("instance has no \"divisor\" array")
    if inst.host.directed:
        raise UsageError("divisors need an undirected graph")
    return Divisor(inst.host, inst.divisor)


def _graph(inst) -> Graph:
    if inst.host.directed:
        raise UsageError("this command needs an undirected graph")
    return inst.host


def _digraph(inst) -> Digraph:
    if not inst.host.directed:
        raise UsageError("this command needs a digraph")
    return inst.host


def _vector(text: str) -> tuple:
    try:
        vals = json.loads(text) if text.lstrip().startswith("[") else [int(t) for t in text.split(",")]
        return tuple(int(v) for v in vals)
    except (ValueError, TypeError) as exc:
        raise UsageError(f"cannot read vector {text!r}") from exc


def _certificate(cert) -> dict | None:
    if cert is None:
        return None
    if isinstance(cert, AllFiredPeriod):
        return {"type": "all-fired-period", "order": list(cert.order), "start": list(cert.start)}
    if isinstance(cert, RepeatedConfiguration):
        return {"type": "repeated-configuration", "first_seen_step": cert.first_seen_step,
                "repeat_step": cert.repeat_step}
    if isinstance(cert, StepBoundExceeded):
        return {"type": "step-bound-exceeded", "bound": cert.bound}
    if isinstance(cert, ChipCountBound):
        return {"type": "chip-count-bound", "threshold": cert.threshold}
    return {"type": type(cert).__name__}


def _outcome(out) -> dict:
    return {
        "verdict": out.verdict,
        "steps": out.steps,
        "final": list(out.final.chips),
        "odometer": list(out.odometer),
        "certificate": _certificate(out.certificate),
    }


# ----------------------------------------------------------------- commands

def cmd_classify(args):
    return _outcome(classify(_chips(_read(args.instance)))), EXIT_OK


def cmd_simulate(args):
    if args.policy == "random" and args.seed is None:
        raise UsageError("--policy random needs --seed")
    out, log = run_legal_game(_chips(_read(args.instance)), args.policy, args.cap,
                              seed=args.seed, trace=args.trace)
    doc = _outcome(out)
    doc["verdict"] = "stopped" if out.terminating else "cap-reached"
    if args.trace:
        doc["trace"] = [{"step": s, "vertex": v, "chips": list(c)} for s, v, c in log]
    return doc, EXIT_OK


def cmd_dist(args):
    found = distance_search(_chips(_read(args.instance)))
    doc = {"dist": found.dist}
    if args.witness:
        doc["witness"] = list(found.witness)
    return doc, EXIT_OK


def cmd_rank(args):
    return {"rank": rank(_divisor(_read(args.instance)))}, EXIT_OK


def cmd_winnable(args):
    return {"winnable": has_effective_equivalent(_divisor(_read(args.instance)))}, EXIT_OK


def cmd_reduce(args):
    inst = _read(args.instance)
    if args.to == "q-reduced":
        f = _divisor(inst)
        if not 0 <= args.q < f.host.n:
            raise UsageError("--q must be a vertex of the graph")
        red = q_reduce(f, args.q)
        return {"q": red.q, "reduced": list(red.values), "set_firings": red.set_firings}, EXIT_OK
    if args.to == "phi":
        p = phi_transform(_digraph(inst), args.scaled_M)
        doc = to_instance(p.target, base_distribution(p).chips)
        doc["M"] = p.M
        doc["psi_arc"] = [[t, h, p.psi_arc(i)] for i, (t, h) in enumerate(p.arcs)]
        if args.scaled_M is not None:
            doc["scaled"] = True
        return doc, EXIT_OK
    g = _graph(inst)
    h, x = subdivide(g, _chips(inst))
    doc = to_instance(h, x.chips, divisor_subdivide(g, _divisor(inst))[1].values
                      if inst.divisor is not None else None)
    return doc, EXIT_OK


def cmd_minfas(args):
    size, fas = minfas_exact(_digraph(_read(args.instance)))
    arcs = [[u, v] for u, v, m in fas.arcs for _ in range(m)]
    return {"minfas": size, "fas": arcs}, EXIT_OK


def cmd_under_acyclic(args):
    inst = _read(args.instance)
    g = _graph(inst)
    x = _chips(inst)
    orient = under_acyclic_orientation(g, x, args.mode)
    doc = {"under_acyclic": orient is not None}
    if orient is not None:
        doc["order"] = list(orient.order)
        doc["arcs"] = [[u, v, m] for u, v, m in orient.digraph.arcs]
        doc["dist"] = g.num_edges - x.size
    return doc, EXIT_OK


def cmd_verify_witness(args):
    f = _divisor(_read(args.instance))
    g = _vector(args.g)
    if len(g) != f.host.n:
        raise UsageError(f"--g needs {f.host.n} entries")
    ok, steps = witness_check(f, args.k, g)
    return {"valid": ok, "set_firings": steps}, EXIT_OK if ok else EXIT_FAILED


def cmd_riemann_roch(args):
    f = _divisor(_read(args.instance))
    res = riemann_roch_residual(f)
    doc = {
        "rank": rank(f),
        "rank_dual": rank(canonical_divisor(f.host) - f),
        "degree": f.degree,
        "genus": f.host.genus,
        "residual": res,
    }
    return doc, EXIT_OK if res == 0 else EXIT_FAILED


def cmd_gen(args):
    if args.kind == "graph":
        host = random_graph(args.n, args.seed, max_mult=args.max_mult, density=args.density)
    else:
        host = random_eulerian_digraph(args.n, args.cycles, args.n, args.seed)
    chips = None
    if args.chips == "zero":
        chips = (0,) * host.n
    elif args.chips == "random":
        rng = np.random.default_rng([args.seed, 1])
        chips = tuple(int(rng.integers(0, int(d) + 1)) for d in host.out_degrees)
    return to_instance(host, chips), EXIT_OK


def _suite_report(res) -> dict:
    doc = {"checked": res.checked, "failures": res.failure_count}
    if res.failure_count:
        doc["examples"] = res.failures
    return doc


def cmd_verify(args):
    seed, n_max, samples = args.seed, args.n_max, args.samples
    s = args.suite
    if s == "phi-lemma":
        if args.instance is not None:
            hosts = [_digraph(_read(args.instance))]
        else:
            hosts = [suites.d2_digraph(), suites.c3_digraph()]
        reports = [verify_phi_lemma(d) for d in hosts]
        docs = [r.as_dict() for r in reports]
        if not args.timing:
            for d in docs:
                d.pop("wall_time")
        failures = sum(not r.ok for r in reports)
        doc = {"checked": len(reports), "failures": failures, "reports": docs}
        return doc, EXIT_FAILED if failures else EXIT_OK
    if s == "oracle-suite":
        matrix = suites.oracle_suite(seed)
        doc = {name: {"checked": r["checked"], "failures": r["failures"], "passed": r["passed"]}
               for name, r in sorted(matrix.items())}
        failed = any(not r["passed"] for r in matrix.values())
        return doc, EXIT_FAILED if failed else EXIT_OK
    if s == "riemann-roch":
        res = suites.riemann_roch_suite(n_max or 3, samples or 50, seed)
    elif s == "duality":
        res = suites.check_duality(suites.divisor_pairs(seed, samples or 500, n_max or 4))
    elif s == "subdivision":
        res = suites.check_subdivision(suites.subdivision_samples(seed, 1, n_max or 3))
    elif s == "dist-zero":
        res = suites.check_dist_zero_graphs(suites.graph_universe(seed, samples or 200, n_max or 5))
    elif s == "minfas":
        res = suites.check_dist_minfas(suites.eulerian_universe(seed, samples or 200, n_max or 5))
    elif s == "rotation":
        res = suites.check_fas_rotation(suites.eulerian_universe(seed, samples or 200, n_max or 5))
    elif s == "acyclic":
        res = suites.check_acyclic_case(suites.graph_classes(n_max or 3, 2))
    elif s == "abelian":
        res = suites.check_abelian(suites.abelian_instances(seed, samples or 100), seed=seed)
    else:  # witness
        res = suites.check_witness_verifier(suites.divisor_pairs(seed, samples or 200, n_max or 4))
    return _suite_report(res), EXIT_FAILED if res.failure_count else EXIT_OK


# ------------------------------------------------------------------ parsing

SUITES = ("phi-lemma", "subdivision", "riemann-roch", "oracle-suite", "duality",
          "dist-zero", "minfas", "rotation", "acyclic", "abelian", "witness")


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentParser(add_help=False)
    group = fmt.add_mutually_exclusive_group()
    group.add_argument("--json", dest="human", action="store_false", help="JSON report (default)")
    group.add_argument("--human", dest="human", action="store_true", help="key: value lines")
    fmt.set_defaults(human=False)
    inst = argparse.ArgumentParser(add_help=False)
    inst.add_argument("instance", nargs="?", help="instance JSON file; stdin if omitted or -")

    p = _Parser(prog="chipdist", description="Chip-firing distances, divisor ranks and reductions.")
    p.add_argument("--version", action="version", version=f"%(prog)s (backend: {BACKEND})")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help, parents=(fmt, inst)):
        sp = sub.add_parser(name, parents=list(parents), help=help)
        sp.set_defaults(func=fn)
        return sp

    add("classify", cmd_classify, "terminating or not, with a certificate")
    sp = add("simulate", cmd_simulate, "play one legal game")
    sp.add_argument("--policy", choices=("min-index", "random"), default="min-index")
    sp.add_argument("--cap", type=int, default=10_000, help="step cap (default 10000)")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--trace", action="store_true", help="include every firing")
    sp = add("dist", cmd_dist, "distance to a non-terminating distribution")
    sp.add_argument("--witness", action="store_true", help="also print the chips added")
    add("rank", cmd_rank, "rank of the divisor")
    add("winnable", cmd_winnable, "does the divisor have an effective equivalent")
    sp = add("reduce", cmd_reduce, "q-reduce a divisor, or transform the instance")
    sp.add_argument("--to", choices=("q-reduced", "phi", "subdivide"), default="q-reduced")
    sp.add_argument("--q", type=int, default=0)
    sp.add_argument("--scaled-M", dest="scaled_M", type=int,
                    help="debug only: override M in the phi transform")
    add("minfas", cmd_minfas, "minimum feedback arc set of a digraph")
    sp = add("under-acyclic", cmd_under_acyclic, "is x under an acyclic orientation")
    sp.add_argument("--mode", choices=("greedy", "exhaustive"), default="greedy")
    sp = add("verify-witness", cmd_verify_witness, "check a certificate for rank(f) <= k")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--g", required=True, help="effective divisor, e.g. 2,1,0")
    add("riemann-roch", cmd_riemann_roch, "Riemann-Roch residual of the divisor")

    sp = add("verify", cmd_verify, "run a batch verification suite", parents=(fmt,))
    sp.add_argument("suite", choices=SUITES)
    sp.add_argument("instance", nargs="?", help="digraph for phi-lemma (default: D2 and C3)")
    sp.add_argument("--n-max", type=int)
    sp.add_argument("--samples", type=int)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--timing", action="store_true", help="keep wall-clock fields")

    sp = add("gen", cmd_gen, "generate a random instance", parents=(fmt,))
    sp.add_argument("--kind", choices=("graph", "eulerian"), default="graph")
    sp.add_argument("--n", type=int, default=4)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--max-mult", type=int, default=2)
    sp.add_argument("--density", type=float, default=0.5)
    sp.add_argument("--cycles", type=int, default=2)
    sp.add_argument("--chips", choices=("none", "zero", "random"), default="none")
    return p


def _emit(doc, human: bool) -> None:
    if not human:
        print(json.dumps(doc, separators=(",", ":")))
        return
    for key, val in doc.items():
        print(f"{key}: {json.dumps(val) if isinstance(val, (list, dict)) else val}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        doc, status = args.func(args)
    except AssertionError as exc:
        print(f"chipdist: verification failed: {exc}", file=sys.stderr)
        return EXIT_FAILED
    except (ChipDistError, ValueError) as exc:
        kind = "parse error" if isinstance(exc, ParseError) else "error"
        print(f"chipdist: {kind}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _emit(doc, args.human)
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
