"""Command-line interface.

Graphs travel as graph6 strings (or '-' to read one line from stdin);
words render as little-endian bitstrings ("1101" = e1+e2+e4).  Structured
output is JSON on stdout.
"""

from __future__ import annotations

import argparse
import json
import sys
from math import inf

from . import __version__
from .autos import (
    automorphism_group,
    is_generously_transitive,
    is_vertex_transitive,
    orbitals_of_group,
)
from .cayley import ConnectionSet, cayley_z2, cube_graph, cubelike_hull, folded_cube, halved_cube
from .gf2 import Word
from .graphs import Graph, odd_girth, parse_graph_line, to_graph6
from .hom import (
    HomProblem,
    MODE_ANY,
    MODE_INDUCED,
    MODE_INJECTIVE,
    compute_core,
    deadline_in,
    find_homomorphism,
    is_hom_idempotent,
)
from .invariants import (
    chromatic_number,
    clique_number,
    independence_number,
)
from .pipeline import PipelineConfig, funnel_counts, render_funnel, run_corpus
from .spectral import integer_spectrum


def _graph_arg(text: str) -> Graph:
    if text == "-":
        text = sys.stdin.readline()
    return parse_graph_line(text)


def _emit(data) -> None:
    print(json.dumps(data))


def _cmd_gen(args) -> int:
    if args.family == "cube":
        g = cube_graph(args.n)
    elif args.family == "folded":
        g = folded_cube(args.n)
    elif args.family == "halved":
        g = halved_cube(args.n)
    elif args.family == "cayley":
        words = [Word.from_string(w) for w in args.words.split(",")]
        if any(w.n != args.n for w in words):
            raise SystemExit("connection words must have the requested dimension")
        g = cayley_z2(ConnectionSet.from_words(words, args.n))
    elif args.family == "hull":
        host = _graph_arg(args.graph)
        g, _ = cubelike_hull(host)
    else:  # pragma: no cover
        raise SystemExit(f"unknown family {args.family}")
    print(to_graph6(g))
    if args.labels:
        if g.labels is None:
            raise SystemExit("graph has no labels")
        table = [Word(g.label_dim, w).to_string() for w in g.labels]
        _emit({"label_dim": g.label_dim, "labels": table})
    return 0


def _cmd_aut(args) -> int:
    g = _graph_arg(args.graph)
    group = automorphism_group(g)
    part = orbitals_of_group(group)
    _emit(
        {
            "order": group.order(),
            "vertex_orbits": len(group.orbits()),
            "orbitals": part.n_orbitals,
            "vertex_transitive": is_vertex_transitive(g),
            "generously_transitive": is_generously_transitive(g),
        }
    )
    return 0


def _cmd_core(args) -> int:
    g = _graph_arg(args.graph)
    result = compute_core(g, deadline=deadline_in(args.timeout_ms))
    _emit(
        {
            "core_graph6": to_graph6(result.core),
            "core_vertices": list(result.core_vertices),
            "retraction": list(result.retraction.image),
            "iterations": len(result.chain),
        }
    )
    return 0


def _cmd_hom(args) -> int:
    src = _graph_arg(args.source)
    dst = _graph_arg(args.target)
    mode = MODE_ANY
    if args.injective:
        mode = MODE_INJECTIVE
    if args.induced:
        mode = MODE_INDUCED
    vm = find_homomorphism(
        HomProblem(src, dst, mode, deadline=deadline_in(args.timeout_ms))
    )
    if vm is None:
        _emit({"found": False})
    else:
        _emit({"found": True, "map": list(vm.image)})
    return 0


def _cmd_homidem(args) -> int:
    g = _graph_arg(args.graph)
    ok, vm = is_hom_idempotent(g, deadline=deadline_in(args.timeout_ms))
    out = {"hom_idempotent": ok}
    if vm is not None:
        out["square_map"] = list(vm.image)
    _emit(out)
    return 0


def _cmd_spectrum(args) -> int:
    g = _graph_arg(args.graph)
    s = integer_spectrum(g)
    if s.integral:
        _emit({"integral": True, "entries": [[ev, m] for ev, m in s.entries]})
    else:
        _emit(
            {
                "integral": False,
                "entries": [[ev, m] for ev, m in s.entries],
                "residual_poly": list(s.residual),
            }
        )
    return 0


def _cmd_invariants(args) -> int:
    g = _graph_arg(args.graph)
    deadline = deadline_in(args.timeout_ms)
    omega = clique_number(g, deadline=deadline)
    alpha = independence_number(g, deadline=deadline)
    chi = chromatic_number(g, deadline=deadline)
    og = odd_girth(g)
    _emit(
        {
            "omega": omega,
            "alpha": alpha,
            "chi": chi,
            "odd_girth": None if og == inf else og,
            "cc_equality": omega * alpha == g.n,
        }
    )
    return 0


def _cmd_filter(args) -> int:
    config = PipelineConfig(search_timeout_ms=args.timeout_ms)
    with open(args.corpus) as fh:
        lines = fh.readlines()
    reports = run_corpus(
        lines,
        config=config,
        jobs=args.jobs,
        report_path=args.report,
        checkpoint_path=args.checkpoint,
        progress=None if args.quiet else lambda rep: print(
            f"{rep['graph6']}\t{rep['classification']}", file=sys.stderr
        ),
    )
    print(render_funnel(funnel_counts(reports)))
    return 0


def _cmd_funnel(args) -> int:
    with open(args.report) as fh:
        reports = [json.loads(line) for line in fh if line.strip()]
    print(render_funnel(funnel_counts(reports)))
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="cubecore",
        description="constructions, invariants and census filters for cores "
        "of Cayley graphs over elementary abelian 2-groups",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate named graph families as graph6")
    gen_sub = p.add_subparsers(dest="family", required=True)
    for fam in ("cube", "folded", "halved"):
        q = gen_sub.add_parser(fam)
        q.add_argument("n", type=int)
        q.add_argument("--labels", action="store_true", help="also print the word labels")
        q.set_defaults(func=_cmd_gen)
    q = gen_sub.add_parser("cayley")
    q.add_argument("n", type=int)
    q.add_argument("words", help="comma-separated little-endian bitstrings")
    q.add_argument("--labels", action="store_true")
    q.set_defaults(func=_cmd_gen)
    q = gen_sub.add_parser("hull")
    q.add_argument("graph", help="graph6 string or '-' for stdin")
    q.add_argument("--labels", action="store_true")
    q.set_defaults(func=_cmd_gen)

    p = sub.add_parser("aut", help="automorphism group summary")
    p.add_argument("graph")
    p.set_defaults(func=_cmd_aut)

    p = sub.add_parser("core", help="core with retraction")
    p.add_argument("graph")
    p.add_argument("--timeout-ms", type=float, default=None)
    p.set_defaults(func=_cmd_core)

    p = sub.add_parser("hom", help="find a homomorphism between two graphs")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("--injective", action="store_true")
    p.add_argument("--induced", action="store_true")
    p.add_argument("--timeout-ms", type=float, default=None)
    p.set_defaults(func=_cmd_hom)

    p = sub.add_parser("homidem", help="Cartesian-square homomorphism test")
    p.add_argument("graph")
    p.add_argument("--timeout-ms", type=float, default=None)
    p.set_defaults(func=_cmd_homidem)

    p = sub.add_parser("spectrum", help="exact integer spectrum")
    p.add_argument("graph")
    p.set_defaults(func=_cmd_spectrum)

    p = sub.add_parser("invariants", help="clique, independence, chromatic numbers")
    p.add_argument("graph")
    p.add_argument("--timeout-ms", type=float, default=None)
    p.set_defaults(func=_cmd_invariants)

    p = sub.add_parser("filter", help="run the census cascade over a graph6 corpus")
    p.add_argument("corpus")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--timeout-ms", type=float, default=120_000.0)
    p.add_argument("--report", default=None, help="write JSON-lines reports here")
    p.add_argument("--checkpoint", default=None, help="resumable progress file")
    p.add_argument("--quiet", action="store_true")
    p.set_defaults(func=_cmd_filter)

    p = sub.add_parser("funnel", help="print the per-filter count table of a report")
    p.add_argument("report")
    p.set_defaults(func=_cmd_funnel)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
