"""The census filter cascade: classify vertex-transitive graphs as cubelike,
rejected (with a witnessing filter) or surviving candidates.

Filters run in a fixed order, cheap spectral conditions first; the first
reject stops the cascade.  Searches that hit their deadline yield an
`indeterminate` verdict: the graph stays in play but its report is flagged.
Reports are deterministic per graph and independent of corpus order.

A corpus run streams graph6 lines through a process pool, emits one JSON
report per line in input order, and checkpoints completed line numbers
keyed by a corpus content hash.
"""

from __future__ import annotations

import hashlib
import json
import os
import time
from concurrent.futures import FIRST_COMPLETED, ProcessPoolExecutor, wait
from dataclasses import dataclass, field, replace
from math import inf
from typing import Callable, Iterable, Iterator, Optional

from .autos import is_generously_transitive, orbital_graph, orbitals
from .cayley import folded_cube, halved_cube, is_cubelike
from .errors import CapacityError, Graph6ParseError, SearchTimeout
from .graphs import Graph, connected_components, induced_subgraph, is_connected, odd_girth, to_graph6
from .hom import (
    core_equivalent_to_shift_graph,
    deadline_in,
    hull_hom_test,
    induced_subgraph_search,
    is_core,
    is_hom_idempotent,
)
from .invariants import clique_number, has_clique, independence_number
from .spectral import cube_spectrum, integer_spectrum, is_submultiset_of_cube

FILTER_ORDER = (
    "power-of-two-order",
    "integral-spectrum",
    "clique-coclique-complete",
    "generous-transitivity",
    "cubelike-recognition",
    "orbital-clique-3",
    "orbital-spectrum",
    "core-test",
    "hom-idempotence",
    "hull-hom",
)

PASS = "pass"
REJECT = "reject"
INDETERMINATE = "indeterminate"

CLASS_CUBELIKE = "cubelike"
CLASS_SURVIVOR = "survivor"
CLASS_SURVIVOR_FLAGGED = "survivor-flagged"


def _rejected(filter_id: str) -> str:
    return f"rejected-at:{filter_id}"


@dataclass(frozen=True)
class FilterVerdict:
    filter: str
    outcome: str
    witness: dict | None = None
    ms: float = 0.0

    def to_json(self) -> dict:
        out = {"filter": self.filter, "outcome": self.outcome, "ms": round(self.ms, 2)}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


@dataclass(frozen=True)
class Report:
    graph6: str
    classification: str
    verdicts: tuple[FilterVerdict, ...]
    flagged: bool
    error: str | None = None

    def to_json(self) -> dict:
        out = {
            "graph6": self.graph6,
            "classification": self.classification,
            "flagged": self.flagged,
            "verdicts": [v.to_json() for v in self.verdicts],
        }
        if self.error is not None:
            out["error"] = self.error
        return out


@dataclass(frozen=True)
class PipelineConfig:
    """Tunables for one cascade run (deterministic for fixed values)."""

    search_timeout_ms: Optional[float] = 120_000.0
    orbital_union_limit: int = 3
    shift_graph_cap: int = 10_000
    vertex_cap: int = 4096

    def deadline(self) -> float | None:
        return deadline_in(self.search_timeout_ms)


def run_filters(X: Graph, config: PipelineConfig = PipelineConfig()) -> Report:
    """Apply the cascade to one graph and report every verdict in order."""
    g6 = to_graph6(X)
    verdicts: list[FilterVerdict] = []
    state = _CascadeState(X, config)

    if not is_connected(X):
        verdicts.append(
            FilterVerdict("precondition", REJECT, {"reason": "not connected"})
        )
        return Report(g6, _rejected("precondition"), tuple(verdicts), False)
    from .autos import is_vertex_transitive

    if not is_vertex_transitive(X):
        verdicts.append(
            FilterVerdict("precondition", REJECT, {"reason": "not vertex-transitive"})
        )
        return Report(g6, _rejected("precondition"), tuple(verdicts), False)

    for name, fn in _FILTERS:
        start = time.monotonic()
        try:
            outcome, witness, classify = fn(state)
        except (SearchTimeout, CapacityError) as exc:
            outcome, witness, classify = INDETERMINATE, {"reason": str(exc)}, None
        ms = (time.monotonic() - start) * 1000
        verdicts.append(FilterVerdict(name, outcome, witness, ms))
        if outcome == REJECT:
            return Report(g6, _rejected(name), tuple(verdicts), state.flagged)
        if outcome == INDETERMINATE:
            state.flagged = True
        if classify is not None:
            return Report(g6, classify, tuple(verdicts), state.flagged)
    classification = CLASS_SURVIVOR_FLAGGED if state.flagged else CLASS_SURVIVOR
    return Report(g6, classification, tuple(verdicts), state.flagged)


class _CascadeState:
    def __init__(self, X: Graph, config: PipelineConfig):
        self.X = X
        self.config = config
        self.flagged = False
        self.omega: int | None = None
        self.alpha: int | None = None
        self.orbitals = None

    def need_orbitals(self):
        if self.orbitals is None:
            self.orbitals = orbitals(self.X)
        return self.orbitals


def _f_power_of_two(state: _CascadeState):
    n = state.X.n
    if n < 1 or n & (n - 1):
        return REJECT, {"order": n}, None
    return PASS, None, None


def _f_integral_spectrum(state: _CascadeState):
    X = state.X
    spectrum = integer_spectrum(X)
    if not spectrum.integral:
        return REJECT, {"residual_degree": len(spectrum.residual) - 1}, None
    d = X.degree(0)
    if not is_submultiset_of_cube(spectrum, d):
        bad = next(
            ev
            for ev, m in spectrum.entries
            if cube_spectrum(d).multiplicity(ev) < m
        )
        return REJECT, {"eigenvalue": bad}, None
    return PASS, None, None


def _f_clique_coclique(state: _CascadeState):
    # clique-coclique equality forces a complete core, so a non-complete
    # graph with equality cannot be the core of a cubelike graph; it may
    # still BE cubelike (e.g. an even cube), so recognition decides between
    # the cubelike classification and rejection
    X = state.X
    deadline = state.config.deadline()
    state.omega = clique_number(X, deadline=deadline)
    state.alpha = independence_number(X, deadline=deadline)
    if state.omega * state.alpha != X.n:
        return PASS, {"omega": state.omega, "alpha": state.alpha}, None
    if state.omega == X.n:
        return PASS, {"omega": state.omega, "complete": True}, CLASS_CUBELIKE
    witness = is_cubelike(X, deadline=deadline)
    if witness is not None:
        return (
            PASS,
            {"omega": state.omega, "alpha": state.alpha, "cubelike_non_core": True},
            CLASS_CUBELIKE,
        )
    return REJECT, {"omega": state.omega, "alpha": state.alpha}, None


def _f_generous(state: _CascadeState):
    if not is_generously_transitive(state.X):
        return REJECT, {"reason": "an orbital is not self-paired"}, None
    return PASS, None, None


def _f_cubelike_recognition(state: _CascadeState):
    witness = is_cubelike(state.X, deadline=state.config.deadline())
    if witness is not None:
        conn = [f"{c:0{witness.connection.n}b}"[::-1] for c in witness.connection.elements]
        return PASS, {"connection_set": conn}, CLASS_CUBELIKE
    return PASS, None, None


def _orbital_unions(state: _CascadeState):
    from itertools import combinations

    part = state.need_orbitals()
    ids = [i for i in range(part.n_orbitals) if part.self_paired(i)]
    limit = state.config.orbital_union_limit
    for r in range(1, min(limit, len(ids)) + 1):
        for combo in combinations(ids, r):
            yield combo


def _f_orbital_clique3(state: _CascadeState):
    X = state.X
    deadline = state.config.deadline()
    for combo in _orbital_unions(state):
        g = orbital_graph(X, state.need_orbitals(), combo)
        triangle = has_clique(g, 3, deadline=deadline)
        if triangle is None:
            continue
        if has_clique(g, 4, deadline=deadline) is None:
            return REJECT, {"orbitals": list(combo), "triangle": triangle}, None
    return PASS, None, None


def _f_orbital_spectrum(state: _CascadeState):
    X = state.X
    part = state.need_orbitals()
    for i in range(part.n_orbitals):
        if not part.self_paired(i):
            continue
        g = orbital_graph(X, part, (i,))
        for comp in connected_components(g):
            h = induced_subgraph(g, comp)
            if not h.is_regular():
                return REJECT, {"orbital": i, "reason": "irregular component"}, None
            d = h.degree(0)
            s = integer_spectrum(h)
            if not is_submultiset_of_cube(s, d):
                return REJECT, {"orbital": i, "degree": d}, None
    return PASS, None, None


def _f_core_test(state: _CascadeState):
    if not is_core(state.X, deadline=state.config.deadline()):
        return REJECT, {"reason": "proper endomorphism exists"}, None
    return PASS, None, None


def _f_hom_idempotence(state: _CascadeState):
    X = state.X
    deadline = state.config.deadline()
    # X itself is a core by now: the shift-graph embedding criterion applies
    ok = core_equivalent_to_shift_graph(X, deadline=deadline)
    if not ok:
        return REJECT, {"graph": "self"}, None
    part = state.need_orbitals()
    indeterminate = None
    for i in range(part.n_orbitals):
        if not part.self_paired(i):
            continue
        g = orbital_graph(X, part, (i,))
        if g.adj == X.adj:
            continue  # the graph itself, already checked
        try:
            ok, _ = is_hom_idempotent(g, deadline=deadline)
        except (SearchTimeout, CapacityError) as exc:
            indeterminate = {"orbital": i, "reason": str(exc)}
            continue
        if not ok:
            return REJECT, {"orbital": i}, None
    if indeterminate is not None:
        return INDETERMINATE, indeterminate, None
    return PASS, None, None


def _f_hull_hom(state: _CascadeState):
    X = state.X
    deadline = state.config.deadline()
    d = X.degree(0)
    # degree bound: more than 2^(d-1) vertices is impossible; equality only
    # for odd-degree folded cubes (cubelike, so unreachable here); even
    # degree tightens the bound to 2^(d-2)
    if X.n > 1 << max(d - 1, 0) and not (d == 1 and X.n == 2):
        return REJECT, {"bound": f"2^{d-1}", "order": X.n}, None
    if X.n == 1 << max(d - 1, 0):
        from .autos import are_isomorphic

        if d % 2 == 1 and are_isomorphic(X, folded_cube(d)):
            return PASS, {"folded_cube": d}, CLASS_CUBELIKE
        return REJECT, {"reason": "degree bound met but not an odd folded cube"}, None
    if d % 2 == 0 and X.n > 1 << max(d - 2, 0):
        return REJECT, {"bound": f"2^{d-2}", "order": X.n}, None
    og = odd_girth(X)
    if og != inf:
        g = int(og)
        if (1 << (g - 1)) > X.n:
            return REJECT, {"odd_girth": g, "reason": "folded cube too large"}, None
        pattern = folded_cube(g)
        if induced_subgraph_search(pattern, X, deadline=deadline) is None:
            return REJECT, {"odd_girth": g, "reason": "no induced folded cube"}, None
    omega = state.omega
    if omega is None:
        omega = clique_number(X, deadline=deadline)
    if omega >= 2:
        hull_source = halved_cube(omega)
        if hull_source.n > state.config.vertex_cap:
            return INDETERMINATE, {"reason": "clique hull too large"}, None
        from .hom import MODE_ANY, HomProblem, find_homomorphism

        prob = HomProblem(hull_source, X, MODE_ANY, deadline=deadline)
        if find_homomorphism(prob) is None:
            return REJECT, {"reason": f"no homomorphism from the K_{omega} hull"}, None
    return PASS, None, None


_FILTERS: tuple[tuple[str, Callable], ...] = (
    ("power-of-two-order", _f_power_of_two),
    ("integral-spectrum", _f_integral_spectrum),
    ("clique-coclique-complete", _f_clique_coclique),
    ("generous-transitivity", _f_generous),
    ("cubelike-recognition", _f_cubelike_recognition),
    ("orbital-clique-3", _f_orbital_clique3),
    ("orbital-spectrum", _f_orbital_spectrum),
    ("core-test", _f_core_test),
    ("hom-idempotence", _f_hom_idempotence),
    ("hull-hom", _f_hull_hom),
)


# -- corpus runs -----------------------------------------------------------------


def _process_line(args: tuple[int, str, PipelineConfig]) -> tuple[int, dict]:
    line_no, line, config = args
    from .graphs import parse_graph_line

    try:
        X = parse_graph_line(line, cap=config.vertex_cap)
    except (Graph6ParseError, CapacityError, ValueError) as exc:
        return line_no, {
            "graph6": line.strip(),
            "classification": "error",
            "flagged": False,
            "verdicts": [],
            "error": str(exc),
        }
    return line_no, run_filters(X, config).to_json()


def _corpus_hash(lines: list[str]) -> str:
    h = hashlib.sha256()
    for line in lines:
        h.update(line.strip().encode())
        h.update(b"\n")
    return h.hexdigest()


def _read_checkpoint(path: str | None, corpus_hash: str) -> set[int]:
    if path is None or not os.path.exists(path):
        return set()
    done = set()
    with open(path) as fh:
        header = fh.readline().strip()
        if header != f"# sha256:{corpus_hash}":
            return set()
        for row in fh:
            row = row.strip()
            if row:
                done.add(int(row))
    return done


def run_corpus(
    lines: Iterable[str],
    config: PipelineConfig = PipelineConfig(),
    jobs: int = 1,
    report_path: str | None = None,
    checkpoint_path: str | None = None,
    progress: Callable[[dict], None] | None = None,
) -> list[dict]:
    """Filter every graph6 line; reports come back in input order.

    Lines already recorded in a matching checkpoint are skipped (their
    reports are absent from the return value on a resumed run).  Parse
    errors yield per-line error reports and processing continues.
    """
    all_lines = [ln for ln in lines if ln.strip()]
    corpus_hash = _corpus_hash(all_lines)
    done = _read_checkpoint(checkpoint_path, corpus_hash)
    pending = [
        (i, ln, config) for i, ln in enumerate(all_lines) if i not in done
    ]
    report_fh = open(report_path, "a") if report_path else None
    checkpoint_fh = None
    if checkpoint_path:
        fresh = not done
        checkpoint_fh = open(checkpoint_path, "w" if fresh else "a")
        if fresh:
            checkpoint_fh.write(f"# sha256:{corpus_hash}\n")
            checkpoint_fh.flush()

    results: dict[int, dict] = {}

    def emit(line_no: int, report: dict) -> None:
        results[line_no] = report
        if report_fh:
            report_fh.write(json.dumps(report) + "\n")
            report_fh.flush()
        if checkpoint_fh:
            checkpoint_fh.write(f"{line_no}\n")
            checkpoint_fh.flush()
        if progress:
            progress(report)

    try:
        if jobs <= 1:
            for item in pending:
                line_no, report = _process_line(item)
                emit(line_no, report)
        else:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                buffered: dict[int, dict] = {}
                next_out = 0
                order = [item[0] for item in pending]
                futures = {pool.submit(_process_line, item): item for item in pending}
                remaining = set(futures)
                while remaining:
                    finished, remaining = wait(remaining, return_when=FIRST_COMPLETED)
                    for fut in finished:
                        line_no, report = fut.result()
                        buffered[line_no] = report
                    while next_out < len(order) and order[next_out] in buffered:
                        k = order[next_out]
                        emit(k, buffered.pop(k))
                        next_out += 1
                for k in sorted(buffered):
                    emit(k, buffered.pop(k))
    finally:
        if report_fh:
            report_fh.close()
        if checkpoint_fh:
            checkpoint_fh.close()
    return [results[k] for k in sorted(results)]


def funnel_counts(reports: Iterable[dict]) -> dict:
    """Per-filter funnel: graphs reaching, rejected, flagged at each stage."""
    reached = {name: 0 for name in ("precondition",) + FILTER_ORDER}
    rejected = dict(reached)
    indeterminate = dict(reached)
    classified = {"cubelike": 0, "survivor": 0, "survivor-flagged": 0, "error": 0}
    total = 0
    for rep in reports:
        total += 1
        cls = rep["classification"]
        if cls in classified:
            classified[cls] += 1
        elif cls.startswith("rejected-at:"):
            pass
        for v in rep.get("verdicts", ()):
            name = v["filter"]
            reached[name] += 1
            if v["outcome"] == REJECT:
                rejected[name] += 1
            elif v["outcome"] == INDETERMINATE:
                indeterminate[name] += 1
    return {
        "total": total,
        "classified": classified,
        "stages": [
            {
                "filter": name,
                "reached": reached[name],
                "rejected": rejected[name],
                "indeterminate": indeterminate[name],
            }
            for name in ("precondition",) + FILTER_ORDER
        ],
    }


def render_funnel(counts: dict) -> str:
    lines = [f"graphs: {counts['total']}"]
    lines.append(
        "classified: "
        + ", ".join(f"{k}={v}" for k, v in counts["classified"].items() if v)
    )
    lines.append(f"{'filter':28} {'reached':>8} {'rejected':>9} {'indet':>6}")
    for st in counts["stages"]:
        if st["reached"] == 0:
            continue
        lines.append(
            f"{st['filter']:28} {st['reached']:>8} {st['rejected']:>9} {st['indeterminate']:>6}"
        )
    return "\n".join(lines)
