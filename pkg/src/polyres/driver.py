"""Resolution loop: prepare, measure, classify, fan out, certify decrease.

Every node of the blowup tree carries the strict transform of the surface
coefficient at one point.  The node is prepared (ord_y maximized), measured,
and classified: order below p closes the branch, monomial and quasi-monomial
shapes are routed to their combinatorial endgames, and the remaining open
nodes fan out over the finitely many exceptional points that can keep the
order at p.  Both invariant vectors are computed at every node and checked
for strict lexicographic decrease on every open-to-open edge; a failed check
is recorded, stops the subtree, and poisons the trace verdict.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field

from . import __version__
from .algebra import FieldTower
from .blowup import apply_move, enumerate_children, series_ord, surface_reduce
from .invariants import (
    Measures,
    InvariantVector,
    compare,
    dorder_vector,
    height_vector,
    is_quasi_monomial,
    measures,
)
from .monomial import resolve_monomial, resolve_quasi_monomial
from .prepare import (
    is_monomial,
    maximize_ord_y,
    maximize_slope,
    realize_second_invariant,
    shift_text,
)
from .series import ResidueSeries, from_terms, newton_polygon, reduce_mod_p

OPEN = "open"
ORDER_DROPPED = "order-dropped"
MONOMIAL = "monomial-resolved"
QUASI_MONOMIAL = "quasi-monomial-resolved"
INCOMPLETE = "truncation-incomplete"


class DriverError(Exception):
    """Raised for seeds outside the resolution loop's domain."""


@dataclass
class ResolveConfig:
    """Search bounds for preparation and the tree expansion."""

    K: int | None = None          # shift degree bound (None: truncation order)
    restrict: int | None = None   # root field restriction F_{p^r} (None: closure)
    depth: int = 64               # maximum blowup depth
    budget: int = 4000            # preparation search budget
    trunc: int | None = None      # working truncation (None: generous auto)

    def to_json(self) -> dict:
        return {"K": self.K, "restrict": self.restrict,
                "depth": self.depth, "budget": self.budget,
                "trunc": self.trunc}


@dataclass
class TraceNode:
    """One point of the blowup tree with its measured strict transform."""

    node_id: str
    parent: str | None
    move: str | None              # arrival move tag ("H", "T(g+1)", "V")
    depth: int
    series: ResidueSeries         # reduced strict transform on arrival
    status: str
    realized: ResidueSeries       # series in invariant-realizing coordinates
    m: Measures
    vec_height: InvariantVector
    vec_dorder: InvariantVector
    r: tuple[int, int]            # exceptional multiplicities (y, z)
    shift: str                    # realizing shift, as text
    total: str | None             # reduced total transform (display only)
    endgame: dict | None = None   # monomial tree / quasi-monomial certificate
    note: str | None = None

    def to_json(self) -> dict:
        out = {"id": self.node_id, "parent": self.parent, "move": self.move,
               "depth": self.depth, "status": self.status,
               "series": str(self.series), "realized": str(self.realized),
               "shift": self.shift, "total": self.total,
               "measures": _measures_json(self.m),
               "invariants": {"height": self.vec_height.to_json(),
                              "dorder": self.vec_dorder.to_json()},
               "r": list(self.r)}
        if self.endgame is not None:
            out["endgame"] = self.endgame
        if self.note is not None:
            out["note"] = self.note
        return out


def _measures_json(m: Measures) -> dict:
    return {"ord": m.ord, "ord_y": m.ord_y, "deg_y": m.deg_y,
            "ord_z": m.ord_z, "deg_z": m.deg_z, "height": m.height,
            "width": m.width, "slope": "inf" if m.slope == float("inf")
            else str(m.slope), "adjacency": m.adjacency, "parity": m.parity,
            "dorder": m.dorder,
            "dent": None if m.dent is None else list(m.dent)}


@dataclass
class ResolutionTrace:
    """Complete blowup tree of one seed with all decrease checks."""

    p: int
    seed_text: str
    config: ResolveConfig
    nodes: dict[str, TraceNode] = field(default_factory=dict)
    edges: list[dict] = field(default_factory=list)
    failures: list[dict] = field(default_factory=list)
    ok: bool = True

    def node(self, node_id: str) -> TraceNode:
        return self.nodes[node_id]

    def ancestors(self, node_id: str) -> list[TraceNode]:
        """Proper ancestors, nearest first."""
        out = []
        cur = self.nodes[node_id].parent
        while cur is not None:
            out.append(self.nodes[cur])
            cur = self.nodes[cur].parent
        return out

    def status_counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for n in self.nodes.values():
            out[n.status] = out.get(n.status, 0) + 1
        return out

    def max_depth(self) -> int:
        return max(n.depth for n in self.nodes.values())

    def summary(self) -> dict:
        return {"nodes": len(self.nodes), "statuses": self.status_counts(),
                "max_depth": self.max_depth(),
                "decrease_failures": len(self.failures), "ok": self.ok}

    def to_json(self) -> dict:
        return {"schema": 1, "version": __version__,
                "seed": {"p": self.p, "F": self.seed_text},
                "config": self.config.to_json(),
                "nodes": [n.to_json() for n in self.nodes.values()],
                "edges": self.edges, "failures": self.failures,
                "summary": self.summary()}

    def to_text(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"


def _compose(a: dict, b: dict, tower) -> dict:
    out = dict(a)
    for k, c in b.items():
        if k in out:
            gen = max(out[k].gen, c.gen)
            s = tower.embed(out[k], gen) + tower.embed(c, gen)
            if s.is_zero():
                del out[k]
            else:
                out[k] = s
        else:
            out[k] = c
    return out


def _precision_ok(series: ResidueSeries) -> bool:
    """Dropped tails are harmless when the truncation order sits comfortably
    above the polygon: measures, moves and endgames only consume data within
    a bounded multiple of the vertex degrees, and every operation maps the
    dropped range into itself."""
    dv = max(a + b for a, b in newton_polygon(series).vertices)
    return series.trunc >= 4 * (dv + series.tower.p)


def _classify(trace: ResolutionTrace, node_id: str, parent: str | None,
              move: str | None, series: ResidueSeries, total: str | None,
              depth: int, cfg: ResolveConfig) -> TraceNode:
    """Build one trace node: prepare, measure, classify, attach endgames."""
    p = series.tower.p
    status = OPEN
    realized = series
    endgame: dict | None = None
    shift = "0"
    note: str | None = None
    clipped = series.truncated
    incomplete = clipped and not _precision_ok(series)

    if series_ord(series) < p:
        status = ORDER_DROPPED
    else:
        mono = is_monomial(series, K=cfg.K, restrict=cfg.restrict,
                           budget=cfg.budget)
        if mono.is_monomial:
            status = MONOMIAL
            realized = mono.final
            a, b = mono.state
            clipped = clipped or realized.truncated
            incomplete = incomplete or (realized.truncated
                                        and not _precision_ok(realized))
            endgame = {"kind": "monomial", "state": [a, b],
                       "witness": [{"axis": ax, "shift": shift_text(sh)}
                                   for ax, sh in mono.witness],
                       "tree": resolve_monomial(p, a, b)}
        else:
            prep = maximize_ord_y(series, K=cfg.K, restrict=cfg.restrict,
                                  budget=cfg.budget)
            clipped = clipped or prep.truncation_limited
            incomplete = (incomplete or not prep.complete
                          or (prep.truncation_limited
                              and not _precision_ok(prep.prepared)))
            if is_quasi_monomial(measures(prep.prepared)):
                status = QUASI_MONOMIAL
                realized = prep.prepared
                shift = shift_text(prep.shift)
                endgame = {"kind": "quasi-monomial", "shift": shift,
                           "certificate": resolve_quasi_monomial(realized)}
            else:
                slope_prep = maximize_slope(prep.prepared, K=cfg.K,
                                            restrict=cfg.restrict)
                clipped = clipped or slope_prep.truncation_limited
                incomplete = (incomplete or not slope_prep.complete
                              or (slope_prep.truncation_limited
                                  and not _precision_ok(slope_prep.prepared)))
                realized = slope_prep.prepared
                shift = shift_text(_compose(prep.shift, slope_prep.shift,
                                            series.tower))
        if incomplete:
            status = INCOMPLETE
            trace.ok = False
        elif clipped:
            note = "tail beyond the truncation order ignored (vertex data exact)"

    m = measures(realized)
    if status == OPEN:
        dent_prep = realize_second_invariant(series, K=cfg.K,
                                             restrict=cfg.restrict,
                                             budget=cfg.budget)
        md = measures(dent_prep.prepared)
    else:
        md = m
    node = TraceNode(node_id=node_id, parent=parent, move=move, depth=depth,
                     series=series, status=status, realized=realized, m=m,
                     vec_height=height_vector(m), vec_dorder=dorder_vector(md),
                     r=(m.ord_y, m.ord_z), shift=shift, total=total,
                     endgame=endgame, note=note)
    trace.nodes[node_id] = node
    return node


def assert_decrease(parent: TraceNode, child: TraceNode, variant: str) -> dict:
    """Strict lexicographic decrease check for one invariant variant."""
    pv = parent.vec_height if variant == "height" else parent.vec_dorder
    cv = child.vec_height if variant == "height" else child.vec_dorder
    return {"variant": variant, "parent": str(pv), "child": str(cv),
            "ok": compare(cv, pv) < 0}


def _grow(trace: ResolutionTrace, node: TraceNode, cfg: ResolveConfig) -> None:
    """Expand an open node: enumerate children, check decrease, recurse."""
    if node.depth >= cfg.depth:
        node.status = INCOMPLETE
        node.note = "depth cap reached"
        trace.ok = False
        return
    for res in enumerate_children(node.realized):
        child_id = f"{node.node_id}/{res.tag()}"
        child = _classify(trace, child_id, node.node_id, res.tag(),
                          res.child, str(res.total), node.depth + 1, cfg)
        edge = {"parent": node.node_id, "child": child_id,
                "move": res.tag(), "checks": []}
        trace.edges.append(edge)
        if child.status != OPEN:
            continue
        ok = True
        for variant in ("height", "dorder"):
            rec = assert_decrease(node, child, variant)
            edge["checks"].append(rec)
            ok = ok and rec["ok"]
        if ok:
            _grow(trace, child, cfg)
        else:
            trace.ok = False
            child.note = "decrease failure"
            trace.failures.append(
                {"parent": node.node_id, "child": child_id, "move": res.tag(),
                 "p": trace.p, "parent_series": str(node.realized),
                 "checks": edge["checks"]})


def resolve(F: ResidueSeries, cfg: ResolveConfig | None = None) -> ResolutionTrace:
    """Blow up the surface x^p = F(y, z) at the origin until every branch
    reaches an endgame, recording the full certified trace."""
    cfg = cfg or ResolveConfig()
    status, G = surface_reduce(F)
    if status == "not-reduced":
        raise DriverError("seed is a perfect p-th power: surface not reduced")
    # Moves roughly double total degrees before division, so the seed's own
    # truncation is rarely enough; lift it (seeds are polynomials, and all
    # arithmetic is exact while no term crosses the truncation order).
    work = cfg.trunc or max(512, 32 * (G.total_degree() + 1))
    if work > G.trunc and not G.truncated:
        G = ResidueSeries(G.tower, G.gen, G.coeffs, work, G.truncated)
    trace = ResolutionTrace(p=F.tower.p, seed_text=str(G), config=cfg)
    root = _classify(trace, "n", None, None, G, None, 0, cfg)
    if G.truncated:
        # A seed carrying the flag is only known up to its truncation order;
        # unlike internal drops, the unknown tail could hide polygon vertices.
        root.status = INCOMPLETE
        root.note = "seed series truncated: measures reflect the known part only"
        trace.ok = False
    if root.status == OPEN:
        _grow(trace, root, cfg)
    return trace


def measure_seed(F: ResidueSeries, cfg: ResolveConfig | None = None) -> TraceNode:
    """Prepare and measure one series without growing the blowup tree."""
    cfg = cfg or ResolveConfig()
    status, G = surface_reduce(F)
    if status == "not-reduced":
        raise DriverError("seed is a perfect p-th power: surface not reduced")
    work = cfg.trunc or max(512, 32 * (G.total_degree() + 1))
    if work > G.trunc and not G.truncated:
        G = ResidueSeries(G.tower, G.gen, G.coeffs, work, G.truncated)
    trace = ResolutionTrace(p=F.tower.p, seed_text=str(G), config=cfg)
    return _classify(trace, "n", None, None, G, None, 0, cfg)


def _random_seed_series(rng: random.Random, tower: FieldTower,
                        degree: int) -> ResidueSeries:
    nterms = rng.randrange(3, 7)
    terms = []
    for _ in range(nterms):
        a = rng.randrange(degree + 1)
        b = rng.randrange(degree + 1 - a)
        terms.append((a, b, rng.randrange(tower.p)))
    return reduce_mod_p(from_terms(tower, terms, trunc=max(8 * degree, 40)))


def corpus_run(ps: list[int], degree: int, count: int, seed: int,
               cfg: ResolveConfig | None = None) -> dict:
    """Resolve a deterministic pseudo-random corpus and aggregate verdicts.

    Seeds that reduce to zero, drop order at the root, or are quasi-monomial
    at the root are skipped (they never enter the open loop)."""
    from .kangaroo import check_conditions, check_halving, detect_events

    cfg = cfg or ResolveConfig()
    runs: list[dict] = []
    totals = {"events": 0, "event_condition_failures": 0,
              "halving_failures": 0, "decrease_failures": 0,
              "incomplete_nodes": 0, "max_depth": 0}
    all_ok = True
    for p in ps:
        rng = random.Random(f"{seed}:{p}")
        accepted = 0
        attempts = 0
        while accepted < count:
            attempts += 1
            if attempts > 200 * count + 1000:
                raise DriverError("seed generator stalled")
            tower = FieldTower(p)
            F = _random_seed_series(rng, tower, degree)
            if F.is_zero() or series_ord(F) < p:
                continue
            trace = resolve(F, cfg)
            if trace.nodes["n"].status == QUASI_MONOMIAL:
                continue
            accepted += 1
            events = detect_events(trace)
            bad_conditions = 0
            bad_halving = 0
            for e in events:
                rep = check_conditions(e)
                if not all(c.get("ok", True) for c in rep.values()):
                    bad_conditions += 1
                hal = check_halving(e, trace)
                if hal["status"] == "checked" and not hal["ok"]:
                    bad_halving += 1
            inc = trace.status_counts().get(INCOMPLETE, 0)
            runs.append({"p": p, "index": accepted - 1, "F": trace.seed_text,
                         "summary": trace.summary(), "events": len(events)})
            totals["events"] += len(events)
            totals["event_condition_failures"] += bad_conditions
            totals["halving_failures"] += bad_halving
            totals["decrease_failures"] += len(trace.failures)
            totals["incomplete_nodes"] += inc
            totals["max_depth"] = max(totals["max_depth"], trace.max_depth())
            all_ok = all_ok and trace.ok and not bad_conditions and not bad_halving
    return {"schema": 1, "version": __version__,
            "config": {"ps": ps, "degree": degree, "count": count,
                       "seed": seed, **cfg.to_json()},
            "runs": runs, "totals": totals, "ok": all_ok}
