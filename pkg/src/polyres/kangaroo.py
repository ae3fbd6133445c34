"""Invariant jumps on resolution traces and the bounds that tame them.

A kangaroo event is an edge of the blowup tree where the raw height or the
raw dorder of the realized strict transform increases.  Such jumps can only
happen after a translational move and only under tight arithmetic conditions
on the order and the exceptional multiplicities at the parent (the antelope
point); the adjusted invariants still decrease across the jump.  This module
detects the events, checks the necessary conditions, verifies the halving of
the dorder since the last exceptional-free ancestor, and sweeps the shifted
initial-form bound that underlies all of it.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .algebra import FieldTower
from .driver import ORDER_DROPPED, ResolutionTrace
from .series import from_terms, reduce_mod_p, shift_y


@dataclass
class KangarooEvent:
    """One measured jump: antelope (parent) to kangaroo (child)."""

    p: int
    parent: str                 # antelope node id
    child: str                  # kangaroo node id
    move: str                   # arrival move tag of the child
    height_before: int
    height_after: int
    dorder_before: int
    dorder_after: int
    r: tuple[int, int]          # exceptional multiplicities at the antelope
    d: int                      # order at the antelope
    parity: int                 # 1 iff d ≡ 0 mod p
    b0: str | None              # last ancestor carrying no exceptional part

    def to_json(self) -> dict:
        return {"parent": self.parent, "child": self.child, "move": self.move,
                "height": [self.height_before, self.height_after],
                "dorder": [self.dorder_before, self.dorder_after],
                "r": list(self.r), "d": self.d, "parity": self.parity,
                "b0": self.b0}


def detect_events(trace: ResolutionTrace) -> list[KangarooEvent]:
    """All edges whose child measures jump above the parent's."""
    out: list[KangarooEvent] = []
    for edge in trace.edges:
        pn = trace.node(edge["parent"])
        cn = trace.node(edge["child"])
        if cn.status == ORDER_DROPPED:
            continue
        if cn.m.height <= pn.m.height and cn.m.dorder <= pn.m.dorder:
            continue
        b0 = None
        for anc in trace.ancestors(pn.node_id):
            if anc.r == (0, 0):
                b0 = anc.node_id
                break
        out.append(KangarooEvent(
            p=trace.p, parent=pn.node_id, child=cn.node_id, move=edge["move"],
            height_before=pn.m.height, height_after=cn.m.height,
            dorder_before=pn.m.dorder, dorder_after=cn.m.dorder,
            r=pn.r, d=pn.m.ord, parity=pn.m.parity, b0=b0))
    return out


def check_conditions(e: KangarooEvent, trace: ResolutionTrace | None = None
                     ) -> dict:
    """Necessary conditions for a jump: order divisible by p, both
    exceptional multiplicities nonzero mod p with small residue sum, and a
    translational move preceded by both chart moves since b°."""
    p = e.p
    r1, r2 = e.r
    report = {
        "cond1": {"ok": e.d % p == 0, "d": e.d},
        "cond2": {"ok": (r1 % p != 0 and r2 % p != 0
                         and (r1 % p) + (r2 % p) <= p),
                  "r": [r1, r2], "residues": [r1 % p, r2 % p]},
        "cond4": {"status": "not checked"},
    }
    is_t = e.move.startswith("T(")
    if e.b0 is None or trace is None:
        report["cond3"] = {"ok": is_t, "status": "not-applicable",
                           "translational": is_t}
    else:
        moves = []
        cur = trace.node(e.parent)
        while cur.node_id != e.b0:
            moves.append(cur.move)
            cur = trace.node(cur.parent)
        has_h = "H" in moves
        has_v = "V" in moves
        report["cond3"] = {"ok": is_t and has_h and has_v,
                           "status": "checked", "translational": is_t,
                           "h_moves": moves.count("H"),
                           "v_moves": moves.count("V")}
    return report


def check_halving(e: KangarooEvent, trace: ResolutionTrace) -> dict:
    """The dorder must drop at least to half between b° and the antelope."""
    if e.b0 is None:
        return {"status": "not-applicable"}
    d_b0 = trace.node(e.b0).m.dorder
    return {"status": "checked", "ok": 2 * e.dorder_before <= d_b0,
            "antelope_dorder": e.dorder_before, "b0_dorder": d_b0}


def moh_bound_sweep(p: int, degree: int, samples: int, seed: int = 0) -> dict:
    """Random homogeneous forms F_d over F_{p²}, shifted by every t ≠ 0:
    the y-order of the reduced shift stays within height(F_d) + par(d)."""
    rng = random.Random(f"moh:{seed}:{p}:{degree}")
    tower = FieldTower(p)
    tower.extend_to_absolute(2)
    pool = list(tower.elements())
    nonzero = [t for t in pool if not t.is_zero()]
    checked = 0
    max_slack = 0
    vanished = 0
    violations: list[dict] = []
    done = 0
    while done < samples:
        d = rng.randrange(1, degree + 1)
        terms = [(a, d - a, pool[rng.randrange(len(pool))])
                 for a in range(d + 1)]
        F = reduce_mod_p(from_terms(tower, terms, trunc=2 * d + 2))
        if F.is_zero():
            continue
        done += 1
        alphas = [a for a, _ in F.coeffs]
        bound = max(alphas) - min(alphas) + (1 if d % p == 0 else 0)
        for t in nonzero:
            G = reduce_mod_p(shift_y(F, {1: t}))
            checked += 1
            if G.is_zero():
                vanished += 1
                continue
            ord_y = min(a for a, _ in G.coeffs)
            if ord_y > bound:
                violations.append({"F": str(F), "t": str(t), "d": d,
                                   "ord_y": ord_y, "bound": bound})
            else:
                max_slack = max(max_slack, bound - ord_y)
    return {"p": p, "degree": degree, "samples": samples, "checked": checked,
            "vanished": vanished, "max_slack": max_slack,
            "violations": violations, "ok": not violations}
