"""Decorated combinatorial types of relatively stable maps.

A map type is a nodal curve whose components carry the multi-level of their
image piece, a trivial/nontrivial flag, and contact records at special
points.  A contact record stores, per normal direction: the multiplicity,
the divisor-side sign, the level, and the leading coefficient (flagged
formal on directions where a trivial component is frozen at zero or
infinity).  Validators implement the structural, naive, broken-cylinder and
enhanced matching conditions, plus relative stability.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

from .exactnum import (
    ExactNonzeroComplex,
    coeff_from_json,
    coeff_to_json,
    solve_power_system,
)


@dataclass(frozen=True)
class ContactSlot:
    s: Optional[int]
    eps: int
    level: int = 0
    coeff: Optional[ExactNonzeroComplex] = None
    formal: bool = False

    def __post_init__(self):
        if self.eps not in (-1, 0, 1):
            raise ValueError("sign must be -1, 0 or +1")
        if self.s is not None and self.s < 0:
            raise ValueError("multiplicity must be positive or undefined")


@dataclass(frozen=True)
class ContactRecord:
    stratum: Optional[str] = None
    slots: tuple[tuple[str, ContactSlot], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "slots", tuple(sorted(self.slots)))

    @property
    def directions(self) -> tuple[str, ...]:
        return tuple(d for d, _ in self.slots)

    def slot(self, direction: str) -> Optional[ContactSlot]:
        for d, sl in self.slots:
            if d == direction:
                return sl
        return None

    @property
    def depth(self) -> int:
        return len(self.slots)

    def degree(self) -> int:
        total = 0
        for d, sl in self.slots:
            if sl.s is None:
                raise ValueError(f"undefined multiplicity in direction {d}")
            total += sl.s
        return total


@dataclass(frozen=True)
class Component:
    id: str
    genus: int = 0
    trivial: bool = False
    levels: tuple[tuple[str, int], ...] = ()
    points: tuple[tuple[str, ContactRecord], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(sorted(self.levels)))
        object.__setattr__(self, "points", tuple(self.points))

    def level(self, direction: str) -> int:
        return dict(self.levels).get(direction, 0)

    def point_ids(self) -> tuple[str, ...]:
        return tuple(pid for pid, _ in self.points)

    def record(self, pid: str) -> ContactRecord:
        for p, r in self.points:
            if p == pid:
                return r
        raise KeyError(pid)


@dataclass(frozen=True)
class Node:
    id: str
    ends: tuple[str, str]


@dataclass(frozen=True)
class MapType:
    building_mode: str = "uniform"  # "uniform" | "multi"
    m: int = 0
    levels_by_component: tuple[tuple[str, int], ...] = ()
    direction_components: tuple[tuple[str, str], ...] = ()
    components: tuple[Component, ...] = ()
    nodes: tuple[Node, ...] = ()
    c1a: int = 0
    av: int = 0
    chi: int = 2
    ell: int = 0

    # -- lookups ---------------------------------------------------------------

    def component(self, cid: str) -> Component:
        for c in self.components:
            if c.id == cid:
                return c
        raise KeyError(cid)

    def owner(self, pid: str) -> Component:
        for c in self.components:
            if pid in c.point_ids():
                return c
        raise KeyError(pid)

    def record(self, pid: str) -> ContactRecord:
        return self.owner(pid).record(pid)

    def node_point_ids(self) -> set[str]:
        return {p for n in self.nodes for p in n.ends}

    def marked_point_ids(self) -> tuple[str, ...]:
        taken = self.node_point_ids()
        return tuple(
            pid for c in self.components for pid in c.point_ids() if pid not in taken
        )

    def direction_component(self, direction: str) -> Optional[str]:
        return dict(self.direction_components).get(direction)


# -- contraction to the base curve ------------------------------------------------


@dataclass(frozen=True)
class BaseFiber:
    """One special fiber of the contraction: a node or a stretched chain."""

    base_id: str
    kind: str  # "node" | "marked"
    start_point: str
    chain: tuple[str, ...]
    inner_nodes: tuple[str, ...]
    end_point: str

    @property
    def stretch(self) -> int:
        return len(self.chain)


def contraction(mt: MapType) -> tuple[BaseFiber, ...]:
    """Decompose the special locus into base fibers.

    Raises ValueError when trivial components do not assemble into two-ended
    chains; validate_structure reports the same defects as data.
    """
    node_of_point = {}
    for n in mt.nodes:
        for p in n.ends:
            if p in node_of_point:
                raise ValueError(f"point {p} appears in two nodes")
            node_of_point[p] = n
    fibers = []
    visited: set[str] = set()
    trivial = {c.id for c in mt.components if c.trivial}

    def other_end(node: Node, pid: str) -> str:
        a, b = node.ends
        return b if pid == a else a

    def walk_away(comp: Component, pid: str):
        """Follow the chain out of ``comp`` through its point ``pid``."""
        side: list[str] = []
        nodes: list[str] = []
        point = pid
        while True:
            node = node_of_point.get(point)
            if node is None:
                return side, nodes, ("marked", point)
            partner = other_end(node, point)
            nodes.append(node.id)
            nxt = mt.owner(partner)
            if nxt.id not in trivial:
                return side, nodes, ("anchor", partner)
            if nxt.id in visited:
                raise ValueError(f"trivial components around {nxt.id} form a cycle")
            visited.add(nxt.id)
            side.append(nxt.id)
            far = [p for p in nxt.point_ids() if p != partner]
            if len(far) != 1:
                raise ValueError(f"trivial component {nxt.id} must have two special points")
            point = far[0]

    for c in mt.components:
        if not c.trivial or c.id in visited:
            continue
        if len(c.point_ids()) != 2:
            raise ValueError(f"trivial component {c.id} must have two special points")
        visited.add(c.id)
        pa, pb = c.point_ids()
        left_side, left_nodes, left_end = walk_away(c, pa)
        right_side, right_nodes, right_end = walk_away(c, pb)
        chain = tuple(reversed(left_side)) + (c.id,) + tuple(right_side)
        nodes_in_order = tuple(reversed(left_nodes)) + tuple(right_nodes)
        ends = [left_end, right_end]
        if sum(1 for k, _ in ends if k == "marked") > 1:
            raise ValueError(f"chain through {c.id} has two marked ends")
        (k0, p0), (k1, p1) = ends
        flip = k0 == "marked" or (k0 == "anchor" and k1 == "anchor" and p1 < p0)
        if flip:
            (k0, p0), (k1, p1) = (k1, p1), (k0, p0)
            chain = tuple(reversed(chain))
            nodes_in_order = tuple(reversed(nodes_in_order))
        kind = "marked" if k1 == "marked" else "node"
        base = f"marked:{p1}" if kind == "marked" else f"node:{p0}|{p1}"
        fibers.append(BaseFiber(base, kind, p0, chain, nodes_in_order, p1))
    for n in mt.nodes:
        a, b = n.ends
        if mt.owner(a).trivial or mt.owner(b).trivial:
            continue
        p0, p1 = sorted((a, b))
        fibers.append(BaseFiber(f"node:{p0}|{p1}", "node", p0, (), (n.id,), p1))
    return tuple(sorted(fibers, key=lambda f: f.base_id))


def stretch(mt: MapType) -> dict[str, int]:
    """Number of trivial components over each base special point."""
    return {f.base_id: f.stretch for f in contraction(mt)}


# -- structural validation ---------------------------------------------------------


def validate_structure(mt: MapType) -> list[str]:
    out: list[str] = []
    cids = [c.id for c in mt.components]
    if len(set(cids)) != len(cids):
        out.append("duplicate component ids")
    pids = [p for c in mt.components for p in c.point_ids()]
    if len(set(pids)) != len(pids):
        out.append("duplicate point ids")
    for c in mt.components:
        if c.genus < 0:
            out.append(f"{c.id}: negative genus")
        if c.trivial:
            if len(c.point_ids()) != 2:
                out.append(f"{c.id}: trivial component must have exactly two special points")
            if c.genus != 0:
                out.append(f"{c.id}: trivial component must have genus 0")
            if len(c.point_ids()) == 2:
                (pa, ra), (pb, rb) = c.points
                for d in set(ra.directions) & set(rb.directions):
                    sa, sb = ra.slot(d), rb.slot(d)
                    if sa.s is not None and sb.s is not None and sa.s != sb.s:
                        out.append(f"{c.id}: multiplicities differ across ends in {d}")
                    if sa.eps and sb.eps and sa.eps != -sb.eps:
                        out.append(f"{c.id}: signs must be opposite across ends in {d}")
                    if sa.coeff is not None and sb.coeff is not None:
                        if not (sa.coeff * sb.coeff).is_one():
                            out.append(f"{c.id}: coefficients not reciprocal in {d}")
        else:
            for pid, r in c.points:
                for d, sl in r.slots:
                    if sl.s is None:
                        out.append(f"{pid}: nontrivial component with undefined multiplicity in {d}")
    known = set(pids)
    for n in mt.nodes:
        if len(set(n.ends)) != 2:
            out.append(f"{n.id}: node must join two distinct points")
        for p in n.ends:
            if p not in known:
                out.append(f"{n.id}: unknown point {p}")
    counts: dict[str, int] = {}
    for n in mt.nodes:
        for p in n.ends:
            counts[p] = counts.get(p, 0) + 1
    for p, k in counts.items():
        if k > 1:
            out.append(f"point {p} lies on {k} nodes")
    if not out:
        try:
            contraction(mt)
        except ValueError as e:
            out.append(str(e))
    for pid in mt.marked_point_ids():
        r = mt.record(pid)
        for d, sl in r.slots:
            if sl.eps == -1:
                out.append(f"{pid}: marked point on an infinity divisor ({d})")
    try:
        total = sum(mt.record(p).degree() for p in mt.marked_point_ids())
        if total != mt.av:
            out.append(f"marked contact degree {total} != A.V = {mt.av}")
    except ValueError as e:
        out.append(str(e))
    return out


# -- naive matching ------------------------------------------------------------------


def check_naive(mt: MapType) -> list[str]:
    out: list[str] = []
    for n in mt.nodes:
        a, b = n.ends
        ra, rb = mt.record(a), mt.record(b)
        if ra.stratum != rb.stratum:
            out.append(f"{n.id}: image strata differ ({ra.stratum} vs {rb.stratum})")
        if ra.directions != rb.directions:
            out.append(f"{n.id}: branch sets differ ({ra.directions} vs {rb.directions})")
            continue
        for d in ra.directions:
            sa, sb = ra.slot(d), rb.slot(d)
            if sa.s is None or sb.s is None:
                out.append(f"{n.id}: undefined multiplicity at a node ({d})")
                continue
            if sa.s != sb.s:
                out.append(f"{n.id}: multiplicities differ in {d}: {sa.s} vs {sb.s}")
            if sa.eps != -sb.eps:
                out.append(f"{n.id}: signs not opposite in {d}: {sa.eps} vs {sb.eps}")
    return out


# -- broken cylinders and level walks ---------------------------------------------


@dataclass(frozen=True)
class ProjectedStep:
    """One node of a chain after projecting out a direction's frozen part."""

    direction: str
    level: int
    nodes: tuple[str, ...]


@dataclass(frozen=True)
class FiberWalk:
    fiber: BaseFiber
    multiplicities: tuple[tuple[str, int], ...]
    steps: tuple[ProjectedStep, ...]
    violations: tuple[str, ...]


def _fiber_directions(mt: MapType, f: BaseFiber) -> list[str]:
    dirs = []
    records = [mt.record(f.start_point), mt.record(f.end_point)]
    for cid in f.chain:
        records.extend(r for _, r in mt.component(cid).points)
    for r in records:
        for d, sl in r.slots:
            if sl.eps != 0 and d not in dirs:
                dirs.append(d)
    return dirs


def _frozen(comp: Component, direction: str) -> bool:
    slots = [r.slot(direction) for _, r in comp.points]
    present = [sl for sl in slots if sl is not None]
    if not present:
        return True  # direction absent: constant in it
    return all(sl.formal for sl in present)


def _fiber_multiplicity(mt: MapType, f: BaseFiber, direction: str) -> tuple[Optional[int], list[str]]:
    values = set()
    records = [mt.record(f.start_point), mt.record(f.end_point)]
    for cid in f.chain:
        records.extend(r for _, r in mt.component(cid).points)
    for r in records:
        sl = r.slot(direction)
        if sl is not None and sl.s is not None:
            values.add(sl.s)
    if not values:
        return None, []
    if len(values) > 1:
        return None, [f"{f.base_id}: multiplicity drifts along the fiber in {direction}: {sorted(values)}"]
    return values.pop(), []


def walk_fiber(mt: MapType, f: BaseFiber) -> FiberWalk:
    violations: list[str] = []
    steps: list[ProjectedStep] = []
    mults: dict[str, int] = {}
    start = mt.owner(f.start_point)
    chain_comps = [mt.component(cid) for cid in f.chain]
    moved: dict[str, set[str]] = {}
    for d in _fiber_directions(mt, f):
        s, errs = _fiber_multiplicity(mt, f, d)
        violations.extend(errs)
        if f.kind == "node":
            end_comp = mt.owner(f.end_point)
            positions = [start] + chain_comps + [end_comp]
            levels = [c.level(d) for c in positions]
            virtual = [False] * len(positions)
            frozen = [False] + [_frozen(c, d) for c in chain_comps] + [False]
            node_ids: list[Optional[str]] = list(f.inner_nodes)
        else:
            end_slot = mt.record(f.end_point).slot(d)
            positions = [start] + chain_comps
            levels = [c.level(d) for c in positions]
            end_level = end_slot.level if end_slot is not None else levels[-1]
            levels = levels + [end_level]
            virtual = [False] * (len(positions)) + [True]
            frozen = [False] + [_frozen(c, d) for c in chain_comps] + [False]
            node_ids = list(f.inner_nodes) + [None]
        # project out frozen components
        segs = []
        pending: list[str] = []
        cur = levels[0]
        for t in range(1, len(levels)):
            if node_ids[t - 1] is not None:
                pending.append(node_ids[t - 1])
            if t < len(levels) - 1 and frozen[t]:
                continue
            segs.append((cur, levels[t], tuple(pending), virtual[t]))
            pending = []
            cur = levels[t]
        deltas = []
        for lo, hi, nodes, is_virtual in segs:
            delta = hi - lo
            if is_virtual:
                if delta != 0:
                    violations.append(
                        f"{f.base_id}: level jumps by {delta} into the marked endpoint in {d}"
                    )
                continue
            if delta == 0:
                violations.append(f"{f.base_id}: node does not move in {d}")
                continue
            if abs(delta) > 1:
                violations.append(f"{f.base_id}: level jumps by {delta} in {d}")
                continue
            deltas.append(delta)
            level = max(lo, hi)
            if s is None:
                violations.append(f"{f.base_id}: no multiplicity available in {d}")
                continue
            mults[d] = s
            steps.append(ProjectedStep(d, level, nodes))
            for nid in nodes:
                moved.setdefault(nid, set()).add(d)
        if deltas and len({x > 0 for x in deltas}) > 1:
            violations.append(f"{f.base_id}: levels are not monotone in {d}")
        seen_levels = [st.level for st in steps if st.direction == d]
        if len(seen_levels) != len(set(seen_levels)):
            violations.append(f"{f.base_id}: repeated node level in {d}")
    for nid in f.inner_nodes:
        if nid not in moved:
            violations.append(f"{f.base_id}: node {nid} moves in no direction")
    return FiberWalk(
        fiber=f,
        multiplicities=tuple(sorted(mults.items())),
        steps=tuple(steps),
        violations=tuple(violations),
    )


def check_broken_cylinders(mt: MapType) -> list[str]:
    out: list[str] = []
    for f in contraction(mt):
        out.extend(walk_fiber(mt, f).violations)
    return out


# -- enhanced matching -----------------------------------------------------------


@dataclass(frozen=True)
class EnhancedResult:
    satisfiable: bool
    witness: tuple[tuple[str, ExactNonzeroComplex], ...]
    branch_counts: tuple[tuple[str, int], ...]
    failure: Optional[str] = None

    def __bool__(self) -> bool:
        return self.satisfiable


def check_enhanced(mt: MapType) -> EnhancedResult:
    """Decide existence of per-node constants with a(y-)a(y+)c^s = 1.

    Solved one node at a time through the multiplicative power system; the
    witness takes the first torsion branch at each node.
    """
    witness: list[tuple[str, ExactNonzeroComplex]] = []
    branches: list[tuple[str, int]] = []
    for n in mt.nodes:
        a, b = n.ends
        ra, rb = mt.record(a), mt.record(b)
        rows: list[list[int]] = []
        rhs: list[ExactNonzeroComplex] = []
        dirs: list[str] = []
        for d in ra.directions:
            sa, sb = ra.slot(d), rb.slot(d)
            if sb is None or sa.eps == 0 or sb.eps == 0:
                continue
            if sa.coeff is None or sb.coeff is None:
                raise ValueError(f"{n.id}: undecorated coefficient in {d}")
            if sa.s is None:
                raise ValueError(f"{n.id}: undefined multiplicity in {d}")
            rows.append([sa.s])
            rhs.append((sa.coeff * sb.coeff).inverse())
            dirs.append(d)
        if not rows:
            continue
        sol = solve_power_system(rows, rhs)
        if not sol.consistent:
            d = dirs[sol.violated_equation]
            return EnhancedResult(
                False,
                (),
                (),
                failure=f"{n.id}: no gluing constant matches direction {d}",
            )
        witness.append((n.id, sol.solutions[0][0]))
        branches.append((n.id, sol.branch_count))
    return EnhancedResult(True, tuple(witness), tuple(branches))


# -- relative stability -----------------------------------------------------------


def check_relative_stability(mt: MapType) -> bool:
    """Every level of every scaling direction touches a nontrivial component."""
    nontrivial = [c for c in mt.components if not c.trivial]
    if mt.building_mode == "uniform":
        covered = {l for c in nontrivial for _, l in c.levels if l >= 1}
        return all(l in covered for l in range(1, mt.m + 1))
    table = dict(mt.direction_components)
    covered_pairs = set()
    for c in nontrivial:
        for d, l in c.levels:
            if l >= 1 and d in table:
                covered_pairs.add((table[d], l))
    for comp, bound in mt.levels_by_component:
        for l in range(1, bound + 1):
            if (comp, l) not in covered_pairs:
                return False
    return True


# -- weighted projective evaluation -------------------------------------------------


@dataclass(frozen=True)
class EvaluationClass:
    stratum: Optional[str]
    directions: tuple[str, ...]
    weights: tuple[int, ...]
    coeffs: tuple[ExactNonzeroComplex, ...]


def evaluation(mt: MapType, pid: str) -> EvaluationClass:
    r = mt.record(pid)
    dirs, weights, coeffs = [], [], []
    for d, sl in r.slots:
        if sl.coeff is None or sl.s is None:
            raise ValueError(f"{pid}: undecorated slot {d}")
        dirs.append(d)
        weights.append(sl.s)
        coeffs.append(sl.coeff)
    return EvaluationClass(r.stratum, tuple(dirs), tuple(weights), tuple(coeffs))


def wproj_equal(
    a: Sequence[ExactNonzeroComplex],
    b: Sequence[ExactNonzeroComplex],
    weights: Sequence[int],
) -> bool:
    """Equality in the weighted projectivization: b_i = t^{w_i} a_i for some t."""
    if not (len(a) == len(b) == len(weights)):
        raise ValueError("lengths must agree")
    rows = [[int(w)] for w in weights]
    rhs = [bi / ai for ai, bi in zip(a, b)]
    return solve_power_system(rows, rhs).consistent


def antidiagonal_paired(
    a: Sequence[ExactNonzeroComplex],
    b: Sequence[ExactNonzeroComplex],
    weights: Sequence[int],
) -> bool:
    """True when ([a], [b]) sits on the antidiagonal, i.e. [b] = [a^{-1}]."""
    return wproj_equal([x.inverse() for x in a], b, weights)


def eval_equal(e1: EvaluationClass, e2: EvaluationClass) -> bool:
    return (
        e1.stratum == e2.stratum
        and e1.directions == e2.directions
        and e1.weights == e2.weights
        and wproj_equal(e1.coeffs, e2.coeffs, e1.weights)
    )


def degree_check(mt: MapType) -> bool:
    return sum(mt.record(p).degree() for p in mt.marked_point_ids()) == mt.av


# -- file format ---------------------------------------------------------------------


def _slot_to_dict(d: str, sl: ContactSlot) -> dict:
    return {
        "direction": d,
        "s": sl.s,
        "eps": sl.eps,
        "level": sl.level,
        "coeff": None if sl.coeff is None else coeff_to_json(sl.coeff),
        "formal": sl.formal,
    }


def maptype_to_dict(mt: MapType) -> dict:
    return {
        "building": {
            "mode": mt.building_mode,
            "m": mt.m,
            "levels": {k: v for k, v in mt.levels_by_component},
        },
        "directions": {k: v for k, v in mt.direction_components},
        "pairing": {"c1A": mt.c1a, "AV": mt.av, "chi": mt.chi, "ell": mt.ell},
        "components": [
            {
                "id": c.id,
                "genus": c.genus,
                "trivial": c.trivial,
                "levels": {k: v for k, v in c.levels},
                "points": [
                    {
                        "id": pid,
                        "stratum": r.stratum,
                        "slots": [_slot_to_dict(d, sl) for d, sl in r.slots],
                    }
                    for pid, r in c.points
                ],
            }
            for c in mt.components
        ],
        "nodes": [{"id": n.id, "ends": list(n.ends)} for n in mt.nodes],
    }


def _slot_from_dict(obj: Mapping) -> tuple[str, ContactSlot]:
    coeff = obj.get("coeff")
    return (
        obj["direction"],
        ContactSlot(
            s=obj.get("s"),
            eps=int(obj.get("eps", 0)),
            level=int(obj.get("level", 0)),
            coeff=None if coeff is None else coeff_from_json(coeff),
            formal=bool(obj.get("formal", False)),
        ),
    )


def maptype_from_dict(obj: Mapping) -> MapType:
    building = obj.get("building", {})
    pairing = obj.get("pairing", {})
    comps = []
    for c in obj.get("components", ()):
        points = tuple(
            (
                p["id"],
                ContactRecord(
                    stratum=p.get("stratum"),
                    slots=tuple(_slot_from_dict(s) for s in p.get("slots", ())),
                ),
            )
            for p in c.get("points", ())
        )
        comps.append(
            Component(
                id=c["id"],
                genus=int(c.get("genus", 0)),
                trivial=bool(c.get("trivial", False)),
                levels=tuple((k, int(v)) for k, v in c.get("levels", {}).items()),
                points=points,
            )
        )
    return MapType(
        building_mode=building.get("mode", "uniform"),
        m=int(building.get("m", 0)),
        levels_by_component=tuple(
            (k, int(v)) for k, v in building.get("levels", {}).items()
        ),
        direction_components=tuple(
            (k, v) for k, v in obj.get("directions", {}).items()
        ),
        components=tuple(comps),
        nodes=tuple(Node(n["id"], tuple(n["ends"])) for n in obj.get("nodes", ())),
        c1a=int(pairing.get("c1A", 0)),
        av=int(pairing.get("AV", 0)),
        chi=int(pairing.get("chi", 2)),
        ell=int(pairing.get("ell", 0)),
    )


def dumps(mt: MapType) -> str:
    return json.dumps(maptype_to_dict(mt), indent=2, sort_keys=True) + "\n"


def loads(text: str) -> MapType:
    return maptype_from_dict(json.loads(text))
