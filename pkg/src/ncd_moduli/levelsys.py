"""The level linear system and the gluing-parameter power system.

Unknowns are one rate exponent per node of the domain and one per level of
the building (per scaling direction for multibuildings).  Level exponents
are absolute: a projected node at level l in direction i with multiplicity s
contributes the equation

    s * sum(alpha over its merged nodes) = beta(l) - beta(l-1),

with beta(0) = 0, so the two rates of a shared chain with multiplicities
s1 != s2 on levels l1 != l2 satisfy beta(l1)/s1 = beta(l2)/s2.  A strictly
positive solution is necessary for the type to arise as a limit; the
dimension of the beta-projection of the solution space is the number of
independent rescaling parameters, i.e. the stratum's complex codimension.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence, Union

from .exactnum import (
    ExactNonzeroComplex,
    coeff_from_json,
    coeff_to_json,
    rational_nullspace,
    solve_power_system,
    strict_positive_solution,
)
from .maptype import MapType, check_broken_cylinders, check_naive, contraction, validate_structure, walk_fiber

BetaKey = Union[int, tuple[str, int]]


class LevelSystemError(ValueError):
    """Raised when a map type cannot produce a well-formed level system."""


@dataclass(frozen=True)
class LevelEquation:
    base: str
    direction: str
    level: int
    nodes: tuple[str, ...]
    multiplicity: int


@dataclass(frozen=True)
class LevelSystem:
    alphas: tuple[str, ...]
    betas: tuple[BetaKey, ...]
    equations: tuple[LevelEquation, ...]
    directions: tuple[tuple[str, str], ...] = ()  # direction -> scaling component

    def rows(self) -> tuple[tuple[Fraction, ...], ...]:
        """Integer coefficient rows over the unknowns alphas + betas."""
        a_index = {a: i for i, a in enumerate(self.alphas)}
        b_index = {b: len(self.alphas) + i for i, b in enumerate(self.betas)}
        out = []
        for eq in self.equations:
            row = [Fraction(0)] * (len(self.alphas) + len(self.betas))
            for nid in eq.nodes:
                row[a_index[nid]] += eq.multiplicity
            key = self._beta_key(eq.direction, eq.level)
            row[b_index[key]] -= 1
            if eq.level >= 2:
                row[b_index[self._beta_key(eq.direction, eq.level - 1)]] += 1
            out.append(tuple(row))
        return tuple(out)

    def _beta_key(self, direction: str, level: int) -> BetaKey:
        table = dict(self.directions)
        for b in self.betas:
            if isinstance(b, int):
                if b == level:
                    return b
            elif b[1] == level and b[0] == table.get(direction):
                return b
        raise KeyError((direction, level))

    def describe(self) -> list[str]:
        out = []
        for eq in self.equations:
            lhs = " + ".join(f"a({z})" for z in eq.nodes)
            if eq.multiplicity != 1:
                lhs = f"{eq.multiplicity}*({lhs})"
            prev = self._beta_name(eq.direction, eq.level - 1) if eq.level >= 2 else None
            rhs = self._beta_name(eq.direction, eq.level)
            if prev:
                rhs = f"{rhs} - {prev}"
            out.append(f"[{eq.base} / {eq.direction}] {lhs} = {rhs}")
        return out

    def _beta_name(self, direction: str, level: int) -> str:
        key = self._beta_key(direction, level)
        return f"b({key})" if isinstance(key, int) else f"b({key[0]},{key[1]})"


def build_system(mt: MapType) -> LevelSystem:
    """Assemble the level system of a validated map type."""
    problems = validate_structure(mt) or check_naive(mt) or check_broken_cylinders(mt)
    if problems:
        raise LevelSystemError("; ".join(problems))
    dir_table = dict(mt.direction_components)
    if mt.building_mode == "uniform":
        betas: list[BetaKey] = list(range(1, mt.m + 1))
    else:
        betas = [
            (comp, l)
            for comp, bound in sorted(mt.levels_by_component)
            for l in range(1, bound + 1)
        ]
    equations: list[LevelEquation] = []
    alphas: list[str] = []
    for f in contraction(mt):
        walk = walk_fiber(mt, f)
        mults = dict(walk.multiplicities)
        for step in walk.steps:
            if mt.building_mode != "uniform" and step.direction not in dir_table:
                raise LevelSystemError(
                    f"{f.base_id}: direction {step.direction} has no scaling component"
                )
            equations.append(
                LevelEquation(
                    base=f.base_id,
                    direction=step.direction,
                    level=step.level,
                    nodes=step.nodes,
                    multiplicity=mults[step.direction],
                )
            )
            for nid in step.nodes:
                if nid not in alphas:
                    alphas.append(nid)
    return LevelSystem(
        tuple(sorted(alphas)),
        tuple(betas),
        tuple(equations),
        tuple(sorted(dir_table.items())),
    )


def feasible_positive(sys: LevelSystem) -> Optional[dict]:
    """A strictly positive rational solution, as {unknown: value}, or None."""
    if not sys.alphas and not sys.betas:
        return {}
    witness = strict_positive_solution(sys.rows() or [[Fraction(0)] * (len(sys.alphas) + len(sys.betas))])
    if witness is None:
        return None
    names = list(sys.alphas) + list(sys.betas)
    return dict(zip(names, witness))


def torus_dim(sys: LevelSystem) -> int:
    """Dimension of the beta-projection of the solution space."""
    if not sys.betas:
        return 0
    rows = sys.rows()
    if not rows:
        return len(sys.betas)
    basis = rational_nullspace(rows)
    na = len(sys.alphas)
    projected = [v[na:] for v in basis]
    if not projected:
        return 0
    from .exactnum import rank

    return rank(projected)


def beta_relations(sys: LevelSystem) -> tuple[tuple[Fraction, ...], ...]:
    """A basis of the rational relations forced among the level exponents.

    Each relation is a primitive integer vector over sys.betas, normalized so
    its last nonzero entry is positive; their count is len(betas) - torus_dim.
    """
    nb = len(sys.betas)
    if nb == 0:
        return ()
    rows = sys.rows()
    na = len(sys.alphas)
    basis = rational_nullspace(rows) if rows else None
    if basis is None:
        projected = [
            tuple(Fraction(int(i == j)) for j in range(nb)) for i in range(nb)
        ]
    else:
        projected = [v[na:] for v in basis]
    if not projected:
        projected = [tuple(Fraction(0) for _ in range(nb))]
    relations = rational_nullspace(projected)
    return tuple(sorted(_normalize_relation(r) for r in relations))


def _normalize_relation(rel: Sequence[Fraction]) -> tuple[Fraction, ...]:
    from math import gcd

    denom = 1
    for x in rel:
        denom = denom * x.denominator // gcd(denom, x.denominator)
    ints = [int(x * denom) for x in rel]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    if g:
        ints = [v // g for v in ints]
    last = next((v for v in reversed(ints) if v), 0)
    if last < 0:
        ints = [-v for v in ints]
    return tuple(Fraction(v) for v in ints)


# -- asymptotic equivalence classes ----------------------------------------------


@dataclass(frozen=True)
class AsymptoticClass:
    members: tuple[tuple, ...]  # ("node", id) and ("level", key) tokens
    exponents: tuple[tuple, ...]  # member -> positive rational from the witness


def asymptotic_classes(mt: MapType) -> tuple[AsymptoticClass, ...]:
    """Partition nodes and levels into joint rate classes.

    Tokens are merged along each equation, across all nodes of one base
    fiber, and across the level interval spanned by a fiber; exponents come
    from a strictly positive witness, which must exist.
    """
    sys = build_system(mt)
    witness = feasible_positive(sys)
    if witness is None:
        raise LevelSystemError("level system has no strictly positive solution")
    tokens: list[tuple] = [("node", a) for a in sys.alphas]
    tokens += [("level", b) for b in sys.betas]
    parent = {t: t for t in tokens}

    def find(t):
        while parent[t] != t:
            parent[t] = parent[parent[t]]
            t = parent[t]
        return t

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    def beta_token(direction, level):
        return ("level", sys._beta_key(direction, level))

    for eq in sys.equations:
        anchor = ("node", eq.nodes[0])
        for nid in eq.nodes[1:]:
            union(anchor, ("node", nid))
        union(anchor, beta_token(eq.direction, eq.level))
        if eq.level >= 2:
            union(anchor, beta_token(eq.direction, eq.level - 1))
    by_base: dict[str, list[LevelEquation]] = {}
    for eq in sys.equations:
        by_base.setdefault(eq.base, []).append(eq)
    for eqs in by_base.values():
        first = ("node", eqs[0].nodes[0])
        for eq in eqs[1:]:
            union(first, ("node", eq.nodes[0]))
        levels = [eq.level for eq in eqs]
        for eq in eqs:
            for l in range(min(levels), max(levels) + 1):
                if l >= 1:
                    try:
                        union(first, beta_token(eq.direction, l))
                    except KeyError:
                        pass
    groups: dict[tuple, list[tuple]] = {}
    for t in tokens:
        groups.setdefault(find(t), []).append(t)
    out = []
    for members in groups.values():
        members = tuple(sorted(members, key=repr))
        exps = tuple((m, witness[m[1]]) for m in members)
        out.append(AsymptoticClass(members, exps))
    return tuple(sorted(out, key=lambda c: repr(c.members)))


# -- gluing problems ----------------------------------------------------------------


@dataclass(frozen=True)
class GluingDirection:
    direction: str
    multiplicity: int
    product: ExactNonzeroComplex  # a_i(x-) * a_i(x+)
    level_range: tuple[int, int]


@dataclass(frozen=True)
class GluingNode:
    id: str
    directions: tuple[GluingDirection, ...]


@dataclass(frozen=True)
class GluingProblem:
    nodes: tuple[GluingNode, ...]
    lambdas: tuple[tuple[int, ExactNonzeroComplex], ...]

    def lam(self, level: int) -> ExactNonzeroComplex:
        table = dict(self.lambdas)
        if level not in table:
            raise KeyError(f"no gluing parameter for level {level}")
        return table[level]


@dataclass(frozen=True)
class GluingNodeSolution:
    node: str
    count: int
    solutions: tuple[ExactNonzeroComplex, ...]
    failure: Optional[str] = None


@dataclass(frozen=True)
class GluingSolution:
    nodes: tuple[GluingNodeSolution, ...]

    @property
    def consistent(self) -> bool:
        return all(n.failure is None for n in self.nodes)

    @property
    def total_count(self) -> int:
        total = 1
        for n in self.nodes:
            total *= n.count
        return total


def solve_gluing(gp: GluingProblem) -> GluingSolution:
    """Per node, all gluing parameters mu with mu^{s_i} = (prod lam) / product_i.

    A direction whose lifts sit at levels (lo, hi) crosses the gluing events
    at levels lo+1..hi, so those are the parameters multiplied; a
    smooth-divisor node of multiplicity s has exactly s solutions.
    """
    out = []
    for node in gp.nodes:
        rows = []
        rhs = []
        for d in node.directions:
            lo, hi = d.level_range
            acc = ExactNonzeroComplex.one()
            for l in range(lo + 1, hi + 1):
                acc = acc * gp.lam(l)
            rows.append([d.multiplicity])
            rhs.append(acc * d.product.inverse())
        sol = solve_power_system(rows, rhs)
        if not sol.consistent:
            d = node.directions[sol.violated_equation]
            out.append(
                GluingNodeSolution(
                    node.id,
                    0,
                    (),
                    failure=f"{node.id}: directions {node.directions[0].direction} and "
                    f"{d.direction} demand incompatible gluing parameters",
                )
            )
            continue
        out.append(
            GluingNodeSolution(
                node.id,
                sol.branch_count,
                tuple(s[0] for s in sol.solutions),
            )
        )
    return GluingSolution(tuple(out))


def gluing_problem_from_maptype(mt: MapType) -> GluingProblem:
    """The collapsed-chain gluing problem of a map type (lambdas left to the caller)."""
    nodes = []
    for f in contraction(mt):
        walk = walk_fiber(mt, f)
        mults = dict(walk.multiplicities)
        dirs = []
        start = mt.record(f.start_point)
        if f.kind != "node":
            continue
        end = mt.record(f.end_point)
        for d in sorted(set(start.directions) & set(end.directions)):
            sa, sb = start.slot(d), end.slot(d)
            if sa.eps == 0 or sb.eps == 0 or sa.coeff is None or sb.coeff is None:
                continue
            steps = [s.level for s in walk.steps if s.direction == d]
            lo = min(steps) - 1 if steps else 0
            hi = max(steps) if steps else 0
            dirs.append(
                GluingDirection(d, mults.get(d, sa.s), sa.coeff * sb.coeff, (lo, hi))
            )
        if dirs:
            nodes.append(GluingNode(f.base_id, tuple(dirs)))
    return GluingProblem(tuple(nodes), ())


# -- file format -----------------------------------------------------------------


def gluing_to_dict(gp: GluingProblem) -> dict:
    return {
        "levels": {str(l): coeff_to_json(v) for l, v in gp.lambdas},
        "nodes": [
            {
                "id": n.id,
                "directions": [
                    {
                        "direction": d.direction,
                        "s": d.multiplicity,
                        "product": coeff_to_json(d.product),
                        "range": list(d.level_range),
                    }
                    for d in n.directions
                ],
            }
            for n in gp.nodes
        ],
    }


def gluing_from_dict(obj: Mapping) -> GluingProblem:
    nodes = tuple(
        GluingNode(
            n["id"],
            tuple(
                GluingDirection(
                    d["direction"],
                    int(d["s"]),
                    coeff_from_json(d["product"]),
                    (int(d["range"][0]), int(d["range"][1])),
                )
                for d in n["directions"]
            ),
        )
        for n in obj.get("nodes", ())
    )
    lambdas = tuple(
        sorted((int(l), coeff_from_json(v)) for l, v in obj.get("levels", {}).items())
    )
    return GluingProblem(nodes, lambdas)


def gluing_dumps(gp: GluingProblem) -> str:
    return json.dumps(gluing_to_dict(gp), indent=2, sort_keys=True) + "\n"


def gluing_loads(text: str) -> GluingProblem:
    return gluing_from_dict(json.loads(text))
