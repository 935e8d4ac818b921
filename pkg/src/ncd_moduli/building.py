"""Level-m buildings over a combinatorial divisor.

A piece of the building is indexed by a base stratum together with a level
for each of its slots; levels 0 mark unrescaled directions, so the piece's
generic label has all levels >= 1 on its own stratum.  Global pieces are
monodromy orbits of those labels, counted per normalization component of the
base.  Divisor strata of the building are labeled per stratum by a level
tuple, a slot, and a sign; the attaching map pairs a zero-side label at level
l with the infinity-side label at level l+1 in the same direction.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

from .divisor import CombinatorialDivisor, Stratum, local_model


@dataclass(frozen=True)
class PieceLabel:
    """Base stratum id plus per-slot levels; zero levels are unrescaled."""

    stratum: str
    levels: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(int(x) for x in self.levels))

    @property
    def zero_slots(self) -> tuple[int, ...]:
        return tuple(i for i, l in enumerate(self.levels) if l == 0)

    @property
    def global_level(self) -> int:
        return max(self.levels, default=0)


@dataclass(frozen=True)
class PieceRecord:
    """A monodromy orbit of piece labels over one stratum."""

    label: PieceLabel
    depth: int
    orbit_size: int
    base_components: int


@dataclass(frozen=True)
class PieceClass:
    """Pieces of the same depth and level pattern, aggregated over the base."""

    depth: int
    levels: tuple[int, ...]
    strata: tuple[str, ...]
    connected_pieces: int


@dataclass(frozen=True)
class DivisorStratumLabel:
    """A branch of the total divisor: one signed direction on a local label."""

    stratum: str
    levels: tuple[int, ...]
    slot: int
    sign: int


def _apply_perm(levels: tuple[int, ...], perm: tuple[int, ...]) -> tuple[int, ...]:
    out = list(levels)
    for i, j in enumerate(perm):
        out[j] = levels[i]
    return tuple(out)


def _orbit(levels: tuple[int, ...], gens: Sequence[tuple[int, ...]]) -> frozenset:
    seen = {levels}
    frontier = [levels]
    while frontier:
        cur = frontier.pop()
        for g in gens:
            nxt = _apply_perm(cur, g)
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return frozenset(seen)


def _orbit_signed(
    item: tuple[tuple[int, ...], int], gens: Sequence[tuple[int, ...]]
) -> frozenset:
    seen = {item}
    frontier = [item]
    while frontier:
        levels, slot = frontier.pop()
        for g in gens:
            nxt = (_apply_perm(levels, g), g[slot])
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return frozenset(seen)


@dataclass(frozen=True)
class LevelBuilding:
    divisor: CombinatorialDivisor
    mode: str  # "uniform" | "multi"
    levels_by_component: tuple[tuple[str, int], ...]
    m: int
    pieces: tuple[PieceRecord, ...]
    divisor_strata: tuple[DivisorStratumLabel, ...]
    attaching: tuple[tuple[DivisorStratumLabel, DivisorStratumLabel], ...]

    # -- bounds ---------------------------------------------------------------

    def slot_bound(self, stratum: Stratum, slot: int) -> int:
        if self.mode == "uniform":
            return self.m
        table = dict(self.levels_by_component)
        return table[stratum.slots[slot]]

    # -- counting accessors ----------------------------------------------------

    def connected_piece_count(self) -> int:
        return sum(r.base_components for r in self.pieces)

    def labeled_piece_count(self) -> int:
        return sum(r.base_components * r.orbit_size for r in self.pieces)

    def piece_classes(self) -> tuple[PieceClass, ...]:
        """Aggregate piece records of equal depth and level pattern.

        This is the counting convention under which a bundle over a
        disconnected normalization is one piece per level pattern.
        """
        acc: dict[tuple[int, tuple[int, ...]], list[PieceRecord]] = {}
        for r in self.pieces:
            acc.setdefault((r.depth, r.label.levels), []).append(r)
        out = []
        for (depth, levels), recs in sorted(acc.items()):
            out.append(
                PieceClass(
                    depth=depth,
                    levels=levels,
                    strata=tuple(sorted({r.label.stratum for r in recs})),
                    connected_pieces=sum(r.base_components for r in recs),
                )
            )
        return tuple(out)

    def class_count(self, depth: Optional[int] = None) -> int:
        return sum(1 for c in self.piece_classes() if depth is None or c.depth == depth)

    def local_labels(self, stratum_id: str) -> tuple[PieceLabel, ...]:
        """All (m+1)^k local piece labels over a point of the stratum."""
        s = self.divisor.stratum(stratum_id)
        ranges = [range(self.slot_bound(s, i) + 1) for i in range(s.depth)]
        return tuple(PieceLabel(s.id, lv) for lv in itertools.product(*ranges))


def _builder(
    d: CombinatorialDivisor,
    mode: str,
    bounds: Mapping[str, int],
) -> LevelBuilding:
    m = max(bounds.values(), default=0)
    pieces: list[PieceRecord] = [
        PieceRecord(PieceLabel(d.depth0().id, ()), 0, 1, 1)
    ]
    strata_labels: list[DivisorStratumLabel] = []
    pairs: list[tuple[DivisorStratumLabel, DivisorStratumLabel]] = []
    for s in sorted(d.strata, key=lambda s: (s.depth, s.id)):
        slot_bounds = [bounds[ref] for ref in s.slots]
        if s.depth >= 1:
            seen: set[tuple[int, ...]] = set()
            for lv in itertools.product(*[range(1, b + 1) for b in slot_bounds]):
                if lv in seen:
                    continue
                orb = _orbit(lv, s.monodromy)
                seen |= orb
                rep = min(orb)
                pieces.append(
                    PieceRecord(PieceLabel(s.id, rep), s.depth, len(orb), s.normalization_components)
                )
        # divisor branches over this stratum: every local label, one signed slot
        seen_signed: set[tuple[tuple[int, ...], int, int]] = set()
        for lv in itertools.product(*[range(b + 1) for b in slot_bounds]):
            for slot in range(s.depth):
                for sign in (1, -1):
                    if sign == -1 and lv[slot] == 0:
                        continue
                    key = (lv, slot, sign)
                    if key in seen_signed:
                        continue
                    orb = _orbit_signed((lv, slot), s.monodromy)
                    seen_signed |= {(l, sl, sign) for l, sl in orb}
                    rep_lv, rep_slot = min(orb)
                    strata_labels.append(DivisorStratumLabel(s.id, rep_lv, rep_slot, sign))
        for label in [x for x in strata_labels if x.stratum == s.id and x.sign == 1]:
            if label.levels[label.slot] >= slot_bounds[label.slot]:
                continue  # top-level zero divisor: part of the building's divisor
            up = list(label.levels)
            up[label.slot] += 1
            orb = _orbit_signed((tuple(up), label.slot), s.monodromy)
            rep_lv, rep_slot = min(orb)
            pairs.append((label, DivisorStratumLabel(s.id, rep_lv, rep_slot, -1)))
    b = LevelBuilding(
        divisor=d,
        mode=mode,
        levels_by_component=tuple(sorted(bounds.items())),
        m=m,
        pieces=tuple(pieces),
        divisor_strata=tuple(strata_labels),
        attaching=tuple(pairs),
    )
    _check_matching(b)
    return b


def _check_matching(b: LevelBuilding) -> None:
    minus = {x for x in b.divisor_strata if x.sign == -1}
    paired = [q for _, q in b.attaching]
    if len(paired) != len(set(paired)) or set(paired) != minus:
        raise AssertionError("attaching map is not a perfect matching on infinity strata")


def build(d: CombinatorialDivisor, m: int) -> LevelBuilding:
    """The level-m building: all pieces, divisor branches, and attachments."""
    if m < 0:
        raise ValueError("level count must be nonnegative")
    return _builder(d, "uniform", {c.id: m for c in d.components})


def build_multi(d: CombinatorialDivisor, levels) -> LevelBuilding:
    """Multi-building with an independent level count per scaling direction.

    The scaling directions are the connected components of the divisor's
    normalization; a level vector of any other length is rejected.
    """
    comp_ids = d.component_ids()
    if hasattr(levels, "items"):
        table = {str(k): int(v) for k, v in levels.items()}
    else:
        vals = [int(v) for v in levels]
        if len(vals) != len(comp_ids):
            raise ValueError(
                f"divisor has {len(comp_ids)} independent scaling direction(s) "
                f"(one per normalization component); got {len(vals)} levels"
            )
        table = dict(zip(comp_ids, vals))
    if set(table) != set(comp_ids):
        raise ValueError("level table keys must be exactly the component ids")
    if any(v < 0 for v in table.values()):
        raise ValueError("levels must be nonnegative")
    return _builder(d, "multi", table)


def divisor_strata(piece: PieceLabel, include_open: bool = True) -> tuple[tuple[int, ...], ...]:
    """Sign patterns of the total divisor on a piece label.

    A slot at level 0 only meets the zero/fiber divisor, so its sign is in
    {0, +1}; rescaled slots also allow -1.  The all-zero pattern is the open
    piece and is dropped when ``include_open`` is false.
    """
    choices = [(0, 1) if l == 0 else (0, 1, -1) for l in piece.levels]
    out = tuple(
        sig
        for sig in itertools.product(*choices)
        if include_open or any(sig)
    )
    return out


def dual_pairs(b: LevelBuilding) -> tuple[tuple[DivisorStratumLabel, DivisorStratumLabel], ...]:
    return b.attaching


@dataclass(frozen=True)
class CollapseResult:
    building: LevelBuilding
    piece_map: Mapping[PieceLabel, PieceLabel]


def collapse(b: LevelBuilding, levels: Iterable[int]) -> CollapseResult:
    """Collapse a subset of levels of a uniform building.

    Surviving level values shift down past the collapsed ones; a rescaled
    direction that loses all its levels stays at level 1 unless the whole
    piece collapses onto the level-0 piece.
    """
    if b.mode != "uniform":
        raise ValueError("collapse is defined for uniform buildings")
    J = set(int(j) for j in levels)
    if not J <= set(range(1, b.m + 1)):
        raise ValueError(f"collapsed levels must lie in 1..{b.m}")
    small = build(b.divisor, b.m - len(J))

    def relabel(l: int) -> int:
        return l - sum(1 for j in J if j <= l)

    mapping: dict[PieceLabel, PieceLabel] = {}
    x_label = PieceLabel(b.divisor.depth0().id, ())
    for rec in b.pieces:
        if rec.depth == 0:
            mapping[rec.label] = x_label
            continue
        shifted = [relabel(l) for l in rec.label.levels]
        if all(v == 0 for v in shifted):
            mapping[rec.label] = x_label
            continue
        s = b.divisor.stratum(rec.label.stratum)
        clamped = tuple(max(1, v) for v in shifted)
        rep = min(_orbit(clamped, s.monodromy))
        mapping[rec.label] = PieceLabel(s.id, rep)
    return CollapseResult(small, mapping)


@dataclass(frozen=True)
class RescaledDisk:
    """The chain model: a disk rescaled m times at the origin."""

    m: int
    component_levels: tuple[int, ...]
    divisor_points: tuple[tuple, ...]
    attaching_pairs: tuple[tuple[tuple[int, int], tuple[int, int]], ...]
    building: LevelBuilding


def rescaled_disk(m: int) -> RescaledDisk:
    b = build(local_model(1), m)
    nodes = tuple(("node", l, l + 1) for l in range(m))
    return RescaledDisk(
        m=m,
        component_levels=tuple(range(m + 1)),
        divisor_points=nodes + (("zero", m),),
        attaching_pairs=tuple(((l, 1), (l + 1, -1)) for l in range(m)),
        building=b,
    )


def torus_weight(l_minus: int, l_plus: int, m: int) -> tuple[int, ...]:
    """Exponent vector of the m-torus action on a node's coefficient product.

    A node joining levels l_minus < l_plus is acted on with weight +1 at
    position l_minus (omitted when l_minus = 0; level zero is fixed) and -1
    at position l_plus.  Same-level nodes are inert.
    """
    if not 0 <= l_minus <= l_plus <= m:
        raise ValueError("need 0 <= l_minus <= l_plus <= m")
    w = [0] * m
    if l_minus == l_plus:
        return tuple(w)
    if l_minus >= 1:
        w[l_minus - 1] += 1
    w[l_plus - 1] -= 1
    return tuple(w)


# -- dump format -----------------------------------------------------------------

def building_to_dict(b: LevelBuilding) -> dict:
    return {
        "mode": b.mode,
        "m": b.m,
        "levels_by_component": {k: v for k, v in b.levels_by_component},
        "pieces": [
            {
                "stratum": r.label.stratum,
                "levels": list(r.label.levels),
                "depth": r.depth,
                "orbit_size": r.orbit_size,
                "base_components": r.base_components,
            }
            for r in b.pieces
        ],
        "divisor_strata": [
            {
                "stratum": x.stratum,
                "levels": list(x.levels),
                "slot": x.slot,
                "sign": x.sign,
            }
            for x in b.divisor_strata
        ],
        "attaching": [
            [
                {"stratum": p.stratum, "levels": list(p.levels), "slot": p.slot, "sign": p.sign},
                {"stratum": q.stratum, "levels": list(q.levels), "slot": q.slot, "sign": q.sign},
            ]
            for p, q in b.attaching
        ],
    }


def dumps(b: LevelBuilding) -> str:
    return json.dumps(building_to_dict(b), indent=2, sort_keys=True) + "\n"
