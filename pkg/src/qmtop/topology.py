"""Topology axioms, subbase generation, separation, convergence, enumeration.

Everything here is the direct, definition-level side of the toolkit: the
quasimetric characterisations in `qmetric` are cross-checked against these
oracles.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from . import _kernels, _tails
from .core import (
    InvariantViolation,
    PointMap,
    PointSet,
    PointSpace,
    SequenceSpec,
    SpaceMismatchError,
    Topology,
    serialize,
)

ENUM_MAX_POINTS = 5
FAMILY_ROUTE_MAX_POINTS = 4


@dataclass(frozen=True, slots=True)
class Preorder:
    """A reflexive transitive relation; rows[x] masks {y : x below y}."""

    space: PointSpace
    rows: tuple[int, ...]

    def __post_init__(self):
        n = self.space.n
        if len(self.rows) != n:
            raise InvariantViolation("one relation row per point required")
        full = self.space.full_mask
        for x in range(n):
            if self.rows[x] & ~full:
                raise InvariantViolation("relation row has bits outside the space")
            if not self.rows[x] >> x & 1:
                raise InvariantViolation(f"relation not reflexive at {x}")
        for x in range(n):
            for y in range(n):
                if self.rows[x] >> y & 1 and self.rows[y] & ~self.rows[x]:
                    raise InvariantViolation(f"relation not transitive through ({x},{y})")

    def leq(self, x: int, y: int) -> bool:
        return bool(self.rows[x] >> y & 1)

    @property
    def matrix(self) -> tuple[tuple[int, ...], ...]:
        n = self.space.n
        return tuple(tuple(self.rows[x] >> y & 1 for y in range(n)) for x in range(n))

    def upset(self, x: int) -> PointSet:
        return PointSet(self.space, self.rows[x])


@dataclass(frozen=True, slots=True)
class TopologyViolation:
    kind: str
    witness: tuple[tuple[int, ...], ...]

    def __str__(self) -> str:
        if not self.witness:
            return self.kind
        sets = ", ".join("{" + ",".join(map(str, w)) + "}" for w in self.witness)
        return f"{self.kind}: {sets}"

    def to_json(self) -> dict:
        return {"kind": self.kind, "witness": [list(w) for w in self.witness]}


def check_topology(space: PointSpace, family) -> list[TopologyViolation]:
    """All closure failures of a candidate family of open sets."""
    masks = sorted({s.mask for s in family})
    present = set(masks)
    out = []
    if 0 not in present:
        out.append(TopologyViolation("no-empty-set", ()))
    if space.full_mask not in present:
        out.append(TopologyViolation("no-full-set", ()))
    members = {m: tuple(PointSet(space, m).members()) for m in masks}
    for a, b in combinations(masks, 2):
        if a | b not in present:
            out.append(TopologyViolation("union-escape", (members[a], members[b])))
        if a & b not in present:
            out.append(TopologyViolation("intersection-escape", (members[a], members[b])))
    return out


def _close_under(masks: set[int], op) -> set[int]:
    work = set(masks)
    frontier = list(work)
    while frontier:
        fresh = []
        for a in frontier:
            for b in work:
                c = op(a, b)
                if c not in work:
                    fresh.append(c)
        work.update(fresh)
        frontier = fresh
    return work


def generate_from_subbase(space: PointSpace, subbase) -> Topology:
    """Smallest topology containing the subbase.

    The empty intersection is the full set and the empty union is the empty
    set, so the result is a topology even for an empty subbase.
    """
    base = _close_under({s.mask for s in subbase} | {space.full_mask}, lambda a, b: a & b)
    opens = _close_under(base | {0}, lambda a, b: a | b)
    return Topology.from_masks(space, opens)


def minimal_neighborhood(t: Topology, x: int) -> PointSet:
    """Intersection of every open containing x; open itself on finite carriers."""
    t.space.check_point(x)
    mask = t.space.full_mask
    for s in t.opens:
        if s.mask >> x & 1:
            mask &= s.mask
    return PointSet(t.space, mask)


def specialization_preorder(t: Topology) -> Preorder:
    """x below y iff every open containing x contains y."""
    return Preorder(t.space, tuple(minimal_neighborhood(t, x).mask
                                   for x in t.space.points()))


def alexandrov_topology(p: Preorder) -> Topology:
    """Opens are the up-closed sets of the relation."""
    n = p.space.n
    opens = []
    for u in range(1 << n):
        if all(not u >> x & 1 or p.rows[x] & ~u == 0 for x in range(n)):
            opens.append(u)
    return Topology.from_masks(p.space, opens)


# --- separation axioms, direct definitions -------------------------------

def pair_separated_t0(t: Topology, x: int, y: int) -> bool:
    """Some open contains exactly one of x, y."""
    return any((s.mask >> x & 1) != (s.mask >> y & 1) for s in t.opens)


def pair_separated_t1(t: Topology, x: int, y: int) -> bool:
    """Some open contains x and not y."""
    return any(s.mask >> x & 1 and not s.mask >> y & 1 for s in t.opens)


def pair_separated_t2(t: Topology, x: int, y: int) -> bool:
    """x and y have disjoint open neighbourhoods."""
    for u in t.opens:
        if not u.mask >> x & 1:
            continue
        for v in t.opens:
            if v.mask >> y & 1 and u.mask & v.mask == 0:
                return True
    return False


def is_t0(t: Topology) -> bool:
    n = t.space.n
    return all(pair_separated_t0(t, x, y) for x in range(n) for y in range(x + 1, n))


def is_t1(t: Topology) -> bool:
    n = t.space.n
    return all(pair_separated_t1(t, x, y) for x in range(n) for y in range(n) if x != y)


def is_t2(t: Topology) -> bool:
    n = t.space.n
    return all(pair_separated_t2(t, x, y) for x in range(n) for y in range(x + 1, n))


# --- continuity and convergence -------------------------------------------

def is_continuous(f: PointMap, td: Topology, tc: Topology) -> bool:
    """Preimage of every codomain open is open in the domain."""
    if not f.domain.compatible(td.space) or not f.codomain.compatible(tc.space):
        raise SpaceMismatchError("map spaces do not match the topologies")
    domain_opens = set(td.open_masks)
    return all(f.preimage_mask(s.mask) in domain_opens for s in tc.opens)


def converges_topologically(s: SequenceSpec, t: Topology, x: int,
                            horizon: int = 100_000) -> bool:
    """Whether the sequence is eventually inside the minimal neighbourhood of x.

    The verdict is decided exactly from the rule structure; the horizon only
    bounds a direct-evaluation cross-check of a positive verdict.
    """
    if not s.space.compatible(t.space):
        raise SpaceMismatchError("sequence and topology spaces differ")
    t.space.check_point(x)
    good = minimal_neighborhood(t, x).mask
    decided = _tails.eventually_in(s, good)
    _tails.assert_tail_consistent(s, good, decided, horizon)
    return decided


# --- exhaustive enumeration -------------------------------------------------

def _check_enum_bound(n: int, limit: int) -> None:
    if not 1 <= n <= limit:
        raise ValueError(f"enumeration supports 1..{limit} points, got {n}")


def enumerate_preorders(n: int):
    """Every preorder on n labelled points, ascending by relation rows."""
    _check_enum_bound(n, ENUM_MAX_POINTS)
    space = PointSpace(n)
    rows_arr = _kernels.preorder_rows(n)
    rows_list = sorted(tuple(int(v) for v in rows) for rows in rows_arr)
    for rows in rows_list:
        yield Preorder(space, rows)


def enumerate_topologies(n: int, method: str = "auto"):
    """Every labelled topology on n points, sorted by canonical document.

    The subset-family route filters all 2^(2^n) candidate families (n <= 4);
    the preorder route takes up-sets of enumerated preorders (n <= 5).  Both
    yield the same stream where both apply.
    """
    if method == "auto":
        method = "families" if n <= FAMILY_ROUTE_MAX_POINTS else "preorders"
    space = PointSpace(n)
    if method == "families":
        _check_enum_bound(n, FAMILY_ROUTE_MAX_POINTS)
        tops = []
        for fam in _kernels.closed_family_masks(n):
            fam = int(fam)
            masks = [u for u in range(1 << n) if fam >> u & 1]
            tops.append(Topology.from_masks(space, masks))
    elif method == "preorders":
        _check_enum_bound(n, ENUM_MAX_POINTS)
        tops = [alexandrov_topology(p) for p in enumerate_preorders(n)]
    else:
        raise ValueError(f"unknown enumeration method {method!r}")
    tops.sort(key=serialize)
    yield from tops


def count_topologies(n: int, method: str = "auto") -> int:
    return sum(1 for _ in enumerate_topologies(n, method))


def count_preorders(n: int) -> int:
    return sum(1 for _ in enumerate_preorders(n))
