"""Value semigroups, sets of positives, and the distance-to-topology
construction over them, together with the {0,1}^I instance that a
quasimetric family lifts to.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import (
    InvariantViolation,
    PointSet,
    PointSpace,
    PositiveSet,
    QuasiFamily,
    Topology,
    ValueSemigroup,
)
from .topology import check_topology

SEMIGROUP_MAX_SIZE = 64
LIFT_MAX_INDICES = 6


@dataclass(frozen=True, slots=True)
class AxiomViolation:
    axiom: str
    witness: tuple[int, ...]

    def __str__(self) -> str:
        return f"{self.axiom} fails at {self.witness}"

    def to_json(self) -> dict:
        return {"axiom": self.axiom, "witness": list(self.witness)}


def _leq_table(sg: ValueSemigroup) -> list[list[bool]]:
    m = sg.size
    return [[any(sg.add[a][x] == b for x in range(m)) for b in range(m)]
            for a in range(m)]


def _meet_of(sg: ValueSemigroup, leq, a: int, b: int) -> int | None:
    lower = [c for c in range(sg.size) if leq[c][a] and leq[c][b]]
    for c in lower:
        if all(leq[d][c] for d in lower):
            return c
    return None


def check_value_semigroup(candidate: ValueSemigroup) -> list[AxiomViolation]:
    """Brute-force verification of every value-semigroup axiom.

    Covers the semigroup laws, the identity and the absorbing element, then
    antisymmetry of the derived order, unique halving, existence of binary
    meets, and distributivity of addition over meets.  Violations carry the
    witness tuple that reproduces them.
    """
    m = candidate.size
    if m > SEMIGROUP_MAX_SIZE:
        raise ValueError(f"carrier larger than {SEMIGROUP_MAX_SIZE}")
    add = candidate.add
    zero, inf = candidate.zero, candidate.infinity
    out = []
    if inf == zero:
        out.append(AxiomViolation("infinity-distinct-from-zero", (inf,)))
    for a in range(m):
        for b in range(m):
            if add[a][b] != add[b][a]:
                out.append(AxiomViolation("commutativity", (a, b)))
            for c in range(m):
                if add[add[a][b]][c] != add[a][add[b][c]]:
                    out.append(AxiomViolation("associativity", (a, b, c)))
    for a in range(m):
        if add[zero][a] != a:
            out.append(AxiomViolation("identity", (a,)))
        if add[inf][a] != inf:
            out.append(AxiomViolation("absorbing", (a,)))
    leq = _leq_table(candidate)
    for a in range(m):
        for b in range(m):
            if a != b and leq[a][b] and leq[b][a]:
                out.append(AxiomViolation("antisymmetry", (a, b)))
    for a in range(m):
        halves = tuple(b for b in range(m) if add[b][b] == a)
        if len(halves) != 1:
            out.append(AxiomViolation("unique-halving", (a,) + halves))
    meets: dict[tuple[int, int], int] = {}
    for a in range(m):
        for b in range(a, m):
            meet = _meet_of(candidate, leq, a, b)
            if meet is None:
                out.append(AxiomViolation("meet-exists", (a, b)))
            else:
                meets[a, b] = meets[b, a] = meet
    for a in range(m):
        for b in range(m):
            if (a, b) not in meets:
                continue
            for c in range(m):
                left = add[meets[a, b]][c]
                right = meets.get((add[a][c], add[b][c]))
                if right is not None and left != right:
                    out.append(AxiomViolation("meet-distributivity", (a, b, c)))
    return out


def check_positives(p: PositiveSet) -> list[AxiomViolation]:
    """Brute-force verification of the set-of-positives axioms.

    Assumes the underlying semigroup is valid (meets and halves exist);
    checks meet-closure, upward closure, closure under halving, and the
    order-separation property.
    """
    sg = p.semigroup
    m = sg.size
    leq = _leq_table(sg)
    members = set(p.members)
    out = []
    for r in members:
        for s in members:
            meet = _meet_of(sg, leq, r, s)
            if meet is not None and meet not in members:
                out.append(AxiomViolation("meet-closed", (r, s, meet)))
    for r in members:
        for a in range(m):
            if leq[r][a] and a not in members:
                out.append(AxiomViolation("upward-closed", (r, a)))
    for r in members:
        halves = [b for b in range(m) if sg.add[b][b] == r]
        for b in halves:
            if b not in members:
                out.append(AxiomViolation("halving-closed", (r, b)))
    for a in range(m):
        for b in range(m):
            if all(leq[a][sg.add[b][r]] for r in members) and not leq[a][b]:
                out.append(AxiomViolation("order-separation", (a, b)))
    return out


# ---------------------------------------------------------------------------
# Continuity spaces


@dataclass(frozen=True, slots=True)
class ContinuitySpace:
    space: PointSpace
    semigroup: ValueSemigroup
    positives: PositiveSet
    dist: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = self.space.n
        if self.positives.semigroup != self.semigroup:
            raise InvariantViolation("positives belong to a different semigroup")
        if len(self.dist) != n or any(len(row) != n for row in self.dist):
            raise InvariantViolation("distance table shape mismatch")
        m = self.semigroup.size
        if any(not 0 <= e < m for row in self.dist for e in row):
            raise InvariantViolation("distance entry outside the carrier")


def check_continuity_space(cs: ContinuitySpace) -> list[AxiomViolation]:
    """Zero self-distance and the triangle inequality under the derived order."""
    sg = cs.semigroup
    leq = _leq_table(sg)
    n = cs.space.n
    out = []
    for x in range(n):
        if cs.dist[x][x] != sg.zero:
            out.append(AxiomViolation("zero-self-distance", (x,)))
    for x in range(n):
        for y in range(n):
            for z in range(n):
                if not leq[cs.dist[x][z]][sg.add[cs.dist[x][y]][cs.dist[y][z]]]:
                    out.append(AxiomViolation("triangle", (x, y, z)))
    return out


def ball_r(cs: ContinuitySpace, x: int, r: int) -> PointSet:
    """Points within distance r of x under the derived order."""
    cs.space.check_point(x)
    if r not in cs.positives.members:
        raise ValueError(f"radius {r} is not a positive element")
    sg = cs.semigroup
    mask = 0
    for y in cs.space.points():
        if sg.leq(cs.dist[x][y], r):
            mask |= 1 << y
    return PointSet(cs.space, mask)


def to_topology_kopperman(cs: ContinuitySpace) -> Topology:
    """Opens are the sets containing a positive-radius ball around each point."""
    n = cs.space.n
    balls = {(x, r): ball_r(cs, x, r).mask
             for x in range(n) for r in cs.positives.members}
    opens = []
    for u in range(1 << n):
        if all(not u >> x & 1
               or any(balls[x, r] & ~u == 0 for r in cs.positives.members)
               for x in range(n)):
            opens.append(u)
    t = Topology.from_masks(cs.space, opens)
    violations = check_topology(cs.space, t.opens)
    if violations:
        raise AssertionError(f"generated opens fail closure: {violations[0]}")
    return t


def lift_quasifamily(q: QuasiFamily) -> ContinuitySpace:
    """The {0,1}^I instance of a family: carrier 2^|I| under coordinatewise
    max, all elements positive, distance the vector of coordinate distances.

    The output is re-verified against every semigroup, positives, and
    distance axiom before being returned.
    """
    k = len(q.indices)
    if k > LIFT_MAX_INDICES:
        raise ValueError(f"at most {LIFT_MAX_INDICES} indices supported, got {k}")
    size = 1 << k
    labels = tuple("".join("1" if e >> i & 1 else "0" for i in range(k)) or "0"
                   for e in range(size))
    add = tuple(tuple(a | b for b in range(size)) for a in range(size))
    sg = ValueSemigroup(labels, add, zero=0, infinity=size - 1)
    positives = PositiveSet(sg, tuple(range(size)))
    n = q.space.n
    dist = tuple(
        tuple(sum(1 << i for i, m in enumerate(q.matrices) if m[x][y]) for y in range(n))
        for x in range(n))
    cs = ContinuitySpace(q.space, sg, positives, dist)
    problems = (check_value_semigroup(sg) + check_positives(positives)
                + check_continuity_space(cs))
    if problems:
        raise AssertionError(f"lifted structure fails an axiom: {problems[0]}")
    return cs


def semigroup_zero_one_pow(k: int) -> ValueSemigroup:
    """The {0,1}^k carrier under coordinatewise max."""
    size = 1 << k
    labels = tuple("".join("1" if e >> i & 1 else "0" for i in range(k)) or "0"
                   for e in range(size))
    add = tuple(tuple(a | b for b in range(size)) for a in range(size))
    return ValueSemigroup(labels, add, zero=0, infinity=size - 1)
