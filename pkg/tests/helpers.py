"""Shared builders and independent oracles for the test suite."""

from itertools import combinations_with_replacement

from qmtop.core import (
    FiniteSet,
    PointSpace,
    QuasiFamily,
    ResidueClasses,
    SequenceSpec,
    Topology,
    freeze_matrix,
)
from qmtop.topology import Preorder, enumerate_preorders, enumerate_topologies


def sierpinski() -> Topology:
    return Topology.from_masks(PointSpace(2), [0b00, 0b10, 0b11])


def preorder_distance_matrix(p: Preorder) -> tuple[tuple[int, ...], ...]:
    """d(x, y) = 0 iff x is below y."""
    n = p.space.n
    return freeze_matrix([[0 if p.rows[x] >> y & 1 else 1 for y in range(n)]
                          for x in range(n)])


def preorder_family(p: Preorder, label: str = "i0") -> QuasiFamily:
    return QuasiFamily(p.space, (label,), (preorder_distance_matrix(p),))


def small_index_families(n: int, max_indices: int = 2):
    """Every family of one or two independent preorder coordinates on n points."""
    mats = [preorder_distance_matrix(p) for p in enumerate_preorders(n)]
    space = PointSpace(n)
    for count in range(1, max_indices + 1):
        for chosen in combinations_with_replacement(range(len(mats)), count):
            yield QuasiFamily(space, tuple(f"i{k}" for k in range(count)),
                              tuple(mats[i] for i in chosen))


def eventually_periodic(space: PointSpace, prefix: tuple[int, ...],
                        period: tuple[int, ...]) -> SequenceSpec:
    """Sequence with the given prefix, then the period repeated forever."""
    assert 1 <= len(period) <= 2
    rules = [(FiniteSet((k + 1,)), v) for k, v in enumerate(prefix)]
    if len(period) == 1:
        return SequenceSpec(space, period[0], tuple(rules))
    first_pos = len(prefix) + 1
    rules.append((ResidueClasses(2, (first_pos % 2,)), period[0]))
    return SequenceSpec(space, period[1], tuple(rules))


def all_eventually_periodic(space: PointSpace, max_prefix: int = 2,
                            max_period: int = 2):
    """Every sequence with prefix length <= max_prefix, period <= max_period."""
    points = tuple(space.points())

    def tuples(length):
        if length == 0:
            return [()]
        shorter = tuples(length - 1)
        return [t + (p,) for t in shorter for p in points]

    out = []
    for plen in range(max_prefix + 1):
        for prefix in tuples(plen):
            for clen in range(1, max_period + 1):
                for period in tuples(clen):
                    out.append(eventually_periodic(space, prefix, period))
    return out


def brute_minimal_topology(space: PointSpace, subbase_masks) -> frozenset:
    """Oracle: intersect the open families of every topology containing the
    subbase (enumerated independently of the closure code under test)."""
    keep = None
    for t in enumerate_topologies(space.n, method="families"):
        opens = set(t.open_masks)
        if all(m in opens for m in subbase_masks):
            keep = opens if keep is None else keep & opens
    assert keep is not None
    return frozenset(keep)
