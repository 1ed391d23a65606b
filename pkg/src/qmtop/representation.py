"""From a topology to its quasimetric family and back, plus the exhaustive
search for families where a literal separation condition and the direct
axiom disagree.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations_with_replacement

from . import qmetric
from .core import PointSet, PointSpace, QuasiFamily, Topology, freeze_matrix
from .topology import (
    enumerate_preorders,
    pair_separated_t0,
    pair_separated_t1,
    pair_separated_t2,
)

METRIC_PREDICATES = qmetric.SEP_MODES
DIRECT_PREDICATES = ("t0", "t1", "t2")


@dataclass(frozen=True, slots=True)
class CanonicalFamily(QuasiFamily):
    """The family indexed by the opens of a topology; the index for an open
    U measures exactly the failures of "in U implies in U"."""

    source: Topology


def _open_label(u: PointSet) -> str:
    return json.dumps(u.members(), separators=(",", ":"))


def d_U(t: Topology, u: PointSet, x: int, y: int) -> int:
    """1 iff x lies in the open and y escapes it.

    For x inside the open, the zero-set of d_U(x, .) recovers the open
    exactly; that identity is asserted on every call.
    """
    if u.space != t.space or not t.is_open(u):
        raise ValueError("u must be an open set of the topology")
    t.space.check_point(x)
    t.space.check_point(y)
    value = 1 if (u.mask >> x & 1 and not u.mask >> y & 1) else 0
    if u.mask >> x & 1:
        zero_set = sum(1 << z for z in t.space.points()
                       if not (u.mask >> x & 1 and not u.mask >> z & 1))
        if zero_set != u.mask:
            raise AssertionError("zero-set of d_U(x, .) failed to recover the open")
    return value


def p_U(t: Topology, u: PointSet, x: int, y: int) -> int:
    """Indicator of the open at x times indicator of its complement at y.

    Asserted pointwise equal to `d_U`, not merely equivalent.
    """
    if u.space != t.space or not t.is_open(u):
        raise ValueError("u must be an open set of the topology")
    value = (1 if u.mask >> x & 1 else 0) * (1 if not u.mask >> y & 1 else 0)
    if value != d_U(t, u, x, y):
        raise AssertionError("p_U and d_U disagree")
    return value


def canonical_family(t: Topology) -> CanonicalFamily:
    """One {0,1} matrix per open; entry [x][y] is 0 iff x in U implies y in U."""
    n = t.space.n
    labels = []
    matrices = []
    for u in t.opens:
        labels.append(_open_label(u))
        matrices.append(freeze_matrix(
            [[1 if (u.mask >> x & 1 and not u.mask >> y & 1) else 0
              for y in range(n)] for x in range(n)]))
    return CanonicalFamily(t.space, tuple(labels), tuple(matrices), t)


@dataclass(frozen=True, slots=True)
class RoundtripReport:
    equal: bool
    missing: tuple[PointSet, ...]
    extra: tuple[PointSet, ...]


def roundtrip(t: Topology) -> RoundtripReport:
    """Regenerate the topology from its canonical family and compare exactly."""
    regenerated = qmetric.to_topology(canonical_family(t))
    original = set(t.open_masks)
    back = set(regenerated.open_masks)
    missing = tuple(PointSet(t.space, m) for m in sorted(original - back))
    extra = tuple(PointSet(t.space, m) for m in sorted(back - original))
    return RoundtripReport(not missing and not extra, missing, extra)


# ---------------------------------------------------------------------------
# Discrepancy search


def _pair_predicate(name: str):
    if name in METRIC_PREDICATES:
        return lambda q, t, x, y: qmetric.sep_pair(q, name, x, y)
    if name == "t0":
        return lambda q, t, x, y: pair_separated_t0(t, x, y)
    if name == "t1":
        return lambda q, t, x, y: pair_separated_t1(t, x, y)
    if name == "t2":
        return lambda q, t, x, y: pair_separated_t2(t, x, y)
    raise ValueError(f"unknown predicate {name!r}")


def discrepancy_pairs(q: QuasiFamily, pred_a: str, pred_b: str) -> list[dict]:
    """Ordered pairs at which the two predicates disagree on this family."""
    fa = _pair_predicate(pred_a)
    fb = _pair_predicate(pred_b)
    t = qmetric.to_topology(q)
    out = []
    n = q.space.n
    for x in range(n):
        for y in range(n):
            if x == y:
                continue
            va, vb = fa(q, t, x, y), fb(q, t, x, y)
            if va != vb:
                out.append({"pair": [x, y], pred_a: va, pred_b: vb})
    return out


def _family_candidates(n: int, max_indices: int):
    """Families of independent preorder-induced matrices in canonical order.

    A {0,1} matrix is a quasimetric iff its zero-entry relation is a
    preorder, so enumerating per-index preorders covers exactly the valid
    families.  Matrices are ordered by their rows read as distance masks
    ({y : d(x,y) = 1}), smallest first, and families are ordered by index
    count then lexicographically over their sorted matrix keys.
    """
    space = PointSpace(n)
    full = space.full_mask
    mats = []
    for p in enumerate_preorders(n):
        key = tuple(full & ~row for row in p.rows)
        matrix = freeze_matrix([[key[x] >> y & 1 for y in range(n)] for x in range(n)])
        mats.append((key, matrix))
    mats.sort(key=lambda km: km[0])
    for count in range(1, max_indices + 1):
        for chosen in combinations_with_replacement(mats, count):
            labels = tuple(f"i{k}" for k in range(count))
            yield QuasiFamily(space, labels, tuple(m for _, m in chosen))


def find_discrepancy(pred_a: str, pred_b: str, n: int,
                     max_indices: int) -> QuasiFamily | None:
    """First family (smallest point count, fewest indices, smallest matrices)
    where the two predicates disagree at some ordered pair of distinct points.
    """
    _pair_predicate(pred_a)
    _pair_predicate(pred_b)
    if not 1 <= n <= 4:
        raise ValueError("discrepancy search supports 1..4 points")
    if not 1 <= max_indices <= 3:
        raise ValueError("discrepancy search supports 1..3 indices")
    for points in range(1, n + 1):
        for q in _family_candidates(points, max_indices):
            if discrepancy_pairs(q, pred_a, pred_b):
                return q
    return None
