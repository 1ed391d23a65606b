import pytest

from qmtop.core import (
    PointMap,
    PointSpace,
    ResidueClasses,
    SequenceSpec,
    SpaceMismatchError,
    Squares,
    Topology,
)
from qmtop.topology import (
    alexandrov_topology,
    check_topology,
    converges_topologically,
    enumerate_preorders,
    enumerate_topologies,
    generate_from_subbase,
    is_continuous,
    is_t0,
    is_t1,
    is_t2,
    minimal_neighborhood,
    specialization_preorder,
)

from helpers import brute_minimal_topology, sierpinski


def _discrete(n):
    return Topology.from_masks(PointSpace(n), range(1 << n))


def _indiscrete(n):
    space = PointSpace(n)
    return Topology.from_masks(space, [0, space.full_mask])


def test_check_topology_examples():
    space = PointSpace(2)
    assert check_topology(space, sierpinski().opens) == []
    bad = [space.subset([]), space.subset([0]), space.subset([1])]
    kinds = {v.kind for v in check_topology(space, bad)}
    assert kinds == {"no-full-set", "union-escape"}
    assert check_topology(PointSpace(3), _discrete(3).opens) == []


def test_generate_from_subbase_examples():
    space = PointSpace(3)
    sub = [space.subset([0, 2]), space.subset([1, 2])]
    t = generate_from_subbase(space, sub)
    assert set(t.open_masks) == {0b000, 0b100, 0b101, 0b110, 0b111}
    assert set(t.open_masks) == brute_minimal_topology(space, [s.mask for s in sub])

    assert generate_from_subbase(space, []).open_masks == (0, 0b111)
    singletons = [space.subset([p]) for p in range(3)]
    assert generate_from_subbase(space, singletons).open_masks == _discrete(3).open_masks


def test_generate_from_subbase_idempotent_on_topologies():
    for n in (1, 2, 3):
        for t in enumerate_topologies(n):
            assert generate_from_subbase(t.space, t.opens).open_masks == t.open_masks


def test_minimal_neighborhood_examples():
    t = sierpinski()
    assert minimal_neighborhood(t, 1).members() == [1]
    assert minimal_neighborhood(t, 0).members() == [0, 1]
    assert minimal_neighborhood(_discrete(3), 2).members() == [2]


def test_minimal_neighborhood_is_least_open():
    for t in enumerate_topologies(3):
        opens = set(t.open_masks)
        for x in range(3):
            m = minimal_neighborhood(t, x)
            assert m.mask in opens and m.mask >> x & 1
            for s in t.opens:
                if s.mask >> x & 1:
                    assert m.mask & ~s.mask == 0


def test_specialization_preorder_examples():
    rel = specialization_preorder(sierpinski())
    assert rel.matrix == ((1, 1), (0, 1))
    assert specialization_preorder(_discrete(2)).matrix == ((1, 0), (0, 1))
    assert specialization_preorder(_indiscrete(2)).matrix == ((1, 1), (1, 1))


def test_separation_examples():
    t = sierpinski()
    assert (is_t0(t), is_t1(t), is_t2(t)) == (True, False, False)
    for n in (2, 3, 4):
        d = _discrete(n)
        assert is_t0(d) and is_t1(d) and is_t2(d)
    i = _indiscrete(2)
    assert not is_t0(i) and not is_t1(i) and not is_t2(i)


def test_separation_chain_and_finite_t1_is_discrete():
    for n in (1, 2, 3, 4):
        discrete_masks = _discrete(n).open_masks
        for t in enumerate_topologies(n):
            t0, t1, t2 = is_t0(t), is_t1(t), is_t2(t)
            assert not t1 or t0
            assert not t2 or t1
            assert t1 == t2 == (t.open_masks == discrete_masks)


def test_is_continuous_examples():
    t = sierpinski()
    ident = PointMap(t.space, t.space, (0, 1))
    assert is_continuous(ident, t, t)
    assert not is_continuous(ident, _indiscrete(2), t)
    for c in (0, 1):
        const = PointMap(t.space, t.space, (c, c))
        assert is_continuous(const, _indiscrete(2), t)
    with pytest.raises(SpaceMismatchError):
        is_continuous(PointMap(PointSpace(3), t.space, (0, 0, 1)), t, t)


def test_continuity_identity_and_composition_two_points():
    topologies = list(enumerate_topologies(2))
    space = topologies[0].space
    maps = [PointMap(space, space, (a, b)) for a in range(2) for b in range(2)]
    for t in topologies:
        assert is_continuous(PointMap(space, space, (0, 1)), t, t)
    for ta in topologies:
        for tb in topologies:
            for tc in topologies:
                for f in maps:
                    for g in maps:
                        if is_continuous(f, ta, tb) and is_continuous(g, tb, tc):
                            gf = PointMap(space, space, tuple(g(f(x)) for x in range(2)))
                            assert is_continuous(gf, ta, tc)


def test_converges_topologically_examples():
    t = sierpinski()
    space = t.space
    # constant at 1 converges to both points here: the only neighbourhood
    # of 0 is the whole space
    const1 = SequenceSpec(space, 1)
    assert converges_topologically(const1, t, 1)
    assert converges_topologically(const1, t, 0)
    assert not converges_topologically(SequenceSpec(space, 0), t, 1)
    alternating = SequenceSpec(space, 1, ((ResidueClasses(2, (1,)), 0),))
    assert converges_topologically(alternating, t, 0)
    assert not converges_topologically(alternating, t, 1)
    squares_dip = SequenceSpec(space, 1, ((Squares(), 0),))
    assert not converges_topologically(squares_dip, t, 1)


def test_constant_sequence_converges_everywhere():
    for t in enumerate_topologies(3):
        for x in range(3):
            assert converges_topologically(SequenceSpec(t.space, x), t, x, horizon=500)


def test_enumeration_counts_and_bounds():
    assert [sum(1 for _ in enumerate_topologies(n)) for n in (1, 2, 3)] == [1, 4, 29]
    assert [sum(1 for _ in enumerate_preorders(n)) for n in (1, 2, 3)] == [1, 4, 29]
    with pytest.raises(ValueError):
        list(enumerate_topologies(5, method="families"))
    with pytest.raises(ValueError):
        list(enumerate_preorders(6))
    with pytest.raises(ValueError):
        list(enumerate_topologies(0))


def test_enumeration_methods_agree():
    for n in (1, 2, 3):
        a = [t.open_masks for t in enumerate_topologies(n, method="families")]
        b = [t.open_masks for t in enumerate_topologies(n, method="preorders")]
        assert a == b


def test_alexandrov_and_specialization_are_inverse():
    for n in (1, 2, 3):
        for p in enumerate_preorders(n):
            assert specialization_preorder(alexandrov_topology(p)) == p
        for t in enumerate_topologies(n):
            assert alexandrov_topology(specialization_preorder(t)).open_masks == t.open_masks


def test_five_point_enumeration_count():
    assert sum(1 for _ in enumerate_preorders(5)) == 6942
    assert sum(1 for _ in enumerate_topologies(5)) == 6942
