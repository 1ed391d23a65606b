"""Foundational value types and the JSON document format.

Points of an n-point space are the indices 0..n-1; every subset is an
n-bit mask (bit p set iff point p is a member).  All values here are
immutable and hashable, so they are safe to share across workers.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterator, Union


MAX_POINTS = 16


class DocumentError(ValueError):
    """Base class for document parsing failures."""


class DocumentSyntaxError(DocumentError):
    """Malformed document: bad JSON, wrong shapes, unknown kinds."""


class InvariantViolation(DocumentError):
    """Well-formed document whose payload breaks a promised invariant."""

    def __init__(self, message: str, violations: tuple = ()):
        super().__init__(message)
        self.violations = violations


class SpaceMismatchError(ValueError):
    """Operands live over different point spaces."""


# ---------------------------------------------------------------------------
# Spaces, point sets, topologies, quasimetric families


@dataclass(frozen=True, slots=True)
class PointSpace:
    """A finite carrier of n points, optionally labelled for presentation."""

    n: int
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        if not 1 <= self.n <= MAX_POINTS:
            raise InvariantViolation(f"point count must be in 1..{MAX_POINTS}, got {self.n}")
        if self.labels is not None:
            if len(self.labels) != self.n:
                raise InvariantViolation("label count differs from point count")
            if len(set(self.labels)) != self.n:
                raise InvariantViolation("labels must be pairwise distinct")

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def points(self) -> range:
        return range(self.n)

    def compatible(self, other: "PointSpace") -> bool:
        """Labels are presentation only; spaces interoperate by cardinality."""
        return self.n == other.n

    def subset(self, members) -> "PointSet":
        mask = 0
        for p in members:
            self.check_point(p)
            mask |= 1 << p
        return PointSet(self, mask)

    def check_point(self, p: int) -> None:
        if not 0 <= p < self.n:
            raise InvariantViolation(f"point {p} outside space of {self.n} points")


@dataclass(frozen=True, slots=True)
class PointSet:
    """A subset of a point space, stored as a bit mask."""

    space: PointSpace
    mask: int

    def __post_init__(self):
        if self.mask & ~self.space.full_mask:
            raise InvariantViolation(f"mask {self.mask:#x} has bits outside the space")

    def members(self) -> list[int]:
        return [p for p in self.space.points() if self.mask >> p & 1]

    def __contains__(self, p: int) -> bool:
        return 0 <= p < self.space.n and bool(self.mask >> p & 1)

    def __iter__(self) -> Iterator[int]:
        return iter(self.members())

    def __len__(self) -> int:
        return self.mask.bit_count()

    def _same_space(self, other: "PointSet") -> None:
        if not self.space.compatible(other.space):
            raise SpaceMismatchError("point sets live over different spaces")

    def union(self, other: "PointSet") -> "PointSet":
        self._same_space(other)
        return PointSet(self.space, self.mask | other.mask)

    def intersection(self, other: "PointSet") -> "PointSet":
        self._same_space(other)
        return PointSet(self.space, self.mask & other.mask)

    def complement(self) -> "PointSet":
        return PointSet(self.space, self.space.full_mask & ~self.mask)

    def issubset(self, other: "PointSet") -> bool:
        self._same_space(other)
        return self.mask & ~other.mask == 0

    __or__ = union
    __and__ = intersection


@dataclass(frozen=True, slots=True)
class Topology:
    """A family of open sets over a finite space, sorted by mask value.

    Construction does not verify the closure axioms; `topology.check_topology`
    does, and `parse_document` runs it by default.
    """

    space: PointSpace
    opens: tuple[PointSet, ...]

    @classmethod
    def from_masks(cls, space: PointSpace, masks) -> "Topology":
        ordered = tuple(sorted(set(masks)))
        return cls(space, tuple(PointSet(space, m) for m in ordered))

    @property
    def open_masks(self) -> tuple[int, ...]:
        return tuple(s.mask for s in self.opens)

    def is_open(self, s: PointSet) -> bool:
        return s.mask in set(self.open_masks)


@dataclass(frozen=True, slots=True)
class QuasiFamily:
    """An indexed family of n x n matrices with entries in {0, 1}.

    `matrices[k][x][y]` is the distance from x to y under index k.  The
    quasimetric axioms (zero diagonal, triangle inequality) are verified by
    `qmetric.check_quasifamily`; construction only checks shapes.
    """

    space: PointSpace
    indices: tuple[str, ...]
    matrices: tuple[tuple[tuple[int, ...], ...], ...]

    def __post_init__(self):
        if len(set(self.indices)) != len(self.indices):
            raise InvariantViolation("index labels must be distinct")
        if len(self.matrices) != len(self.indices):
            raise InvariantViolation("one matrix per index required")
        n = self.space.n
        for label, m in zip(self.indices, self.matrices):
            if len(m) != n or any(len(row) != n for row in m):
                raise InvariantViolation(f"matrix for index {label!r} is not {n}x{n}")
            if any(e not in (0, 1) for row in m for e in row):
                raise InvariantViolation(f"matrix for index {label!r} has entries outside {{0,1}}")

    def matrix(self, label: str) -> tuple[tuple[int, ...], ...]:
        try:
            return self.matrices[self.indices.index(label)]
        except ValueError:
            raise KeyError(f"unknown index {label!r}") from None

    def canonical(self) -> "QuasiFamily":
        """Indices sorted by label, matrices permuted consistently."""
        order = sorted(range(len(self.indices)), key=lambda k: self.indices[k])
        return QuasiFamily(
            self.space,
            tuple(self.indices[k] for k in order),
            tuple(self.matrices[k] for k in order),
        )


def freeze_matrix(rows) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(int(e) for e in row) for row in rows)


# ---------------------------------------------------------------------------
# Describable index sets and sequences


@dataclass(frozen=True, slots=True)
class FiniteSet:
    members: tuple[int, ...]

    def __post_init__(self):
        if any(k < 0 for k in self.members):
            raise InvariantViolation("finite index sets hold naturals only")
        object.__setattr__(self, "members", tuple(sorted(set(self.members))))

    def contains(self, k: int) -> bool:
        return k in self.members


@dataclass(frozen=True, slots=True)
class ResidueClasses:
    modulus: int
    residues: tuple[int, ...]

    def __post_init__(self):
        if self.modulus < 1:
            raise InvariantViolation("modulus must be at least 1")
        if any(not 0 <= r < self.modulus for r in self.residues):
            raise InvariantViolation("residues must lie in [0, modulus)")
        object.__setattr__(self, "residues", tuple(sorted(set(self.residues))))

    def contains(self, k: int) -> bool:
        return k % self.modulus in self.residues


@dataclass(frozen=True, slots=True)
class Squares:
    def contains(self, k: int) -> bool:
        r = _isqrt(k)
        return r * r == k


@dataclass(frozen=True, slots=True)
class PowersOfTwo:
    def contains(self, k: int) -> bool:
        return k >= 1 and k & (k - 1) == 0


@dataclass(frozen=True, slots=True)
class Complement:
    of: "IndexSetDescriptor"

    def contains(self, k: int) -> bool:
        return not self.of.contains(k)


@dataclass(frozen=True, slots=True)
class UnionSet:
    parts: tuple["IndexSetDescriptor", ...]

    def contains(self, k: int) -> bool:
        return any(p.contains(k) for p in self.parts)


IndexSetDescriptor = Union[FiniteSet, ResidueClasses, Squares, PowersOfTwo, Complement, UnionSet]


def _isqrt(k: int) -> int:
    import math

    return math.isqrt(k) if k >= 0 else -1


@dataclass(frozen=True, slots=True)
class SequenceSpec:
    """A finitely-described infinite sequence of points.

    The value at position k (1-based) is the point of the first rule whose
    index set contains k, falling back to `default`.  Rule order therefore
    resolves overlaps.
    """

    space: PointSpace
    default: int
    rules: tuple[tuple[IndexSetDescriptor, int], ...] = ()

    def __post_init__(self):
        self.space.check_point(self.default)
        for _, p in self.rules:
            self.space.check_point(p)

    def value_at(self, k: int) -> int:
        for ds, p in self.rules:
            if ds.contains(k):
                return p
        return self.default


@dataclass(frozen=True, slots=True)
class DirectedNet:
    """A net over a finite directed index set.

    `order[a][b] == 1` means element a precedes element b; `assignment[a]`
    is the point the net takes at element a.
    """

    space: PointSpace
    elements: tuple[str, ...]
    order: tuple[tuple[int, ...], ...]
    assignment: tuple[int, ...]

    def __post_init__(self):
        m = len(self.elements)
        if len(set(self.elements)) != m:
            raise InvariantViolation("net element names must be distinct")
        if len(self.order) != m or any(len(row) != m for row in self.order):
            raise InvariantViolation("order matrix shape mismatch")
        if len(self.assignment) != m:
            raise InvariantViolation("assignment length mismatch")
        for p in self.assignment:
            self.space.check_point(p)
        for a in range(m):
            if not self.order[a][a]:
                raise InvariantViolation(f"net order not reflexive at element {a}")
        for a in range(m):
            for b in range(m):
                if self.order[a][b]:
                    for c in range(m):
                        if self.order[b][c] and not self.order[a][c]:
                            raise InvariantViolation(f"net order not transitive at ({a},{b},{c})")
        for a in range(m):
            for b in range(m):
                if not any(self.order[a][c] and self.order[b][c] for c in range(m)):
                    raise InvariantViolation(f"elements {a},{b} have no upper bound")

    def successors(self, a: int) -> list[int]:
        return [b for b in range(len(self.elements)) if self.order[a][b]]


@dataclass(frozen=True, slots=True)
class PointMap:
    """A total function between two finite spaces."""

    domain: PointSpace
    codomain: PointSpace
    values: tuple[int, ...]

    def __post_init__(self):
        if len(self.values) != self.domain.n:
            raise InvariantViolation("map must assign a value to every domain point")
        for v in self.values:
            self.codomain.check_point(v)

    def __call__(self, p: int) -> int:
        return self.values[p]

    def preimage_mask(self, target_mask: int) -> int:
        mask = 0
        for x in self.domain.points():
            if target_mask >> self.values[x] & 1:
                mask |= 1 << x
        return mask


# ---------------------------------------------------------------------------
# Semigroup documents (checked in `continuity`)


@dataclass(frozen=True, slots=True)
class ValueSemigroup:
    """A finite addition table with designated zero and infinity.

    The value-semigroup axioms are verified by
    `continuity.check_value_semigroup`, not at construction.
    """

    elements: tuple[str, ...]
    add: tuple[tuple[int, ...], ...]
    zero: int
    infinity: int

    def __post_init__(self):
        m = len(self.elements)
        if m == 0:
            raise InvariantViolation("semigroup carrier may not be empty")
        if len(set(self.elements)) != m:
            raise InvariantViolation("element labels must be distinct")
        if len(self.add) != m or any(len(row) != m for row in self.add):
            raise InvariantViolation("addition table shape mismatch")
        if any(not 0 <= e < m for row in self.add for e in row):
            raise InvariantViolation("addition table entry out of range")
        if not 0 <= self.zero < m or not 0 <= self.infinity < m:
            raise InvariantViolation("zero/infinity out of range")

    @property
    def size(self) -> int:
        return len(self.elements)

    def plus(self, a: int, b: int) -> int:
        return self.add[a][b]

    def leq(self, a: int, b: int) -> bool:
        """Derived order: a <= b iff a + x = b for some x."""
        return any(self.add[a][x] == b for x in range(self.size))


@dataclass(frozen=True, slots=True)
class PositiveSet:
    semigroup: ValueSemigroup
    members: tuple[int, ...]

    def __post_init__(self):
        for r in self.members:
            if not 0 <= r < self.semigroup.size:
                raise InvariantViolation("positive-set member out of range")
        object.__setattr__(self, "members", tuple(sorted(set(self.members))))


Document = Union[
    Topology, QuasiFamily, SequenceSpec, PointMap, DirectedNet, ValueSemigroup, PositiveSet
]


# ---------------------------------------------------------------------------
# Parsing


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise DocumentSyntaxError(message)


def _space_from(obj: dict, key: str = "n") -> PointSpace:
    _require(key in obj, f"missing {key!r}")
    n = obj[key]
    _require(isinstance(n, int) and not isinstance(n, bool), f"{key!r} must be an integer")
    labels = obj.get("labels")
    if labels is not None:
        _require(isinstance(labels, list) and all(isinstance(s, str) for s in labels),
                 "labels must be a list of strings")
        return PointSpace(n, tuple(labels))
    return PointSpace(n)


def _int_list(v, what: str) -> list[int]:
    _require(isinstance(v, list), f"{what} must be a list")
    _require(all(isinstance(e, int) and not isinstance(e, bool) for e in v),
             f"{what} must hold integers")
    return v


def _descriptor_from(obj) -> IndexSetDescriptor:
    _require(isinstance(obj, dict), "index set must be an object")
    t = obj.get("type")
    if t == "finite":
        return FiniteSet(tuple(_int_list(obj.get("members"), "members")))
    if t == "residues":
        _require(isinstance(obj.get("mod"), int), "residues set needs integer 'mod'")
        return ResidueClasses(obj["mod"], tuple(_int_list(obj.get("residues"), "residues")))
    if t == "squares":
        return Squares()
    if t == "powers_of_two":
        return PowersOfTwo()
    if t == "complement":
        return Complement(_descriptor_from(obj.get("of")))
    if t == "union":
        _require(isinstance(obj.get("of"), list), "union set needs a list 'of'")
        return UnionSet(tuple(_descriptor_from(p) for p in obj["of"]))
    raise DocumentSyntaxError(f"unknown index set type {t!r}")


def _descriptor_json(ds: IndexSetDescriptor) -> dict:
    if isinstance(ds, FiniteSet):
        return {"type": "finite", "members": list(ds.members)}
    if isinstance(ds, ResidueClasses):
        return {"type": "residues", "mod": ds.modulus, "residues": list(ds.residues)}
    if isinstance(ds, Squares):
        return {"type": "squares"}
    if isinstance(ds, PowersOfTwo):
        return {"type": "powers_of_two"}
    if isinstance(ds, Complement):
        return {"type": "complement", "of": _descriptor_json(ds.of)}
    if isinstance(ds, UnionSet):
        return {"type": "union", "of": [_descriptor_json(p) for p in ds.parts]}
    raise TypeError(f"not a descriptor: {ds!r}")


def parse_document(text: str, *, validate: bool = True) -> Document:
    """Decode a JSON document into its value.

    With `validate=True` (the default) the mathematical invariants the kind
    promises are verified (topology closure, quasimetric axioms, semigroup
    axioms) and an `InvariantViolation` is raised on failure.  Checker
    front ends parse with `validate=False` so violations become reportable
    data instead of parse errors.
    """
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentSyntaxError(f"invalid JSON: {e}") from None
    _require(isinstance(obj, dict), "document must be a JSON object")
    kind = obj.get("kind")

    if kind == "topology":
        space = _space_from(obj)
        _require(isinstance(obj.get("opens"), list), "topology needs a list of opens")
        masks = []
        for members in obj["opens"]:
            s = space.subset(_int_list(members, "open set"))
            masks.append(s.mask)
        if len(set(masks)) != len(masks):
            raise InvariantViolation("duplicate open sets")
        value = Topology.from_masks(space, masks)
        if validate:
            from . import topology as _topology

            violations = _topology.check_topology(space, value.opens)
            if violations:
                raise InvariantViolation(f"not a topology: {violations[0]}", tuple(violations))
        return value

    if kind == "qmetric":
        space = _space_from(obj)
        _require(isinstance(obj.get("indices"), list), "qmetric needs index labels")
        _require(all(isinstance(s, str) for s in obj["indices"]), "index labels must be strings")
        _require(isinstance(obj.get("matrices"), list), "qmetric needs matrices")
        _require(len(obj["matrices"]) == len(obj["indices"]), "one matrix per index required")
        mats = []
        for m in obj["matrices"]:
            _require(isinstance(m, list) and all(isinstance(r, list) for r in m),
                     "matrix must be a list of rows")
            mats.append(freeze_matrix([_int_list(r, "matrix row") for r in m]))
        value = QuasiFamily(space, tuple(obj["indices"]), tuple(mats))
        if validate:
            from . import qmetric as _qmetric

            violations = _qmetric.check_quasifamily(value)
            if violations:
                raise InvariantViolation(f"not a quasimetric family: {violations[0]}",
                                         tuple(violations))
        return value

    if kind == "sequence":
        space = _space_from(obj)
        _require(isinstance(obj.get("default"), int), "sequence needs a default point")
        rules = []
        for rule in obj.get("rules", []):
            _require(isinstance(rule, dict) and "set" in rule and "point" in rule,
                     "each rule needs 'set' and 'point'")
            _require(isinstance(rule["point"], int), "rule point must be an integer")
            rules.append((_descriptor_from(rule["set"]), rule["point"]))
        return SequenceSpec(space, obj["default"], tuple(rules))

    if kind == "map":
        _require(isinstance(obj.get("from"), int) and isinstance(obj.get("to"), int),
                 "map needs integer 'from' and 'to'")
        values = tuple(_int_list(obj.get("values"), "map values"))
        return PointMap(PointSpace(obj["from"]), PointSpace(obj["to"]), values)

    if kind == "net":
        space = _space_from(obj)
        _require(isinstance(obj.get("elements"), list), "net needs element names")
        _require(all(isinstance(s, str) for s in obj["elements"]), "element names must be strings")
        _require(isinstance(obj.get("order"), list), "net needs an order matrix")
        order = tuple(tuple(_int_list(r, "order row")) for r in obj["order"])
        assignment = tuple(_int_list(obj.get("assignment"), "assignment"))
        return DirectedNet(space, tuple(obj["elements"]), order, assignment)

    if kind == "semigroup":
        _require(isinstance(obj.get("elements"), list), "semigroup needs element labels")
        _require(all(isinstance(s, str) for s in obj["elements"]), "element labels must be strings")
        _require(isinstance(obj.get("add"), list), "semigroup needs an addition table")
        add = tuple(tuple(_int_list(r, "add row")) for r in obj["add"])
        _require(isinstance(obj.get("zero"), int) and isinstance(obj.get("infinity"), int),
                 "semigroup needs integer 'zero' and 'infinity'")
        sg = ValueSemigroup(tuple(obj["elements"]), add, obj["zero"], obj["infinity"])
        if validate:
            from . import continuity as _continuity

            violations = _continuity.check_value_semigroup(sg)
            if violations:
                raise InvariantViolation(f"not a value semigroup: {violations[0]}",
                                         tuple(violations))
        if "positives" in obj:
            ps = PositiveSet(sg, tuple(_int_list(obj["positives"], "positives")))
            if validate:
                from . import continuity as _continuity

                violations = _continuity.check_positives(ps)
                if violations:
                    raise InvariantViolation(f"not a set of positives: {violations[0]}",
                                             tuple(violations))
            return ps
        return sg

    raise DocumentSyntaxError(f"unknown document kind {kind!r}")


# ---------------------------------------------------------------------------
# Serialization (canonical: deterministic, byte-identical on repeats)


def _dump(obj: dict) -> str:
    return json.dumps(obj, separators=(",", ":"))


def _space_json(space: PointSpace, obj: dict) -> dict:
    obj["n"] = space.n
    if space.labels is not None:
        obj["labels"] = list(space.labels)
    return obj


def serialize(value: Document) -> str:
    """Canonical document of a value; `parse_document` round-trips it.

    Opens and members are emitted ascending by mask/point, quasimetric
    indices are sorted by label with matrices permuted consistently.
    """
    if isinstance(value, Topology):
        obj = _space_json(value.space, {"kind": "topology"})
        obj["opens"] = [s.members() for s in sorted(value.opens, key=lambda s: s.mask)]
        return _dump(obj)

    if isinstance(value, QuasiFamily):
        canon = value.canonical()
        obj = _space_json(canon.space, {"kind": "qmetric"})
        obj["indices"] = list(canon.indices)
        obj["matrices"] = [[list(row) for row in m] for m in canon.matrices]
        return _dump(obj)

    if isinstance(value, SequenceSpec):
        obj = _space_json(value.space, {"kind": "sequence"})
        obj["default"] = value.default
        obj["rules"] = [{"set": _descriptor_json(ds), "point": p} for ds, p in value.rules]
        return _dump(obj)

    if isinstance(value, PointMap):
        return _dump({"kind": "map", "from": value.domain.n, "to": value.codomain.n,
                      "values": list(value.values)})

    if isinstance(value, DirectedNet):
        order = sorted(range(len(value.elements)), key=lambda a: value.elements[a])
        obj = {"kind": "net",
               "elements": [value.elements[a] for a in order],
               "order": [[value.order[a][b] for b in order] for a in order],
               "assignment": [value.assignment[a] for a in order]}
        _space_json(value.space, obj)
        return _dump(obj)

    if isinstance(value, ValueSemigroup):
        return _dump({"kind": "semigroup", "elements": list(value.elements),
                      "add": [list(r) for r in value.add],
                      "zero": value.zero, "infinity": value.infinity})

    if isinstance(value, PositiveSet):
        sg = value.semigroup
        return _dump({"kind": "semigroup", "elements": list(sg.elements),
                      "add": [list(r) for r in sg.add],
                      "zero": sg.zero, "infinity": sg.infinity,
                      "positives": list(value.members)})

    raise TypeError(f"cannot serialize {type(value).__name__}")
