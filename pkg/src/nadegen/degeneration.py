"""Combinatorics of an snc central fiber and its dual complex.

A central fiber is recorded as a list of components D_i with positive integer
multiplicities m_i, together with the strata: connected components of the
intersections D_J = cap_{j in J} D_j, given as (component set, branch label)
pairs.  The dual complex carries one face per stratum, the face over J being
the rational simplex {w >= 0 : sum_j m_j w_j = 1}.

Everything in this module is exact: simplex coordinates are `fractions.Fraction`
and all invariants are equalities, never tolerances.  All values are immutable
after construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Union

from .errors import InvalidFiber, InvalidPoint, UnknownId

RationalLike = Union[Fraction, int, str]


def as_fraction(value: RationalLike, what: str = "value") -> Fraction:
    """Coerce int / "p/q" string / Fraction to an exact Fraction.

    Floats are rejected on purpose: they would silently break exactness.
    """
    if isinstance(value, bool) or isinstance(value, float):
        raise InvalidPoint(f"{what} must be an exact rational (int, Fraction or 'p/q' string), got {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidPoint(f"{what} is not a valid rational: {value!r}") from exc
    raise InvalidPoint(f"{what} must be an exact rational, got {type(value).__name__}")


@dataclass(frozen=True)
class Component:
    """An irreducible component of the central fiber.

    `genus` is only meaningful for one-dimensional fibers and may be omitted;
    operations that need it fail loudly when it is absent.
    """

    id: str
    multiplicity: int = 1
    genus: Optional[int] = None
    name: str = ""

    def __post_init__(self) -> None:
        if not isinstance(self.id, str) or not self.id:
            raise InvalidFiber(f"component id must be a nonempty string, got {self.id!r}")
        if not isinstance(self.multiplicity, int) or self.multiplicity < 1:
            raise InvalidFiber(f"component {self.id!r}: multiplicity must be a positive integer")
        if self.genus is not None and (not isinstance(self.genus, int) or self.genus < 0):
            raise InvalidFiber(f"component {self.id!r}: genus must be a nonnegative integer")


@dataclass(frozen=True)
class Stratum:
    """A stratum: a connected component of D_J, tagged by a branch label.

    Branch labels distinguish several connected components sharing the same
    component set J (parallel faces of the dual complex); they must be used
    consistently by the caller.
    """

    id: str
    components: frozenset[str]
    branch: str = ""

    def __init__(self, id: str, components: Iterable[str], branch: str = ""):
        object.__setattr__(self, "id", id)
        object.__setattr__(self, "components", frozenset(components))
        object.__setattr__(self, "branch", branch)
        if not isinstance(id, str) or not id:
            raise InvalidFiber(f"stratum id must be a nonempty string, got {id!r}")
        if not self.components:
            raise InvalidFiber(f"stratum {id!r}: component set must be nonempty")

    @property
    def size(self) -> int:
        return len(self.components)


@dataclass(frozen=True)
class CentralFiber:
    """The combinatorial record of an snc degeneration's special fiber.

    Invariants enforced at construction:
      * component ids unique, multiplicities >= 1;
      * stratum ids unique, (component set, branch) pairs unique;
      * each component appears as a singleton stratum (its vertex stratum);
      * face closure: every nonempty subset of a stratum's set is some
        stratum's set;
      * |J| <= fiber_dimension + 1 for every stratum;
      * incidence is decidable: a component set carried by several branches
        must not lie strictly inside another stratum's set (otherwise the
        containing face could not tell which branch is its face).

    Extra singleton strata with a nonempty branch label are accepted only in
    fiber dimension 1, where they encode self-nodes of a component ("loops"
    of the dual graph).  Such fibers are not snc and are rejected by
    :func:`build_dual_complex`; they exist for the stable-curve measure
    formulas only.
    """

    components: tuple[Component, ...]
    strata: tuple[Stratum, ...]
    fiber_dimension: int

    def __init__(
        self,
        components: Iterable[Component],
        strata: Iterable[Stratum],
        fiber_dimension: int,
    ):
        object.__setattr__(self, "components", tuple(components))
        object.__setattr__(self, "strata", tuple(strata))
        object.__setattr__(self, "fiber_dimension", fiber_dimension)
        self._validate()

    def _validate(self) -> None:
        if not isinstance(self.fiber_dimension, int) or self.fiber_dimension < 0:
            raise InvalidFiber("fiber_dimension must be a nonnegative integer")
        if not self.components:
            raise InvalidFiber("a central fiber needs at least one component")

        comp_ids = [c.id for c in self.components]
        if len(set(comp_ids)) != len(comp_ids):
            raise InvalidFiber("component ids must be unique")
        known = set(comp_ids)

        strat_ids = [s.id for s in self.strata]
        if len(set(strat_ids)) != len(strat_ids):
            raise InvalidFiber("stratum ids must be unique")
        seen_keys: set[tuple[frozenset[str], str]] = set()
        for s in self.strata:
            unknown = s.components - known
            if unknown:
                raise InvalidFiber(f"stratum {s.id!r} references unknown components {sorted(unknown)}")
            key = (s.components, s.branch)
            if key in seen_keys:
                raise InvalidFiber(f"stratum {s.id!r}: duplicate (component set, branch) pair")
            seen_keys.add(key)
            if s.size > self.fiber_dimension + 1:
                raise InvalidFiber(
                    f"stratum {s.id!r} has {s.size} components; at most "
                    f"{self.fiber_dimension + 1} can meet (codimension bound)"
                )

        sets_present = {s.components for s in self.strata}
        by_set: dict[frozenset[str], list[Stratum]] = {}
        for s in self.strata:
            by_set.setdefault(s.components, []).append(s)

        # every component must carry a vertex stratum
        for cid in comp_ids:
            singles = by_set.get(frozenset({cid}), [])
            if not singles:
                raise InvalidFiber(f"component {cid!r} has no singleton stratum")
            if len(singles) > 1:
                if self.fiber_dimension != 1:
                    raise InvalidFiber(
                        f"component {cid!r} has several singleton strata; "
                        "loop nodes are only meaningful in fiber dimension 1"
                    )
                if not any(s.branch == "" for s in singles):
                    raise InvalidFiber(
                        f"component {cid!r}: several singleton strata but none with "
                        "empty branch label to serve as the vertex"
                    )

        # face closure
        for s in self.strata:
            if s.size < 2:
                continue
            members = sorted(s.components)
            for mask in range(1, 2 ** len(members) - 1):
                sub = frozenset(members[k] for k in range(len(members)) if mask >> k & 1)
                if sub not in sets_present:
                    raise InvalidFiber(
                        f"face closure violated: stratum {s.id!r} has no face with "
                        f"component set {sorted(sub)}"
                    )

        # decidable incidence: multi-branch sets must not sit strictly inside
        # another stratum's set
        multi = {cs for cs, group in by_set.items() if len(cs) >= 2 and len(group) > 1}
        if multi:
            for s in self.strata:
                for cs in multi:
                    if cs < s.components:
                        raise InvalidFiber(
                            f"ambiguous incidence: component set {sorted(cs)} has several "
                            f"branches but lies strictly inside stratum {s.id!r}"
                        )

        object.__setattr__(self, "_component_by_id", {c.id: c for c in self.components})
        object.__setattr__(self, "_stratum_by_id", {s.id: s for s in self.strata})
        object.__setattr__(self, "_strata_by_set", by_set)

    # -- lookups ---------------------------------------------------------

    def component(self, component_id: str) -> Component:
        try:
            return self._component_by_id[component_id]  # type: ignore[attr-defined]
        except KeyError:
            raise UnknownId(f"unknown component {component_id!r}") from None

    def multiplicity(self, component_id: str) -> int:
        return self.component(component_id).multiplicity

    def genus(self, component_id: str) -> int:
        g = self.component(component_id).genus
        if g is None:
            raise InvalidFiber(f"component {component_id!r} carries no genus marking")
        return g

    def stratum(self, stratum_id: str) -> Stratum:
        try:
            return self._stratum_by_id[stratum_id]  # type: ignore[attr-defined]
        except KeyError:
            raise UnknownId(f"unknown stratum {stratum_id!r}") from None

    def strata_with_set(self, components: Iterable[str]) -> tuple[Stratum, ...]:
        return tuple(self._strata_by_set.get(frozenset(components), ()))  # type: ignore[attr-defined]

    def vertex_stratum(self, component_id: str) -> Stratum:
        """The canonical singleton stratum of a component.

        With loop nodes present (dimension 1) it is the one with empty branch
        label; otherwise the unique singleton stratum.
        """
        self.component(component_id)
        singles = self.strata_with_set({component_id})
        if len(singles) == 1:
            return singles[0]
        for s in singles:
            if s.branch == "":
                return s
        raise InvalidFiber(f"component {component_id!r} has no canonical vertex stratum")

    def loop_strata(self) -> tuple[Stratum, ...]:
        """Singleton strata that are not vertex strata (self-nodes, dimension 1)."""
        loops = []
        for s in self.strata:
            if s.size == 1:
                (cid,) = s.components
                if self.vertex_stratum(cid).id != s.id:
                    loops.append(s)
        return tuple(loops)

    @property
    def is_reduced(self) -> bool:
        return all(c.multiplicity == 1 for c in self.components)

    def component_ids(self) -> tuple[str, ...]:
        return tuple(c.id for c in self.components)


@dataclass(frozen=True)
class Face:
    """A face of the dual complex: one stratum with its coordinate data.

    `components` fixes the coordinate order (sorted ids); `multiplicities`
    is aligned with it.  The face's coordinate domain is
    {w in Q_{>=0}^J : sum m_j w_j = 1}.
    """

    stratum_id: str
    components: tuple[str, ...]
    multiplicities: tuple[int, ...]
    branch: str

    @property
    def dim(self) -> int:
        return len(self.components) - 1


@dataclass(frozen=True)
class DualComplex:
    """The dual complex of a central fiber: one face per stratum.

    A face sigma is a face of sigma' iff its component set is contained in
    sigma''s (same stratum allowed); branch decidability is guaranteed by the
    fiber invariants, so set containment determines incidence.
    """

    fiber: CentralFiber
    faces: tuple[Face, ...]

    def __init__(self, fiber: CentralFiber, faces: Iterable[Face]):
        object.__setattr__(self, "fiber", fiber)
        object.__setattr__(self, "faces", tuple(faces))
        object.__setattr__(self, "_face_by_id", {f.stratum_id: f for f in self.faces})

    def face(self, stratum_id: str) -> Face:
        try:
            return self._face_by_id[stratum_id]  # type: ignore[attr-defined]
        except KeyError:
            raise UnknownId(f"no face for stratum {stratum_id!r}") from None

    def vertices(self) -> tuple[Face, ...]:
        return tuple(f for f in self.faces if len(f.components) == 1)

    def vertex_of_component(self, component_id: str) -> Face:
        return self.face(self.fiber.vertex_stratum(component_id).id)

    def is_face_of(self, inner_id: str, outer_id: str) -> bool:
        inner, outer = self.face(inner_id), self.face(outer_id)
        return set(inner.components) <= set(outer.components)

    def faces_of(self, stratum_id: str) -> tuple[Face, ...]:
        """All faces of the given face, the face itself included."""
        outer = self.face(stratum_id)
        out = set(outer.components)
        result = []
        for f in self.faces:
            if f.stratum_id == stratum_id or set(f.components) < out:
                result.append(f)
        return tuple(result)

    def vertex_ids_of(self, stratum_id: str) -> tuple[str, ...]:
        """Vertex strata spanning a face, in the face's coordinate order."""
        face = self.face(stratum_id)
        return tuple(self.fiber.vertex_stratum(cid).id for cid in face.components)


def build_dual_complex(fiber: CentralFiber) -> DualComplex:
    """Build the dual complex of an snc central fiber.

    One face per stratum, coordinates ordered by sorted component id.  Fibers
    carrying loop nodes (self-nodes of a component, dimension 1) are rejected:
    a loop has no snc coordinate simplex.
    """
    loops = fiber.loop_strata()
    if loops:
        raise InvalidFiber(
            f"stratum {loops[0].id!r} is a loop node; the fiber is not snc and has "
            "no dual complex (normalize the model first)"
        )
    faces = []
    for s in fiber.strata:
        comps = tuple(sorted(s.components))
        mults = tuple(fiber.multiplicity(c) for c in comps)
        faces.append(Face(s.id, comps, mults, s.branch))
    return DualComplex(fiber, faces)


@dataclass(frozen=True)
class ComplexPoint:
    """A point of the dual complex: a stratum and exact rational weights.

    Weights are indexed by the stratum's component set and satisfy
    w_j >= 0 and sum_j m_j w_j = 1 exactly.  A point with zero weights is
    identified with the point of the face it actually lies on; see
    :func:`canonicalize_point`.
    """

    stratum: str
    weights: tuple[tuple[str, Fraction], ...]

    def __init__(self, stratum: str, weights: Mapping[str, RationalLike]):
        object.__setattr__(self, "stratum", stratum)
        items = tuple(
            (cid, as_fraction(w, f"weight of {cid!r}")) for cid, w in sorted(weights.items())
        )
        object.__setattr__(self, "weights", items)

    def weight(self, component_id: str) -> Fraction:
        for cid, w in self.weights:
            if cid == component_id:
                return w
        raise UnknownId(f"point carries no weight for component {component_id!r}")

    @property
    def weight_dict(self) -> dict[str, Fraction]:
        return dict(self.weights)

    @property
    def support(self) -> frozenset[str]:
        return frozenset(cid for cid, w in self.weights if w > 0)

    def component_ids(self) -> frozenset[str]:
        return frozenset(cid for cid, _ in self.weights)


def check_point(fiber: CentralFiber, point: ComplexPoint) -> None:
    """Validate a point against a fiber: known stratum, matching index set,
    nonnegative weights, exact constraint sum m_j w_j = 1."""
    stratum = fiber.stratum(point.stratum)
    ids = point.component_ids()
    if ids != stratum.components:
        raise InvalidPoint(
            f"point weights indexed by {sorted(ids)} but stratum {point.stratum!r} "
            f"has component set {sorted(stratum.components)}"
        )
    total = Fraction(0)
    for cid, w in point.weights:
        if w < 0:
            raise InvalidPoint(f"negative weight {w} for component {cid!r}")
        total += fiber.multiplicity(cid) * w
    if total != 1:
        raise InvalidPoint(f"weighted sum of point on {point.stratum!r} is {total}, expected 1")


def canonicalize_point(complex_: DualComplex, point: ComplexPoint) -> ComplexPoint:
    """Move a point to its minimal carrying face by dropping zero weights.

    Idempotent; re-checks the constraint sum m_j w_j = 1 exactly.
    """
    fiber = complex_.fiber
    check_point(fiber, point)
    support = point.support
    stratum = fiber.stratum(point.stratum)
    if support == stratum.components:
        return point
    carriers = fiber.strata_with_set(support)
    if not carriers:
        # face closure makes this unreachable for valid fibers
        raise InvalidPoint(
            f"no stratum carries the support {sorted(support)} of point on {point.stratum!r}"
        )
    if len(carriers) > 1:
        raise InvalidPoint(
            f"support {sorted(support)} is carried by several branches; cannot canonicalize"
        )
    target = carriers[0]
    weights = {cid: w for cid, w in point.weights if w > 0}
    return ComplexPoint(target.id, weights)
