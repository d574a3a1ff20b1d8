"""Model dominations as pullback matrices, retractions and star-subdivision blow-ups.

A domination h from a finer model onto a coarser one is recorded by the
integer matrix a_{ij} with h*D_i = sum_j a_{ij} D'_j: rows are components of
the coarse (target) fiber, columns components of the fine (source) fiber.
The induced retraction of dual complexes sends a point with weights w' on the
source complex to w_i = sum_j a_{ij} w'_j on the target complex.

Because pulling back the whole central fiber gives the central fiber again,
every column must satisfy sum_i a_{ij} m_i = m'_j; this identity is what makes
retractions preserve the simplex constraint.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Tuple

from .degeneration import (
    CentralFiber,
    Component,
    ComplexPoint,
    Stratum,
    canonicalize_point,
    check_point,
    build_dual_complex,
)
from .errors import BlowUpError, InvalidPullback, PullbackIdentityError, RetractionError


@dataclass(frozen=True)
class PullbackReport:
    """Outcome of validating a pullback matrix."""

    ok: bool
    errors: tuple[str, ...]
    warnings: tuple[str, ...]


@dataclass(frozen=True)
class PullbackMatrix:
    """The matrix a_{ij} of a model domination, h*D_i = sum_j a_{ij} D'_j.

    `target` is the dominated (coarse) fiber indexing rows, `source` the
    dominating (fine) fiber indexing columns.  Entries are nonnegative
    integers, stored sparsely; absent pairs are zero.
    """

    target: CentralFiber
    source: CentralFiber
    entries: tuple[tuple[str, str, int], ...]

    def __init__(
        self,
        target: CentralFiber,
        source: CentralFiber,
        entries: Mapping[tuple[str, str], int],
    ):
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "source", source)
        rows = set(target.component_ids())
        cols = set(source.component_ids())
        normalized = []
        for (i, j), a in sorted(entries.items()):
            if i not in rows:
                raise InvalidPullback(f"row id {i!r} is not a component of the target fiber")
            if j not in cols:
                raise InvalidPullback(f"column id {j!r} is not a component of the source fiber")
            if not isinstance(a, int) or a < 0:
                raise InvalidPullback(f"entry a[{i!r},{j!r}] = {a!r} must be a nonnegative integer")
            if a:
                normalized.append((i, j, a))
        object.__setattr__(self, "entries", tuple(normalized))
        object.__setattr__(self, "_lookup", {(i, j): a for i, j, a in normalized})

    @property
    def rows(self) -> tuple[str, ...]:
        return self.target.component_ids()

    @property
    def cols(self) -> tuple[str, ...]:
        return self.source.component_ids()

    def entry(self, row_id: str, col_id: str) -> int:
        return self._lookup.get((row_id, col_id), 0)  # type: ignore[attr-defined]


def identity_pullback(fiber: CentralFiber) -> PullbackMatrix:
    return PullbackMatrix(fiber, fiber, {(c, c): 1 for c in fiber.component_ids()})


def validate_pullback(matrix: PullbackMatrix) -> PullbackReport:
    """Check the column multiplicity identity sum_i a_{ij} m_i = m'_j.

    Violations are reported, never fixed; the first offending column comes
    first.  A row with no nonzero entry only yields a warning: it would mean
    the domination contracts that divisor, which the caller may know better.
    """
    errors = []
    warnings = []
    for j in matrix.cols:
        total = sum(matrix.entry(i, j) * matrix.target.multiplicity(i) for i in matrix.rows)
        expected = matrix.source.multiplicity(j)
        if total != expected:
            errors.append(
                f"column {j!r}: sum a_ij m_i = {total} but multiplicity of {j!r} is {expected}"
            )
    for i in matrix.rows:
        if all(matrix.entry(i, j) == 0 for j in matrix.cols):
            warnings.append(f"row {i!r} has no nonzero entry (strict transform not reflected)")
    return PullbackReport(ok=not errors, errors=tuple(errors), warnings=tuple(warnings))


def retract(matrix: PullbackMatrix, point: ComplexPoint) -> ComplexPoint:
    """Retract a point of the source complex onto the target complex.

    Image weights are w_i = sum_j a_{ij} w'_j; the result is carried by the
    minimal declared stratum containing the positive support and returned in
    canonical form.  The multiplicity identity makes sum_i m_i w_i = 1 hold
    automatically.
    """
    report = validate_pullback(matrix)
    if not report.ok:
        raise PullbackIdentityError(report.errors[0])
    check_point(matrix.source, point)

    image: dict[str, Fraction] = {}
    for i in matrix.rows:
        wi = Fraction(0)
        for j, wj in point.weights:
            a = matrix.entry(i, j)
            if a:
                wi += a * wj
        if wi:
            image[i] = wi
    support = frozenset(image)
    if not support:
        raise RetractionError(
            f"image of point on {point.stratum!r} has empty support; matrix contracts its face"
        )

    carriers = [s for s in matrix.target.strata if support <= s.components]
    if not carriers:
        raise RetractionError(
            f"image support {sorted(support)} is not contained in any stratum of the "
            "target fiber (inconsistent branch data)"
        )
    minimal = [
        s
        for s in carriers
        if not any(o.components < s.components for o in carriers)
    ]
    if len(minimal) > 1:
        names = sorted(s.id for s in minimal)
        raise RetractionError(
            f"image support {sorted(support)} lies in several minimal strata {names}; "
            "branch data does not determine the carrying face"
        )
    target_stratum = minimal[0]
    weights = {c: image.get(c, Fraction(0)) for c in target_stratum.components}
    result = ComplexPoint(target_stratum.id, weights)
    return canonicalize_point(build_dual_complex(matrix.target), result)


def compose_pullbacks(outer: PullbackMatrix, inner: PullbackMatrix) -> PullbackMatrix:
    """Compose dominations: `outer` maps X' -> X, `inner` maps X'' -> X'.

    The result maps X'' -> X and its retraction is the composite of the two
    retractions.
    """
    if inner.target != outer.source:
        raise InvalidPullback("inner matrix target fiber differs from outer matrix source fiber")
    entries: dict[tuple[str, str], int] = {}
    by_row: dict[str, list[tuple[str, int]]] = {}
    for i, k, a in outer.entries:
        by_row.setdefault(i, []).append((k, a))
    by_col: dict[str, list[tuple[str, int]]] = {}
    for k, j, b in inner.entries:
        by_col.setdefault(k, []).append((j, b))
    for i, row in by_row.items():
        for k, a in row:
            for j, b in by_col.get(k, ()):
                entries[(i, j)] = entries.get((i, j), 0) + a * b
    return PullbackMatrix(outer.target, inner.source, entries)


def _fresh_id(taken: Iterable[str], base: str = "E") -> str:
    taken = set(taken)
    if base not in taken:
        return base
    k = 2
    while f"{base}{k}" in taken:
        k += 1
    return f"{base}{k}"


def blow_up_stratum(
    fiber: CentralFiber,
    stratum_id: str,
    exceptional_id: Optional[str] = None,
) -> Tuple[CentralFiber, PullbackMatrix]:
    """Blow up a minimal stratum; return the new fiber and the domination matrix.

    Only smooth centers are supported: the stratum must be a maximal face of
    the complex (no stratum strictly contains its component set) and must
    have at least two components (blowing up a whole divisor is trivial).

    The exceptional component E gets multiplicity sum_{j in J} m_j; the dual
    complex is the star subdivision of the blown-up face: the face disappears
    and E is joined to every proper subset of J.
    """
    center = fiber.stratum(stratum_id)
    J = center.components
    if len(J) < 2:
        raise BlowUpError(
            f"stratum {stratum_id!r} is a divisor; blow-up center must have codimension >= 2"
        )
    for s in fiber.strata:
        if J < s.components:
            raise BlowUpError(
                f"stratum {stratum_id!r} is not minimal: it contains stratum {s.id!r}"
            )

    taken_components = set(fiber.component_ids())
    exc = exceptional_id or _fresh_id(taken_components)
    if exc in taken_components:
        raise BlowUpError(f"exceptional id {exc!r} clashes with an existing component")

    m_exc = sum(fiber.multiplicity(c) for c in J)
    genus = 0 if fiber.fiber_dimension == 1 else None
    new_components = fiber.components + (Component(exc, m_exc, genus),)

    members = sorted(J)
    taken_strata = {s.id for s in fiber.strata}
    new_strata = [s for s in fiber.strata if s.id != stratum_id]

    def stratum_name(subset: tuple[str, ...]) -> str:
        base = exc if not subset else f"{exc}|{','.join(subset)}"
        name = base
        k = 2
        while name in taken_strata:
            name = f"{base}#{k}"
            k += 1
        taken_strata.add(name)
        return name

    # star subdivision: E joined to every proper subset of J (empty included)
    subsets: list[tuple[str, ...]] = [()]
    for mask in range(1, 2 ** len(members) - 1):
        subsets.append(tuple(members[k] for k in range(len(members)) if mask >> k & 1))
    for subset in sorted(subsets, key=lambda s: (len(s), s)):
        new_strata.append(Stratum(stratum_name(subset), set(subset) | {exc}, center.branch))

    new_fiber = CentralFiber(new_components, new_strata, fiber.fiber_dimension)

    entries = {(c, c): 1 for c in fiber.component_ids()}
    for c in J:
        entries[(c, exc)] = 1
    matrix = PullbackMatrix(fiber, new_fiber, entries)
    report = validate_pullback(matrix)
    if not report.ok:  # cannot happen: m_exc is defined by the identity
        raise PullbackIdentityError(report.errors[0])
    return new_fiber, matrix
