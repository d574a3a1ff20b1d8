"""Quasi-monomial valuations on monomial supports, and model-metric potentials.

A point w of a dual-complex face with component set J determines a valuation
on local power series in the coordinates (z_j)_{j in J}: a series with support
S in N^J gets the value min{w . beta : beta in S}.  Coefficients are never
stored, only supports; cancellation between terms is therefore not modeled,
which is exact for series whose coefficients are zero or units.

Sign convention, fixed once for the whole package: log|f| at a point x is
-v_x(f), in t-adic units (v_x(t) = 1).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from .degeneration import CentralFiber, ComplexPoint
from .errors import IndexSetMismatch, InvalidSupport, UnknownId

Exponent = tuple[int, ...]


@dataclass(frozen=True)
class MonomialSupport:
    """A finite nonempty set of exponent vectors over an ordered index set J.

    Each vector stands for a monomial z^beta with unit coefficient.  The
    component order is canonicalized to sorted ids so supports built from
    dicts in any order compare equal.
    """

    components: tuple[str, ...]
    exponents: frozenset[Exponent]

    def __init__(
        self,
        components: Sequence[str],
        exponents: Iterable[Union[Exponent, Sequence[int], Mapping[str, int]]],
    ):
        comps = tuple(components)
        if len(set(comps)) != len(comps):
            raise InvalidSupport("support index set contains duplicate component ids")
        order = tuple(sorted(comps))
        perm = [comps.index(c) for c in order]
        vectors: set[Exponent] = set()
        for beta in exponents:
            if isinstance(beta, Mapping):
                vec = tuple(int(beta.get(c, 0)) for c in order)
                extra = set(beta) - set(order)
                if extra:
                    raise InvalidSupport(f"exponent references unknown components {sorted(extra)}")
            else:
                raw = tuple(int(b) for b in beta)
                if len(raw) != len(comps):
                    raise InvalidSupport(
                        f"exponent vector {raw} has length {len(raw)}, expected {len(comps)}"
                    )
                vec = tuple(raw[p] for p in perm)
            if any(b < 0 for b in vec):
                raise InvalidSupport(f"exponent vector {vec} has a negative entry")
            vectors.add(vec)
        if not vectors:
            raise InvalidSupport("a monomial support must be nonempty")
        object.__setattr__(self, "components", order)
        object.__setattr__(self, "exponents", frozenset(vectors))

    def _check_same_index(self, other: "MonomialSupport") -> None:
        if self.components != other.components:
            raise IndexSetMismatch(
                f"supports indexed by {self.components} and {other.components}"
            )

    def minkowski(self, other: "MonomialSupport") -> "MonomialSupport":
        """Support of a product of series: all pairwise sums of exponents."""
        self._check_same_index(other)
        sums = {
            tuple(a + b for a, b in zip(alpha, beta))
            for alpha in self.exponents
            for beta in other.exponents
        }
        return MonomialSupport(self.components, sums)

    def union(self, other: "MonomialSupport") -> "MonomialSupport":
        """Support of a generic sum of series (no cancellation)."""
        self._check_same_index(other)
        return MonomialSupport(self.components, self.exponents | other.exponents)

    def __or__(self, other: "MonomialSupport") -> "MonomialSupport":
        return self.union(other)

    def __mul__(self, other: "MonomialSupport") -> "MonomialSupport":
        return self.minkowski(other)


@dataclass(frozen=True)
class RationalSection:
    """A ratio s/s_0 of monomial series, given by the two supports."""

    numerator: MonomialSupport
    denominator: MonomialSupport

    def __post_init__(self) -> None:
        if self.numerator.components != self.denominator.components:
            raise IndexSetMismatch(
                "numerator and denominator supports live on different index sets"
            )


def uniformizer_support(fiber: CentralFiber, stratum_id: str) -> MonomialSupport:
    """The support of t = prod_j z_j^{m_j} on a stratum's coordinates."""
    stratum = fiber.stratum(stratum_id)
    comps = tuple(sorted(stratum.components))
    beta = tuple(fiber.multiplicity(c) for c in comps)
    return MonomialSupport(comps, [beta])


def eval_quasi_monomial(point: ComplexPoint, support: MonomialSupport) -> Fraction:
    """Value of the quasi-monomial valuation at `point` on a monomial support.

    Returns min over the support of the weighted degree sum_j w_j beta_j,
    an exact nonnegative rational.
    """
    ids = tuple(sorted(cid for cid, _ in point.weights))
    if ids != support.components:
        raise IndexSetMismatch(
            f"support indexed by {support.components} but point carries weights for {ids}"
        )
    if not support.exponents:
        raise InvalidSupport("cannot evaluate on an empty support")
    w = [point.weight(c) for c in support.components]
    return min(sum((wj * bj for wj, bj in zip(w, beta)), Fraction(0)) for beta in support.exponents)


def divisorial_valuation(fiber: CentralFiber, component_id: str) -> ComplexPoint:
    """The divisorial valuation (1/m_i) ord_{D_i} as a vertex point.

    The normalization by 1/m_i makes the uniformizer t have value 1, so the
    point sits on the component's vertex stratum with weight 1/m_i.
    """
    comp = fiber.component(component_id)
    vertex = fiber.vertex_stratum(component_id)
    return ComplexPoint(vertex.id, {component_id: Fraction(1, comp.multiplicity)})


def section_valuation(point: ComplexPoint, section: RationalSection) -> Fraction:
    """v(s/s_0) = v(numerator) - v(denominator); may be negative."""
    return eval_quasi_monomial(point, section.numerator) - eval_quasi_monomial(
        point, section.denominator
    )


def eval_model_metric_log(point: ComplexPoint, section: RationalSection) -> Fraction:
    """log|s| of a model metric at a quasi-monomial point: -v(s/s_0).

    Nonpositive exactly when the section extends regularly at the center in
    the modeled chart; swapping numerator and denominator flips the sign.
    """
    return -section_valuation(point, section)


def eval_na_fubini_study(
    point: ComplexPoint,
    coordinate_sections: Sequence[RationalSection],
    chart_index: int,
) -> Fraction:
    """Fubini-Study potential on the chart X_i != 0 at a quasi-monomial point.

    With v_k = v(numerator_k) - v(denominator_k) this is
    max_{j != i} (v_i - v_j), i.e. log max_{j != i} |X_j| / |X_i|.
    """
    n = len(coordinate_sections)
    if n < 2:
        raise InvalidSupport("need at least two homogeneous coordinates")
    if not 0 <= chart_index < n:
        raise UnknownId(f"chart index {chart_index} out of range for {n} coordinates")
    vals = [section_valuation(point, s) for s in coordinate_sections]
    vi = vals[chart_index]
    return max(vi - vals[j] for j in range(n) if j != chart_index)
