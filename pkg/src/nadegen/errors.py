"""Exception hierarchy. Everything raised by the library derives from NadegenError."""


class NadegenError(Exception):
    """Base class for all domain errors (CLI maps these to exit code 3)."""


class InvalidFiber(NadegenError):
    """A central-fiber record violates one of its structural invariants."""


class InvalidPoint(NadegenError):
    """A dual-complex point violates positivity or the weighted-sum constraint."""


class UnknownId(NadegenError):
    """A component or stratum id does not exist in the referenced fiber."""


class IndexSetMismatch(NadegenError):
    """A monomial support or section is indexed by a different component set than the point."""


class InvalidSupport(NadegenError):
    """A monomial support is empty or malformed."""


class InvalidPullback(NadegenError):
    """A pullback matrix is structurally broken (bad ids, negative entries, fiber mismatch)."""


class PullbackIdentityError(NadegenError):
    """The column multiplicity identity of a pullback matrix fails."""


class RetractionError(NadegenError):
    """The image support of a retracted point is not carried by a unique stratum."""


class BlowUpError(NadegenError):
    """The requested blow-up center is not an allowed stratum."""


class DegreeConsistencyError(NadegenError):
    """Polarization degrees are inconsistent with the fiber multiplicities."""


class NegativeMassError(NadegenError):
    """A measure operation produced a negative mass."""


class UnreducedFiber(NadegenError):
    """An operation requiring a reduced central fiber was given multiplicities > 1."""


class HybridDomainError(NadegenError):
    """A hybrid-side evaluation was requested outside its domain (bad radius, modulus, zero input)."""


class ReportError(NadegenError):
    """Convergence reporting was asked to compare incompatible measures."""
