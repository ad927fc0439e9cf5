"""Exception hierarchy.

Every error raised on purpose by the package derives from
:class:`SpectraKitError`, so the CLI can map them all to exit code 1.
"""


class SpectraKitError(Exception):
    """Base class for all domain errors."""


class DomainError(SpectraKitError, ValueError):
    """An argument lies outside the domain of a formula."""


class NotHyperbolic(SpectraKitError, ValueError):
    """A matrix is elliptic or parabolic, so it has no closed geodesic."""


class DegenerateSurface(SpectraKitError):
    """Construction produced a group that fails its own validity checks."""


class InconsistentData(SpectraKitError, ValueError):
    """Curve-and-chain data that no hyperbolic surface realizes."""


class NoSolution(SpectraKitError):
    """A target length lies below the minimum of a twist length function."""


class BudgetExhausted(SpectraKitError):
    """Enumeration stopped before it could certify completeness."""


class IncomparableCutoffs(SpectraKitError, ValueError):
    """A spectrum is not known up to the requested comparison cutoff."""


class CutoffExceeded(SpectraKitError):
    """An admissible question has no answer below the certified cutoff."""


class Indistinguishable(SpectraKitError):
    """Two candidate spectra agree up to the shared cutoff."""


class NoCandidateMatches(SpectraKitError):
    """Interrogation ruled out every member of a candidate family."""


class InvalidContext(SpectraKitError, ValueError):
    """Curve-and-chain cardinalities violate k0 + k1 = k <= 3g - 3."""
