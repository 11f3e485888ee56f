"""Error types shared across the package.

Class names double as stable error labels: the CLI prints the class name
as the diagnostic code, so these are part of the external contract.
"""


class FrobclassError(Exception):
    """Base class for all errors raised by this package."""


# --- finite fields ---------------------------------------------------------

class NonPrime(FrobclassError):
    pass


class ReducibleModulus(FrobclassError):
    pass


class DegreeMismatch(FrobclassError):
    pass


class BadPower(FrobclassError):
    pass


class NotRootOfUnity(FrobclassError):
    pass


class BadOrder(FrobclassError):
    pass


class ZeroPolynomial(FrobclassError):
    pass


class ZeroResidue(FrobclassError):
    pass


# --- number fields ---------------------------------------------------------

class Reducible(FrobclassError):
    pass


class NonMonic(FrobclassError):
    pass


class NotAFactor(FrobclassError):
    pass


class ReducibleResiduePoly(FrobclassError):
    pass


class DenominatorDividesP(FrobclassError):
    pass


# --- elliptic curves -------------------------------------------------------

class SingularCurve(FrobclassError):
    pass


class OffCurve(FrobclassError):
    pass


class OddPrimeRequired(FrobclassError):
    pass


class BoundExceeded(FrobclassError):
    pass


class NotTorsionField(FrobclassError):
    pass


class DependentPoints(FrobclassError):
    pass


class NotABasis(FrobclassError):
    pass


class NotConjugate(FrobclassError):
    pass


# --- pairings --------------------------------------------------------------

class NotTorsion(FrobclassError):
    pass


class DegenerateAfterRetries(FrobclassError):
    pass


class OrderMismatch(FrobclassError):
    pass


# --- conjugacy -------------------------------------------------------------

class Singular(FrobclassError):
    pass


class NotSL2(FrobclassError):
    pass


class NotSLn(FrobclassError):
    pass


class ScaleBound(FrobclassError):
    pass


class DimensionMismatch(FrobclassError):
    pass


# --- classification --------------------------------------------------------

class BadReduction(FrobclassError):
    pass


class HypothesisViolated(FrobclassError):
    pass


class Inconclusive(FrobclassError):
    """No split-class candidate accepted; the global datum is inconsistent."""


class Ambiguous(FrobclassError):
    """More than one split-class candidate accepted; input data is inconsistent."""


class AuditFailed(FrobclassError):
    pass
