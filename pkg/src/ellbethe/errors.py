"""Exception hierarchy shared by all modules."""


class EllBetheError(Exception):
    """Base class for every error raised by this package."""


class DomainError(EllBetheError, ValueError):
    """An argument lies outside the region where a series or product converges."""


class PoleError(EllBetheError, ZeroDivisionError):
    """A theta denominator vanished (to within the pole guard)."""


class LatticeError(EllBetheError, ValueError):
    """A pair of dynamical parameters is not on the admissible lattice."""


class DegenerateBasisError(EllBetheError, ArithmeticError):
    """The reference basis of a representation space is numerically singular."""


class SingularGaugeError(EllBetheError, ArithmeticError):
    """A gauge matrix is (numerically) singular."""


class ExpansionError(EllBetheError, ArithmeticError):
    """A least-squares re-expansion left a residual above its threshold."""


class LabelMismatchError(EllBetheError, ValueError):
    """Operators with incompatible basis labels were composed."""


class WitnessError(EllBetheError, ValueError):
    """A cycle witness is inconsistent with the chain configuration."""
