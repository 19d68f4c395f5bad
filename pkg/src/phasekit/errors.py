"""Exception types raised by phasekit.

Every named failure mode gets its own class so callers (and the CLI exit-code
mapping) can tell configuration problems apart from numerical ones.
"""


class PhasekitError(Exception):
    """Base class for all phasekit errors."""


class StateSpecError(PhasekitError):
    """A state spec string or state file could not be parsed."""


class CutoffTooSmallError(PhasekitError):
    """The requested truncation cannot hold the state to the required tail mass.

    Carries ``suggested_cutoff``, a cheap estimate of the smallest adequate one.
    """

    def __init__(self, message, suggested_cutoff=None):
        super().__init__(message)
        self.suggested_cutoff = suggested_cutoff


class CutoffMismatchError(PhasekitError):
    """Two objects that must share a truncation dimension do not."""


class DegenerateSuperpositionError(PhasekitError):
    """A weighted superposition summed to (numerically) zero norm."""


class QuadratureConstructionError(PhasekitError):
    """The radial rule failed its moment self-validation sweep."""


class KernelInconsistencyError(PhasekitError):
    """A quantity that must be real came out with a large imaginary residue."""


class CancellationOverflowError(PhasekitError):
    """The alternating operator sum lost all significance (or overflowed).

    Carries the worst matrix element and its term count for diagnostics.
    """

    def __init__(self, message, element=None, term_count=None):
        super().__init__(message)
        self.element = element
        self.term_count = term_count


class OperatorPathUnavailableError(PhasekitError):
    """Operator-path request beyond the validated cutoff range; use the radial path."""
