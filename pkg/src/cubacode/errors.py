"""Exception hierarchy shared across the package.

Validation errors signal bad user input (unknown catalog name, malformed
code file, out-of-range parameter) and map to CLI exit status 2.
Numerical failures signal a computation that could not be carried out at
the requested operating point (degenerate Gram matrix, cutoff overflow)
and map to exit status 1.
"""


class ValidationError(ValueError):
    """Bad input: unknown name, malformed file, parameter out of range."""


class NumericalFailure(RuntimeError):
    """A computation failed at the requested operating point."""


class DegenerateCodewordsError(NumericalFailure):
    """Codeword Gram matrix is numerically singular at this scale."""


class CutoffError(NumericalFailure):
    """Truncated Fock space too small for the requested states."""
