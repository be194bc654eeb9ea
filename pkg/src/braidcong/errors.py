"""Exception hierarchy shared across the package.

Budget errors map to CLI exit code 2; everything that represents a verified
negative result (a failing check, a false certificate) is reported through
return values, never through exceptions.
"""


class BraidcongError(Exception):
    """Base class for package errors."""


class BudgetExceeded(BraidcongError):
    """An enumeration, coset table, or search ran past its configured cap.

    Deliberately does not claim anything about the underlying group being
    infinite; a too-small budget and an infinite group are indistinguishable.
    """


class SearchBudgetExceeded(BudgetExceeded):
    """An orbit search exhausted its node budget without reaching the target."""


class NotUnimodular(BraidcongError):
    """Exact inversion was requested for a matrix with determinant not +-1."""


class CertificateError(BraidcongError):
    """A certificate under construction failed its own verification gate."""
