"""Exception hierarchy shared by the library and the CLI."""


class KorseltError(Exception):
    """Base class for every error raised by this package."""


class RejectedInput(KorseltError, ValueError):
    """An argument is outside the operation's domain (zero denominator, n <= 0, ...)."""


class DomainExclusion(RejectedInput):
    """The base is 0 or equals N, which the Korselt set excludes by definition."""


class PreconditionError(RejectedInput):
    """A documented precondition of the operation does not hold."""


class SkipParameter(PreconditionError):
    """A generator parameter yields 0, N, a zero denominator or an unverifiable value."""


class BudgetExceeded(KorseltError):
    """A configured search or factorization budget was exhausted."""


class Unfactored(BudgetExceeded):
    """Trial division stopped at its bound with a composite cofactor left over."""

    def __init__(self, n: int, cofactor: int, bound: int):
        self.n = n
        self.cofactor = cofactor
        self.bound = bound
        super().__init__(
            f"could not factor {n}: cofactor {cofactor} has no prime factor <= {bound}"
            " and is not certified prime"
        )
