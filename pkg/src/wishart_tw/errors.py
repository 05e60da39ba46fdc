"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the requested quantity."""


class TableRangeError(DomainError):
    """A requested probability or abscissa falls outside a tabulated range."""


class NumericError(RuntimeError):
    """A numerical procedure failed to converge or produced invalid output."""
