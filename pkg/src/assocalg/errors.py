"""Exception hierarchy shared by every module."""


class AlgebraError(Exception):
    """Base class for all errors raised by assocalg."""


class RingMismatchError(AlgebraError):
    """Two polynomials over different parameter lists were combined."""


class DimensionMismatchError(AlgebraError):
    pass


class BadPrimeError(AlgebraError):
    """A denominator (or modulus) is incompatible with the chosen prime."""


class DegenerateParameterError(AlgebraError):
    """The formal parameter alpha was specialised to a forbidden value."""


class MalformedFamilyError(AlgebraError):
    pass


class InfeasibleError(AlgebraError):
    """A finite-field enumeration would exceed the configured size bound."""


class ParseError(AlgebraError):
    def __init__(self, message, line=None, col=None, source=None):
        self.message = message
        self.line = line
        self.col = col
        self.source = source
        super().__init__(str(self))

    def __str__(self):
        where = []
        if self.source:
            where.append(str(self.source))
        if self.line is not None:
            where.append(f"line {self.line}")
        if self.col is not None:
            where.append(f"col {self.col}")
        prefix = ":".join(where)
        return f"{prefix}: {self.message}" if prefix else self.message
