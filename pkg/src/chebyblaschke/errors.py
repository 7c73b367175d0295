"""Exception hierarchy shared by all modules."""


class ChebyBlaschkeError(Exception):
    pass


class DomainError(ChebyBlaschkeError, ValueError):
    """Argument outside the domain of the operation."""


class PoleError(ChebyBlaschkeError, ArithmeticError):
    """Evaluation requested too close to a pole.

    ``lattice_point`` is the offending pole when one is known.
    """

    def __init__(self, message, lattice_point=None):
        super().__init__(message)
        self.lattice_point = lattice_point


class NumericError(ChebyBlaschkeError, ArithmeticError):
    """An iterative method failed to converge or lost its bracket."""


class ConsistencyError(ChebyBlaschkeError):
    """A constructed object failed one of its self-checks."""


class RangeError(ChebyBlaschkeError, ValueError):
    """Target value not attained inside the searched range."""
