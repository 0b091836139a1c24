"""Exception hierarchy.

Mathematical precondition failures derive from :class:`PreconditionError`;
the CLI maps those to exit code 3.
"""


class ZwalkError(Exception):
    pass


class PreconditionError(ZwalkError):
    """A mathematical hypothesis needed by an operation does not hold."""


class IndexOutOfWindow(ZwalkError, IndexError):
    def __init__(self, n, window):
        self.n = n
        self.window = window
        super().__init__(f"index {n} outside window [{window[0]}, {window[1]}]")


class WindowTooSmall(ZwalkError):
    pass


class InvalidWalk(ZwalkError, ValueError):
    pass


class HypothesisViolated(PreconditionError):
    """Convergent numerators/denominators left 0 < A < B."""


class NoStochasticRange(PreconditionError):
    def __init__(self, h_prime, h):
        self.h_prime = h_prime
        self.h = h
        super().__init__(f"H'={h_prime!r} > H={h!r}: no stochastic factorization exists")


class NonConvergent(PreconditionError):
    pass


class PreconditionViolated(PreconditionError):
    pass


class OutOfRange(PreconditionError):
    def __init__(self, param, lower, upper):
        self.param = param
        self.lower = lower
        self.upper = upper
        super().__init__(f"free parameter {param!r} outside [{lower!r}, {upper!r}]")


class NonPositiveCoefficient(PreconditionError):
    def __init__(self, name, index, value):
        self.name = name
        self.index = index
        self.value = value
        super().__init__(f"{name}[{index}] = {value!r} is not in (0, 1)")


class DivisionByZeroProbability(PreconditionError):
    pass


class InexactDivision(ZwalkError):
    def __init__(self, n, remainder):
        self.n = n
        self.remainder = remainder
        super().__init__(f"row {n}: division by det leaves remainder {remainder:.3e}")


class DivergentMoment(PreconditionError):
    pass


class FrameMismatch(ZwalkError):
    pass


class UnclassifiableEndpoint(ZwalkError):
    pass
