"""Exception types shared across the package."""


class PowCircError(Exception):
    """Base class for every error raised by powcirc."""


class EnumerationTooLarge(PowCircError, ValueError):
    pass


class CycleDetected(PowCircError, ValueError):
    def __init__(self, cycle):
        self.cycle = list(cycle)
        super().__init__("cycle through nodes %s" % self.cycle)


class BadLabel(PowCircError, ValueError):
    pass


class UnknownNode(PowCircError, KeyError):
    pass


class BudgetExceeded(PowCircError):
    """Exact evaluation would need more bits than allowed."""


class EvalBudgetExceeded(BudgetExceeded):
    pass


class NotAPowerCircuit(PowCircError, ValueError):
    def __init__(self, node, detail="successor marking evaluates to a negative number"):
        self.node = node
        super().__init__("node %r: %s" % (node, detail))


class NegativeExponent(PowCircError, ValueError):
    pass


# reduction

class OffsetTooLarge(PowCircError, ValueError):
    pass


class DuplicateValue(PowCircError, ValueError):
    pass


class NonCompactSuccessor(PowCircError, ValueError):
    pass


class PreconditionViolated(PowCircError, ValueError):
    pass


class MuTooLarge(PowCircError, ValueError):
    pass


class ChainOverflow(PowCircError, ArithmeticError):
    pass


# dyadic numbers

class NotPowerOfTwoRatio(PowCircError, ValueError):
    pass


class NotInteger(PowCircError, ValueError):
    pass


class ArenaMismatch(PowCircError, ValueError):
    pass


# Baumslag group

class BadLetter(PowCircError, ValueError):
    pass


class NotBrittonReduced(PowCircError, ValueError):
    pass


class TooLarge(PowCircError, ValueError):
    pass


# circuit bridges

class NotDyadic(PowCircError, ValueError):
    pass


class DepthBoundViolated(PowCircError, ValueError):
    pass


class NotLayered(PowCircError, ValueError):
    pass


class MalformedCircuit(PowCircError, ValueError):
    pass
