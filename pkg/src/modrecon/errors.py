"""Exception hierarchy shared by all modrecon modules."""


class ModreconError(Exception):
    pass


class NotInvertible(ModreconError, ValueError):
    def __init__(self, a, m):
        super().__init__(f"{a} is not invertible modulo {m}")
        self.a = a
        self.m = m


class Exhausted(ModreconError):
    """The prime range ran out of candidates."""


class ModuliNotCoprime(ModreconError, ValueError):
    pass


class EmptyInput(ModreconError, ValueError):
    pass


class LengthMismatch(ModreconError, ValueError):
    pass


class DivisionByZero(ModreconError, ZeroDivisionError):
    """A qualifying lattice vector had second coordinate zero."""


class PolySyntaxError(ModreconError, ValueError):
    def __init__(self, message, text="", pos=0):
        super().__init__(f"{message} at position {pos}" + (f": {text!r}" if text else ""))
        self.text = text
        self.pos = pos


class UnknownVariable(PolySyntaxError):
    pass


class FieldMismatch(ModreconError, ValueError):
    pass


class ZeroPolynomial(ModreconError, ValueError):
    pass


class NoUsableRuns(ModreconError):
    pass


class LiftFailed(ModreconError):
    pass


class WorkerFailure(ModreconError):
    """Raised by a modular worker when the computation breaks down modulo p."""


class RoundLimitExceeded(ModreconError):
    def __init__(self, message, rounds=None, report=None):
        super().__init__(message)
        self.rounds = rounds or []
        self.report = report


class WorkerNeverApplicable(ModreconError):
    pass
