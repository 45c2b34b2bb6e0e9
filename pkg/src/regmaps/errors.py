"""Exception types shared across the package."""


class AutomataError(Exception):
    """Base class for every error raised by regmaps."""


# algebra
class SamplerMissing(AutomataError):
    pass


class NotAscending(AutomataError):
    pass


class NoConvergence(AutomataError):
    pass


# matrices
class DimensionMismatch(AutomataError, ValueError):
    pass


class SpecMismatch(AutomataError, ValueError):
    pass


class ColsMismatch(AutomataError, ValueError):
    pass


class IndexOutOfRange(AutomataError, IndexError):
    pass


class NotABaseMap(AutomataError, ValueError):
    pass


# automata
class UnknownSymbol(AutomataError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class VariableOutOfRange(AutomataError, IndexError):
    pass


class ResultTooLarge(AutomataError):
    pass


class ArityMismatch(AutomataError, ValueError):
    pass


class AlphabetMismatch(AutomataError, ValueError):
    pass


# theory / regex
class NotBoolean(AutomataError, TypeError):
    pass


class CapExceeded(AutomataError):
    pass


class NonIdempotentStar(AutomataError):
    pass


# files
class ParseError(AutomataError, ValueError):
    def __init__(self, line, message):
        self.line = line
        self.message = message
        super().__init__(f"line {line}: {message}")


class ValidationError(AutomataError, ValueError):
    pass
