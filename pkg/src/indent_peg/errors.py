class IndentPegError(Exception):
    """Base class for all errors raised by this package."""


class GrammarError(IndentPegError):
    pass


class GrammarSyntaxError(GrammarError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{message} at line {line}, column {col}")
        self.line = line
        self.col = col


class UndefinedNonterminalError(GrammarError):
    def __init__(self, names):
        self.names = sorted(names)
        super().__init__("undefined nonterminal(s): " + ", ".join(self.names))


class LexError(IndentPegError):
    pass


class PreconditionError(IndentPegError):
    """A transformation was applied to a grammar outside its domain."""


class NotWellFormedError(PreconditionError):
    def __init__(self, message: str, witness: str):
        super().__init__(f"{message}: {witness}")
        self.witness = witness


class AmbiguousConsumptionError(PreconditionError):
    """A concatenation's left factor may both consume and not consume input."""
