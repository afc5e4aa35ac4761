"""Exception hierarchy shared by every module of the package."""


class NonprojError(Exception):
    """Base class for all errors raised by this package."""


class InvalidSentenceError(NonprojError, ValueError):
    pass


class InvalidTreeError(NonprojError, ValueError):
    pass


class TransitionError(NonprojError):
    """A transition cannot be applied to a configuration."""


class TransitionInapplicableError(TransitionError):
    pass


class RootReductionError(TransitionError):
    """The resolved modifier of a reduce is the root node 0."""


class SequenceInvalidError(NonprojError):
    def __init__(self, index, cause):
        super().__init__(f"transition {index} is not applicable: {cause}")
        self.index = index
        self.cause = cause


class IncompleteDerivationError(NonprojError):
    pass


class UnknownPresetError(NonprojError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else ""


class BudgetExceededError(NonprojError):
    def __init__(self, budget):
        super().__init__(f"exact oracle visited more than {budget} states")
        self.budget = budget


class LimitError(NonprojError, ValueError):
    pass


class UnsupportedByChartError(NonprojError):
    pass


class NoParseError(NonprojError):
    pass


class ConlluParseError(NonprojError):
    def __init__(self, message, line=None, source=None):
        where = ""
        if source is not None:
            where += f"{source}:"
        if line is not None:
            where += f"{line}: "
        elif where:
            where += " "
        super().__init__(where + message)
        self.line = line
        self.source = source


class ScoreFileError(NonprojError):
    def __init__(self, message, line=None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line
