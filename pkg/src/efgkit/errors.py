"""Exception types shared across the package."""


class EfgError(Exception):
    """Base class for all package errors."""


class InvalidHistoryError(EfgError, ValueError):
    pass


class ParameterError(EfgError, ValueError):
    pass


class GameMismatchError(EfgError, ValueError):
    """A strategy or profile does not belong to the game it is used with."""


class IncompleteModelError(EfgError, KeyError):
    """A fixed opponent model has no entry for an information set it needs."""


class EnumerationBudgetError(EfgError, RuntimeError):
    pass


class StrategyFormatError(EfgError, ValueError):
    pass
