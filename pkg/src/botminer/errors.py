"""Exceptions shared across botminer modules."""


class BotminerError(Exception):
    pass


class EmptyInput(BotminerError, ValueError):
    pass


class SingleClass(BotminerError, ValueError):
    """Training or evaluation data contains only one class."""


class DimensionMismatch(BotminerError, ValueError):
    pass


class TooFewCommits(BotminerError, ValueError):
    """Author has too few commits for activity classification."""


class DomainError(BotminerError, ValueError):
    """Argument outside its mathematical domain."""
