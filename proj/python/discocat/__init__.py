"""Question answering and pronoun resolution over knowledge graphs."""

from ._discocat import BudgetExceeded, Error, Model, ParseError

__all__ = ["BudgetExceeded", "Error", "Model", "ParseError"]
