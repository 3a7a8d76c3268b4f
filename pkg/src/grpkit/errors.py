"""Shared exception types."""


class ResourceLimitError(RuntimeError):
    """A computation hit a configured resource ceiling (not a wrong answer).

    The command line maps this to its own exit code so callers can tell
    "ran out of budget" apart from "check failed".
    """


class CosetLimitError(ResourceLimitError):
    """Coset enumeration exceeded ``max_cosets`` live cosets."""


class NodeBudgetError(ResourceLimitError):
    """Backtracking search exceeded its node budget."""


class OrderBudgetError(ResourceLimitError):
    """A group-order bound was exceeded."""
