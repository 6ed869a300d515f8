"""Exact model counting for dependency quantified Boolean formulas."""
from __future__ import annotations

from .bigcount import BigCount
from .counter import CountReport, count, count_symbolic
from .formula import Dqbf, parse, serialize
from .limits import Budget, BudgetExceeded

__version__ = "0.1.0"

__all__ = [
    "BigCount", "Budget", "BudgetExceeded", "CountReport", "Dqbf",
    "count", "count_symbolic", "parse", "serialize", "__version__",
]
