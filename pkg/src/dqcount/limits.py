"""Resource budgets and cooperative deadlines shared by every counting path."""
from __future__ import annotations

import os
import time
from dataclasses import dataclass, replace


class BudgetExceeded(RuntimeError):
    """A configured resource budget would be exceeded; try another method."""


class DeadlineExceeded(BudgetExceeded):
    pass


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return default
    value = int(raw, 0)
    if value <= 0:
        raise ValueError(f"{name} must be positive")
    return value


@dataclass(frozen=True)
class Budget:
    """Limits for one run.

    ``expansion_cells`` bounds the sum of cell counts over all existentials,
    ``expansion_clauses`` the number of projected falsifiers, ``expansion_vars``
    the number of expansion variables the internal counter accepts,
    ``brute_cells`` the total number of cells the brute-force oracle
    enumerates functions over, and ``max_nodes`` the live node count of a
    diagram manager.
    """

    expansion_cells: int = 1 << 22
    expansion_clauses: int = 1 << 20
    expansion_vars: int = 1 << 20
    brute_cells: int = 24
    max_nodes: int = 1 << 26
    deadline: float | None = None

    @classmethod
    def from_env(cls) -> Budget:
        d = cls()
        return cls(
            expansion_cells=_env_int("DQCOUNT_EXPANSION_CELLS", d.expansion_cells),
            expansion_clauses=_env_int("DQCOUNT_EXPANSION_CLAUSES", d.expansion_clauses),
            expansion_vars=_env_int("DQCOUNT_EXPANSION_VARS", d.expansion_vars),
            brute_cells=_env_int("DQCOUNT_BRUTE_CELLS", d.brute_cells),
            max_nodes=_env_int("DQCOUNT_MAX_NODES", d.max_nodes),
        )

    def with_timeout(self, seconds: float | None) -> Budget:
        if seconds is None:
            return replace(self, deadline=None)
        return replace(self, deadline=time.monotonic() + seconds)

    def check_time(self) -> None:
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise DeadlineExceeded("timeout exceeded")

    def check_nodes(self, mgr) -> None:
        if mgr.node_count() > self.max_nodes:
            raise BudgetExceeded(f"diagram node budget {self.max_nodes} exceeded")
        self.check_time()


DEFAULT_BUDGET = Budget()
