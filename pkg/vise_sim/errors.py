"""Exception hierarchy for vise-sim.

Every error raised on purpose by the package derives from ``ViseError`` so the
command line can map failures onto exit codes without catching unrelated bugs.
"""


class ViseError(Exception):
    """Base class for all deliberate vise-sim failures."""


class ConfigError(ViseError, ValueError):
    """Invalid configuration file or command-line value.

    Attributes:
        line: 1-based line number in the configuration file, when known.
    """

    def __init__(self, message: str, line: int | None = None) -> None:
        super().__init__(message)
        self.message = message
        self.line = line

    def __str__(self) -> str:
        if self.line is None:
            return self.message
        return f"line {self.line}: {self.message}"


class DomainError(ViseError, ValueError):
    """A model parameter lies outside its mathematical domain."""


class UndefinedMetricError(ViseError, ArithmeticError):
    """A metric was requested for a game that provides no data for it."""


class SweepCellError(DomainError):
    """A sweep cell failed; carries the label of the offending cell."""

    def __init__(self, cell_label: str, reason: str) -> None:
        super().__init__(cell_label, reason)
        self.cell_label = cell_label
        self.reason = reason

    def __str__(self) -> str:
        return f"cell [{self.cell_label}]: {self.reason}"
