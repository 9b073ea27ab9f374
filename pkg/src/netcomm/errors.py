"""Exception types shared across the package."""


class NetcommError(Exception):
    """Base class for all netcomm errors."""


class InputError(NetcommError):
    """Malformed or inconsistent input data (files, rows, labels)."""


class UndefinedStatisticError(NetcommError):
    """A statistic's precondition fails (too few vertices, no fit, W=0)."""


class ConvergenceError(NetcommError):
    """An iterative solver did not converge within its iteration budget."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class ConnectivityError(NetcommError):
    """An algorithm that requires a connected graph received a disconnected one."""


class TableShapeError(NetcommError):
    """A contingency table is degenerate (fewer than 2 rows or 2 columns)."""


class EmptyTableError(TableShapeError):
    """Every vertex had a null attribute value; no table can be formed."""
