"""Exception types shared across the package.

The CLI maps these onto exit codes: ``PropertyViolation`` -> 1,
``GraphFormatError`` -> 2, ``CapExceeded`` -> 3.
"""


class FliplabError(Exception):
    pass


class CapExceeded(FliplabError):
    """An exact solver was asked to work beyond its configured size limit."""


class GraphFormatError(FliplabError, ValueError):
    def __init__(self, message, line=None, pos=None):
        where = ""
        if line is not None:
            where = f" (line {line})"
        elif pos is not None:
            where = f" (byte {pos})"
        super().__init__(message + where)
        self.line = line
        self.pos = pos


class NotKttFree(FliplabError):
    """Raised when an operation needs a K_{t,t}-free graph and got something else."""

    def __init__(self, t, witness):
        a, b = witness
        super().__init__(f"graph contains K_{{{t},{t}}}: A={sorted(a)} B={sorted(b)}")
        self.t = t
        self.witness = witness


class InvalidWitness(FliplabError, ValueError):
    """A witness object (ordering, flip sequence, transcript) fails validation."""


class PropertyViolation(FliplabError):
    """A checked inequality or invariant failed. Indicates a bug or a bad input claim."""
