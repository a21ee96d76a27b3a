"""Exception hierarchy shared by every module."""


class K2Error(Exception):
    """Base class for all errors raised by k2metric."""


class DataFormatError(K2Error, ValueError):
    """Malformed database, domain file or prior file."""


class MissingValueError(DataFormatError):
    """A database cell is empty."""


class StructureError(K2Error, ValueError):
    """Unknown variable, duplicate edge, self loop or directed cycle."""


class PriorDomainError(K2Error, ValueError):
    """A pseudo-count or Gamma argument falls outside the admissible range."""


class EnumerationLimitError(K2Error, ValueError):
    """Exhaustive enumeration requested for more nodes than the cap allows."""
