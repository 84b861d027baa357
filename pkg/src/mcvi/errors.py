"""Exception hierarchy.

Every error raised by the library derives from :class:`MCVIError`, so callers
(the CLI in particular) can catch one type and still report the specific class.
"""
from __future__ import annotations


class MCVIError(Exception):
    """Base class for all library errors."""


# ingest

class MalformedCsv(MCVIError):
    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        self.line = line
        self.source = source
        where = ""
        if source:
            where += f"{source}"
        if line is not None:
            where += f":{line}" if where else f"line {line}"
        super().__init__(f"{where}: {message}" if where else message)


class SchemaMismatch(MCVIError):
    def __init__(self, message: str, source: str | None = None):
        self.source = source
        super().__init__(f"{source}: {message}" if source else message)


class DomainError(MCVIError):
    """A value violates the domain of its column; ``key`` names the offending row."""

    def __init__(self, message: str, key=None, line: int | None = None, source: str | None = None):
        self.key = key
        self.line = line
        self.source = source
        prefix = source or ""
        if line is not None:
            prefix += f":{line}" if prefix else f"line {line}"
        super().__init__(f"{prefix}: {message}" if prefix else message)


class UnknownEconomy(MCVIError):
    def __init__(self, economy: str, table: str | None = None):
        self.economy = economy
        self.table = table
        msg = f"economy {economy!r} is not in the classification table"
        if table:
            msg += f" (referenced by {table})"
        super().__init__(msg)


class InvalidConfig(MCVIError):
    pass


# dimensions

class EmptyPartnerSet(MCVIError):
    pass


class NoActivePorts(MCVIError):
    pass


# normalize

class AllMissing(MCVIError):
    pass


class ConstantColumn(MCVIError):
    pass


# index

class InvalidWeights(MCVIError):
    pass


class EmptyIndex(MCVIError):
    pass


class DegenerateVariance(MCVIError):
    pass


# stats

class InsufficientData(MCVIError):
    pass


class ZeroVariance(MCVIError):
    pass


class NonConvergence(MCVIError):
    pass


class InvalidK(MCVIError):
    pass


class SingleCluster(MCVIError):
    pass


class RankDeficient(MCVIError):
    pass


class TooFewClusters(MCVIError):
    pass


class NoWithinVariation(MCVIError):
    def __init__(self, regressor: str):
        self.regressor = regressor
        super().__init__(f"regressor {regressor!r} has no within-entity variation")


class NoCommonRegressors(MCVIError):
    pass


class EmptySample(MCVIError):
    pass


class DegenerateTime(MCVIError):
    pass


# uncertainty / analysis

class AllVariancesZero(MCVIError):
    pass


class InsufficientYears(MCVIError):
    pass


class InsufficientOverlap(MCVIError):
    pass
