"""Exception hierarchy for the memstab toolkit."""


class MemstabError(Exception):
    """Base class for all toolkit errors."""


class InvalidTraceError(MemstabError):
    """A raw trace violates its invariants (empty samples, negative bytes, bad metadata)."""


class ExcludedRunError(MemstabError):
    """An operation was asked to process a run whose status is not ``ok``."""


class DegenerateProfileError(MemstabError):
    """A profile is too short to align or differentiate."""


class NoDataError(MemstabError):
    """An aggregation or statistic has nothing to work with."""


class NoPassingSolutionsError(NoDataError):
    """A test has no passing solutions to take a median peak over."""


class DegenerateTestError(MemstabError):
    """A statistical test is undefined, e.g. every paired difference is zero."""


class UndefinedCorrelationError(MemstabError):
    """A correlation is undefined because one input is constant."""


class InsufficientDataError(MemstabError):
    """Too few observations for a stratification."""


class ConfigurationError(MemstabError):
    """Invalid run configuration, e.g. an ablation grid without a baseline."""


class ValidationError(MemstabError):
    """A persisted table or record failed schema or range validation."""
