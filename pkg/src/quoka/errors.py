"""Exception types shared across the package."""


class QuokaError(Exception):
    """Base class for all package errors."""


class CorpusLoadError(QuokaError):
    """Corpus file could not be read at all (I/O level)."""


class EmptyCorpusError(QuokaError):
    """Index build attempted over a corpus with no indexable publications."""


class IndexFormatError(QuokaError):
    """Index directory is missing, incomplete, or has an unsupported version."""


class IndexCorruptionError(QuokaError):
    """Index payload does not match its manifest checksum."""


class AnalyzerMismatchError(QuokaError):
    """Query was analyzed with a different config than the index was built with."""


class InvalidResolutionError(QuokaError):
    """Heatmap cell size outside the supported resolution set."""


class EntryNotFoundError(QuokaError):
    """Shoebox entry id does not exist."""
