"""Shared exception hierarchy.

The CLI maps these onto exit codes: ConfigError -> 2 (bad usage or broken
configuration), everything else derived from EmosigError -> 1 (pipeline or
data failure).
"""


class EmosigError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(EmosigError):
    """Unusable configuration: missing files, bad manifests, bad flags."""


class LexiconFormatError(EmosigError):
    """Lexicon source could not be parsed in the declared format."""


class LexiconValidationError(EmosigError):
    """Lexicon parsed but violates a structural invariant."""


class IngestError(EmosigError):
    """File-level dataset ingestion failure (row-level problems go to the report)."""


class HarmonizationError(EmosigError):
    """Raw labels missing from the label map."""


class SignatureError(EmosigError):
    """Signature construction or consolidation failure."""


class AnalysisError(EmosigError):
    """Similarity/overlap computation over invalid signature sets."""


class TrainingError(EmosigError):
    """Training aborted (bad splits, non-finite loss, bad model kind)."""
