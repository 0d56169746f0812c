"""emosig: emotion signatures from GI-style lexicon features.

Pipeline: load a category lexicon, extract normalized per-category
frequencies with negation handling, group labeled texts per emotion,
build top-decile signatures, consolidate across datasets, and compare
signatures by Jaccard overlap. The ``fusion`` subpackage adds desk-scale
reference models showing how those features plug into a neural classifier.
"""

from .analysis import (
    OverlapReport,
    SimilarityMatrix,
    jaccard,
    overlap_report,
    similarity_matrix,
)
from .corpus import (
    DatasetManifest,
    IngestReport,
    IngestResult,
    LabelGroup,
    LabelMap,
    Record,
    group_by_label,
    harmonize,
    ingest,
)
from .errors import (
    AnalysisError,
    ConfigError,
    EmosigError,
    HarmonizationError,
    IngestError,
    LexiconFormatError,
    LexiconValidationError,
    SignatureError,
    TrainingError,
)
from .features import (
    FeatureVector,
    TokenGIVector,
    extract,
    signature_category_union,
    signature_emotion_scores,
    signature_projection,
    token_vectors,
)
from .lexicon import (
    DEFAULT_NEGATION_WINDOW,
    DEFAULT_NEGATORS,
    Lexicon,
    categories_of,
    load_lexicon,
)
from .signatures import (
    CONSOLIDATED_ID,
    EmotionSignature,
    FeatureWeight,
    build_signature,
    consolidate,
    consolidate_over_texts,
)
from .textprep import NormalizationConfig, TokenizedText, normalize, tokenize

__version__ = "0.1.0"

__all__ = [
    "AnalysisError",
    "CONSOLIDATED_ID",
    "ConfigError",
    "DEFAULT_NEGATION_WINDOW",
    "DEFAULT_NEGATORS",
    "DatasetManifest",
    "EmosigError",
    "EmotionSignature",
    "FeatureVector",
    "FeatureWeight",
    "HarmonizationError",
    "IngestError",
    "IngestReport",
    "IngestResult",
    "LabelGroup",
    "LabelMap",
    "Lexicon",
    "LexiconFormatError",
    "LexiconValidationError",
    "NormalizationConfig",
    "OverlapReport",
    "Record",
    "SignatureError",
    "SimilarityMatrix",
    "TokenGIVector",
    "TokenizedText",
    "TrainingError",
    "build_signature",
    "categories_of",
    "consolidate",
    "consolidate_over_texts",
    "extract",
    "group_by_label",
    "harmonize",
    "ingest",
    "jaccard",
    "load_lexicon",
    "normalize",
    "overlap_report",
    "signature_category_union",
    "signature_emotion_scores",
    "signature_projection",
    "similarity_matrix",
    "token_vectors",
    "tokenize",
    "__version__",
]
