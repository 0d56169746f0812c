"""Desk-scale reference implementation of the two lexical fusion mechanisms."""

from .checkpoint import load_checkpoint, load_into, save_checkpoint
from .encoder import (
    CLS_ID,
    PAD_ID,
    UNK_ID,
    TinyTransformer,
    ToyEncoderConfig,
    build_vocab,
    encode_tokens,
)
from .gradcheck import grad_check, max_grad_check_error
from .layers import (
    MODEL_KINDS,
    BaselineModel,
    EarlyFusionLayer,
    EarlyFusionModel,
    LexEnhanceHead,
    LexEnhanceModel,
    build_model,
    early_fuse,
    lex_enhance_forward,
)
from .metrics import EvalResult, LabelScores, SeedStat, aggregate_over_seeds, evaluate
from .synthetic import EMOTION_CATEGORIES, SyntheticData, make_synthetic_data
from .training import (
    DEFAULT_SEEDS,
    EarlyStopping,
    EpochStat,
    LabeledText,
    SeedRun,
    SplitCorpus,
    TrainConfig,
    TrainResult,
    train,
)

__all__ = [
    "BaselineModel",
    "CLS_ID",
    "DEFAULT_SEEDS",
    "EMOTION_CATEGORIES",
    "EarlyFusionLayer",
    "EarlyStopping",
    "EarlyFusionModel",
    "EpochStat",
    "EvalResult",
    "LabelScores",
    "LabeledText",
    "LexEnhanceHead",
    "LexEnhanceModel",
    "MODEL_KINDS",
    "PAD_ID",
    "SeedRun",
    "SeedStat",
    "SplitCorpus",
    "SyntheticData",
    "TinyTransformer",
    "ToyEncoderConfig",
    "TrainConfig",
    "TrainResult",
    "UNK_ID",
    "aggregate_over_seeds",
    "build_model",
    "build_vocab",
    "early_fuse",
    "encode_tokens",
    "evaluate",
    "grad_check",
    "lex_enhance_forward",
    "load_checkpoint",
    "load_into",
    "make_synthetic_data",
    "max_grad_check_error",
    "save_checkpoint",
    "train",
]
