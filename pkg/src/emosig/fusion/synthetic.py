"""Bundled synthetic corpus for desk-scale fusion experiments.

Six single-label emotions, one lexicon category per emotion, pseudo-word
vocabulary. Each sentence draws at least 60% of its content words from its
label's category; the rest are cross-category noise plus uniform
distractors. Category words are split into a train pool and an eval pool,
so validation/test sentences use category words the token-level models
never saw in training while lexicon lookups still fire. That makes the GI
features a sufficient statistic that generalizes where raw token identity
cannot.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from ..lexicon import Lexicon
from .training import LabeledText, SplitCorpus

EMOTION_CATEGORIES = {
    "anger": "Hostility_GI",
    "fear": "Dread_GI",
    "joy": "Gaiety_GI",
    "love": "Affection_GI",
    "sadness": "Sorrow_GI",
    "surprise": "Startle_GI",
}

_CONSONANTS = "bcdfgklmnprstvz"
_VOWELS = "aeiou"

DEFAULT_CORPUS_SEED = 7
DEFAULT_CORPUS_SIZE = 1000


@dataclass
class SyntheticData:
    lexicon: Lexicon
    corpus: SplitCorpus
    category_of_label: dict[str, str]


def _pseudo_word(rng: random.Random, used: set[str]) -> str:
    while True:
        word = "".join(
            rng.choice(_CONSONANTS) + rng.choice(_VOWELS) for _ in range(3)
        )
        if word not in used:
            used.add(word)
            return word


def make_synthetic_data(
    seed: int = DEFAULT_CORPUS_SEED,
    n_sentences: int = DEFAULT_CORPUS_SIZE,
    *,
    words_per_category: int = 100,
    eval_pool_size: int = 30,
    n_distractors: int = 200,
    min_len: int = 8,
    max_len: int = 14,
    content_fraction: float = 0.65,
    cross_share: float = 0.2,
    train_fraction: float = 0.7,
    val_fraction: float = 0.15,
) -> SyntheticData:
    """Deterministic corpus + matching lexicon for one generator seed."""
    rng = random.Random(seed)
    labels = tuple(sorted(EMOTION_CATEGORIES))
    used: set[str] = set()
    category_words = {
        EMOTION_CATEGORIES[label]: [_pseudo_word(rng, used) for _ in range(words_per_category)]
        for label in labels
    }
    train_pool = {
        cat: words[: words_per_category - eval_pool_size]
        for cat, words in category_words.items()
    }
    eval_pool = {
        cat: words[words_per_category - eval_pool_size :]
        for cat, words in category_words.items()
    }
    distractors = [_pseudo_word(rng, used) for _ in range(n_distractors)]
    lexicon = Lexicon.build(category_words)

    n_train = round(train_fraction * n_sentences)
    n_val = round(val_fraction * n_sentences)
    splits: dict[str, list[LabeledText]] = {"train": [], "val": [], "test": []}
    for i in range(n_sentences):
        label = labels[i % len(labels)]
        split = "train" if i < n_train else ("val" if i < n_train + n_val else "test")
        pool = train_pool if split == "train" else eval_pool
        own_cat = EMOTION_CATEGORIES[label]
        length = rng.randint(min_len, max_len)
        n_content = max(1, round(content_fraction * length))
        n_cross = int(round(cross_share * n_content))
        n_own = n_content - n_cross
        tokens = [rng.choice(pool[own_cat]) for _ in range(n_own)]
        others = [lbl for lbl in labels if lbl != label]
        for _ in range(n_cross):
            cross_cat = EMOTION_CATEGORIES[rng.choice(others)]
            tokens.append(rng.choice(pool[cross_cat]))
        tokens.extend(rng.choice(distractors) for _ in range(length - n_content))
        rng.shuffle(tokens)
        splits[split].append(LabeledText(text=" ".join(tokens), labels=frozenset({label})))

    corpus = SplitCorpus(
        labels=labels, train=splits["train"], val=splits["val"], test=splits["test"]
    )
    return SyntheticData(
        lexicon=lexicon,
        corpus=corpus,
        category_of_label=dict(EMOTION_CATEGORIES),
    )
