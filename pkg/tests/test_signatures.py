import json
import math
import random

import pytest

from emosig.corpus import LabelGroup
from emosig.errors import SignatureError
from emosig.lexicon import Lexicon
from emosig.signatures import (
    CONSOLIDATED_ID,
    EmotionSignature,
    FeatureWeight,
    build_signature,
    consolidate,
    consolidate_over_texts,
    retention_count,
)


def group(emotion, texts, dataset_id="d"):
    return LabelGroup(emotion=emotion, dataset_id=dataset_id, texts=tuple(texts))


def sig(emotion, dataset_id, feature_weights, provenance=None):
    return EmotionSignature(
        emotion=emotion,
        dataset_id=dataset_id,
        features=tuple(FeatureWeight(category=c, weight=w) for c, w in feature_weights),
        provenance=tuple(provenance or [dataset_id]),
    )


class TestBuildSignature:
    def test_hundred_categories_keeps_ten_largest(self):
        # cat000 has 100 copies of its word, cat001 has 99, ... all distinct weights
        categories = {f"cat{i:03d}": [f"w{i:03d}"] for i in range(100)}
        lexicon = Lexicon.build(categories)
        text = " ".join(
            " ".join([f"w{i:03d}"] * (100 - i)) for i in range(100)
        )
        signature = build_signature(group("joy", [text]), lexicon)
        assert len(signature.features) == 10
        assert [fw.category for fw in signature.features] == [
            f"cat{i:03d}" for i in range(10)
        ]

    def test_single_nonzero_category(self, toy_lexicon):
        signature = build_signature(group("joy", ["good stuff here you see"]), toy_lexicon)
        assert [fw.category for fw in signature.features] == ["Positiv"]
        assert signature.features[0].weight == 1 / 5

    def test_tie_broken_alphabetically(self):
        lexicon = Lexicon.build({"A": ["a"], "B": ["b"], "C": ["c"]})
        signature = build_signature(group("joy", ["a a a b b b c"]), lexicon)
        # weights: A=3/7, B=3/7, C=1/7; retain ceil(0.3)=1 -> A wins the tie
        assert [fw.category for fw in signature.features] == ["A"]

    def test_weights_are_mean_frequencies(self, toy_lexicon):
        signature = build_signature(
            group("joy", ["good good bad day", "great stuff"]), toy_lexicon
        )
        by_cat = {fw.category: fw.weight for fw in signature.features}
        assert by_cat["Positiv"] == (2 / 4 + 1 / 2) / 2

    def test_empty_group_errors(self, toy_lexicon):
        with pytest.raises(SignatureError, match="empty group"):
            build_signature(group("joy", []), toy_lexicon)

    def test_no_signal_errors(self, toy_lexicon):
        with pytest.raises(SignatureError, match="no signal"):
            build_signature(group("joy", ["zebra xylophone"]), toy_lexicon)

    def test_provenance_is_dataset(self, toy_lexicon):
        signature = build_signature(group("joy", ["good"], dataset_id="go"), toy_lexicon)
        assert signature.provenance == ("go",)
        assert signature.dataset_id == "go"

    def test_bad_retain_fraction(self, toy_lexicon):
        with pytest.raises(SignatureError):
            build_signature(group("joy", ["good"]), toy_lexicon, retain_fraction=0.0)


def _random_group(rng: random.Random, lexicon: Lexicon) -> LabelGroup:
    vocabulary = [w for ws in lexicon.categories.values() for w in ws]
    vocabulary += ["zebra", "the", "not"]
    texts = []
    for _ in range(rng.randint(1, 8)):
        texts.append(" ".join(rng.choice(vocabulary) for _ in range(rng.randint(1, 20))))
    return group("joy", texts)


class TestRetentionProperties:
    def test_retention_law_and_monotonicity(self, sample_lexicon):
        rng = random.Random(1234)
        checked = 0
        for _ in range(100):
            g = _random_group(rng, sample_lexicon)
            try:
                signature = build_signature(g, sample_lexicon)
            except SignatureError:
                continue
            checked += 1
            # recompute the nonzero-category count independently
            from emosig.features import extract
            from emosig.textprep import tokenize

            sums = {}
            for text in g.texts:
                for cat, value in extract(tokenize(text), sample_lexicon).values.items():
                    sums[cat] = sums.get(cat, 0.0) + value
            nonzero = len(sums)
            assert len(signature.features) == math.ceil(0.10 * nonzero)
            retained = {fw.category for fw in signature.features}
            weights = {c: s / len(g.texts) for c, s in sums.items()}
            discarded = set(weights) - retained
            if discarded:
                worst_kept = signature.features[-1]
                best_dropped = min(discarded, key=lambda c: (-weights[c], c))
                assert (
                    worst_kept.weight > weights[best_dropped]
                    or (
                        worst_kept.weight == weights[best_dropped]
                        and worst_kept.category < best_dropped
                    )
                )
        assert checked >= 80  # the corpus generator rarely produces no-signal groups

    def test_uniform_duplication_keeps_retained_set(self, sample_lexicon):
        rng = random.Random(888)
        for _ in range(25):
            g = _random_group(rng, sample_lexicon)
            try:
                base = build_signature(g, sample_lexicon)
            except SignatureError:
                continue
            doubled = group(g.emotion, list(g.texts) * 2, g.dataset_id)
            again = build_signature(doubled, sample_lexicon)
            assert {fw.category for fw in again.features} == {
                fw.category for fw in base.features
            }


class TestConsolidate:
    def test_half_presence_kept(self):
        sigs = [
            sig("joy", "d1", [("A", 0.4), ("B", 0.2)]),
            sig("joy", "d2", [("A", 0.2)]),
            sig("joy", "d3", [("B", 0.3)]),
            sig("joy", "d4", [("C", 0.9)]),
        ]
        merged = consolidate(sigs)
        by_cat = {fw.category: fw.weight for fw in merged.features}
        # A and B appear in 2/4 signatures: kept at the boundary; C in 1/4: dropped
        assert set(by_cat) == {"A", "B"}
        assert by_cat["A"] == (0.4 + 0.2) / 2
        assert by_cat["B"] == (0.2 + 0.3) / 2
        assert merged.dataset_id == CONSOLIDATED_ID
        assert merged.provenance == ("d1", "d2", "d3", "d4")

    def test_below_half_dropped(self):
        sigs = [
            sig("joy", f"d{i}", [("A", 0.5)] if i == 0 else [("B", 0.5)])
            for i in range(4)
        ]
        merged = consolidate(sigs)
        assert {fw.category for fw in merged.features} == {"B"}

    def test_singleton_relabels_only(self):
        original = sig("joy", "d1", [("A", 0.5), ("B", 0.25)])
        merged = consolidate([original])
        assert merged.features == original.features
        assert merged.dataset_id == CONSOLIDATED_ID
        assert merged.provenance == ("d1",)

    def test_mixed_emotions_rejected(self):
        with pytest.raises(SignatureError, match="mixed emotions"):
            consolidate([sig("joy", "d1", [("A", 0.5)]), sig("anger", "d2", [("A", 0.5)])])

    def test_empty_input_rejected(self):
        with pytest.raises(SignatureError):
            consolidate([])

    def test_consolidate_of_consolidated_is_idempotent(self):
        sigs = [
            sig("joy", "d1", [("A", 0.4), ("B", 0.2)]),
            sig("joy", "d2", [("A", 0.2), ("C", 0.1)]),
        ]
        once = consolidate(sigs)
        twice = consolidate([once])
        assert twice == once

    def test_nothing_survives_errors(self):
        sigs = [sig("joy", f"d{i}", [(f"X{i}", 0.5)]) for i in range(3)]
        with pytest.raises(SignatureError, match="presence threshold"):
            consolidate(sigs)


class TestConsolidateOverTexts:
    def test_text_presence_rule(self, toy_lexicon):
        groups = [
            group("joy", ["good good", "bad", "good", "zebra"], dataset_id="d1"),
        ]
        # Positiv fires in 2/4 texts (boundary, kept); Negativ in 1/4 (dropped)
        merged = consolidate_over_texts("joy", groups, toy_lexicon, retain_fraction=1.0)
        assert {fw.category for fw in merged.features} == {"Positiv"}
        assert merged.dataset_id == CONSOLIDATED_ID

    def test_wrong_emotion_rejected(self, toy_lexicon):
        with pytest.raises(SignatureError):
            consolidate_over_texts("anger", [group("joy", ["good"])], toy_lexicon)


class TestSerialization:
    def test_json_shape_and_rounding(self):
        signature = sig("anger", CONSOLIDATED_ID, [("Hostile_GI", 0.0411111119)], ["a", "b"])
        data = signature.to_json_dict()
        assert data == {
            "emotion": "anger",
            "dataset_id": CONSOLIDATED_ID,
            "provenance": ["a", "b"],
            "features": [{"category": "Hostile_GI", "weight": 0.041111}],
        }

    def test_round_trip(self):
        signature = sig("joy", "d1", [("A", 0.5), ("B", 0.25)])
        reloaded = EmotionSignature.from_json_dict(
            json.loads(json.dumps(signature.to_json_dict()))
        )
        assert reloaded == signature

    def test_features_in_rank_order(self, toy_lexicon):
        signature = build_signature(
            group("joy", ["good bad bad zebra"]), toy_lexicon, retain_fraction=1.0
        )
        weights = [fw.weight for fw in signature.features]
        assert weights == sorted(weights, reverse=True)


class TestRetentionCount:
    @pytest.mark.parametrize(
        "nonzero,expected", [(1, 1), (5, 1), (10, 1), (11, 2), (100, 10), (101, 11)]
    )
    def test_ceil_rule(self, nonzero, expected):
        assert retention_count(nonzero, 0.10) == expected
