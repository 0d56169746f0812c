import random

import pytest

from emosig.errors import ConfigError
from emosig.textprep import (
    NormalizationConfig,
    load_token_map,
    normalize,
    tokenize,
)


@pytest.fixture(scope="module")
def default_config() -> NormalizationConfig:
    return NormalizationConfig.default()


class TestNormalize:
    def test_full_pipeline_example(self):
        cfg = NormalizationConfig(emoticon_map={":)": "<smile>"})
        assert normalize("LOVE This #BestDayEver :)", cfg) == "love this best day ever <smile>"

    def test_empty_string(self, default_config):
        assert normalize("", default_config) == ""

    def test_whole_token_slang(self):
        cfg = NormalizationConfig(
            slang_map={"idk": "i do not know", "tbh": "to be honest"}
        )
        assert normalize("idk tbh", cfg) == "i do not know to be honest"

    def test_slang_is_whole_token_only(self):
        cfg = NormalizationConfig(slang_map={"idk": "i do not know"})
        assert normalize("idkx", cfg) == "idkx"

    def test_slang_matches_case_insensitively(self):
        cfg = NormalizationConfig(slang_map={"idk": "i do not know"})
        assert normalize("IDK", cfg) == "i do not know"

    def test_longest_emoticon_wins(self):
        cfg = NormalizationConfig(emoticon_map={":)": "<smile>", ":))": "<wide>"})
        assert normalize("hey :))", cfg) == "hey <wide>"

    def test_hashtag_strip_only(self):
        cfg = NormalizationConfig(hashtag_mode="strip_only")
        assert normalize("#BestDayEver", cfg) == "bestdayever"

    def test_hashtag_keep(self):
        cfg = NormalizationConfig(hashtag_mode="keep")
        assert normalize("#BestDayEver", cfg) == "#bestdayever"

    def test_hashtag_digit_and_underscore_boundaries(self):
        cfg = NormalizationConfig()
        assert normalize("#day2night", cfg) == "day 2 night"
        assert normalize("#best_day", cfg) == "best day"
        assert normalize("#HTMLParser", cfg) == "html parser"

    def test_no_lowercase_mode(self):
        cfg = NormalizationConfig(lowercase=False)
        assert normalize("Hello World", cfg) == "Hello World"

    def test_bad_hashtag_mode(self):
        with pytest.raises(ConfigError):
            NormalizationConfig(hashtag_mode="shuffle")

    def test_replacement_with_newline_rejected(self):
        with pytest.raises(ConfigError):
            NormalizationConfig(slang_map={"x": "a\nb"})


def _random_noisy_text(rng: random.Random, emoticons, slang) -> str:
    pieces = []
    words = ["Hello", "WORLD", "it's", "don't", "fun", "Test123", "ok!!", "l8r"]
    for _ in range(rng.randint(1, 12)):
        kind = rng.random()
        if kind < 0.2:
            pieces.append(rng.choice(emoticons))
        elif kind < 0.35:
            pieces.append(rng.choice(slang))
        elif kind < 0.5:
            pieces.append("#" + rng.choice(["BestDayEver", "day2night", "WOW", "best_day"]))
        else:
            pieces.append(rng.choice(words))
    return (" " * rng.randint(1, 3)).join(pieces)


class TestNormalizeIdempotency:
    def test_idempotent_on_random_corpus(self, default_config):
        rng = random.Random(99)
        emoticons = list(default_config.emoticon_map)
        slang = list(default_config.slang_map)
        for _ in range(1000):
            text = _random_noisy_text(rng, emoticons, slang)
            once = normalize(text, default_config)
            assert normalize(once, default_config) == once

    def test_default_maps_are_self_safe(self, default_config):
        # No replacement may contain an emoticon key; no expansion token may
        # be a slang key. Either would break idempotency.
        for replacement in default_config.emoticon_map.values():
            for key in default_config.emoticon_map:
                assert key not in replacement
        slang_keys = {k.lower() for k in default_config.slang_map}
        for expansion in default_config.slang_map.values():
            for token in expansion.split():
                assert token.lower() not in slang_keys

    def test_resource_map_sizes(self, default_config):
        assert len(default_config.emoticon_map) >= 40
        assert len(default_config.slang_map) >= 100


class TestTokenize:
    def test_edge_punctuation(self):
        assert tokenize("good, bad!").tokens == ("good", ",", "bad", "!")

    def test_contraction_split(self):
        assert tokenize("don't stop").tokens == ("do", "n't", "stop")

    def test_whitespace_only(self):
        assert tokenize("   ").tokens == ()

    def test_standalone_nt(self):
        assert tokenize("do n't").tokens == ("do", "n't")

    def test_interior_apostrophe_kept(self):
        assert tokenize("it's fine").tokens == ("it's", "fine")

    def test_multi_edge_punctuation(self):
        assert tokenize('"(wow)!"').tokens == ('"', "(", "wow", ")", "!", '"')

    def test_numbers_keep_interior_punctuation(self):
        assert tokenize("3.5 stars").tokens == ("3.5", "stars")

    def test_contraction_stem_with_interior_punctuation(self):
        # the stem's own trailing punctuation must be peeled too, or the
        # token list would not survive re-tokenization
        assert tokenize("a,n't").tokens == ("a", ",", "n't")

    def test_never_empty_tokens_and_fixpoint(self):
        rng = random.Random(7)
        alphabet = "abcDEFnt'!?.,:#123 \té—"
        for _ in range(500):
            text = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 40)))
            tokens = tokenize(text).tokens
            assert all(tok and not any(ch.isspace() for ch in tok) for tok in tokens)
            assert tokenize(" ".join(tokens)).tokens == tokens


class TestTokenMapLoading:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "map.tsv"
        path.write_text(":)\t<smile>\nidk\ti do not know\n", encoding="utf-8")
        assert load_token_map(path) == {":)": "<smile>", "idk": "i do not know"}

    def test_bad_row(self, tmp_path):
        path = tmp_path / "map.tsv"
        path.write_text("justonefield\n", encoding="utf-8")
        with pytest.raises(ConfigError, match=":1:"):
            load_token_map(path)
