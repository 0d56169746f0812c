"""Golden parity: the bridge must reproduce the primary component exactly.

The 100-text corpus is generated deterministically, pushed through the
`emosig extract` CLI, and the bridge's serialized outputs are diffed
byte-for-byte against the CLI artifacts.
"""
import json
import random

import pytest

from emosig.cli import main as emosig_main
from emosig.features import extract as core_extract
from emosig.features import token_vectors as core_token_vectors
from emosig.lexicon import Lexicon
from emosig.textprep import tokenize

from emosig_bridge import (
    BridgeSession,
    extract,
    open_session,
    signature_projection,
    token_vectors,
)

LEXICON = {
    "categories": {
        "Active_GI": ["run", "go", "take", "swim", "play", "win"],
        "Hostile_GI": ["hate", "attack", "war", "fight"],
        "Negativ_GI": ["bad", "sad", "hate", "awful", "lose"],
        "Positiv_GI": ["good", "great", "happy", "love", "win"],
    },
    "negators": ["not", "no", "n't", "never"],
    "negation_window": 3,
}


def make_parity_corpus(n: int = 100) -> list[str]:
    rng = random.Random(1789)
    words = [
        "good", "great", "happy", "love", "win", "bad", "sad", "hate",
        "awful", "lose", "run", "go", "take", "swim", "play", "fight",
        "war", "attack", "the", "a", "zebra", "Weather", "don't", "can't",
        "not", "no", "never", ",", "!", "?", "...", "#BestDay", ":)", "OK",
    ]
    corpus = []
    for i in range(n):
        if i == 0:
            corpus.append("")  # empty text must survive the whole path
            continue
        corpus.append(" ".join(rng.choice(words) for _ in range(rng.randint(1, 18))))
    return corpus


@pytest.fixture(scope="module")
def workspace(tmp_path_factory):
    tmp_path = tmp_path_factory.mktemp("parity")
    (tmp_path / "lexicon.json").write_text(json.dumps(LEXICON), encoding="utf-8")
    texts = make_parity_corpus()
    (tmp_path / "corpus.jsonl").write_text(
        "".join(json.dumps({"text": t, "labels": ["x"]}) + "\n" for t in texts),
        encoding="utf-8",
    )
    manifest = {
        "lexicon": "lexicon.json",
        "out_dir": "out",
        "datasets": [
            {
                "id": "parity",
                "path": "corpus.jsonl",
                "format": "jsonl",
                "text_field": "text",
                "labels_field": "labels",
            }
        ],
    }
    (tmp_path / "run.json").write_text(json.dumps(manifest), encoding="utf-8")
    code = emosig_main(["extract", "--manifest", str(tmp_path / "run.json")])
    assert code == 0
    return tmp_path, texts


@pytest.fixture(scope="module")
def session(workspace) -> BridgeSession:
    tmp_path, _ = workspace
    return open_session(tmp_path / "lexicon.json")


def dumps(payload) -> bytes:
    return (
        json.dumps(payload, sort_keys=True, ensure_ascii=False, indent=2) + "\n"
    ).encode("utf-8")


class TestAcceptanceCriterion12:
    def test_bridge_matches_cli_byte_for_byte(self, workspace, session):
        tmp_path, texts = workspace
        cli_payload = json.loads(
            (tmp_path / "out" / "features.parity.json").read_text(encoding="utf-8")
        )
        bridge_rows = [extract(session, text) for text in texts]
        assert dumps(bridge_rows) == dumps(cli_payload["rows"])
        print("[PASS] criterion 12: bridge extract == CLI extract, byte-identical, 100 texts")


class TestExtractParity:
    def test_toy_examples_match_primary(self, session):
        lexicon = Lexicon.build(
            LEXICON["categories"],
            negators=LEXICON["negators"],
            negation_window=LEXICON["negation_window"],
        )
        for text in ("good good bad day", "not good", "", "never win a war"):
            expected = core_extract(tokenize(text), lexicon).to_json_dict()
            assert extract(session, text) == expected

    def test_empty_string(self, session):
        assert extract(session, "") == {"token_count": 0}

    def test_full_corpus_value_parity(self, workspace, session):
        tmp_path, texts = workspace
        lexicon = Lexicon.build(
            LEXICON["categories"],
            negators=LEXICON["negators"],
            negation_window=LEXICON["negation_window"],
        )
        for text in texts:
            assert extract(session, text) == core_extract(
                tokenize(text), lexicon
            ).to_json_dict()


class TestTokenVectorParity:
    def test_direct_membership(self, session):
        # categories sort as Active, Hostile, Negativ, Positiv
        assert token_vectors(session, "good") == [[0, 0, 0, 1]]

    def test_negated_consumed_as_zeros(self, session):
        assert token_vectors(session, "not good") == [[0, 0, 0, 0], [0, 0, 0, 0]]

    def test_absent_word(self, session):
        assert token_vectors(session, "zebra") == [[0, 0, 0, 0]]

    def test_corpus_parity_with_primary(self, workspace, session):
        tmp_path, texts = workspace
        lexicon = Lexicon.build(
            LEXICON["categories"],
            negators=LEXICON["negators"],
            negation_window=LEXICON["negation_window"],
        )
        for text in texts:
            expected = [
                list(v.effective_bits())
                for v in core_token_vectors(tokenize(text), lexicon)
            ]
            assert token_vectors(session, text) == expected


class TestSignatureProjection:
    def test_projection_roundtrip(self, workspace, tmp_path):
        ws, _ = workspace
        sig = {
            "emotion": "joy",
            "dataset_id": "CONSOLIDATED",
            "provenance": ["parity"],
            "features": [
                {"category": "Positiv_GI", "weight": 0.4},
                {"category": "Active_GI", "weight": 0.2},
            ],
        }
        sig_path = tmp_path / "joy.json"
        sig_path.write_text(json.dumps(sig), encoding="utf-8")
        session = open_session(ws / "lexicon.json", [sig_path])
        # union sorted: [Active_GI, Positiv_GI]
        assert signature_projection(session, "good go") == [0.5, 0.5]
        assert signature_projection(session, "") == [0.0, 0.0]

    def test_without_signatures_is_descriptive_error(self, session):
        with pytest.raises(Exception, match="signature_paths"):
            signature_projection(session, "good")


class TestSessionBehavior:
    def test_non_string_input_rejected(self, session):
        with pytest.raises(Exception, match="string"):
            extract(session, 42)

    def test_normalization_modes(self, workspace):
        tmp_path, _ = workspace
        normalized = open_session(tmp_path / "lexicon.json", normalization="default")
        raw = open_session(tmp_path / "lexicon.json")
        assert extract(normalized, "GOOD :)") != extract(raw, "GOOD :)")
        assert extract(normalized, "GOOD")["Positiv_GI"] == extract(raw, "good")["Positiv_GI"]

    def test_bad_normalization_rejected(self, workspace):
        tmp_path, _ = workspace
        with pytest.raises(Exception, match="normalization"):
            open_session(tmp_path / "lexicon.json", normalization="aggressive")

    def test_content_tokens_only_flag(self, workspace):
        tmp_path, _ = workspace
        content = open_session(tmp_path / "lexicon.json", content_tokens_only=True)
        assert content.extract("good !")["Positiv_GI"] == 1.0
