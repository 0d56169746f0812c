import pytest
import torch

from emosig.errors import TrainingError
from emosig.fusion.checkpoint import load_checkpoint, save_checkpoint
from emosig.fusion.encoder import ToyEncoderConfig, build_vocab
from emosig.fusion.layers import build_model
from emosig.fusion.synthetic import EMOTION_CATEGORIES, make_synthetic_data
from emosig.fusion.training import (
    EarlyStopping,
    LabeledText,
    SplitCorpus,
    TrainConfig,
    train,
)


def tiny_corpus(n_per_label=12) -> tuple[SplitCorpus, object]:
    """Scaled-down synthetic data for fast loop tests."""
    data = make_synthetic_data(seed=3, n_sentences=n_per_label * 6)
    return data.corpus, data.lexicon


class TestEarlyStopping:
    def test_worked_schedule(self):
        # scores [.5, .6, .59, .58, .57] with patience 3:
        # best at epoch 2, stop after epoch 5
        stopper = EarlyStopping(patience=3)
        outcomes = [
            stopper.update(epoch, value)
            for epoch, value in enumerate([0.5, 0.6, 0.59, 0.58, 0.57], start=1)
        ]
        assert outcomes == [True, True, False, False, False]
        assert stopper.should_stop is True
        assert stopper.best_epoch == 2

    def test_not_stopped_one_before_patience(self):
        stopper = EarlyStopping(patience=3)
        for epoch, value in enumerate([0.5, 0.6, 0.59, 0.58], start=1):
            stopper.update(epoch, value)
        assert stopper.should_stop is False

    def test_equal_value_is_not_improvement(self):
        stopper = EarlyStopping(patience=2)
        stopper.update(1, 0.5)
        assert stopper.update(2, 0.5) is False


class TestTrainConfig:
    def test_spec_defaults(self):
        cfg = TrainConfig()
        assert cfg.seeds == (1, 2, 10, 21, 42)
        assert cfg.learning_rate == 1e-5
        assert cfg.patience == 3
        assert cfg.dropout_early_fusion == 0.3

    def test_validation(self):
        with pytest.raises(TrainingError):
            TrainConfig(seeds=())
        with pytest.raises(TrainingError):
            TrainConfig(patience=0)
        with pytest.raises(TrainingError):
            TrainConfig(task_mode="ordinal")
        with pytest.raises(TrainingError):
            TrainConfig(learning_rate=0.0)


class TestTrainLoop:
    def test_bitwise_deterministic_results(self):
        corpus, lexicon = tiny_corpus()
        cfg = TrainConfig(seeds=(1,), learning_rate=1e-2, max_epochs=3, batch_size=8)
        first = train("lex_enhance", corpus, cfg, lexicon)
        second = train("lex_enhance", corpus, cfg, lexicon)
        assert first.aggregate.to_json_dict() == second.aggregate.to_json_dict()
        a = first.per_seed[1].model.state_dict()
        b = second.per_seed[1].model.state_dict()
        assert all(torch.equal(a[k], b[k]) for k in a)

    def test_empty_split_rejected(self):
        corpus, lexicon = tiny_corpus()
        broken = SplitCorpus(
            labels=corpus.labels, train=corpus.train, val=[], test=corpus.test
        )
        cfg = TrainConfig(seeds=(1,), max_epochs=1)
        with pytest.raises(TrainingError, match="empty val split"):
            train("baseline", broken, cfg, lexicon)

    def test_unknown_model_kind(self):
        corpus, lexicon = tiny_corpus()
        with pytest.raises(TrainingError):
            train("bert", corpus, TrainConfig(seeds=(1,), max_epochs=1), lexicon)

    def test_label_outside_space_rejected(self):
        corpus, lexicon = tiny_corpus()
        corpus.train.append(LabeledText(text="bu ka", labels=frozenset({"ennui"})))
        cfg = TrainConfig(seeds=(1,), max_epochs=1)
        with pytest.raises(TrainingError, match="ennui"):
            train("baseline", corpus, cfg, lexicon)

    def test_single_seed_std_zero_and_history(self):
        corpus, lexicon = tiny_corpus()
        cfg = TrainConfig(seeds=(1,), learning_rate=1e-2, max_epochs=2, batch_size=8)
        result = train("baseline", corpus, cfg, lexicon)
        assert result.aggregate.seed_stats["macro_f1"].std == 0.0
        run = result.per_seed[1]
        assert [h.epoch for h in run.history] == list(range(1, len(run.history) + 1))
        assert 1 <= run.best_epoch <= len(run.history)

    def test_lex_enhance_carries_signatures(self):
        corpus, lexicon = tiny_corpus()
        cfg = TrainConfig(seeds=(1,), learning_rate=1e-2, max_epochs=1, batch_size=8)
        result = train("lex_enhance", corpus, cfg, lexicon)
        assert {s.emotion for s in result.signatures} == set(corpus.labels)

    def test_single_label_mode_runs(self):
        corpus, lexicon = tiny_corpus()
        cfg = TrainConfig(
            seeds=(1,), learning_rate=1e-2, max_epochs=2, batch_size=8,
            task_mode="single_label",
        )
        result = train("early_fusion", corpus, cfg, lexicon)
        assert 0.0 <= result.aggregate.macro_f1 <= 1.0

    def test_history_rows_shape(self):
        corpus, lexicon = tiny_corpus()
        cfg = TrainConfig(seeds=(1, 2), learning_rate=1e-2, max_epochs=2, batch_size=8)
        result = train("baseline", corpus, cfg, lexicon)
        rows = result.history_rows()
        assert all(row[0] == "baseline" for row in rows)
        assert {row[1] for row in rows} == {1, 2}

    def test_best_epoch_weights_restored(self):
        # A run truncated at the full run's best epoch replays the identical
        # epoch prefix (same seed, same streams), so its final weights must
        # equal the weights the full run restored.
        corpus, lexicon = tiny_corpus()
        full_cfg = TrainConfig(
            seeds=(1,), learning_rate=2e-2, max_epochs=6, batch_size=8, patience=50
        )
        full = train("lex_enhance", corpus, full_cfg, lexicon)
        best_epoch = full.per_seed[1].best_epoch
        truncated_cfg = TrainConfig(
            seeds=(1,), learning_rate=2e-2, max_epochs=best_epoch, batch_size=8,
            patience=50,
        )
        truncated = train("lex_enhance", corpus, truncated_cfg, lexicon)
        a = full.per_seed[1].model.state_dict()
        b = truncated.per_seed[1].model.state_dict()
        assert all(torch.equal(a[k], b[k]) for k in a)
        assert full.per_seed[1].result == truncated.per_seed[1].result


class TestSyntheticCorpus:
    def test_shape_and_balance(self):
        data = make_synthetic_data(seed=7, n_sentences=1000)
        corpus = data.corpus
        assert len(corpus.train) == 700
        assert len(corpus.val) == 150
        assert len(corpus.test) == 150
        assert corpus.labels == tuple(sorted(EMOTION_CATEGORIES))
        assert len(data.lexicon.categories) == 6

    def test_each_text_dominated_by_own_category(self):
        data = make_synthetic_data(seed=7, n_sentences=600)
        lexicon = data.lexicon
        for split in ("train", "val", "test"):
            for item in data.corpus.split(split):
                (label,) = item.labels
                own_cat = EMOTION_CATEGORIES[label]
                tokens = item.text.split()
                content = [t for t in tokens if lexicon.categories_of(t)]
                own = [t for t in content if own_cat in lexicon.categories_of(t)]
                assert content, item.text
                assert len(own) / len(content) >= 0.6

    def test_eval_words_unseen_in_train(self):
        data = make_synthetic_data(seed=7, n_sentences=600)
        lexicon = data.lexicon
        train_words = {t for item in data.corpus.train for t in item.text.split()}
        eval_category_words = {
            t
            for item in data.corpus.test
            for t in item.text.split()
            if lexicon.categories_of(t)
        }
        assert eval_category_words
        assert not (eval_category_words & train_words)

    def test_generation_is_deterministic(self):
        one = make_synthetic_data(seed=7, n_sentences=120)
        two = make_synthetic_data(seed=7, n_sentences=120)
        assert [t.text for t in one.corpus.train] == [t.text for t in two.corpus.train]
        assert one.lexicon == two.lexicon


class TestCheckpoint:
    def test_round_trip_and_byte_determinism(self, tmp_path):
        vocab = build_vocab([("a", "b")])
        cfg = ToyEncoderConfig(vocab=vocab, embed_dim=8, heads=2, seed=4)
        model = build_model("early_fusion", cfg, num_labels=3, gi_dim=2)
        path = tmp_path / "model.bin"
        save_checkpoint(path, model, {"seed": 4, "model": "early_fusion"})
        first_bytes = path.read_bytes()
        state = load_checkpoint(path)
        original = model.state_dict()
        assert set(state) == set(original)
        assert all(torch.equal(state[k], original[k]) for k in state)
        save_checkpoint(path, model, {"seed": 4, "model": "early_fusion"})
        assert path.read_bytes() == first_bytes
        sidecar = (tmp_path / "model.bin.json").read_text(encoding="utf-8")
        assert '"seed": 4' in sidecar

    def test_bad_magic_rejected(self, tmp_path):
        path = tmp_path / "junk.bin"
        path.write_bytes(b"NOTACKPT")
        with pytest.raises(Exception, match="magic"):
            load_checkpoint(path)
