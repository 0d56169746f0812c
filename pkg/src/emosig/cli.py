"""Command-line surface for the signature pipeline and the fusion models.

Subcommands: extract, signatures, compare, train, gradcheck. Every command
is deterministic: rerunning on identical inputs produces byte-identical
output files. Exit codes: 0 success, 1 pipeline/data error, 2 usage or
configuration error.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .analysis import (
    DEFAULT_STRONG_THRESHOLD,
    DEFAULT_UNIVERSAL_THRESHOLD,
    overlap_report,
    similarity_matrix,
)
from .corpus import DatasetManifest, LabelMap, group_by_label, harmonize, ingest
from .errors import ConfigError, EmosigError
from .features import FeatureVector, extract
from .lexicon import Lexicon, load_lexicon
from .resources import LABEL_MAP, SAMPLE_LEXICON, resource_path
from .signatures import (
    CONSOLIDATED_ID,
    DEFAULT_MIN_PRESENCE,
    DEFAULT_RETAIN_FRACTION,
    EmotionSignature,
    build_signature,
    consolidate,
    consolidate_over_texts,
)
from .textprep import NormalizationConfig, load_token_map, normalize, tokenize

# Defaults for a from-scratch toy encoder; the full-scale protocol's 1e-5
# stalls at this scale, so the CLI overrides it unless configured.
DEFAULT_CLI_LEARNING_RATE = 2e-2
DEFAULT_CLI_MAX_EPOCHS = 24
DEFAULT_CLI_BATCH_SIZE = 16


def _dump_json(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, ensure_ascii=False, indent=2) + "\n"


@dataclass
class RunManifest:
    lexicon: Path
    label_map: Path
    out_dir: Path
    datasets: list[DatasetManifest]
    dataset_paths: dict[str, Path]
    top_decile: float
    presence: float
    strong_jaccard: float
    universal: float
    normalization: NormalizationConfig | None

    @classmethod
    def from_file(cls, path: str | Path) -> "RunManifest":
        p = Path(path)
        try:
            data = json.loads(p.read_text(encoding="utf-8"))
        except OSError as exc:
            raise ConfigError(f"cannot read run manifest {p}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{p}: invalid JSON: {exc.msg} (line {exc.lineno})") from exc
        base = p.parent

        def _resolve(value: str) -> Path:
            candidate = Path(value)
            return candidate if candidate.is_absolute() else base / candidate

        lexicon = _resolve(data["lexicon"]) if "lexicon" in data else resource_path(SAMPLE_LEXICON)
        label_map = _resolve(data["label_map"]) if "label_map" in data else resource_path(LABEL_MAP)
        out_dir = _resolve(data.get("out_dir", "out"))
        datasets: list[DatasetManifest] = []
        dataset_paths: dict[str, Path] = {}
        for entry in data.get("datasets", []):
            manifest = DatasetManifest.from_json_dict(entry)
            if manifest.path is None:
                raise ConfigError(f"dataset {manifest.id!r} is missing a 'path'")
            if manifest.id in dataset_paths:
                raise ConfigError(f"duplicate dataset id {manifest.id!r}")
            datasets.append(manifest)
            dataset_paths[manifest.id] = _resolve(manifest.path)
        if not datasets:
            raise ConfigError(f"{p}: manifest declares no datasets")
        thresholds = data.get("thresholds", {})
        manifest_obj = cls(
            lexicon=lexicon,
            label_map=label_map,
            out_dir=out_dir,
            datasets=datasets,
            dataset_paths=dataset_paths,
            top_decile=float(thresholds.get("top_decile", DEFAULT_RETAIN_FRACTION)),
            presence=float(thresholds.get("presence", DEFAULT_MIN_PRESENCE)),
            strong_jaccard=float(thresholds.get("strong_jaccard", DEFAULT_STRONG_THRESHOLD)),
            universal=float(thresholds.get("universal", DEFAULT_UNIVERSAL_THRESHOLD)),
            normalization=_normalization_from(data.get("normalization"), base),
        )
        for name in ("top_decile", "presence", "strong_jaccard", "universal"):
            value = getattr(manifest_obj, name)
            if not 0 < value <= 1:
                raise ConfigError(f"threshold {name} must be in (0, 1], got {value}")
        return manifest_obj


def _normalization_from(spec, base: Path) -> NormalizationConfig | None:
    if spec is None:
        return None
    if spec == "default":
        return NormalizationConfig.default()
    if not isinstance(spec, dict):
        raise ConfigError("'normalization' must be null, \"default\", or an object")

    def _map_from(key: str, default_name: str) -> dict[str, str]:
        if key in spec and spec[key] is not None:
            path = Path(spec[key])
            return load_token_map(path if path.is_absolute() else base / path)
        return load_token_map(resource_path(default_name))

    return NormalizationConfig(
        lowercase=bool(spec.get("lowercase", True)),
        hashtag_mode=spec.get("hashtag_mode", "strip_and_split"),
        emoticon_map=_map_from("emoticons", "emoticons.tsv"),
        slang_map=_map_from("slang", "slang.tsv"),
    )


def _prepare_out_dir(path: Path) -> Path:
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ConfigError(f"cannot create output directory {path}: {exc}") from exc
    return path


def _load_lexicon_checked(path: Path) -> Lexicon:
    if not path.exists():
        raise ConfigError(f"lexicon file not found: {path}")
    return load_lexicon(path)


def _feature_csv(
    vectors: list[FeatureVector], lexicon: Lexicon
) -> str:
    header = list(lexicon.category_names) + ["token_count"]
    lines = [",".join(header)]
    for fv in vectors:
        row = [str(fv.value(name)) for name in lexicon.category_names]
        row.append(str(fv.token_count))
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def _extract_dataset(
    manifest: RunManifest, ds: DatasetManifest, lexicon: Lexicon, content_tokens_only: bool
):
    result = ingest(manifest.dataset_paths[ds.id], ds)
    norm = manifest.normalization
    texts = [
        normalize(r.text, norm) if norm is not None else r.text for r in result.records
    ]
    vectors = [
        extract(tokenize(t), lexicon, content_tokens_only=content_tokens_only)
        for t in texts
    ]
    return result, vectors


def cmd_extract(args) -> int:
    manifest = RunManifest.from_file(args.manifest)
    lexicon = _load_lexicon_checked(Path(args.lexicon) if args.lexicon else manifest.lexicon)
    out_dir = _prepare_out_dir(Path(args.out) if args.out else manifest.out_dir)
    for ds in manifest.datasets:
        result, vectors = _extract_dataset(manifest, ds, lexicon, args.content_tokens_only)
        payload = {
            "dataset_id": ds.id,
            "categories": list(lexicon.category_names),
            "content_tokens_only": args.content_tokens_only,
            "report": result.report.to_json_dict(),
            "rows": [fv.to_json_dict() for fv in vectors],
        }
        (out_dir / f"features.{ds.id}.json").write_text(_dump_json(payload), encoding="utf-8")
        (out_dir / f"features.{ds.id}.csv").write_text(
            _feature_csv(vectors, lexicon), encoding="utf-8"
        )
        print(
            f"{ds.id}: {result.report.rows_ok} rows extracted, "
            f"{result.report.rows_skipped} skipped -> features.{ds.id}.csv/json"
        )
    return 0


def cmd_signatures(args) -> int:
    manifest = RunManifest.from_file(args.manifest)
    lexicon = _load_lexicon_checked(Path(args.lexicon) if args.lexicon else manifest.lexicon)
    label_map = LabelMap.from_file(manifest.label_map)
    out_dir = _prepare_out_dir(Path(args.out) if args.out else manifest.out_dir)
    norm = manifest.normalization
    groups = []
    for ds in manifest.datasets:
        result = ingest(manifest.dataset_paths[ds.id], ds)
        records = harmonize(result.records, label_map)
        if norm is not None:
            records = [
                type(r)(text=normalize(r.text, norm), labels=r.labels, dataset_id=r.dataset_id)
                for r in records
            ]
        groups.extend(group_by_label(records))
    per_emotion: dict[str, list] = {}
    group_index: dict[str, list] = {}
    for group in groups:
        signature = build_signature(
            group,
            lexicon,
            retain_fraction=manifest.top_decile,
            content_tokens_only=args.content_tokens_only,
        )
        name = f"{group.emotion}.{group.dataset_id}.json"
        (out_dir / name).write_text(_dump_json(signature.to_json_dict()), encoding="utf-8")
        per_emotion.setdefault(group.emotion, []).append(signature)
        group_index.setdefault(group.emotion, []).append(group)
    for emotion in sorted(per_emotion):
        if args.presence_unit == "texts":
            merged = consolidate_over_texts(
                emotion,
                group_index[emotion],
                lexicon,
                min_presence=manifest.presence,
                retain_fraction=manifest.top_decile,
                content_tokens_only=args.content_tokens_only,
            )
        else:
            merged = consolidate(per_emotion[emotion], min_presence=manifest.presence)
        name = f"{emotion}.{CONSOLIDATED_ID}.json"
        (out_dir / name).write_text(_dump_json(merged.to_json_dict()), encoding="utf-8")
        print(
            f"{emotion}: {len(per_emotion[emotion])} dataset signature(s), "
            f"{len(merged.features)} consolidated feature(s)"
        )
    return 0


def cmd_compare(args) -> int:
    if len(args.signatures) < 2:
        raise ConfigError("need >= 2 signature files to compare")
    signatures = []
    for raw in args.signatures:
        path = Path(raw)
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except OSError as exc:
            raise ConfigError(f"cannot read signature file {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON: {exc.msg}") from exc
        signatures.append(EmotionSignature.from_json_dict(data))
    matrix = similarity_matrix(signatures)
    report = overlap_report(signatures, args.strong, args.universal)
    out_dir = _prepare_out_dir(Path(args.out))
    (out_dir / "matrix.csv").write_text(matrix.to_csv(), encoding="utf-8")
    (out_dir / "matrix.json").write_text(matrix.to_json(), encoding="utf-8")
    (out_dir / "overlap.json").write_text(report.to_json(), encoding="utf-8")
    pair_lines = ["emotion_a\temotion_b\tjaccard"]
    pair_lines += [f"{a}\t{b}\t{j}" for a, b, j in matrix.pairs()]
    (out_dir / "pairs.tsv").write_text("\n".join(pair_lines) + "\n", encoding="utf-8")
    print(f"{len(matrix.labels)} signatures, {matrix.pair_count()} pairs")
    print(report.summary())
    return 0


def _load_train_config(args):
    try:
        import tomllib  # Python >= 3.11
    except ModuleNotFoundError:  # pragma: no cover - depends on interpreter
        import tomli as tomllib

    from .fusion import TrainConfig

    raw: dict = {}
    if args.config:
        path = Path(args.config)
        try:
            raw = tomllib.loads(path.read_text(encoding="utf-8"))
        except OSError as exc:
            raise ConfigError(f"cannot read train config {path}: {exc}") from exc
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"{path}: invalid TOML: {exc}") from exc
    train_section = raw.get("train", {})
    encoder_section = raw.get("encoder", {})
    corpus_section = raw.get("corpus", {})

    lr_overridden = "learning_rate" not in train_section
    seeds = train_section.get("seeds")
    if args.seed is not None:
        seeds = [args.seed]
    kwargs = dict(
        learning_rate=train_section.get("learning_rate", DEFAULT_CLI_LEARNING_RATE),
        patience=train_section.get("patience", 3),
        dropout_early_fusion=train_section.get("dropout_early_fusion", 0.3),
        max_epochs=train_section.get("max_epochs", DEFAULT_CLI_MAX_EPOCHS),
        batch_size=train_section.get("batch_size", DEFAULT_CLI_BATCH_SIZE),
        task_mode=train_section.get("task_mode", "multi_label"),
        weight_decay=train_section.get("weight_decay", 0.01),
        embed_dim=encoder_section.get("embed_dim", 32),
        layers=encoder_section.get("layers", 1),
        heads=encoder_section.get("heads", 2),
        max_seq=encoder_section.get("max_seq", 64),
    )
    if seeds is not None:
        kwargs["seeds"] = tuple(int(s) for s in seeds)
    cfg = TrainConfig(**kwargs)
    corpus_info = {
        "kind": corpus_section.get("kind", "synthetic"),
        "seed": int(corpus_section.get("seed", 7)),
        "size": int(corpus_section.get("size", 1000)),
    }
    if corpus_info["kind"] != "synthetic":
        raise ConfigError("only the bundled synthetic corpus is supported (kind = 'synthetic')")
    return cfg, corpus_info, lr_overridden


def cmd_train(args) -> int:
    from .fusion import make_synthetic_data, save_checkpoint, train

    cfg, corpus_info, lr_overridden = _load_train_config(args)
    if lr_overridden:
        print(
            f"note: learning_rate defaulted to {cfg.learning_rate} for the toy corpus "
            "(full-scale protocol value is 1e-5; set [train].learning_rate to silence)",
            file=sys.stderr,
        )
    data = make_synthetic_data(seed=corpus_info["seed"], n_sentences=corpus_info["size"])
    result = train(args.model, data.corpus, cfg, data.lexicon)
    out_dir = _prepare_out_dir(Path(args.out))

    payload = {
        "model": args.model,
        "labels": list(result.labels),
        "config": {
            **cfg.to_json_dict(),
            "corpus": corpus_info,
            "learning_rate_overridden_for_toy_corpus": lr_overridden,
        },
        "aggregate": result.aggregate.to_json_dict(),
        "per_seed": {
            str(seed): {
                "best_epoch": run.best_epoch,
                "epochs_run": len(run.history),
                **run.result.to_json_dict(),
            }
            for seed, run in sorted(result.per_seed.items())
        },
    }
    (out_dir / f"eval.{args.model}.json").write_text(_dump_json(payload), encoding="utf-8")
    epoch_lines = ["model,seed,epoch,train_loss,val_macro_f1"]
    epoch_lines += [
        f"{kind},{seed},{epoch},{loss},{f1}"
        for kind, seed, epoch, loss, f1 in result.history_rows()
    ]
    (out_dir / f"epochs.{args.model}.csv").write_text(
        "\n".join(epoch_lines) + "\n", encoding="utf-8"
    )
    if not args.no_checkpoints:
        for seed, run in sorted(result.per_seed.items()):
            save_checkpoint(
                out_dir / f"ckpt.{args.model}.seed{seed}.bin",
                run.model,
                {"model": args.model, "seed": seed, "config": payload["config"]},
            )
    stats = result.aggregate.seed_stats or {}
    f1 = stats.get("macro_f1")
    if f1 is not None:
        print(f"{args.model}: macro-F1 {f1.mean:.4f} ± {f1.std:.4f} over seeds {list(cfg.seeds)}")
    return 0


def cmd_gradcheck(args) -> int:
    from .fusion import grad_check

    worst = 0.0
    for kind in ("early_fusion", "lex_enhance"):
        errors = [
            grad_check(kind, seed=args.seed + i, step=args.step) for i in range(args.draws)
        ]
        kind_worst = max(errors)
        worst = max(worst, kind_worst)
        print(f"{kind}: max relative gradient error {kind_worst:.3e} over {args.draws} draws")
    if worst < args.tol:
        print(f"PASS (< {args.tol})")
        return 0
    print(f"FAIL (>= {args.tol})")
    return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="emosig",
        description="Emotion signature pipeline and lexical-fusion reference models",
    )
    parser.add_argument("--version", action="version", version=f"emosig {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_extract = sub.add_parser("extract", help="feature tables per dataset")
    p_extract.add_argument("--manifest", required=True, help="run manifest JSON")
    p_extract.add_argument("--lexicon", help="override the manifest lexicon path")
    p_extract.add_argument("--out", help="override the manifest output directory")
    p_extract.add_argument(
        "--content-tokens-only",
        action="store_true",
        help="exclude punctuation-only tokens from frequency denominators",
    )
    p_extract.set_defaults(func=cmd_extract)

    p_sig = sub.add_parser("signatures", help="per-dataset and consolidated signatures")
    p_sig.add_argument("--manifest", required=True)
    p_sig.add_argument("--lexicon")
    p_sig.add_argument("--out")
    p_sig.add_argument(
        "--presence-unit",
        choices=("signatures", "texts"),
        default="signatures",
        help="unit for the 50%% consolidation rule",
    )
    p_sig.add_argument("--content-tokens-only", action="store_true")
    p_sig.set_defaults(func=cmd_signatures)

    p_cmp = sub.add_parser("compare", help="Jaccard matrix and overlap report")
    p_cmp.add_argument("signatures", nargs="+", help="signature JSON files")
    p_cmp.add_argument("--out", required=True)
    p_cmp.add_argument("--strong", type=float, default=DEFAULT_STRONG_THRESHOLD)
    p_cmp.add_argument("--universal", type=float, default=DEFAULT_UNIVERSAL_THRESHOLD)
    p_cmp.set_defaults(func=cmd_compare)

    p_train = sub.add_parser("train", help="train a fusion model on the synthetic corpus")
    p_train.add_argument(
        "--model",
        required=True,
        choices=("baseline", "lex_enhance", "early_fusion"),
    )
    p_train.add_argument("--config", help="TOML run configuration")
    p_train.add_argument("--out", required=True)
    p_train.add_argument("--seed", type=int, help="train a single seed instead of the config list")
    p_train.add_argument("--no-checkpoints", action="store_true")
    p_train.set_defaults(func=cmd_train)

    p_grad = sub.add_parser("gradcheck", help="verify fusion gradients by finite differences")
    p_grad.add_argument("--seed", type=int, default=0)
    p_grad.add_argument("--draws", type=int, default=20)
    p_grad.add_argument("--step", type=float, default=1e-5)
    p_grad.add_argument("--tol", type=float, default=1e-4)
    p_grad.set_defaults(func=cmd_gradcheck)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except EmosigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
