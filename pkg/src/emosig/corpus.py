"""Dataset ingestion, label harmonization, and per-label grouping.

Ingestion is tolerant at row level (bad rows are skipped and reported) but
fatal at file level. Harmonization is fail-closed: every raw label must
resolve through the label map or the whole call errors, listing the
offenders. Grouping duplicates a record's text under every one of its
labels so co-occurrence information is preserved.
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError, HarmonizationError, IngestError


@dataclass(frozen=True)
class Record:
    text: str
    labels: frozenset[str]
    dataset_id: str

    def sorted_labels(self) -> tuple[str, ...]:
        return tuple(sorted(self.labels))


@dataclass(frozen=True)
class DatasetManifest:
    id: str
    format: str
    text_field: str
    labels_field: str
    label_delimiter: str = ","
    path: str | None = None

    def __post_init__(self) -> None:
        if self.format not in ("jsonl", "csv"):
            raise ConfigError(f"dataset format must be 'jsonl' or 'csv', got {self.format!r}")
        if not self.id:
            raise ConfigError("dataset manifest needs a non-empty id")

    @classmethod
    def from_json_dict(cls, data: dict) -> "DatasetManifest":
        try:
            return cls(
                id=data["id"],
                format=data["format"],
                text_field=data["text_field"],
                labels_field=data["labels_field"],
                label_delimiter=data.get("label_delimiter", ","),
                path=data.get("path"),
            )
        except KeyError as exc:
            raise ConfigError(f"dataset manifest missing field {exc.args[0]!r}") from exc


@dataclass(frozen=True)
class RowError:
    row: int
    reason: str


@dataclass
class IngestReport:
    dataset_id: str
    rows_total: int = 0
    rows_ok: int = 0
    errors: list[RowError] = field(default_factory=list)

    @property
    def rows_skipped(self) -> int:
        return len(self.errors)

    def to_json_dict(self) -> dict:
        return {
            "dataset_id": self.dataset_id,
            "rows_total": self.rows_total,
            "rows_ok": self.rows_ok,
            "rows_skipped": self.rows_skipped,
            "errors": [{"row": e.row, "reason": e.reason} for e in self.errors],
        }


@dataclass
class IngestResult:
    records: list[Record]
    report: IngestReport


@dataclass(frozen=True)
class LabelMap:
    """Raw label -> canonical emotion aliases.

    Canonical names (alias values) resolve to themselves, which makes
    harmonization idempotent without identity entries in the file.
    """

    aliases: dict[str, str]

    def __post_init__(self) -> None:
        for raw, canon in self.aliases.items():
            if not raw or not canon:
                raise ConfigError("label map entries must be non-empty")
            if canon != canon.lower():
                raise ConfigError(f"canonical label {canon!r} must be lowercase")

    @classmethod
    def from_file(cls, path: str | Path) -> "LabelMap":
        p = Path(path)
        try:
            data = json.loads(p.read_text(encoding="utf-8"))
        except OSError as exc:
            raise ConfigError(f"cannot read label map {p}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{p}: invalid JSON: {exc.msg} (line {exc.lineno})") from exc
        if not isinstance(data, dict) or not isinstance(data.get("aliases"), dict):
            raise ConfigError(f"{p}: expected an object with an 'aliases' mapping")
        aliases = {str(k).strip().lower(): str(v).strip().lower() for k, v in data["aliases"].items()}
        return cls(aliases=aliases)

    def resolve(self, label: str) -> str | None:
        if label in self.aliases:
            return self.aliases[label]
        if label in self._canonical():
            return label
        return None

    def _canonical(self) -> frozenset[str]:
        return frozenset(self.aliases.values())


def _clean_labels(raw, delimiter: str) -> list[str]:
    if isinstance(raw, str):
        parts = raw.split(delimiter)
    elif isinstance(raw, list):
        parts = [str(x) for x in raw]
    else:
        raise ValueError(f"labels must be a string or list, got {type(raw).__name__}")
    return [p.strip().lower() for p in parts if p.strip()]


def _ingest_jsonl(path: Path, manifest: DatasetManifest, report: IngestReport) -> list[Record]:
    records: list[Record] = []
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise IngestError(f"cannot read dataset file {path}: {exc}") from exc
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        report.rows_total += 1
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            report.errors.append(RowError(lineno, f"invalid JSON: {exc.msg}"))
            continue
        if not isinstance(obj, dict):
            report.errors.append(RowError(lineno, "row is not a JSON object"))
            continue
        record = _row_to_record(obj, manifest, lineno, report)
        if record is not None:
            records.append(record)
    return records


def _ingest_csv(path: Path, manifest: DatasetManifest, report: IngestReport) -> list[Record]:
    records: list[Record] = []
    try:
        with path.open(encoding="utf-8", newline="") as handle:
            reader = csv.DictReader(handle)
            if reader.fieldnames is None:
                raise IngestError(f"{path}: empty CSV file")
            for required in (manifest.text_field, manifest.labels_field):
                if required not in reader.fieldnames:
                    raise IngestError(f"{path}: declared field {required!r} not in CSV header")
            for rownum, row in enumerate(reader, start=2):
                report.rows_total += 1
                record = _row_to_record(row, manifest, rownum, report)
                if record is not None:
                    records.append(record)
    except OSError as exc:
        raise IngestError(f"cannot read dataset file {path}: {exc}") from exc
    except csv.Error as exc:
        raise IngestError(f"{path}: CSV parse failure: {exc}") from exc
    return records


def _row_to_record(
    row: dict, manifest: DatasetManifest, rownum: int, report: IngestReport
) -> Record | None:
    text = row.get(manifest.text_field)
    if not isinstance(text, str):
        report.errors.append(RowError(rownum, f"missing text field {manifest.text_field!r}"))
        return None
    raw_labels = row.get(manifest.labels_field)
    if raw_labels is None:
        report.errors.append(RowError(rownum, f"missing labels field {manifest.labels_field!r}"))
        return None
    try:
        labels = _clean_labels(raw_labels, manifest.label_delimiter)
    except ValueError as exc:
        report.errors.append(RowError(rownum, str(exc)))
        return None
    if not labels:
        report.errors.append(RowError(rownum, "no labels after cleaning"))
        return None
    report.rows_ok += 1
    return Record(text=text, labels=frozenset(labels), dataset_id=manifest.id)


def ingest(path: str | Path, manifest: DatasetManifest) -> IngestResult:
    """Read one dataset file into Records, collecting row-level problems."""
    p = Path(path)
    report = IngestReport(dataset_id=manifest.id)
    if manifest.format == "jsonl":
        records = _ingest_jsonl(p, manifest, report)
    else:
        records = _ingest_csv(p, manifest, report)
    return IngestResult(records=records, report=report)


def harmonize(records: list[Record], label_map: LabelMap) -> list[Record]:
    """Replace raw labels with canonical emotions; unmapped labels are fatal."""
    unmapped: set[str] = set()
    for record in records:
        for label in record.labels:
            if label_map.resolve(label) is None:
                unmapped.add(label)
    if unmapped:
        raise HarmonizationError(
            "unmapped labels: " + ", ".join(sorted(unmapped))
        )
    out = []
    for record in records:
        canonical = frozenset(label_map.resolve(lbl) for lbl in record.labels)
        out.append(Record(text=record.text, labels=canonical, dataset_id=record.dataset_id))
    return out


@dataclass(frozen=True)
class LabelGroup:
    emotion: str
    dataset_id: str
    texts: tuple[str, ...]


def group_by_label(records: list[Record]) -> list[LabelGroup]:
    """Group texts by (emotion, dataset), duplicating multi-label records.

    A record with k labels lands in exactly k groups; within a group, text
    order follows input order. Groups are returned sorted by
    (emotion, dataset_id).
    """
    buckets: dict[tuple[str, str], list[str]] = {}
    for record in records:
        for label in record.sorted_labels():
            buckets.setdefault((label, record.dataset_id), []).append(record.text)
    return [
        LabelGroup(emotion=emotion, dataset_id=ds, texts=tuple(texts))
        for (emotion, ds), texts in sorted(buckets.items())
    ]
