"""Ingestion and cleaning of altmetric-style article records.

Records are read from CSV or JSONL, then pushed through a fixed cleaning
pipeline: year filter, de-duplication by id, removal of mostly-null mention
sources, null handling, and binarization of the patent-citation target.
"""

from __future__ import annotations

import csv
import hashlib
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

logger = logging.getLogger(__name__)

# Modeled sources first, in the order they are usually listed; the sparse
# ones follow and are expected to be dropped by select_features.
PREDICTOR_SOURCES = (
    "news",
    "blogs",
    "policy",
    "twitter",
    "facebook",
    "wikipedia",
    "googleplus",
    "mendeley",
)
SPARSE_SOURCES = ("weibo", "f1000", "qna", "reddit")
SOURCES = PREDICTOR_SOURCES + SPARSE_SOURCES

CSV_COLUMNS = ("id", "year") + SOURCES + ("paper_citations", "patent_citations")

NULL_POLICIES = ("treat-as-zero", "drop-record")


class DataError(ValueError):
    """Raised for unreadable, malformed or unusable input data."""


@dataclass(frozen=True)
class RawRecord:
    id: str
    year: int
    mentions: dict = field(default_factory=dict)
    paper_citations: Optional[int] = None
    patent_citations: Optional[int] = None

    def __post_init__(self):
        if not self.id:
            raise DataError("record id must be non-empty")
        unknown = set(self.mentions) - set(SOURCES)
        if unknown:
            raise DataError(f"unknown mention sources: {sorted(unknown)}")
        # normalise so every source key is present
        full = {s: self.mentions.get(s) for s in SOURCES}
        object.__setattr__(self, "mentions", full)
        counts = list(full.values()) + [self.paper_citations, self.patent_citations]
        for value in counts:
            if value is not None and value < 0:
                raise DataError(f"negative count in record {self.id!r}")

    def __getitem__(self, source):
        return self.mentions[source]


@dataclass(frozen=True)
class CleanConfig:
    min_year_exclusive: int = 2010
    sparse_null_fraction: float = 0.5
    null_count_policy: str = "treat-as-zero"
    dedup_policy: str = "keep-first"

    def __post_init__(self):
        if not 0.0 <= self.sparse_null_fraction <= 1.0:
            raise ValueError("sparse_null_fraction must lie in [0, 1]")
        if self.null_count_policy not in NULL_POLICIES:
            raise ValueError(f"null_count_policy must be one of {NULL_POLICIES}")
        if self.dedup_policy != "keep-first":
            raise ValueError("only the keep-first dedup policy is supported")


def _frozen(arr, dtype):
    out = np.array(arr, dtype=dtype, copy=True)
    out.flags.writeable = False
    return out


@dataclass(frozen=True, eq=False)
class Dataset:
    """Modeling-ready table: one row per article.

    ``labels`` is the binarized target. ``patent_citations`` keeps the raw
    count and ``paper_citations`` the scholarly citation count; neither is
    ever used as a model feature.
    """

    feature_names: tuple
    features: np.ndarray
    labels: np.ndarray
    paper_citations: np.ndarray
    ids: tuple
    patent_citations: Optional[np.ndarray] = None
    years: Optional[np.ndarray] = None

    def __post_init__(self):
        names = tuple(self.feature_names)
        if len(set(names)) != len(names):
            raise DataError("duplicate feature names")
        n = len(self.ids)
        features = np.asarray(self.features, dtype=np.float64).reshape(n, len(names))
        labels = np.asarray(self.labels, dtype=np.int64)
        if labels.shape != (n,) or len(self.paper_citations) != n:
            raise DataError("row counts of features, labels, ids and citations differ")
        if n and not np.isin(labels, (0, 1)).all():
            raise DataError("labels must be 0 or 1")
        if n and (features < 0).any():
            raise DataError("features must be non-negative")
        patents = self.patent_citations
        if patents is None:
            patents = labels
        years = self.years if self.years is not None else np.zeros(n, dtype=np.int64)
        object.__setattr__(self, "feature_names", names)
        object.__setattr__(self, "ids", tuple(str(i) for i in self.ids))
        object.__setattr__(self, "features", _frozen(features, np.float64))
        object.__setattr__(self, "labels", _frozen(labels, np.int64))
        object.__setattr__(self, "paper_citations", _frozen(self.paper_citations, np.int64))
        object.__setattr__(self, "patent_citations", _frozen(patents, np.int64))
        object.__setattr__(self, "years", _frozen(years, np.int64))

    def __len__(self):
        return len(self.ids)

    @property
    def n_features(self):
        return len(self.feature_names)

    def subset(self, rows) -> "Dataset":
        rows = np.asarray(rows, dtype=np.int64)
        return Dataset(
            feature_names=self.feature_names,
            features=self.features[rows],
            labels=self.labels[rows],
            paper_citations=self.paper_citations[rows],
            ids=tuple(self.ids[i] for i in rows),
            patent_citations=self.patent_citations[rows],
            years=self.years[rows],
        )

    def checksum(self) -> str:
        h = hashlib.sha256()
        h.update("\x1f".join(self.feature_names).encode())
        h.update("\x1f".join(self.ids).encode())
        for arr in (self.features, self.labels, self.paper_citations,
                    self.patent_citations, self.years):
            h.update(np.ascontiguousarray(arr).tobytes())
        return h.hexdigest()


@dataclass
class CleanReport:
    records_read: int = 0
    duplicates_removed: int = 0
    year_filtered: int = 0
    null_dropped: int = 0
    dropped_features: list = field(default_factory=list)
    positives: int = 0
    negatives: int = 0

    def to_dict(self):
        return {
            "records_read": self.records_read,
            "duplicates_removed": self.duplicates_removed,
            "year_filtered": self.year_filtered,
            "null_dropped": self.null_dropped,
            "dropped_features": [
                {"source": s, "null_fraction": frac} for s, frac in self.dropped_features
            ],
            "positives": self.positives,
            "negatives": self.negatives,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def to_text(self) -> str:
        lines = [
            f"records read        {self.records_read}",
            f"year filtered       {self.year_filtered}",
            f"duplicates removed  {self.duplicates_removed}",
            f"null dropped        {self.null_dropped}",
            f"rows retained       {self.positives + self.negatives}",
            f"  cited by patents  {self.positives}",
            f"  not cited         {self.negatives}",
        ]
        if self.dropped_features:
            dropped = ", ".join(f"{s} ({frac:.1%} null)" for s, frac in self.dropped_features)
            lines.append(f"dropped features    {dropped}")
        else:
            lines.append("dropped features    none")
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# parsing


def _parse_count(value, column, line):
    if value is None:
        return None
    if isinstance(value, str):
        value = value.strip()
        if value == "":
            return None
        try:
            value = int(value)
        except ValueError:
            raise DataError(f"line {line}: {column}={value!r} is not an integer") from None
    elif isinstance(value, bool) or not isinstance(value, int):
        raise DataError(f"line {line}: {column}={value!r} is not an integer")
    if value < 0:
        raise DataError(f"line {line}: {column}={value} is negative")
    return value


def _record_from_fields(fields: dict, line: int) -> RawRecord:
    rid = fields.get("id")
    if rid is None or str(rid).strip() == "":
        raise DataError(f"line {line}: missing id")
    year = _parse_count(fields.get("year"), "year", line)
    if year is None:
        raise DataError(f"line {line}: missing year")
    mentions = {s: _parse_count(fields.get(s), s, line) for s in SOURCES}
    return RawRecord(
        id=str(rid).strip(),
        year=year,
        mentions=mentions,
        paper_citations=_parse_count(fields.get("paper_citations"), "paper_citations", line),
        patent_citations=_parse_count(fields.get("patent_citations"), "patent_citations", line),
    )


def _parse_csv(fh) -> list[RawRecord]:
    reader = csv.reader(fh)
    header = next(reader, None)
    if header is None:
        return []
    header = [h.strip() for h in header]
    missing = [c for c in ("id", "year") if c not in header]
    if missing:
        raise DataError(f"line 1: header lacks required columns {missing}")
    records = []
    for row in reader:
        line = reader.line_num
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != len(header):
            raise DataError(f"line {line}: expected {len(header)} fields, got {len(row)}")
        records.append(_record_from_fields(dict(zip(header, row)), line))
    return records


def _parse_jsonl(fh) -> list[RawRecord]:
    records = []
    for line, text in enumerate(fh, start=1):
        if not text.strip():
            continue
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DataError(f"line {line}: invalid JSON ({exc.msg})") from None
        if not isinstance(obj, dict):
            raise DataError(f"line {line}: expected a JSON object")
        records.append(_record_from_fields(obj, line))
    return records


def parse_records(path, format: Optional[str] = None) -> list[RawRecord]:
    """Read raw records from a CSV or JSONL file.

    ``format`` defaults to the file extension (``.jsonl``/``.json`` means
    JSONL, anything else CSV). Empty fields and absent keys become nulls.
    """
    path = Path(path)
    if format is None:
        format = "jsonl" if path.suffix.lower() in (".jsonl", ".json") else "csv"
    if format not in ("csv", "jsonl"):
        raise ValueError(f"unknown format {format!r}")
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror}") from None
    with fh:
        if format == "csv":
            return _parse_csv(fh)
        return _parse_jsonl(fh)


def _fmt(value):
    return "" if value is None else str(value)


def write_records_csv(records: Iterable[RawRecord], path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for r in records:
            writer.writerow(
                [r.id, r.year]
                + [_fmt(r.mentions[s]) for s in SOURCES]
                + [_fmt(r.paper_citations), _fmt(r.patent_citations)]
            )


def write_dataset_csv(dataset: Dataset, path) -> None:
    """Write a cleaned dataset back out in the raw-record CSV layout.

    Sources that were dropped are left empty, so re-cleaning the file drops
    them again and otherwise reproduces the same dataset.
    """
    col = {name: j for j, name in enumerate(dataset.feature_names)}
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for i, rid in enumerate(dataset.ids):
            row = dataset.features[i]
            mentions = [
                str(int(row[col[s]])) if s in col else "" for s in SOURCES
            ]
            writer.writerow(
                [rid, int(dataset.years[i])]
                + mentions
                + [int(dataset.paper_citations[i]), int(dataset.patent_citations[i])]
            )


# ---------------------------------------------------------------------------
# cleaning stages


def filter_by_year(records: Sequence[RawRecord], min_year_exclusive: int = 2010) -> list[RawRecord]:
    return [r for r in records if r.year > min_year_exclusive]


def deduplicate(records: Sequence[RawRecord]) -> tuple[list[RawRecord], int]:
    seen = set()
    kept = []
    for r in records:
        if r.id in seen:
            continue
        seen.add(r.id)
        kept.append(r)
    return kept, len(records) - len(kept)


def select_features(records: Sequence[RawRecord], config: CleanConfig = CleanConfig()):
    """Split the mention sources into retained and dropped lists.

    A source is dropped when its null fraction strictly exceeds
    ``config.sparse_null_fraction``. Returns ``(retained, dropped)`` where
    ``dropped`` holds ``(source, null_fraction)`` pairs.
    """
    if not records:
        raise DataError("cannot select features from an empty record list")
    n = len(records)
    retained, dropped = [], []
    for source in SOURCES:
        nulls = sum(1 for r in records if r.mentions[source] is None)
        frac = nulls / n
        if frac > config.sparse_null_fraction:
            dropped.append((source, frac))
        else:
            retained.append(source)
    return retained, dropped


def binarize_target(patent_citations: Optional[int]) -> Optional[int]:
    """1 if the article has any patent citation, 0 if none.

    ``None`` passes through; the caller drops such records.
    """
    if patent_citations is None:
        return None
    if patent_citations < 0:
        raise DataError(f"negative patent citation count {patent_citations}")
    return 1 if patent_citations > 0 else 0


def clean(records: Sequence[RawRecord], config: CleanConfig = CleanConfig()) -> tuple[Dataset, CleanReport]:
    report = CleanReport(records_read=len(records))

    recent = filter_by_year(records, config.min_year_exclusive)
    report.year_filtered = len(records) - len(recent)
    if not recent:
        raise DataError("no records left after the year filter")

    unique, report.duplicates_removed = deduplicate(recent)
    retained, dropped = select_features(unique, config)
    report.dropped_features = dropped

    drop_nulls = config.null_count_policy == "drop-record"
    rows, labels, paper, patents, ids, years = [], [], [], [], [], []
    for r in unique:
        label = binarize_target(r.patent_citations)
        if label is None:
            report.null_dropped += 1
            continue
        values = [r.mentions[s] for s in retained]
        if drop_nulls and (r.paper_citations is None or any(v is None for v in values)):
            report.null_dropped += 1
            continue
        rows.append([0 if v is None else v for v in values])
        labels.append(label)
        paper.append(r.paper_citations or 0)
        patents.append(r.patent_citations)
        ids.append(r.id)
        years.append(r.year)

    if not rows:
        raise DataError("every record was eliminated during cleaning")

    report.positives = sum(labels)
    report.negatives = len(labels) - report.positives
    dataset = Dataset(
        feature_names=tuple(retained),
        features=np.array(rows, dtype=np.float64).reshape(len(rows), len(retained)),
        labels=labels,
        paper_citations=paper,
        ids=tuple(ids),
        patent_citations=patents,
        years=years,
    )
    logger.info(
        "cleaned %d records into %d rows (%d features)",
        report.records_read, len(dataset), dataset.n_features,
    )
    return dataset, report


def load_dataset(path, format=None, config: CleanConfig = CleanConfig()) -> tuple[Dataset, CleanReport]:
    return clean(parse_records(path, format), config)


def fixture_path() -> Path:
    """Location of the bundled 20-record fixture corpus."""
    return Path(__file__).parent / "data" / "fixture_corpus.csv"
