"""Parsing and persistence: term lists, word frequencies, the embedding store,
and annotation files.

Keys are case-sensitive everywhere ("Morning sickness" and "Morning Sickness"
are distinct terms) and tokenization is whitespace splitting only, so names
like "Monteggia's Fracture" keep the apostrophe-s attached.
"""

from __future__ import annotations

import csv
import enum
import json
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Iterator, Sequence

import numpy as np

from .errors import (
    DimInconsistent,
    DimMismatch,
    DuplicateKey,
    InvalidEncoding,
    MalformedRecord,
    MissingColumn,
    UnknownLabel,
)

STORE_FORMAT = "idiolens-embeddings"
STORE_VERSION = 1

#: Words occurring more often than this across the name inventory are "too
#: frequent"; the boundary count itself is retained.
DEFAULT_MAX_FREQ = 10000
#: Words occurring fewer times than this are "too rare"; 10 itself is retained.
DEFAULT_MIN_FREQ = 10


@dataclass(frozen=True)
class TermRecord:
    """A multiword term and its ordered whitespace-split words."""

    term: str
    constituents: tuple[str, ...]

    @classmethod
    def from_text(cls, text: str) -> "TermRecord":
        """Normalize whitespace runs to single spaces and split into words."""
        words = tuple(text.split())
        return cls(term=" ".join(words), constituents=words)


class Label(enum.Enum):
    IDIOMATIC = "idiomatic"
    SELF_EXPLANATORY = "self_explanatory"


@dataclass(frozen=True)
class AnnotatedTerm:
    term: str
    label: Label
    annotator: str


#: word -> occurrence count across all ingested names
VocabFrequency = Counter


def parse_terms(source: Iterable[str | bytes]) -> list[TermRecord]:
    """Parse a line-oriented stream of term names.

    Blank lines are skipped, surrounding whitespace trimmed, and internal
    whitespace runs collapsed to single spaces. Duplicates are preserved;
    deduplication is an explicit caller decision. Byte lines are decoded as
    UTF-8, raising InvalidEncoding with the 1-based line number.
    """
    records: list[TermRecord] = []
    for line_no, raw in enumerate(source, start=1):
        if isinstance(raw, bytes):
            try:
                raw = raw.decode("utf-8")
            except UnicodeDecodeError as exc:
                raise InvalidEncoding(line_no, str(exc)) from exc
        record = TermRecord.from_text(raw)
        if record.term:
            records.append(record)
    return records


def read_terms(path: str | Path) -> list[TermRecord]:
    """``parse_terms`` over a file, decoding per line for exact error locations."""
    with open(path, "rb") as handle:
        return parse_terms(handle)


def build_vocab(all_names: Iterable[TermRecord]) -> VocabFrequency:
    """Count every word token across all input names."""
    vocab: VocabFrequency = Counter()
    for record in all_names:
        vocab.update(record.constituents)
    return vocab


def filter_two_word_terms(
    terms: Iterable[TermRecord],
    vocab: VocabFrequency,
    max_freq: int = DEFAULT_MAX_FREQ,
    min_freq: int = DEFAULT_MIN_FREQ,
) -> list[TermRecord]:
    """Keep exactly the two-word terms whose words are neither too frequent
    nor too rare.

    The exclusion criteria are strict (count > max_freq or count < min_freq),
    so counts of exactly ``min_freq`` and ``max_freq`` are retained.
    """
    kept = []
    for record in terms:
        if len(record.constituents) != 2:
            continue
        counts = [vocab.get(w, 0) for w in record.constituents]
        if all(min_freq <= c <= max_freq for c in counts):
            kept.append(record)
    return kept


class EmbeddingStore:
    """In-memory map from exact text to a float32 embedding vector.

    All vectors share one dimension; a store created with ``dim=None`` adopts
    the dimension of the first vector put into it. The store is immutable by
    convention once loaded; scoring only reads from it.
    """

    def __init__(self, dim: int | None = None, model_id: str = ""):
        if dim is not None and dim < 1:
            raise DimMismatch(f"store dim must be >= 1, got {dim}")
        self.dim = int(dim) if dim is not None else None
        self.model_id = model_id
        self._vectors: dict[str, np.ndarray] = {}

    def __len__(self) -> int:
        return len(self._vectors)

    def __contains__(self, text: str) -> bool:
        return text in self._vectors

    def __iter__(self) -> Iterator[str]:
        return iter(self._vectors)

    def get(self, text: str) -> np.ndarray | None:
        return self._vectors.get(text)

    def __getitem__(self, text: str) -> np.ndarray:
        return self._vectors[text]

    def put(self, text: str, vector: Sequence[float] | np.ndarray) -> None:
        arr = np.asarray(vector, dtype=np.float32)
        if arr.ndim != 1 or arr.shape[0] < 1:
            raise DimMismatch(f"vector for {text!r} has shape {arr.shape}")
        if self.dim is None:
            self.dim = int(arr.shape[0])
        elif arr.shape[0] != self.dim:
            raise DimMismatch(f"vector for {text!r} has length {arr.shape[0]}, store dim {self.dim}")
        if not np.all(np.isfinite(arr)):
            raise DimMismatch(f"vector for {text!r} has non-finite components")
        self._vectors[text] = arr

    def missing(self, texts: Iterable[str]) -> list[str]:
        """The subset of ``texts`` not present, input order preserved."""
        return [t for t in texts if t not in self._vectors]


def load_store(path: str | Path) -> EmbeddingStore:
    """Read a JSONL embedding store written by ``save_store``.

    The first line is a header object; each following line is one record.
    Raises MalformedRecord / DimInconsistent / DuplicateKey with 1-based
    line numbers.
    """
    with open(path, "r", encoding="utf-8") as handle:
        header_line = handle.readline()
        if not header_line.strip():
            raise MalformedRecord(1, "missing header line")
        header = _parse_json_line(header_line, 1)
        if header.get("format") != STORE_FORMAT or "dim" not in header:
            raise MalformedRecord(1, f"not a {STORE_FORMAT} header")
        store = EmbeddingStore(dim=int(header["dim"]), model_id=str(header.get("model_id", "")))
        for line_no, line in enumerate(handle, start=2):
            if not line.strip():
                continue
            record = _parse_json_line(line, line_no)
            if "text" not in record or "vector" not in record:
                raise MalformedRecord(line_no, "record needs 'text' and 'vector'")
            text = record["text"]
            vector = record["vector"]
            if not isinstance(vector, list) or len(vector) != store.dim:
                got = len(vector) if isinstance(vector, list) else -1
                raise DimInconsistent(line_no, store.dim, got)
            if text in store:
                raise DuplicateKey(text)
            store.put(text, vector)
    return store


def save_store(store: EmbeddingStore, path: str | Path) -> None:
    """Write the store as JSONL, keys in insertion order.

    float32 values are serialized through their exact float64 widening, so
    a save/load round trip reproduces every vector bit-exactly.
    """
    if store.dim is None:
        raise DimMismatch("cannot save a store that never adopted a dimension")
    with open(path, "w", encoding="utf-8") as handle:
        header = {
            "format": STORE_FORMAT,
            "version": STORE_VERSION,
            "dim": store.dim,
            "model_id": store.model_id,
        }
        handle.write(json.dumps(header, ensure_ascii=False) + "\n")
        for text in store:
            record = {"text": text, "vector": [float(x) for x in store[text]]}
            handle.write(json.dumps(record, ensure_ascii=False) + "\n")


def parse_annotations(source: IO[str] | Iterable[str]) -> list[AnnotatedTerm]:
    """Parse the annotations CSV: header ``term,label,annotator``.

    ``idiomatic`` and ``semi_idiomatic`` both map to IDIOMATIC (the
    semi-idiomatic group is treated as idiomatic throughout);
    ``self_explanatory`` maps to SELF_EXPLANATORY.
    """
    reader = csv.DictReader(source)
    if reader.fieldnames is None:
        return []
    required = {"term", "label", "annotator"}
    missing_cols = required - set(reader.fieldnames)
    if missing_cols:
        raise MissingColumn(f"annotations CSV lacks columns: {sorted(missing_cols)}")
    annotations = []
    for row in reader:
        line_no = reader.line_num
        raw_label = (row["label"] or "").strip()
        if raw_label in ("idiomatic", "semi_idiomatic"):
            label = Label.IDIOMATIC
        elif raw_label == "self_explanatory":
            label = Label.SELF_EXPLANATORY
        else:
            raise UnknownLabel(line_no, raw_label)
        annotations.append(
            AnnotatedTerm(term=row["term"], label=label, annotator=row["annotator"])
        )
    return annotations


def read_annotations(path: str | Path) -> list[AnnotatedTerm]:
    with open(path, "r", encoding="utf-8", newline="") as handle:
        return parse_annotations(handle)


def _parse_json_line(line: str, line_no: int) -> dict:
    try:
        value = json.loads(line)
    except json.JSONDecodeError as exc:
        raise MalformedRecord(line_no, str(exc)) from exc
    if not isinstance(value, dict):
        raise MalformedRecord(line_no, "expected a JSON object")
    return value
