"""Labeled-corpus ingestion, class statistics, class weights, and
deterministic stratified splits.

Input files are UTF-8 TSV or CSV with a header naming the columns ``id``,
``text`` and ``label`` (any column order). Text is normalized at load
time: Unicode NFC, leading/trailing whitespace stripped, internal
whitespace runs collapsed to single spaces. Label 1 is always the
harmful (positive) class.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
import unicodedata
from dataclasses import dataclass, field

import csv

from .errors import (
    ConfigError,
    DegenerateClass,
    DuplicateId,
    EmptyText,
    ParseError,
    UnknownLabel,
)

TASKS = ("abusive", "threatening")
FORMATS = {"tsv": "\t", "csv": ","}

DEFAULT_LABEL_MAP = {"0": 0, "1": 1}

WEIGHT_SCHEMES = ("uniform", "inverse_frequency")


def normalize_text(text: str) -> str:
    """NFC-normalize, strip, and collapse whitespace runs to single spaces."""
    return " ".join(unicodedata.normalize("NFC", text).split())


@dataclass(frozen=True)
class LabeledExample:
    """One text instance: opaque id, normalized text, binary label."""

    id: str
    text: str
    label: int

    def __post_init__(self):
        if not self.id:
            raise ValueError("example id must be nonempty")
        if self.label not in (0, 1):
            raise ValueError(f"label must be 0 or 1, got {self.label!r}")
        if not self.text:
            raise ValueError(f"example {self.id!r} has empty text")


@dataclass
class Dataset:
    """An ordered collection of labeled examples with unique ids."""

    name: str
    task: str
    examples: list[LabeledExample]

    def __post_init__(self):
        if self.task not in TASKS:
            raise ValueError(f"unknown task {self.task!r}")
        seen = set()
        for ex in self.examples:
            if ex.id in seen:
                raise DuplicateId(f"duplicate id {ex.id!r} in dataset {self.name!r}")
            seen.add(ex.id)

    def __len__(self) -> int:
        return len(self.examples)

    def __iter__(self):
        return iter(self.examples)

    def ids(self) -> list[str]:
        return [ex.id for ex in self.examples]

    def texts(self) -> list[str]:
        return [ex.text for ex in self.examples]

    def labels(self) -> list[int]:
        return [ex.label for ex in self.examples]


@dataclass(frozen=True)
class ClassCounts:
    """Per-class instance counts; ``total`` must equal their sum."""

    n_positive: int
    n_negative: int
    total: int

    def __post_init__(self):
        if self.n_positive < 0 or self.n_negative < 0:
            raise ValueError("class counts must be non-negative")
        if self.total != self.n_positive + self.n_negative:
            raise ValueError("total must equal n_positive + n_negative")


@dataclass(frozen=True)
class ClassWeights:
    """Per-class loss multipliers used during training."""

    w_positive: float
    w_negative: float

    def __post_init__(self):
        if self.w_positive <= 0 or self.w_negative <= 0:
            raise ValueError("class weights must be positive")

    def for_label(self, label: int) -> float:
        return self.w_positive if label == 1 else self.w_negative


UNIFORM_WEIGHTS = ClassWeights(1.0, 1.0)


def load_dataset(path, format="tsv", label_map=None, *, name=None, task="abusive") -> Dataset:
    """Read a labeled dataset from a TSV/CSV file.

    ``label_map`` maps raw label strings in the file onto {0, 1}; it must
    cover every label value present. Row order in the file is preserved.
    Raises ParseError (with line number), DuplicateId, UnknownLabel or
    EmptyText on bad content.
    """
    if format not in FORMATS:
        raise ConfigError(f"unknown file format {format!r}, expected one of {sorted(FORMATS)}")
    if label_map is None:
        label_map = DEFAULT_LABEL_MAP
    for raw, mapped in label_map.items():
        if mapped not in (0, 1):
            raise ConfigError(f"label map must target 0/1, got {raw!r} -> {mapped!r}")

    examples: list[LabeledExample] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh, delimiter=FORMATS[format])
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{path}: empty file, expected a header row") from None
        columns = {h.strip().lower(): i for i, h in enumerate(header)}
        missing = {"id", "text", "label"} - columns.keys()
        if missing:
            raise ParseError(f"{path}: header is missing column(s) {sorted(missing)}")

        for row in reader:
            line = reader.line_num
            if not row:
                continue  # blank line
            if len(row) != len(header):
                raise ParseError(
                    f"{path}:{line}: expected {len(header)} fields, got {len(row)}"
                )
            ex_id = row[columns["id"]].strip()
            if not ex_id:
                raise ParseError(f"{path}:{line}: empty id")
            if ex_id in seen:
                raise DuplicateId(f"{path}:{line}: duplicate id {ex_id!r}")
            raw_label = row[columns["label"]].strip()
            if raw_label not in label_map:
                raise UnknownLabel(
                    f"{path}:{line}: label {raw_label!r} not covered by the label map"
                )
            text = normalize_text(row[columns["text"]])
            if not text:
                raise EmptyText(f"{path}:{line}: empty text for id {ex_id!r}")
            seen.add(ex_id)
            examples.append(LabeledExample(ex_id, text, label_map[raw_label]))

    if name is None:
        name = os.path.splitext(os.path.basename(str(path)))[0]
    return Dataset(name=name, task=task, examples=examples)


def save_dataset(dataset: Dataset, path, format="tsv", label_names=None) -> None:
    """Write a dataset back out in the input file shape (id, text, label)."""
    if format not in FORMATS:
        raise ConfigError(f"unknown file format {format!r}")
    if label_names is None:
        label_names = {0: "0", 1: "1"}
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, delimiter=FORMATS[format], lineterminator="\n")
        writer.writerow(["id", "text", "label"])
        for ex in dataset:
            writer.writerow([ex.id, ex.text, label_names[ex.label]])


def dataset_stats(dataset: Dataset) -> ClassCounts:
    """Exact per-class example counts."""
    n_pos = sum(1 for ex in dataset if ex.label == 1)
    return ClassCounts(n_pos, len(dataset) - n_pos, len(dataset))


def class_weights(counts: ClassCounts, scheme="inverse_frequency") -> ClassWeights:
    """Training weights per class.

    ``uniform`` gives (1, 1). ``inverse_frequency`` gives
    w_c = total / (2 * n_c), so the mean weight over examples is 1 and
    the minority class gets proportionally more loss mass.
    """
    if scheme == "uniform":
        return UNIFORM_WEIGHTS
    if scheme == "inverse_frequency":
        if counts.n_positive == 0 or counts.n_negative == 0:
            raise DegenerateClass(
                "inverse-frequency weights need at least one example of each class"
            )
        return ClassWeights(
            counts.total / (2.0 * counts.n_positive),
            counts.total / (2.0 * counts.n_negative),
        )
    raise ConfigError(f"unknown weight scheme {scheme!r}, expected one of {WEIGHT_SCHEMES}")


def _rank_digest(example_id: str, seed: int) -> bytes:
    return hashlib.blake2b(
        f"{seed}:{example_id}".encode("utf-8"), digest_size=8
    ).digest()


def stratified_split(dataset: Dataset, train_fraction: float, seed: int):
    """Deterministic per-class train/validation partition.

    Per class the train side receives floor(train_fraction * n_c)
    examples, plus one extra to the class of largest fractional remainder
    until the train total reaches round(train_fraction * total).
    Membership is decided by a seeded hash of the example id, so
    reordering the input file does not change the partition.

    Returns (train, validation) datasets preserving the input order.
    """
    if not 0.0 < train_fraction < 1.0:
        raise ValueError(f"train fraction must lie in (0, 1), got {train_fraction}")

    by_class: dict[int, list[str]] = {0: [], 1: []}
    for ex in dataset:
        by_class[ex.label].append(ex.id)
    for label in (0, 1):
        if not by_class[label]:
            raise DegenerateClass(
                f"class {label} has no examples in dataset {dataset.name!r}; cannot split"
            )

    take = {c: math.floor(train_fraction * len(ids)) for c, ids in by_class.items()}
    remainder = {
        c: train_fraction * len(ids) - take[c] for c, ids in by_class.items()
    }
    target = math.floor(train_fraction * len(dataset) + 0.5)
    extras = target - sum(take.values())
    # Largest remainder first; ties go to the positive class.
    order = sorted(by_class, key=lambda c: (-remainder[c], -c))
    while extras > 0:
        progressed = False
        for c in order:
            if extras > 0 and take[c] < len(by_class[c]):
                take[c] += 1
                extras -= 1
                progressed = True
        if not progressed:
            break  # every class already fully assigned to train

    train_ids: set[str] = set()
    for c, ids in by_class.items():
        ranked = sorted(ids, key=lambda ex_id: (_rank_digest(ex_id, seed), ex_id))
        train_ids.update(ranked[: take[c]])

    train_examples = [ex for ex in dataset if ex.id in train_ids]
    val_examples = [ex for ex in dataset if ex.id not in train_ids]
    train = Dataset(f"{dataset.name}-train", dataset.task, train_examples)
    val = Dataset(f"{dataset.name}-val", dataset.task, val_examples)
    return train, val


def ids_hash(ids) -> str:
    """Order-insensitive fingerprint of an id set (sha256 of sorted ids)."""
    joined = "\n".join(sorted(ids))
    return hashlib.sha256(joined.encode("utf-8")).hexdigest()


def split_manifest(train: Dataset, val: Dataset, train_fraction: float, seed: int) -> dict:
    return {
        "seed": seed,
        "fraction": train_fraction,
        "train_ids_hash": ids_hash(train.ids()),
        "val_ids_hash": ids_hash(val.ids()),
    }


def write_split(dataset, train_fraction, seed, out_dir, format="tsv", label_names=None):
    """Split and persist: two data files plus a JSON manifest.

    Returns (train_path, val_path, manifest_path).
    """
    train, val = stratified_split(dataset, train_fraction, seed)
    os.makedirs(out_dir, exist_ok=True)
    train_path = os.path.join(out_dir, f"{dataset.name}.train.{format}")
    val_path = os.path.join(out_dir, f"{dataset.name}.val.{format}")
    manifest_path = os.path.join(out_dir, f"{dataset.name}.split.json")
    save_dataset(train, train_path, format, label_names)
    save_dataset(val, val_path, format, label_names)
    with open(manifest_path, "w", encoding="utf-8") as fh:
        json.dump(split_manifest(train, val, train_fraction, seed), fh, indent=2)
        fh.write("\n")
    return train_path, val_path, manifest_path
