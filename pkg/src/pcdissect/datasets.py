"""Labeled sentence datasets for classification and probing tasks.

File format is TSV, UTF-8, one record per line::

    split<TAB>label<TAB>tokenized text

where split is ``train`` or ``test`` and the text column is whitespace
tokenized as-is (benchmark files ship pre-tokenized).  Lines starting
with ``#`` are comments.  A ``dev`` split is rejected unless the caller
asks for it to be folded into train.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from pathlib import Path
from typing import TextIO, Union

from .errors import MalformedRecord, TooFewRecords, UnknownSplit

SPLITS = ("train", "test")


@dataclass(frozen=True)
class LabeledTextDataset:
    """Records of (split, label, tokens) preserved in file order."""

    name: str
    records: tuple[tuple[str, str, tuple[str, ...]], ...]

    def __post_init__(self):
        for split, _, _ in self.records:
            if split not in SPLITS:
                raise UnknownSplit(f"split {split!r} is not one of {SPLITS}")

    def __len__(self) -> int:
        return len(self.records)

    @property
    def labels(self) -> tuple[str, ...]:
        out: list[str] = []
        for _, label, _ in self.records:
            if label not in out:
                out.append(label)
        return tuple(out)

    def split(self, name: str) -> list[tuple[str, tuple[str, ...]]]:
        """(label, tokens) pairs of one split, in file order."""
        return [(lab, toks) for s, lab, toks in self.records if s == name]

    def require_split(self, name: str) -> list[tuple[str, tuple[str, ...]]]:
        rows = self.split(name)
        if not rows:
            raise TooFewRecords(f"dataset {self.name!r} has no {name} records")
        return rows


def load_labeled_dataset(
    source: Union[bytes, str, TextIO],
    name: str = "dataset",
    fold_dev_into_train: bool = False,
) -> LabeledTextDataset:
    if isinstance(source, bytes):
        source = source.decode("utf-8", "surrogateescape")
    if isinstance(source, str):
        source = io.StringIO(source)
    records = []
    for lineno, line in enumerate(source, start=1):
        line = line.rstrip("\n")
        if not line or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 3:
            raise MalformedRecord(
                f"line {lineno}: expected 3 tab-separated fields, got {len(fields)}"
            )
        split, label, text = fields
        if split == "dev" and fold_dev_into_train:
            split = "train"
        if split not in SPLITS:
            raise UnknownSplit(f"line {lineno}: unknown split {split!r}")
        if not label:
            raise MalformedRecord(f"line {lineno}: empty label")
        records.append((split, label, tuple(text.split())))
    if not records:
        raise MalformedRecord("dataset stream contains no records")
    return LabeledTextDataset(name, tuple(records))


def load_labeled_file(
    path: Union[str, Path], fold_dev_into_train: bool = False
) -> LabeledTextDataset:
    p = Path(path)
    return load_labeled_dataset(
        p.read_bytes(), name=p.stem, fold_dev_into_train=fold_dev_into_train
    )
