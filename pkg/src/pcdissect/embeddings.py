"""Parse and serialize pretrained word-embedding files.

Three formats are supported, matching the publicly released GloVe,
word2vec, and fastText files:

* ``glove-text`` -- one record per line: token, then d decimal floats,
  single-space separated, newline terminated.  No header; d is inferred
  from the first line and enforced thereafter.
* ``word2vec-text`` -- a ``"N d\\n"`` header line, then records as above.
* ``word2vec-binary`` -- ASCII ``"N d\\n"`` header; each record is the
  token bytes terminated by a single 0x20, followed by d little-endian
  IEEE-754 float32 values, optionally followed by one 0x0A (consumed if
  present; always written by the serializer).

Vectors are stored as float32 (matching released binaries); downstream
statistics are accumulated in float64.  Tokens are opaque byte strings:
they are held as ``str`` decoded with ``surrogateescape`` so arbitrary
bytes round-trip losslessly without Unicode normalization.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import BinaryIO, Iterable, Optional, Sequence, Union

import numpy as np

from .errors import (
    DimensionMismatch,
    DuplicateToken,
    MalformedHeader,
    NonFiniteValue,
    UnencodableToken,
)

_ENCODING = "utf-8"
_SURROGATE = "surrogateescape"


class EmbeddingFormat(Enum):
    """Exhaustive enumeration of the supported file formats."""

    GLOVE_TEXT = "glove-text"
    WORD2VEC_TEXT = "word2vec-text"
    WORD2VEC_BINARY = "word2vec-binary"

    @classmethod
    def from_name(cls, name: str) -> "EmbeddingFormat":
        for fmt in cls:
            if fmt.value == name:
                return fmt
        raise ValueError(f"unknown embedding format {name!r}")


def _token_bytes(token: str) -> bytes:
    return token.encode(_ENCODING, _SURROGATE)


def _decode_token(raw: bytes) -> str:
    return raw.decode(_ENCODING, _SURROGATE)


@dataclass(frozen=True, eq=False)
class EmbeddingSet:
    """Immutable vocabulary plus an N x d float32 matrix of word vectors.

    Row i of ``matrix`` is the vector of ``words[i]``; ``index`` is the
    exact inverse of the words list.  The matrix is marked read-only, so a
    constructed set is safe to share across concurrent readers.
    """

    words: tuple[str, ...]
    matrix: np.ndarray
    index: dict[str, int] = field(repr=False)

    def __init__(self, words: Sequence[str], matrix: np.ndarray):
        words = tuple(words)
        matrix = np.asarray(matrix)
        if matrix.ndim != 2:
            raise DimensionMismatch("matrix must be two-dimensional")
        if matrix.dtype != np.float32:
            matrix = matrix.astype(np.float32)
        matrix = np.ascontiguousarray(matrix)
        n, dim = matrix.shape
        if n < 1 or dim < 1:
            raise DimensionMismatch("need at least one row and one column")
        if len(words) != n:
            raise DimensionMismatch(
                f"{len(words)} tokens but {n} matrix rows"
            )
        if not np.isfinite(matrix).all():
            raise NonFiniteValue("matrix contains NaN or infinite entries")
        index: dict[str, int] = {}
        for i, w in enumerate(words):
            if w in index:
                raise DuplicateToken(f"token {w!r} appears more than once")
            index[w] = i
        matrix.flags.writeable = False
        object.__setattr__(self, "words", words)
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "index", index)

    @property
    def dim(self) -> int:
        return self.matrix.shape[1]

    def __len__(self) -> int:
        return self.matrix.shape[0]

    def __contains__(self, token: str) -> bool:
        return token in self.index

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EmbeddingSet):
            return NotImplemented
        return self.words == other.words and np.array_equal(
            self.matrix, other.matrix
        )

    def lookup(self, token: str) -> Optional[np.ndarray]:
        """Return the (read-only) row for ``token``, or None if absent.

        Exact match only; any case-folding policy belongs to the caller.
        """
        i = self.index.get(token)
        return None if i is None else self.matrix[i]


def lookup(emb: EmbeddingSet, token: str) -> Optional[np.ndarray]:
    return emb.lookup(token)


# ---------------------------------------------------------------------------
# parsing

def _finish(words: list[str], rows: np.ndarray) -> EmbeddingSet:
    if not np.isfinite(rows).all():
        raise NonFiniteValue("stream contains NaN, infinite, or overflowing values")
    return EmbeddingSet(words, rows)


def _parse_text_records(
    lines: Iterable[tuple[int, bytes]], dim: Optional[int]
) -> tuple[list[str], np.ndarray]:
    words: list[str] = []
    rows: list[np.ndarray] = []
    for lineno, line in lines:
        fields = line.split(b" ")
        values = fields[1:]
        if dim is None:
            dim = len(values)
            if dim < 1:
                raise DimensionMismatch(
                    f"line {lineno}: record has no vector values"
                )
        if len(values) != dim:
            raise DimensionMismatch(
                f"line {lineno}: expected {dim} values, got {len(values)}"
            )
        try:
            row = np.array(values, dtype=np.float64)
        except ValueError:
            raise NonFiniteValue(
                f"line {lineno}: unparseable numeric field"
            ) from None
        words.append(_decode_token(fields[0]))
        rows.append(row)
    if not rows:
        raise DimensionMismatch("stream contains no records")
    with np.errstate(over="ignore"):  # overflow becomes inf, rejected below
        return words, np.array(rows, dtype=np.float32)


def _split_lines(data: bytes) -> list[bytes]:
    lines = data.split(b"\n")
    if lines and lines[-1] == b"":
        lines.pop()
    return lines


def _parse_glove_text(data: bytes) -> EmbeddingSet:
    lines = _split_lines(data)
    words, rows = _parse_text_records(enumerate(lines, start=1), None)
    return _finish(words, rows)


def _parse_header(line: bytes) -> tuple[int, int]:
    fields = line.split(b" ")
    if len(fields) != 2:
        raise MalformedHeader(f"expected 'N d' header, got {line!r}")
    try:
        n, dim = int(fields[0]), int(fields[1])
    except ValueError:
        raise MalformedHeader(f"non-integer header fields in {line!r}") from None
    if n < 1 or dim < 1:
        raise MalformedHeader(f"header counts must be positive, got {n} x {dim}")
    return n, dim


def _parse_word2vec_text(data: bytes) -> EmbeddingSet:
    lines = _split_lines(data)
    if not lines:
        raise MalformedHeader("empty stream")
    n, dim = _parse_header(lines[0])
    if len(lines) - 1 != n:
        raise MalformedHeader(
            f"header declares {n} records, stream has {len(lines) - 1}"
        )
    words, rows = _parse_text_records(enumerate(lines[1:], start=2), dim)
    return _finish(words, rows)


def _parse_word2vec_binary(data: bytes) -> EmbeddingSet:
    nl = data.find(b"\n")
    if nl < 0:
        raise MalformedHeader("missing header line")
    n, dim = _parse_header(data[:nl])
    pos = nl + 1
    words: list[str] = []
    rows = np.empty((n, dim), dtype=np.float32)
    vec_bytes = 4 * dim
    for i in range(n):
        sep = data.find(b" ", pos)
        if sep < 0:
            raise MalformedHeader(
                f"header declares {n} records, stream ends in record {i + 1}"
            )
        words.append(_decode_token(data[pos:sep]))
        pos = sep + 1
        if pos + vec_bytes > len(data):
            raise MalformedHeader(
                f"header declares {n} records, stream ends in record {i + 1}"
            )
        rows[i] = np.frombuffer(data, dtype="<f4", count=dim, offset=pos)
        pos += vec_bytes
        if pos < len(data) and data[pos:pos + 1] == b"\n":
            pos += 1
    if pos != len(data):
        raise MalformedHeader(f"{len(data) - pos} trailing bytes after last record")
    return _finish(words, rows)


def parse_embeddings(
    source: Union[bytes, BinaryIO], fmt: EmbeddingFormat
) -> EmbeddingSet:
    """Parse a byte stream into an EmbeddingSet.

    Row order matches file order.  Duplicate tokens are rejected, every
    malformed input raises a typed error, and no partial result escapes.
    """
    data = source if isinstance(source, bytes) else source.read()
    if fmt is EmbeddingFormat.GLOVE_TEXT:
        return _parse_glove_text(data)
    if fmt is EmbeddingFormat.WORD2VEC_TEXT:
        return _parse_word2vec_text(data)
    return _parse_word2vec_binary(data)


# ---------------------------------------------------------------------------
# serialization

def format_value(value: float) -> str:
    """Shortest decimal form that parses back to the same float32.

    numpy's scalar str is the shortest unique rendering; integral values
    drop their ".0" suffix ("1", not "1.0").
    """
    s = str(np.float32(value))
    return s[:-2] if s.endswith(".0") else s


def _checked_token(token: str, illegal: bytes, fmt: EmbeddingFormat) -> bytes:
    raw = _token_bytes(token)
    for byte in illegal:
        if byte in raw:
            raise UnencodableToken(
                f"token {token!r} contains a {bytes([byte])!r} delimiter "
                f"illegal in {fmt.value}"
            )
    return raw


def _text_records(emb: EmbeddingSet, fmt: EmbeddingFormat) -> bytes:
    lines = []
    for i, token in enumerate(emb.words):
        values = " ".join(format_value(v) for v in emb.matrix[i])
        lines.append(
            _checked_token(token, b" \n", fmt) + b" " + values.encode("ascii") + b"\n"
        )
    return b"".join(lines)


def serialize_embeddings(emb: EmbeddingSet, fmt: EmbeddingFormat) -> bytes:
    """Serialize to bytes that re-parse to an equal EmbeddingSet.

    Binary output is bit-exact under round-trip; text output re-parses to
    the identical float32 values (shortest round-trip rendering).
    """
    if fmt is EmbeddingFormat.GLOVE_TEXT:
        return _text_records(emb, fmt)
    header = f"{len(emb)} {emb.dim}\n".encode("ascii")
    if fmt is EmbeddingFormat.WORD2VEC_TEXT:
        return header + _text_records(emb, fmt)
    out = bytearray(header)
    for i, token in enumerate(emb.words):
        out += _checked_token(token, b" ", fmt)
        out += b" "
        out += emb.matrix[i].astype("<f4").tobytes()
        out += b"\n"
    return bytes(out)


# ---------------------------------------------------------------------------
# path helpers

def load_embeddings(path: Union[str, Path], fmt: EmbeddingFormat) -> EmbeddingSet:
    return parse_embeddings(Path(path).read_bytes(), fmt)


def save_embeddings(
    emb: EmbeddingSet, path: Union[str, Path], fmt: EmbeddingFormat
) -> None:
    Path(path).write_bytes(serialize_embeddings(emb, fmt))
