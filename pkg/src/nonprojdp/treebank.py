"""CoNLL-U ingestion, crossing-arc detection and corpus statistics."""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field
from os import PathLike
from typing import IO, Iterable, Iterator

from .errors import ConlluParseError, InvalidTreeError
from .transitions import DepTree, Sentence

log = logging.getLogger(__name__)


class MalformedTreeWarning(UserWarning):
    pass


@dataclass
class Excluded:
    """A sentence dropped because its HEAD column is not a tree."""

    line: int
    reason: str
    sent_id: str | None = None


@dataclass
class ConlluDocument:
    sentences: list[tuple[Sentence, DepTree]] = field(default_factory=list)
    excluded: list[Excluded] = field(default_factory=list)


def _text_lines(stream) -> Iterator[str]:
    for line in stream:
        yield line.decode("utf-8") if isinstance(line, bytes) else line


def _blocks(lines: Iterable[str]) -> Iterator[tuple[int, list[tuple[int, str]]]]:
    block: list[tuple[int, str]] = []
    start = 0
    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip("\r\n")
        if not line.strip():
            if block:
                yield start, block
                block = []
            continue
        if not block:
            start = lineno
        block.append((lineno, line))
    if block:
        yield start, block


def parse_conllu(stream: IO[str] | IO[bytes] | Iterable[str], source: str | None = None) -> ConlluDocument:
    """Read every sentence of a CoNLL-U stream, separating out malformed trees.

    Only the ID and HEAD columns are used. Multiword-token ranges (``3-4``) and
    empty nodes (``5.1``) are skipped.
    """
    doc = ConlluDocument()
    for start, block in _blocks(_text_lines(stream)):
        ids: list[int] = []
        heads: list[str] = []
        sent_id = None
        for lineno, line in block:
            if line.startswith("#"):
                if line.startswith("# sent_id"):
                    sent_id = line.split("=", 1)[-1].strip()
                continue
            cols = line.split("\t")
            if len(cols) != 10:
                raise ConlluParseError(f"expected 10 tab-separated columns, found {len(cols)}", lineno, source)
            tok_id = cols[0]
            if "-" in tok_id or "." in tok_id:
                continue
            try:
                ids.append(int(tok_id))
            except ValueError:
                raise ConlluParseError(f"bad token id {tok_id!r}", lineno, source) from None
            heads.append(cols[6])
        if not ids:
            continue
        try:
            if ids != list(range(1, len(ids) + 1)):
                raise InvalidTreeError(f"token ids are not 1..{len(ids)}")
            try:
                head_ints = tuple(int(h) for h in heads)
            except ValueError:
                raise InvalidTreeError("missing or non-integer HEAD") from None
            tree = DepTree(head_ints)
        except InvalidTreeError as exc:
            doc.excluded.append(Excluded(start, str(exc), sent_id))
            where = f"{source}:{start}" if source else f"line {start}"
            warnings.warn(f"excluding sentence at {where}: {exc}", MalformedTreeWarning, stacklevel=2)
            continue
        doc.sentences.append((Sentence(tree.n), tree))
    return doc


def read_conllu(stream, source: str | None = None) -> list[tuple[Sentence, DepTree]]:
    return parse_conllu(stream, source).sentences


def write_conllu_heads(trees: Iterable[DepTree]) -> str:
    """Minimal CoNLL-U with only ID and HEAD filled in."""
    out = []
    for tree in trees:
        for m, h in enumerate(tree.heads, start=1):
            out.append("\t".join([str(m), "_", "_", "_", "_", "_", str(h), "_", "_", "_"]))
        out.append("")
    return "\n".join(out) + ("\n" if out else "")


def is_nonprojective(tree: DepTree) -> bool:
    """True iff two arcs cross when tokens are laid out left to right."""
    spans = [(min(h, m), max(h, m)) for m, h in enumerate(tree.heads, start=1)]
    for a1, b1 in spans:
        for a2, b2 in spans:
            if a1 < a2 < b1 < b2:
                return True
    return False


@dataclass
class FileStats:
    total: int = 0
    nonprojective: int = 0
    excluded: int = 0
    error: str | None = None


@dataclass
class CorpusStats:
    total_sentences: int = 0
    nonprojective_sentences: int = 0
    excluded_malformed: int = 0
    per_file: dict[str, FileStats] = field(default_factory=dict)

    @property
    def percentage(self) -> float:
        if not self.total_sentences:
            return 0.0
        return 100.0 * self.nonprojective_sentences / self.total_sentences

    def add(self, name: str, fs: FileStats) -> None:
        self.per_file[name] = fs
        self.total_sentences += fs.total
        self.nonprojective_sentences += fs.nonprojective
        self.excluded_malformed += fs.excluded



def file_stats(path: str | PathLike) -> FileStats:
    with open(path, encoding="utf-8") as fh, warnings.catch_warnings():
        warnings.simplefilter("ignore", MalformedTreeWarning)
        doc = parse_conllu(fh, source=str(path))
    fs = FileStats(excluded=len(doc.excluded))
    for _, tree in doc.sentences:
        fs.total += 1
        fs.nonprojective += is_nonprojective(tree)
    return fs


def corpus_stats(paths: Iterable[str | PathLike]) -> CorpusStats:
    """Aggregate per-file statistics; an unreadable file is recorded, not fatal."""
    stats = CorpusStats()
    for path in paths:
        try:
            fs = file_stats(path)
        except (OSError, UnicodeDecodeError, ConlluParseError) as exc:
            log.warning("skipping %s: %s", path, exc)
            fs = FileStats(error=str(exc))
        stats.add(str(path), fs)
    return stats
