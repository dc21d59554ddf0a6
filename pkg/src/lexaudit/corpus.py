"""Corpus ingestion and tokenization.

Parses MASSIVE-style and ReDial-style dataset files into immutable corpora
of utterances and runs configurable tokenization pipelines over them.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import IO, Iterable, Iterator

from .errors import ParseError, ValidationError
from .stemmer import stem
from .stopwords import STOPWORDS

__all__ = [
    "Partition",
    "Utterance",
    "Corpus",
    "Token",
    "PipelineProfile",
    "PROFILES",
    "parse_massive",
    "parse_redial",
    "load_corpus",
    "tokenize",
    "corpus_stats",
    "stem",
]


class Partition(str, Enum):
    TRAIN = "train"
    DEV = "dev"
    TEST = "test"
    UNPARTITIONED = "unpartitioned"


# Characters stripped from token edges. "@"+digits placeholders are exempt.
PUNCTUATION = ".,!?;:'\"()[]{}@#$%&*-"

_PLACEHOLDER = re.compile(
    r"[%s]*(@\d+)[%s]*" % (re.escape(PUNCTUATION), re.escape(PUNCTUATION))
)


@dataclass(frozen=True)
class Utterance:
    id: str
    partition: Partition
    text: str
    meta: dict[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class Corpus:
    """An ordered, immutable collection of utterances.

    Utterance order equals source-file order, so re-parsing the same bytes
    yields an identical corpus.
    """

    name: str
    source_format: str
    utterances: tuple[Utterance, ...]

    def __len__(self) -> int:
        return len(self.utterances)

    def __iter__(self) -> Iterator[Utterance]:
        return iter(self.utterances)

    @property
    def partitions(self) -> list[Partition]:
        seen: list[Partition] = []
        for utt in self.utterances:
            if utt.partition not in seen:
                seen.append(utt.partition)
        return seen


@dataclass(frozen=True)
class Token:
    surface: str
    norm: str
    stem: str
    utterance_id: str
    index: int
    is_stopword: bool = False
    is_placeholder: bool = False


@dataclass(frozen=True)
class PipelineProfile:
    name: str
    lowercase: bool = True
    strip_punctuation: bool = True
    remove_stopwords: bool = True
    stem: bool = True
    drop_placeholders: bool = True


#: Frozen named presets. `gendered_language` matches in stem space; the other
#: three keep surface forms so that e.g. "actor" and "actors" count apart.
PROFILES: dict[str, PipelineProfile] = {
    "gendered_language": PipelineProfile("gendered_language"),
    "pronouns": PipelineProfile("pronouns", remove_stopwords=False, stem=False),
    "marked_words": PipelineProfile("marked_words", stem=False),
    "names": PipelineProfile("names", stem=False),
}


def _required(record: dict, key: str, lineno: int):
    if key not in record:
        raise ParseError(f"missing required field {key!r}", line=lineno)
    return record[key]


def _as_lines(source: Iterable[str] | IO[str] | str) -> Iterable[str]:
    if isinstance(source, str):
        return source.splitlines()
    return source


def parse_massive(source: Iterable[str] | IO[str] | str, name: str = "massive") -> Corpus:
    """Parse MASSIVE-style JSONL (one utterance object per line).

    Text is taken from the unannotated ``utt`` field so that annotation
    brackets never count as tokens. Blank lines are skipped.
    """
    utterances: list[Utterance] = []
    seen_ids: set[str] = set()
    for lineno, line in enumerate(_as_lines(source), 1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", line=lineno) from exc
        uid = str(_required(record, "id", lineno))
        raw_partition = _required(record, "partition", lineno)
        try:
            partition = Partition(raw_partition)
        except ValueError:
            raise ValidationError(
                f"unknown partition {raw_partition!r} on line {lineno}"
            ) from None
        text = _required(record, "utt", lineno)
        if not uid:
            raise ValidationError(f"empty utterance id on line {lineno}")
        if uid in seen_ids:
            raise ValidationError(f"duplicate utterance id {uid!r} on line {lineno}")
        seen_ids.add(uid)
        meta = {
            key: str(record[key])
            for key in ("locale", "scenario", "intent", "worker_id")
            if key in record
        }
        utterances.append(Utterance(uid, partition, text, meta))
    return Corpus(name, "massive_jsonl", tuple(utterances))


def parse_redial(
    source: Iterable[str] | IO[str] | str,
    partition: Partition | str,
    name: str = "redial",
) -> Corpus:
    """Parse ReDial-style JSONL (one dialogue object per line).

    Each message becomes one utterance; the partition is taken from the
    caller because ReDial records carry none (it is implied by which split
    file is ingested). "@"+digits movie placeholders stay in the text and
    are flagged at tokenization.
    """
    partition = Partition(partition)
    utterances: list[Utterance] = []
    seen_ids: set[str] = set()
    for lineno, line in enumerate(_as_lines(source), 1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", line=lineno) from exc
        dialogue_id = record.get("conversationId")
        for message in _required(record, "messages", lineno):
            if "messageId" not in message:
                raise ParseError("message missing messageId", line=lineno)
            uid = str(message["messageId"])
            if uid in seen_ids:
                raise ValidationError(f"duplicate message id {uid!r} on line {lineno}")
            seen_ids.add(uid)
            meta = {"message_id": uid}
            if dialogue_id is not None:
                meta["dialogue_id"] = str(dialogue_id)
            if "senderWorkerId" in message:
                meta["sender_worker_id"] = str(message["senderWorkerId"])
            if "timeOffset" in message:
                meta["time_offset"] = str(message["timeOffset"])
            utterances.append(
                Utterance(uid, partition, str(message.get("text", "")), meta)
            )
    return Corpus(name, "redial_json", tuple(utterances))


def load_corpus(
    path: str | Path,
    source_format: str,
    name: str | None = None,
    partition: Partition | str = Partition.UNPARTITIONED,
) -> Corpus:
    """Load a corpus file in one of the supported formats."""
    if source_format not in ("massive", "redial"):
        raise ValidationError(f"unknown corpus format {source_format!r}")
    path = Path(path)
    corpus_name = name if name is not None else path.stem
    with open(path, encoding="utf-8") as fh:
        if source_format == "massive":
            return parse_massive(fh, name=corpus_name)
        return parse_redial(fh, partition, name=corpus_name)


def _normalize(raw: str, profile: PipelineProfile) -> str:
    norm = raw
    if profile.strip_punctuation:
        norm = norm.strip(PUNCTUATION)
    if profile.lowercase:
        norm = norm.lower()
    return norm


def tokenize(
    utterance: Utterance,
    profile: PipelineProfile,
    stopwords: frozenset[str] = STOPWORDS,
) -> list[Token]:
    """Tokenize one utterance under a pipeline profile.

    Whitespace split, then per profile: lowercase, edge-punctuation strip,
    placeholder drop, stop-word removal (matched on the normalized form),
    stemming. Emitted tokens keep their original whitespace index, so
    indices are strictly increasing but not necessarily dense.
    """
    tokens: list[Token] = []
    for index, raw in enumerate(utterance.text.split()):
        match = _PLACEHOLDER.fullmatch(raw)
        if match:
            if profile.drop_placeholders:
                continue
            norm = match.group(1)
            tokens.append(
                Token(raw, norm, norm, utterance.id, index, False, True)
            )
            continue
        norm = _normalize(raw, profile)
        if not norm:
            continue
        is_stopword = norm in stopwords
        if profile.remove_stopwords and is_stopword:
            continue
        stemmed = stem(norm) if profile.stem else norm
        tokens.append(
            Token(raw, norm, stemmed, utterance.id, index, is_stopword, False)
        )
    return tokens


@dataclass(frozen=True)
class CorpusStats:
    total_tokens: int
    unique_surface: int
    unique_processed: int
    per_partition_counts: dict[str, int]


def corpus_stats(
    corpus: Corpus,
    profile: PipelineProfile,
    stopwords: frozenset[str] = STOPWORDS,
) -> CorpusStats:
    """Corpus-level token counts.

    total_tokens counts raw whitespace tokens (stop words and placeholders
    included); unique_surface counts distinct normalized forms before
    stop-word removal; unique_processed counts distinct processed forms
    after the full pipeline.
    """
    surface_profile = PipelineProfile(
        name="_surface",
        lowercase=profile.lowercase,
        strip_punctuation=profile.strip_punctuation,
        remove_stopwords=False,
        stem=False,
        drop_placeholders=False,
    )
    total = 0
    per_partition: dict[str, int] = {}
    surfaces: set[str] = set()
    processed: set[str] = set()
    for utt in corpus:
        count = len(utt.text.split())
        total += count
        key = utt.partition.value
        per_partition[key] = per_partition.get(key, 0) + count
        surfaces.update(t.norm for t in tokenize(utt, surface_profile, stopwords))
        processed.update(t.stem for t in tokenize(utt, profile, stopwords))
    return CorpusStats(total, len(surfaces), len(processed), per_partition)
