"""Dictionaries of gendered patterns and the glob matchers they compile to.

A dictionary is a list of glob patterns, each tagged with a gender class,
a category, and an optional 1-7 genderedness score. Patterns for the
gendered-language category are normalized into stem space (same pipeline as
corpus tokens); pronoun, marked-word, and name patterns match on unstemmed
normalized forms.
"""

from __future__ import annotations

import csv
import json
import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import IO, Iterable, Sequence

from .errors import ParseError, ValidationError
from .stemmer import stem
from .stopwords import STOPWORDS

log = logging.getLogger(__name__)

__all__ = [
    "GenderClass",
    "Category",
    "DictEntry",
    "Dictionary",
    "ThresholdPolicy",
    "LOOSE",
    "CONSERVATIVE",
    "AvaEntry",
    "Matcher",
    "compile_glob",
    "glob_to_regex",
    "normalize_pattern",
    "load_dictionary",
    "load_ava",
    "dump_ava",
    "apply_threshold",
    "merge",
    "subtract",
]


class GenderClass(str, Enum):
    MASCULINE = "masculine"
    FEMININE = "feminine"
    NEUTRAL = "neutral"
    NEO = "neo"
    OTHER = "other"


_GENDER_CODES = {
    "m": GenderClass.MASCULINE,
    "f": GenderClass.FEMININE,
    "n": GenderClass.NEUTRAL,
    "o": GenderClass.OTHER,
}
_CODE_FOR_GENDER = {v: k for k, v in _GENDER_CODES.items()}


class Category(str, Enum):
    GENDERED_LANGUAGE = "gendered_language"
    PRONOUN = "pronoun"
    MARKED_WORD = "marked_word"
    NAME = "name"


@dataclass(frozen=True)
class Matcher:
    """Anchored whole-token glob matcher: * = any run, ? = one character."""

    pattern: str

    def matches(self, token: str) -> bool:
        return _glob_match(self.pattern, token.lower())

    @property
    def is_literal(self) -> bool:
        return "*" not in self.pattern and "?" not in self.pattern


def compile_glob(pattern: str) -> Matcher:
    """Compile a glob pattern into a whole-token matcher."""
    if not pattern:
        raise ValidationError("glob pattern must be non-empty")
    return Matcher(pattern.lower())


def glob_to_regex(pattern: str) -> str:
    """The anchored regular-expression translation of a glob pattern."""
    import re as _re

    parts = []
    for ch in pattern:
        if ch == "*":
            parts.append(".*")
        elif ch == "?":
            parts.append(".")
        else:
            parts.append(_re.escape(ch))
    return "".join(parts)


def _glob_match(pattern: str, text: str) -> bool:
    # Greedy match with single-star backtracking; anchored at both ends.
    pi = ti = 0
    star_pi = star_ti = -1
    np, nt = len(pattern), len(text)
    while ti < nt:
        if pi < np and (pattern[pi] == "?" or pattern[pi] == text[ti]):
            pi += 1
            ti += 1
        elif pi < np and pattern[pi] == "*":
            star_pi = pi
            star_ti = ti
            pi += 1
        elif star_pi >= 0:
            pi = star_pi + 1
            star_ti += 1
            ti = star_ti
        else:
            return False
    while pi < np and pattern[pi] == "*":
        pi += 1
    return pi == np


@dataclass(frozen=True)
class DictEntry:
    pattern: str
    gender: GenderClass
    category: Category
    source_id: str = ""
    score: float | None = None
    ambiguous: bool = False

    def matcher(self) -> Matcher:
        return compile_glob(self.pattern)


@dataclass(frozen=True)
class Dictionary:
    name: str
    entries: tuple[DictEntry, ...]
    metadata: dict = field(default_factory=dict)
    duplicates_dropped: int = 0

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def genders(self) -> list[GenderClass]:
        seen: list[GenderClass] = []
        for entry in self.entries:
            if entry.gender not in seen:
                seen.append(entry.gender)
        return seen

    @property
    def categories(self) -> list[Category]:
        seen: list[Category] = []
        for entry in self.entries:
            if entry.category not in seen:
                seen.append(entry.category)
        return seen

    def scored_pairs(self) -> list[tuple[str, float]]:
        return [(e.pattern, e.score) for e in self.entries if e.score is not None]


def normalize_pattern(
    pattern: str,
    category: Category,
    stopwords: frozenset[str] = STOPWORDS,
) -> str | None:
    """Normalize a pattern into its matching space.

    Gendered-language patterns are lowercased, dropped if they are stop
    words, and stemmed (wildcard patterns are only lowercased, since a stem
    of a partial pattern is undefined). Other categories lowercase only.
    Returns None when normalization removes the pattern entirely.
    """
    norm = pattern.strip().lower()
    if not norm:
        return None
    if any(ch.isspace() for ch in norm):
        raise ValidationError(f"multi-word patterns are not supported: {pattern!r}")
    if category is Category.GENDERED_LANGUAGE:
        if norm in stopwords:
            return None
        if "*" not in norm and "?" not in norm:
            norm = stem(norm)
    return norm


def _build(
    name: str,
    raw_entries: Iterable[DictEntry],
    metadata: dict,
    stopwords: frozenset[str] = STOPWORDS,
) -> Dictionary:
    """Normalize, validate, and deduplicate entries on (pattern, gender)."""
    seen: set[tuple[str, GenderClass]] = set()
    entries: list[DictEntry] = []
    dropped = 0
    for entry in raw_entries:
        norm = normalize_pattern(entry.pattern, entry.category, stopwords)
        if norm is None:
            dropped += 1
            continue
        key = (norm, entry.gender)
        if key in seen:
            dropped += 1
            continue
        seen.add(key)
        entries.append(replace(entry, pattern=norm))
    if dropped:
        log.warning("%s: dropped %d duplicate/normalized-away entries", name, dropped)
    return Dictionary(name, tuple(entries), metadata, duplicates_dropped=dropped)


_DEFAULT_CATEGORY = {
    "categorical_list": Category.GENDERED_LANGUAGE,
    "scored_csv": Category.GENDERED_LANGUAGE,
    "gender_tag_json": Category.MARKED_WORD,
    "ava_jsonl": Category.GENDERED_LANGUAGE,
    "pronoun_lists": Category.PRONOUN,
    "name_lists": Category.NAME,
    "native_jsonl": None,  # category carried per record
}

_SECTION_GENDERS = {
    "masculine": GenderClass.MASCULINE,
    "feminine": GenderClass.FEMININE,
    "neutral": GenderClass.NEUTRAL,
    "neo": GenderClass.NEO,
    "other": GenderClass.OTHER,
}


def _parse_categorical(lines: Iterable[str], category: Category, source_id: str):
    gender: GenderClass | None = None
    for lineno, line in enumerate(lines, 1):
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            section = line.lstrip("#").strip().lower()
            if section not in _SECTION_GENDERS:
                raise ValidationError(
                    f"unknown section {section!r} on line {lineno}"
                )
            gender = _SECTION_GENDERS[section]
            continue
        if gender is None:
            raise ParseError("term before any #section header", line=lineno)
        yield DictEntry(line, gender, category, source_id)


def _parse_scored_csv(fh: IO[str], category: Category, source_id: str):
    reader = csv.DictReader(fh)
    if reader.fieldnames is None or [f.strip() for f in reader.fieldnames] != ["word", "score"]:
        raise ParseError("scored_csv requires header 'word,score'")
    for lineno, row in enumerate(reader, 2):
        try:
            score = float(row["score"])
        except (TypeError, ValueError):
            raise ParseError(f"bad score {row.get('score')!r}", line=lineno) from None
        if not 1.0 <= score <= 7.0:
            raise ValidationError(f"score {score} outside [1, 7] on line {lineno}")
        # Pre-threshold entries are centre-rated, not yet gender-classified.
        yield DictEntry(row["word"], GenderClass.NEUTRAL, category, source_id, score)


def _parse_gender_tag_json(lines: Iterable[str], category: Category, source_id: str):
    for lineno, line in enumerate(lines, 1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", line=lineno) from exc
        code = record.get("gender")
        if code not in _GENDER_CODES:
            raise ValidationError(f"unknown gender code {code!r} on line {lineno}")
        yield DictEntry(str(record["word"]), _GENDER_CODES[code], category, source_id)


def _parse_native_jsonl(lines: Iterable[str], category: Category | None, source_id: str):
    for lineno, line in enumerate(lines, 1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", line=lineno) from exc
        try:
            gender = GenderClass(record["gender"])
            entry_category = Category(record.get("category", category))
        except (KeyError, ValueError) as exc:
            raise ValidationError(f"bad record on line {lineno}: {exc}") from None
        yield DictEntry(
            str(record["pattern"]),
            gender,
            entry_category,
            str(record.get("source", source_id)),
            record.get("score"),
            bool(record.get("ambiguous", False)),
        )


def load_dictionary(
    path: str | Path,
    source_format: str,
    category: Category | str | None = None,
    name: str | None = None,
    stopwords: frozenset[str] = STOPWORDS,
) -> Dictionary:
    """Load a dictionary file.

    ``category`` overrides the format's default (e.g. a categorical list of
    marked words rather than gendered language).
    """
    if source_format not in _DEFAULT_CATEGORY:
        raise ValidationError(f"unknown dictionary format {source_format!r}")
    path = Path(path)
    dict_name = name if name is not None else path.stem
    if category is None:
        category = _DEFAULT_CATEGORY[source_format]
    elif not isinstance(category, Category):
        category = Category(category)
    metadata = {"path": str(path), "format": source_format, "sources": [dict_name]}
    with open(path, encoding="utf-8") as fh:
        if source_format in ("categorical_list", "pronoun_lists", "name_lists"):
            raw = list(_parse_categorical(fh, category, dict_name))
        elif source_format == "scored_csv":
            raw = list(_parse_scored_csv(fh, category, dict_name))
        elif source_format == "gender_tag_json":
            raw = list(_parse_gender_tag_json(fh, category, dict_name))
        elif source_format == "native_jsonl":
            raw = list(_parse_native_jsonl(fh, category, dict_name))
        else:  # ava_jsonl
            raw = [
                DictEntry(e.term, e.original_gender, category, dict_name)
                for e in load_ava(fh)
            ]
    return _build(dict_name, raw, metadata, stopwords)


def dump_dictionary(dictionary: Dictionary) -> str:
    """Serialize a dictionary to the native JSONL format."""
    lines = []
    for e in dictionary.entries:
        record = {
            "pattern": e.pattern,
            "gender": e.gender.value,
            "category": e.category.value,
        }
        if e.source_id:
            record["source"] = e.source_id
        if e.score is not None:
            record["score"] = e.score
        if e.ambiguous:
            record["ambiguous"] = True
        lines.append(json.dumps(record, ensure_ascii=False))
    return "\n".join(lines) + ("\n" if lines else "")


@dataclass(frozen=True)
class ThresholdPolicy:
    """Score cut-offs for classifying 1-7 rated words.

    Bounds must strictly bracket the neutral centre of 4.
    """

    name: str
    fem_bound: float
    fem_inclusive: bool
    masc_bound: float
    masc_inclusive: bool

    def __post_init__(self):
        if not (self.fem_bound < 4.0 < self.masc_bound):
            raise ValidationError(
                f"threshold bounds must bracket the neutral centre 4: "
                f"fem={self.fem_bound}, masc={self.masc_bound}"
            )

    def classify(self, score: float) -> GenderClass | None:
        masc = score >= self.masc_bound if self.masc_inclusive else score > self.masc_bound
        if masc:
            return GenderClass.MASCULINE
        fem = score <= self.fem_bound if self.fem_inclusive else score < self.fem_bound
        if fem:
            return GenderClass.FEMININE
        return None


LOOSE = ThresholdPolicy("loose", 3.0, True, 5.0, True)
CONSERVATIVE = ThresholdPolicy("conservative", 2.5, False, 5.5, False)

POLICIES = {"loose": LOOSE, "conservative": CONSERVATIVE}


def apply_threshold(
    scored: Sequence[tuple[str, float]],
    policy: ThresholdPolicy,
    name: str | None = None,
    source_id: str = "scored",
    stopwords: frozenset[str] = STOPWORDS,
) -> Dictionary:
    """Classify scored words by the policy, then normalize into a dictionary."""
    raw: list[DictEntry] = []
    for word, score in scored:
        if not 1.0 <= score <= 7.0:
            raise ValidationError(f"score {score} for {word!r} outside [1, 7]")
        gender = policy.classify(score)
        if gender is None:
            continue
        raw.append(DictEntry(word, gender, Category.GENDERED_LANGUAGE, source_id, score))
    dict_name = name if name is not None else f"{source_id}-{policy.name}"
    metadata = {"policy": policy.name, "sources": [source_id]}
    return _build(dict_name, raw, metadata, stopwords)


def merge(dicts: Sequence[Dictionary], name: str | None = None) -> Dictionary:
    """Set union of dictionaries, deduplicated on (pattern, gender).

    Conflicting genders for the same pattern are distinct keys and are both
    retained. Entry order follows first occurrence, so merging is
    commutative and associative up to ordering.
    """
    seen: set[tuple[str, GenderClass]] = set()
    entries: list[DictEntry] = []
    sources: list[str] = []
    dropped = 0
    for d in dicts:
        for src in d.metadata.get("sources", [d.name]):
            if src not in sources:
                sources.append(src)
        for entry in d.entries:
            key = (entry.pattern, entry.gender)
            if key in seen:
                dropped += 1
                continue
            seen.add(key)
            entries.append(entry)
    merged_name = name if name is not None else "+".join(d.name for d in dicts)
    return Dictionary(
        merged_name,
        tuple(entries),
        {"sources": sources},
        duplicates_dropped=dropped,
    )


@dataclass(frozen=True)
class AvaEntry:
    """A term judged gendered in general usage but ambiguous in VA contexts."""

    term: str
    original_gender: GenderClass
    examples: dict[str, str] = field(default_factory=dict)
    decided_ambiguous: bool = True
    rationale: str | None = None

    def __post_init__(self):
        if self.original_gender not in (GenderClass.MASCULINE, GenderClass.FEMININE):
            raise ValidationError(
                f"ambiguous-term gender must be masculine or feminine, "
                f"got {self.original_gender.value!r} for {self.term!r}"
            )


def load_ava(source: str | Path | IO[str] | Iterable[str]) -> list[AvaEntry]:
    """Load ambiguous-term entries from JSONL.

    ``source`` is a file path or an iterable of lines. Each line is
    {"term": str, "gender": "m"|"f", "examples": {corpus: snippet}}.
    """
    if isinstance(source, (str, Path)):
        lines = Path(source).read_text(encoding="utf-8").splitlines()
    else:
        lines = source
    entries: list[AvaEntry] = []
    for lineno, line in enumerate(lines, 1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", line=lineno) from exc
        code = record.get("gender")
        if code not in ("m", "f"):
            raise ValidationError(f"unknown gender code {code!r} on line {lineno}")
        entries.append(
            AvaEntry(
                str(record["term"]),
                _GENDER_CODES[code],
                dict(record.get("examples", {})),
            )
        )
    return entries


def dump_ava(entries: Iterable[AvaEntry]) -> str:
    """Serialize ambiguous-term entries to canonical JSONL.

    Lines are ordered by term, example keys by corpus name, so dumping is
    deterministic and load/dump round-trips byte-identically.
    """
    lines = []
    for entry in sorted(entries, key=lambda e: e.term):
        record = {
            "term": entry.term,
            "gender": _CODE_FOR_GENDER[entry.original_gender],
            "examples": {k: entry.examples[k] for k in sorted(entry.examples)},
        }
        lines.append(json.dumps(record, ensure_ascii=False))
    return "\n".join(lines) + ("\n" if lines else "")


def subtract(
    dictionary: Dictionary,
    terms: Sequence[AvaEntry | str],
    mode: str = "remove",
    name: str | None = None,
    stopwords: frozenset[str] = STOPWORDS,
) -> Dictionary:
    """Apply ambiguous terms to a dictionary.

    mode "remove" deletes entries whose normalized pattern equals a
    normalized term; mode "flag" keeps them but marks matches as ambiguous
    downstream. Terms absent from the dictionary are ignored with a logged
    count.
    """
    if mode not in ("remove", "flag"):
        raise ValidationError(f"unknown ambiguity mode {mode!r}")
    term_strings = [t.term if isinstance(t, AvaEntry) else t for t in terms]
    by_category: dict[Category, set[str]] = {}
    for category in dictionary.categories:
        normalized = set()
        for term in term_strings:
            norm = normalize_pattern(term, category, stopwords)
            if norm is not None:
                normalized.add(norm)
        by_category[category] = normalized

    hit_terms: set[str] = set()
    entries: list[DictEntry] = []
    for entry in dictionary.entries:
        targeted = entry.pattern in by_category.get(entry.category, set())
        if targeted:
            hit_terms.add(entry.pattern)
            if mode == "remove":
                continue
            entries.append(replace(entry, ambiguous=True))
        else:
            entries.append(entry)
    missing = sum(
        1
        for term in term_strings
        if not any(
            normalize_pattern(term, cat, stopwords) in hit_terms
            for cat in dictionary.categories
        )
    )
    if missing:
        log.warning(
            "%s: %d ambiguous terms not present in dictionary", dictionary.name, missing
        )
    metadata = dict(dictionary.metadata)
    metadata["ambiguity_mode"] = mode
    return Dictionary(
        name if name is not None else dictionary.name,
        tuple(entries),
        metadata,
        duplicates_dropped=dictionary.duplicates_dropped,
    )
