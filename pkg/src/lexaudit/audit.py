"""Dictionary-over-corpus matching and the derived frequency tables.

run_audit tests every pipeline token against every compiled dictionary
entry and records hits with full provenance; the report operations reduce a
match set to dictionary share, per-partition gender frequencies, ratios,
and top-term rankings.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

from .corpus import Corpus, Partition, PipelineProfile, Token, tokenize
from .errors import ConfigError, ValidationError
from .lexicon import (
    AvaEntry,
    Category,
    DictEntry,
    Dictionary,
    GenderClass,
    subtract,
)
from .stopwords import STOPWORDS

__all__ = [
    "Match",
    "MatchSet",
    "AuditReport",
    "DEFAULT_NAME_EXCLUSIONS",
    "run_audit",
    "dict_share",
    "frequency_table",
    "top_terms",
    "cross_table",
    "matchset_to_jsonl",
    "matched_form",
]

#: Virtual-assistant wake names excluded from name audits unless overridden.
DEFAULT_NAME_EXCLUSIONS = frozenset({"alexa", "siri", "olly"})

_GENDER_ORDER = [
    GenderClass.MASCULINE,
    GenderClass.FEMININE,
    GenderClass.NEUTRAL,
    GenderClass.NEO,
    GenderClass.OTHER,
]

_PARTITION_ORDER = [
    Partition.DEV,
    Partition.TEST,
    Partition.TRAIN,
    Partition.UNPARTITIONED,
]

# Pipeline flags each dictionary category relies on: gendered language is
# matched in stem space, everything else on unstemmed norms, and pronouns
# additionally need stop words kept (pronouns are stop words).
_CATEGORY_NEEDS = {
    Category.GENDERED_LANGUAGE: {"stem": True},
    Category.PRONOUN: {"stem": False, "remove_stopwords": False},
    Category.MARKED_WORD: {"stem": False},
    Category.NAME: {"stem": False},
}


@dataclass(frozen=True)
class Match:
    entry: DictEntry
    token: Token
    partition: Partition

    @property
    def gender(self) -> GenderClass:
        return self.entry.gender

    @property
    def category(self) -> Category:
        return self.entry.category

    @property
    def ambiguous(self) -> bool:
        return self.entry.ambiguous


@dataclass(frozen=True)
class MatchSet:
    corpus_name: str
    dictionary_name: str
    profile_name: str
    exclusions: tuple[str, ...]
    matches: tuple[Match, ...]
    dictionary_size: int
    genders: tuple[GenderClass, ...]
    partitions: tuple[Partition, ...]

    def __len__(self) -> int:
        return len(self.matches)


def _check_compatibility(dictionary: Dictionary, profile: PipelineProfile) -> None:
    for category in dictionary.categories:
        for flag, required in _CATEGORY_NEEDS[category].items():
            if getattr(profile, flag) != required:
                raise ConfigError(
                    f"dictionary category {category.value!r} requires profile "
                    f"{flag}={required}, but profile {profile.name!r} has "
                    f"{flag}={getattr(profile, flag)}"
                )


def matched_form(token: Token, category: Category) -> str:
    return token.stem if category is Category.GENDERED_LANGUAGE else token.norm


def _match_utterance(utterance, profile, stopwords, exclusions, literal, wildcard):
    matches = []
    for token in tokenize(utterance, profile, stopwords):
        if token.norm in exclusions:
            continue
        for category, form_entries in literal.items():
            for entry in form_entries.get(matched_form(token, category), ()):
                matches.append(Match(entry, token, utterance.partition))
        for entry, matcher in wildcard:
            if matcher.matches(matched_form(token, entry.category)):
                matches.append(Match(entry, token, utterance.partition))
    return matches


def run_audit(
    corpus: Corpus,
    dictionary: Dictionary,
    profile: PipelineProfile,
    ava: tuple[Sequence[AvaEntry], str] | None = None,
    exclusions: Sequence[str] | None = None,
    stopwords: frozenset[str] = STOPWORDS,
    workers: int = 1,
) -> MatchSet:
    """Match a dictionary against a tokenized corpus.

    ``ava`` is an optional (entries, mode) pair: mode "remove" filters the
    dictionary before matching, mode "flag" keeps entries but marks their
    matches ambiguous. ``exclusions`` are literal token norms to skip; when
    None, name-category audits exclude the default agent names.

    Output is deterministic: matches are sorted by (utterance id, token
    index, pattern, gender) regardless of worker count.
    """
    _check_compatibility(dictionary, profile)
    if ava is not None:
        entries, mode = ava
        dictionary = subtract(dictionary, entries, mode=mode, stopwords=stopwords)
    if exclusions is None:
        if Category.NAME in dictionary.categories:
            excluded = frozenset(DEFAULT_NAME_EXCLUSIONS)
        else:
            excluded = frozenset()
    else:
        excluded = frozenset(tok.lower() for tok in exclusions)

    literal: dict[Category, dict[str, list[DictEntry]]] = {}
    wildcard: list[tuple[DictEntry, object]] = []
    for entry in dictionary.entries:
        matcher = entry.matcher()
        if matcher.is_literal:
            literal.setdefault(entry.category, {}).setdefault(
                entry.pattern, []
            ).append(entry)
        else:
            wildcard.append((entry, matcher))

    def work(utterance):
        return _match_utterance(
            utterance, profile, stopwords, excluded, literal, wildcard
        )

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            per_utterance = list(pool.map(work, corpus.utterances))
    else:
        per_utterance = [work(u) for u in corpus.utterances]

    matches = [m for batch in per_utterance for m in batch]
    matches.sort(
        key=lambda m: (
            m.token.utterance_id,
            m.token.index,
            m.entry.pattern,
            m.entry.gender.value,
        )
    )
    return MatchSet(
        corpus_name=corpus.name,
        dictionary_name=dictionary.name,
        profile_name=profile.name,
        exclusions=tuple(sorted(excluded)),
        matches=tuple(matches),
        dictionary_size=len(dictionary),
        genders=tuple(g for g in _GENDER_ORDER if g in dictionary.genders),
        partitions=tuple(p for p in _PARTITION_ORDER if p in corpus.partitions),
    )


def dict_share(
    matchset: MatchSet, dictionary: Dictionary | None = None
) -> tuple[int, int, float]:
    """(matched terms, total terms, fraction): how much of the dictionary
    was found at least once."""
    total = len(dictionary) if dictionary is not None else matchset.dictionary_size
    matched = len({(m.entry.pattern, m.entry.gender) for m in matchset.matches})
    fraction = matched / total if total else 0.0
    return matched, total, fraction


@dataclass(frozen=True)
class ReportRow:
    partition: str
    frequencies: dict[str, int]
    ratios: dict[str, float] | None
    total: int


@dataclass(frozen=True)
class AuditReport:
    corpus_name: str
    dictionary_name: str
    profile_name: str
    genders: tuple[str, ...]
    dict_share: tuple[int, int, float]
    rows: tuple[ReportRow, ...]
    total_instances: int
    exclusions: tuple[str, ...] = field(default_factory=tuple)

    @property
    def overall(self) -> ReportRow:
        return self.rows[0]


def frequency_table(matchset: MatchSet) -> AuditReport:
    """Per-partition and overall gender frequencies with per-row ratios.

    The overall row comes first; each row's ratios divide by that row's
    total across all gender classes and are None when the row is empty.
    """
    genders = [g.value for g in matchset.genders]
    counts: dict[str, dict[str, int]] = {
        p.value: {g: 0 for g in genders} for p in matchset.partitions
    }
    overall = {g: 0 for g in genders}
    for match in matchset.matches:
        overall[match.gender.value] += 1
        counts[match.partition.value][match.gender.value] += 1

    def row(partition: str, frequencies: dict[str, int]) -> ReportRow:
        total = sum(frequencies.values())
        if total > 0:
            ratios = {g: frequencies[g] / total for g in genders}
        else:
            ratios = None
        return ReportRow(partition, dict(frequencies), ratios, total)

    rows = [row("overall", overall)]
    rows.extend(row(p.value, counts[p.value]) for p in matchset.partitions)
    report = AuditReport(
        corpus_name=matchset.corpus_name,
        dictionary_name=matchset.dictionary_name,
        profile_name=matchset.profile_name,
        genders=tuple(genders),
        dict_share=dict_share(matchset),
        rows=tuple(rows),
        total_instances=sum(overall.values()),
        exclusions=matchset.exclusions,
    )
    _check_partition_sums(report)
    return report


def _check_partition_sums(report: AuditReport) -> None:
    overall = report.rows[0]
    for gender in report.genders:
        partition_sum = sum(r.frequencies[gender] for r in report.rows[1:])
        if partition_sum != overall.frequencies[gender]:
            raise AssertionError(
                f"partition sums for {gender} ({partition_sum}) != overall "
                f"({overall.frequencies[gender]})"
            )


def top_terms(
    matchset: MatchSet, k: int
) -> list[tuple[str, GenderClass, int]]:
    """The k most frequent matched terms, ties broken lexicographically."""
    if k < 0:
        raise ValidationError("k must be non-negative")
    counts: dict[tuple[str, GenderClass], int] = {}
    for match in matchset.matches:
        key = (match.entry.pattern, match.entry.gender)
        counts[key] = counts.get(key, 0) + 1
    ranked = sorted(
        counts.items(), key=lambda item: (-item[1], item[0][0], item[0][1].value)
    )
    return [(term, gender, count) for (term, gender), count in ranked[:k]]


def cross_table(
    a: AuditReport,
    b: AuditReport,
    genders: Sequence[GenderClass | str] = (
        GenderClass.MASCULINE,
        GenderClass.FEMININE,
    ),
) -> list[list[int]]:
    """Overall frequencies of the requested genders, one row per report.

    Feeds stats.chi2_2x2 for the by-dataset comparison.
    """
    wanted = [g.value if isinstance(g, GenderClass) else g for g in genders]
    table = []
    for report in (a, b):
        if report.total_instances == 0:
            raise ValidationError(
                f"report for {report.corpus_name!r} has zero total instances"
            )
        for gender in wanted:
            if gender not in report.genders:
                raise ValidationError(
                    f"report for {report.corpus_name!r} lacks gender {gender!r}"
                )
        table.append([report.overall.frequencies[g] for g in wanted])
    return table


def matchset_to_jsonl(matchset: MatchSet) -> str:
    """One JSON object per match, in the canonical sorted order."""
    import json

    lines = []
    for m in matchset.matches:
        lines.append(
            json.dumps(
                {
                    "term": m.entry.pattern,
                    "gender": m.gender.value,
                    "category": m.category.value,
                    "corpus": matchset.corpus_name,
                    "partition": m.partition.value,
                    "utterance_id": m.token.utterance_id,
                    "index": m.token.index,
                    "ambiguous": m.ambiguous,
                },
                ensure_ascii=False,
            )
        )
    return "\n".join(lines) + ("\n" if lines else "")
