"""Multi-rater ambiguity annotation over audited terms.

Candidates are matched gendered-language terms with per-corpus frequencies
and concordance samples. A session collects independent binary ambiguity
ratings from registered raters, tracks per-term agreement, records
discussion resolutions, and exports the agreed ambiguous terms as an
ambiguity dictionary in JSONL. Sessions persist as append-only event
journals, so any historical state (and its alpha) can be replayed.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .corpus import Corpus, PipelineProfile, PROFILES, tokenize
from .errors import ParseError, ValidationError
from .lexicon import AvaEntry, Category, GenderClass, compile_glob, dump_ava
from .audit import MatchSet, matched_form
from .stats import RatingsMatrix, kripp_alpha
from .stopwords import STOPWORDS

__all__ = [
    "Candidate",
    "ConcordanceLine",
    "Session",
    "TermStatus",
    "concordance",
    "extract_candidates",
    "create_session",
    "submit_rating",
    "resolve",
    "session_alpha",
    "per_term_alpha",
    "export_ava",
    "replay_session",
    "read_journal",
    "JournalWriter",
]


@dataclass(frozen=True)
class ConcordanceLine:
    corpus: str
    utterance_id: str
    left: str
    keyword: str
    right: str

    def render(self) -> str:
        return " ".join(part for part in (self.left, self.keyword, self.right) if part)

    def to_dict(self) -> dict:
        return {
            "corpus": self.corpus,
            "utterance_id": self.utterance_id,
            "left": self.left,
            "keyword": self.keyword,
            "right": self.right,
        }

    @staticmethod
    def from_dict(data: Mapping) -> "ConcordanceLine":
        return ConcordanceLine(
            data["corpus"],
            data["utterance_id"],
            data["left"],
            data["keyword"],
            data["right"],
        )


def concordance(
    corpus: Corpus,
    pattern: str,
    window: int,
    profile: PipelineProfile | None = None,
    category: Category = Category.GENDERED_LANGUAGE,
    stopwords: frozenset[str] = STOPWORDS,
) -> list[ConcordanceLine]:
    """Keyword-in-context lines for a pattern, in corpus order.

    Matching happens in the same space an audit would use (stems for
    gendered language, norms otherwise), so line counts equal audit
    frequencies for the same pattern, profile, and corpus. Context shows up
    to ``window`` raw tokens on each side of the keyword's surface form.
    """
    if window < 1:
        raise ValidationError("window must be at least 1")
    if profile is None:
        profile = PROFILES["gendered_language"]
    matcher = compile_glob(pattern)
    lines: list[ConcordanceLine] = []
    for utterance in corpus:
        raw = utterance.text.split()
        for token in tokenize(utterance, profile, stopwords):
            if matcher.matches(matched_form(token, category)):
                left = " ".join(raw[max(0, token.index - window) : token.index])
                right = " ".join(raw[token.index + 1 : token.index + 1 + window])
                lines.append(
                    ConcordanceLine(corpus.name, utterance.id, left, token.surface, right)
                )
    return lines


@dataclass(frozen=True)
class Candidate:
    term: str
    original_gender: GenderClass
    source_dictionaries: tuple[str, ...]
    corpora_found: dict[str, int]
    sample_examples: tuple[ConcordanceLine, ...]

    @property
    def total_frequency(self) -> int:
        return sum(self.corpora_found.values())

    def example_for(self, corpus_name: str) -> ConcordanceLine | None:
        for line in self.sample_examples:
            if line.corpus == corpus_name:
                return line
        return None

    def to_dict(self) -> dict:
        return {
            "term": self.term,
            "gender": self.original_gender.value,
            "sources": list(self.source_dictionaries),
            "corpora": dict(self.corpora_found),
            "examples": [line.to_dict() for line in self.sample_examples],
        }

    @staticmethod
    def from_dict(data: Mapping) -> "Candidate":
        return Candidate(
            data["term"],
            GenderClass(data["gender"]),
            tuple(data.get("sources", ())),
            dict(data.get("corpora", {})),
            tuple(ConcordanceLine.from_dict(d) for d in data.get("examples", ())),
        )


def extract_candidates(
    matchsets: Sequence[MatchSet],
    corpora: Mapping[str, Corpus],
    samples_per_corpus: int = 5,
    window: int = 5,
    stopwords: frozenset[str] = STOPWORDS,
) -> list[Candidate]:
    """One candidate per distinct matched gendered-language term.

    Candidates carry per-corpus frequencies and up to ``samples_per_corpus``
    distinct concordance samples per corpus, most frequent context first.
    Ordered by descending total frequency, then term.
    """
    freq: dict[tuple[str, GenderClass], dict[str, int]] = {}
    sources: dict[tuple[str, GenderClass], list[str]] = {}
    for matchset in matchsets:
        for match in matchset.matches:
            if match.category is not Category.GENDERED_LANGUAGE:
                raise ValidationError(
                    "candidate extraction requires gendered-language match sets"
                )
            key = (match.entry.pattern, match.entry.gender)
            counts = freq.setdefault(key, {})
            counts[matchset.corpus_name] = counts.get(matchset.corpus_name, 0) + 1
            entry_sources = sources.setdefault(key, [])
            source = match.entry.source_id or matchset.dictionary_name
            if source not in entry_sources:
                entry_sources.append(source)

    candidates = []
    for (term, gender), counts in freq.items():
        samples: list[ConcordanceLine] = []
        for corpus_name in sorted(counts):
            corpus = corpora.get(corpus_name)
            if corpus is None:
                continue
            lines = concordance(corpus, term, window, stopwords=stopwords)
            grouped: dict[str, list[ConcordanceLine]] = {}
            order: list[str] = []
            for line in lines:
                rendered = line.render()
                if rendered not in grouped:
                    order.append(rendered)
                grouped.setdefault(rendered, []).append(line)
            ranked = sorted(order, key=lambda r: (-len(grouped[r]), order.index(r)))
            samples.extend(grouped[r][0] for r in ranked[:samples_per_corpus])
        candidates.append(
            Candidate(term, gender, tuple(sources[(term, gender)]), counts, tuple(samples))
        )
    candidates.sort(key=lambda c: (-c.total_frequency, c.term, c.original_gender.value))
    return candidates


class TermStatus(str, Enum):
    PENDING = "pending"
    AGREED = "agreed"
    NEEDS_DISCUSSION = "needs_discussion"
    RESOLVED = "resolved"


@dataclass(frozen=True)
class Rating:
    ambiguous: bool
    note: str | None = None


@dataclass
class Session:
    """Mutable annotation session state.

    Mutations go through submit_rating/resolve, which validate the term
    state machine: pending -> agreed | needs_discussion -> resolved.
    Every applied event is mirrored in ``history`` so the session can be
    journaled and replayed.
    """

    id: str
    candidates: dict[str, Candidate]
    raters: tuple[str, ...]
    ratings: dict[tuple[str, str], Rating] = field(default_factory=dict)
    resolutions: dict[str, bool] = field(default_factory=dict)
    resolution_notes: dict[str, str | None] = field(default_factory=dict)
    history: list[dict] = field(default_factory=list)

    @property
    def terms(self) -> list[str]:
        return list(self.candidates)

    def status(self, term: str) -> TermStatus:
        self._require_term(term)
        if term in self.resolutions:
            return TermStatus.RESOLVED
        ratings = [
            self.ratings[(rater, term)]
            for rater in self.raters
            if (rater, term) in self.ratings
        ]
        if len(ratings) < len(self.raters):
            return TermStatus.PENDING
        if len({r.ambiguous for r in ratings}) == 1:
            return TermStatus.AGREED
        return TermStatus.NEEDS_DISCUSSION

    def decision(self, term: str) -> bool | None:
        """The term's final ambiguity decision, if it has one."""
        status = self.status(term)
        if status is TermStatus.RESOLVED:
            return self.resolutions[term]
        if status is TermStatus.AGREED:
            return self.ratings[(self.raters[0], term)].ambiguous
        return None

    def next_term(self, rater: str) -> str | None:
        """The first unresolved term this rater has not rated yet."""
        self._require_rater(rater)
        for term in self.candidates:
            if term in self.resolutions:
                continue
            if (rater, term) not in self.ratings:
                return term
        return None

    def _require_rater(self, rater: str) -> None:
        if rater not in self.raters:
            raise ValidationError(f"unknown rater {rater!r}")

    def _require_term(self, term: str) -> None:
        if term not in self.candidates:
            raise ValidationError(f"unknown term {term!r}")

    def submit_rating(
        self, rater: str, term: str, ambiguous: bool, note: str | None = None
    ) -> TermStatus:
        self._require_rater(rater)
        self._require_term(term)
        if term in self.resolutions:
            raise ValidationError(f"term {term!r} is already resolved")
        self.ratings[(rater, term)] = Rating(bool(ambiguous), note)
        self.history.append(
            {
                "type": "rated",
                "payload": {
                    "rater": rater,
                    "term": term,
                    "ambiguous": bool(ambiguous),
                    "note": note,
                },
            }
        )
        return self.status(term)

    def resolve(self, term: str, decision: bool, note: str | None = None) -> TermStatus:
        status = self.status(term)
        if status is TermStatus.RESOLVED:
            raise ValidationError(f"term {term!r} is already resolved")
        if status is TermStatus.PENDING:
            raise ValidationError(
                f"term {term!r} cannot be resolved before all raters have rated"
            )
        self.resolutions[term] = bool(decision)
        self.resolution_notes[term] = note
        self.history.append(
            {
                "type": "resolved",
                "payload": {"term": term, "decision": bool(decision), "note": note},
            }
        )
        return TermStatus.RESOLVED

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "raters": list(self.raters),
            "terms": [
                {
                    "term": term,
                    "status": self.status(term).value,
                    "decision": self.decision(term),
                    "ratings": {
                        rater: {
                            "ambiguous": self.ratings[(rater, term)].ambiguous,
                            "note": self.ratings[(rater, term)].note,
                        }
                        for rater in self.raters
                        if (rater, term) in self.ratings
                    },
                    "resolution_note": self.resolution_notes.get(term),
                }
                for term in self.candidates
            ],
            "candidates": [c.to_dict() for c in self.candidates.values()],
        }


def create_session(
    candidates: Sequence[Candidate], raters: Sequence[str], session_id: str = "s1"
) -> Session:
    if not raters:
        raise ValidationError("a session needs at least one rater")
    if len(set(raters)) != len(raters):
        raise ValidationError("rater ids must be unique")
    by_term: dict[str, Candidate] = {}
    for candidate in candidates:
        if candidate.term in by_term:
            raise ValidationError(f"duplicate candidate term {candidate.term!r}")
        by_term[candidate.term] = candidate
    session = Session(session_id, by_term, tuple(raters))
    session.history.append(
        {
            "type": "created",
            "payload": {
                "id": session_id,
                "raters": list(raters),
                "candidates": [c.to_dict() for c in candidates],
            },
        }
    )
    return session


def submit_rating(
    session: Session, rater: str, term: str, ambiguous: bool, note: str | None = None
) -> Session:
    session.submit_rating(rater, term, ambiguous, note)
    return session


def resolve(session: Session, term: str, decision: bool, note: str | None = None) -> Session:
    session.resolve(term, decision, note)
    return session


def _ratings_matrix(session: Session, terms: Sequence[str] | None = None) -> RatingsMatrix:
    items = tuple(terms) if terms is not None else tuple(session.candidates)
    values = {
        (term, rater): rating.ambiguous
        for (rater, term), rating in session.ratings.items()
        if term in items
    }
    return RatingsMatrix(items, session.raters, values)


def session_alpha(session: Session) -> float:
    """Krippendorff's alpha over all rated terms in the session."""
    return kripp_alpha(_ratings_matrix(session))


def per_term_alpha(session: Session) -> dict[str, float]:
    """Alpha per term, for terms with at least two ratings."""
    out: dict[str, float] = {}
    for term in session.candidates:
        ratings = [
            r for (rater, t), r in session.ratings.items() if t == term
        ]
        if len(ratings) >= 2:
            out[term] = kripp_alpha(_ratings_matrix(session, [term]))
    return out


def export_ava(session: Session) -> str:
    """Export terms decided ambiguous as canonical ambiguity-dictionary JSONL.

    Each exported term carries one example snippet per corpus in which it
    was found; a decided term without any example is an error.
    """
    entries: list[AvaEntry] = []
    for term, candidate in session.candidates.items():
        if session.decision(term) is not True:
            continue
        examples: dict[str, str] = {}
        for corpus_name in sorted(candidate.corpora_found):
            line = candidate.example_for(corpus_name)
            if line is not None:
                examples[corpus_name] = line.render()
        if not examples:
            raise ValidationError(f"term {term!r} has no example to export")
        entries.append(AvaEntry(term, candidate.original_gender, examples))
    return dump_ava(entries)


# -- journaling ------------------------------------------------------------


def session_events(session: Session) -> list[dict]:
    """The session's applied events, in order (timestamps not included)."""
    return list(session.history)


def replay_session(events: Iterable[dict]) -> Session:
    """Rebuild a session from journaled events, deterministically."""
    session: Session | None = None
    for event in events:
        etype = event.get("type")
        payload = event.get("payload", {})
        if etype == "created":
            if session is not None:
                raise ValidationError("duplicate created event in journal")
            candidates = [Candidate.from_dict(c) for c in payload["candidates"]]
            session = create_session(candidates, payload["raters"], payload["id"])
        elif session is None:
            raise ValidationError("journal does not start with a created event")
        elif etype == "rated":
            session.submit_rating(
                payload["rater"],
                payload["term"],
                payload["ambiguous"],
                payload.get("note"),
            )
        elif etype == "resolved":
            session.resolve(payload["term"], payload["decision"], payload.get("note"))
        else:
            raise ValidationError(f"unknown journal event type {etype!r}")
    if session is None:
        raise ValidationError("empty journal")
    return session


def read_journal(path: str | Path) -> list[dict]:
    events = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        try:
            events.append(json.loads(line))
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid journal line: {exc.msg}", line=lineno) from exc
    return events


class JournalWriter:
    """Append-only JSONL journal for one session."""

    def __init__(self, path: str | Path):
        self.path = Path(path)

    def append(self, event: dict) -> None:
        record = {
            "type": event["type"],
            "timestamp": event.get("timestamp", time.time()),
            "payload": event["payload"],
        }
        with open(self.path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")

    def append_all(self, events: Iterable[dict]) -> None:
        for event in events:
            self.append(event)
