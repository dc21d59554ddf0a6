import json

import pytest

from lexaudit import (
    AvaEntry,
    Category,
    DictEntry,
    Dictionary,
    GenderClass,
    PROFILES,
    ValidationError,
    concordance,
    create_session,
    export_ava,
    extract_candidates,
    load_ava,
    per_term_alpha,
    replay_session,
    run_audit,
    session_alpha,
)
from lexaudit.annotate import Candidate, ConcordanceLine, JournalWriter, TermStatus, read_journal

M = GenderClass.MASCULINE
F = GenderClass.FEMININE


def gl_dict(name, *pairs):
    return Dictionary(
        name,
        tuple(DictEntry(p, g, Category.GENDERED_LANGUAGE, name) for p, g in pairs),
        {"sources": [name]},
    )


class TestConcordance:
    def test_window_bounds_context(self, massive_corpus):
        lines = concordance(massive_corpus, "warm", window=3)
        first = lines[0]
        assert first.keyword == "warm"
        assert first.left == "is it"
        assert first.right == "outside"

    def test_kind_of_music(self, massive_corpus):
        lines = concordance(massive_corpus, "kind", window=2)
        assert any("of music" in line.right for line in lines)

    def test_absent_pattern(self, massive_corpus):
        assert concordance(massive_corpus, "zebra", window=3) == []

    def test_line_count_equals_audit_frequency(self, massive_corpus, redial_corpus):
        d = gl_dict("d", ("warm", F), ("love", F), ("strong", M))
        for corpus in (massive_corpus, redial_corpus):
            matchset = run_audit(corpus, d, PROFILES["gendered_language"])
            for term in ("warm", "love", "strong"):
                audit_freq = sum(
                    1 for m in matchset.matches if m.entry.pattern == term
                )
                assert len(concordance(corpus, term, window=5)) == audit_freq

    def test_window_validated(self, massive_corpus):
        with pytest.raises(ValidationError):
            concordance(massive_corpus, "warm", window=0)


class TestExtractCandidates:
    def _matchsets(self, massive_corpus, redial_corpus):
        d = gl_dict("d", ("warm", F), ("love", F), ("strong", M), ("king", M))
        corpora = {"massive": massive_corpus, "redial": redial_corpus}
        matchsets = [
            run_audit(c, d, PROFILES["gendered_language"]) for c in corpora.values()
        ]
        return matchsets, corpora

    def test_term_in_both_corpora(self, massive_corpus, redial_corpus):
        matchsets, corpora = self._matchsets(massive_corpus, redial_corpus)
        candidates = extract_candidates(matchsets, corpora)
        love = next(c for c in candidates if c.term == "love")
        assert set(love.corpora_found) == {"massive", "redial"}
        assert love.sample_examples

    def test_single_corpus_term_included(self, massive_corpus, redial_corpus):
        matchsets, corpora = self._matchsets(massive_corpus, redial_corpus)
        candidates = extract_candidates(matchsets, corpora)
        strong = next(c for c in candidates if c.term == "strong")
        assert set(strong.corpora_found) == {"redial"}

    def test_ordered_by_total_frequency(self, massive_corpus, redial_corpus):
        matchsets, corpora = self._matchsets(massive_corpus, redial_corpus)
        candidates = extract_candidates(matchsets, corpora)
        totals = [c.total_frequency for c in candidates]
        assert totals == sorted(totals, reverse=True)

    def test_empty_matchsets(self):
        assert extract_candidates([], {}) == []

    def test_rejects_non_gendered_language(self, massive_corpus):
        pronouns = Dictionary(
            "p",
            (DictEntry("they", GenderClass.NEUTRAL, Category.PRONOUN, "p"),),
            {},
        )
        matchset = run_audit(massive_corpus, pronouns, PROFILES["pronouns"])
        with pytest.raises(ValidationError):
            extract_candidates([matchset], {"massive": massive_corpus})

    def test_round_trips_through_dict(self, massive_corpus, redial_corpus):
        matchsets, corpora = self._matchsets(massive_corpus, redial_corpus)
        for candidate in extract_candidates(matchsets, corpora):
            assert Candidate.from_dict(candidate.to_dict()) == candidate


def make_candidates(*terms):
    out = []
    for term, gender in terms:
        out.append(
            Candidate(
                term,
                gender,
                ("fixture",),
                {"massive": 2},
                (ConcordanceLine("massive", "u1", "i", term, "it"),),
            )
        )
    return out


class TestSessionStateMachine:
    def test_unanimous_becomes_agreed(self):
        session = create_session(make_candidates(("love", F)), ["r1", "r2", "r3"])
        for rater in ("r1", "r2", "r3"):
            session.submit_rating(rater, "love", True)
        assert session.status("love") is TermStatus.AGREED
        assert session.decision("love") is True

    def test_split_needs_discussion_then_resolution(self):
        session = create_session(make_candidates(("strong", M)), ["r1", "r2", "r3"])
        session.submit_rating("r1", "strong", True)
        session.submit_rating("r2", "strong", True)
        assert session.status("strong") is TermStatus.PENDING
        session.submit_rating("r3", "strong", False)
        assert session.status("strong") is TermStatus.NEEDS_DISCUSSION
        session.resolve("strong", True)
        assert session.status("strong") is TermStatus.RESOLVED
        assert session.decision("strong") is True

    def test_unregistered_rater_rejected(self):
        session = create_session(make_candidates(("love", F)), ["r1"])
        with pytest.raises(ValidationError):
            session.submit_rating("intruder", "love", True)

    def test_unknown_term_rejected(self):
        session = create_session(make_candidates(("love", F)), ["r1"])
        with pytest.raises(ValidationError):
            session.submit_rating("r1", "nope", True)

    def test_resolve_on_pending_rejected(self):
        session = create_session(make_candidates(("love", F)), ["r1", "r2"])
        session.submit_rating("r1", "love", True)
        with pytest.raises(ValidationError):
            session.resolve("love", True)

    def test_resolve_twice_rejected(self):
        session = create_session(make_candidates(("love", F)), ["r1", "r2"])
        session.submit_rating("r1", "love", True)
        session.submit_rating("r2", "love", False)
        session.resolve("love", True)
        with pytest.raises(ValidationError):
            session.resolve("love", False)

    def test_rerating_flips_between_agreed_and_discussion(self):
        session = create_session(make_candidates(("love", F)), ["r1", "r2"])
        session.submit_rating("r1", "love", True)
        session.submit_rating("r2", "love", True)
        assert session.status("love") is TermStatus.AGREED
        session.submit_rating("r2", "love", False)
        assert session.status("love") is TermStatus.NEEDS_DISCUSSION
        session.submit_rating("r2", "love", True)
        assert session.status("love") is TermStatus.AGREED

    def test_rating_resolved_term_rejected(self):
        session = create_session(make_candidates(("love", F)), ["r1", "r2"])
        session.submit_rating("r1", "love", True)
        session.submit_rating("r2", "love", False)
        session.resolve("love", True)
        with pytest.raises(ValidationError):
            session.submit_rating("r1", "love", False)

    def test_next_term_queue(self):
        session = create_session(
            make_candidates(("love", F), ("power", M)), ["r1", "r2"]
        )
        assert session.next_term("r1") == "love"
        session.submit_rating("r1", "love", True)
        assert session.next_term("r1") == "power"
        session.submit_rating("r1", "power", False)
        assert session.next_term("r1") is None
        assert session.next_term("r2") == "love"


class TestSessionAlpha:
    def test_unanimous(self):
        session = create_session(
            make_candidates(("love", F), ("power", M)), ["r1", "r2", "r3"]
        )
        for term in ("love", "power"):
            for rater in ("r1", "r2", "r3"):
                session.submit_rating(rater, term, True)
        assert session_alpha(session) == 1.0
        assert per_term_alpha(session) == {"love": 1.0, "power": 1.0}

    def test_two_rater_disagreement_fixture(self):
        session = create_session(
            make_candidates(("t1", F), ("t2", M)), ["A", "B"]
        )
        session.submit_rating("A", "t1", True)
        session.submit_rating("B", "t1", False)
        session.submit_rating("A", "t2", True)
        session.submit_rating("B", "t2", False)
        assert session_alpha(session) == pytest.approx(-0.5)

    def test_alpha_error_propagates(self):
        session = create_session(make_candidates(("love", F)), ["r1", "r2"])
        session.submit_rating("r1", "love", True)
        with pytest.raises(ValidationError):
            session_alpha(session)


class TestExportAva:
    def test_exports_agreed_entries(self):
        session = create_session(make_candidates(("love", F)), ["r1", "r2"])
        session.submit_rating("r1", "love", True)
        session.submit_rating("r2", "love", True)
        payload = export_ava(session)
        (record,) = [json.loads(line) for line in payload.splitlines()]
        assert record["term"] == "love"
        assert record["gender"] == "f"
        assert record["examples"]["massive"] == "i love it"

    def test_resolved_false_not_exported(self):
        session = create_session(make_candidates(("love", F)), ["r1", "r2"])
        session.submit_rating("r1", "love", True)
        session.submit_rating("r2", "love", False)
        session.resolve("love", False)
        assert export_ava(session) == ""

    def test_empty_set_gives_zero_lines(self):
        session = create_session(make_candidates(("love", F)), ["r1"])
        assert export_ava(session) == ""

    def test_missing_example_is_error(self):
        bare = Candidate("love", F, ("x",), {"massive": 1}, ())
        session = create_session([bare], ["r1"])
        session.submit_rating("r1", "love", True)
        with pytest.raises(ValidationError):
            export_ava(session)

    def test_export_load_export_byte_identical(self, tmp_path):
        session = create_session(
            make_candidates(("love", F), ("power", M)), ["r1"]
        )
        session.submit_rating("r1", "love", True)
        session.submit_rating("r1", "power", True)
        payload = export_ava(session)
        path = tmp_path / "ava.jsonl"
        path.write_text(payload, encoding="utf-8")
        from lexaudit import dump_ava

        assert dump_ava(load_ava(path)) == payload


class TestJournal:
    def test_replay_reproduces_state(self, tmp_path):
        session = create_session(
            make_candidates(("love", F), ("strong", M)), ["r1", "r2"], "s1"
        )
        session.submit_rating("r1", "love", True, note="clear case")
        session.submit_rating("r2", "love", True)
        session.submit_rating("r1", "strong", True)
        session.submit_rating("r2", "strong", False)
        session.resolve("strong", True, note="volume levels")

        path = tmp_path / "s1.jsonl"
        JournalWriter(path).append_all(session.history)
        replayed = replay_session(read_journal(path))
        assert replayed.to_dict() == session.to_dict()
        assert session_alpha(replayed) == session_alpha(session)

    def test_replay_prefix_gives_historical_alpha(self, tmp_path):
        session = create_session(make_candidates(("love", F)), ["r1", "r2"], "s1")
        session.submit_rating("r1", "love", True)
        session.submit_rating("r2", "love", True)
        events = session.history
        partial = replay_session(events[:2])
        assert partial.status("love") is TermStatus.PENDING

    def test_journal_without_created_event_rejected(self):
        with pytest.raises(ValidationError):
            replay_session([{"type": "rated", "payload": {}}])

    def test_empty_journal_rejected(self):
        with pytest.raises(ValidationError):
            replay_session([])
