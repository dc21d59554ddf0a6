"""End-to-end workflow over synthetic corpora shaped like the real audits.

Builds corpora whose match counts equal the published summary-table rows,
then drives the full chain: threshold classification, dictionary merge,
audits with and without ambiguous terms, frequency tables, rendering,
chi-square comparisons, candidate extraction, a rating session, export,
and re-audit with the exported dictionary.
"""

import json

import pytest

from lexaudit import (
    GenderClass,
    PROFILES,
    chi2_2x2,
    chi2_gof,
    cross_table,
    apply_threshold,
    dump_ava,
    extract_candidates,
    frequency_table,
    load_ava,
    load_dictionary,
    merge,
    parse_massive,
    parse_redial,
    run_audit,
    subtract,
    top_terms,
)
from lexaudit.annotate import create_session, export_ava
from lexaudit.lexicon import LOOSE
from lexaudit.report import fmt_ratio, render_audit
from lexaudit.stats import kripp_alpha
from tests.conftest import massive_line

M = GenderClass.MASCULINE
F = GenderClass.FEMININE

# Per-partition occurrence counts engineered so that the full audit gives
# overall (masc 106, fem 152) and the audit without ambiguous terms gives
# (masc 54, fem 12), matching the published combined rows.
PLAN = {
    "dev": {"king": 9, "virgin": 0, "power": 7, "love": 13},
    "test": {"king": 9, "virgin": 2, "power": 8, "love": 29},
    "train": {"king": 36, "virgin": 10, "power": 37, "love": 98},
}

CARRIER = {
    "king": "the king spoke today",
    "virgin": "a virgin forest trail",
    "power": "power up the plug socket",
    "love": "i love scary movies",
}


@pytest.fixture(scope="module")
def massive_corpus_shaped():
    lines = []
    uid = 0
    for partition, words in PLAN.items():
        for word, count in words.items():
            for _ in range(count):
                uid += 1
                lines.append(massive_line(str(uid), partition, CARRIER[word]))
    return parse_massive(lines, name="massive")


@pytest.fixture(scope="module")
def redial_corpus_shaped():
    messages = []
    mid = 0
    for word, count in (("king", 1344), ("virgin", 1128)):
        for _ in range(count):
            mid += 1
            messages.append(
                {"timeOffset": mid, "text": CARRIER[word],
                 "senderWorkerId": 1, "messageId": mid}
            )
    line = json.dumps({"conversationId": "1", "messages": messages})
    return parse_redial([line], "train", name="redial")


@pytest.fixture(scope="module")
def combined_dictionary(tmp_path_factory):
    # one scored source classified by the loose policy, one categorical
    root = tmp_path_factory.mktemp("dicts")
    scored = root / "scored.csv"
    scored.write_text("word,score\nking,5.5\nvirgin,2.0\n", encoding="utf-8")
    categorical = root / "handmade.txt"
    categorical.write_text("#masculine\npower\n#feminine\nlove\n", encoding="utf-8")
    rated = load_dictionary(scored, "scored_csv")
    classified = apply_threshold(rated.scored_pairs(), LOOSE, name="scored-loose")
    handmade = load_dictionary(categorical, "categorical_list")
    combined = merge([classified, handmade], name="combined")
    assert len(combined) == 4
    return combined


@pytest.fixture(scope="module")
def shipped_ava():
    from importlib import resources

    raw = resources.files("lexaudit.data").joinpath("ava.jsonl").read_text("utf-8")
    return load_ava(raw.splitlines())


class TestPublishedShapedAudit:
    def test_full_audit_matches_combined_row(self, massive_corpus_shaped,
                                             combined_dictionary):
        report = frequency_table(run_audit(
            massive_corpus_shaped, combined_dictionary, PROFILES["gendered_language"]
        ))
        assert report.overall.frequencies == {"masculine": 106, "feminine": 152}
        assert report.total_instances == 258
        assert fmt_ratio(report.overall.ratios["masculine"]) == ".411"
        assert fmt_ratio(report.overall.ratios["feminine"]) == ".589"
        by_partition = {row.partition: row for row in report.rows}
        assert by_partition["dev"].frequencies == {"masculine": 16, "feminine": 13}
        assert by_partition["test"].frequencies == {"masculine": 17, "feminine": 31}
        assert by_partition["train"].frequencies == {"masculine": 73, "feminine": 108}
        assert fmt_ratio(by_partition["dev"].ratios["masculine"]) == ".552"
        assert fmt_ratio(by_partition["test"].ratios["feminine"]) == ".646"
        assert fmt_ratio(by_partition["train"].ratios["masculine"]) == ".403"
        assert report.dict_share[:2] == (4, 4)

    def test_audit_without_ambiguous_terms_matches_published_row(
            self, massive_corpus_shaped, combined_dictionary, shipped_ava):
        report = frequency_table(run_audit(
            massive_corpus_shaped, combined_dictionary,
            PROFILES["gendered_language"], ava=(shipped_ava, "remove"),
        ))
        assert report.overall.frequencies == {"masculine": 54, "feminine": 12}
        assert report.total_instances == 66
        by_partition = {row.partition: row for row in report.rows}
        assert by_partition["dev"].frequencies == {"masculine": 9, "feminine": 0}
        assert by_partition["test"].frequencies == {"masculine": 9, "feminine": 2}
        assert by_partition["train"].frequencies == {"masculine": 36, "feminine": 10}
        rendered = render_audit(report, "markdown").decode()
        assert "| overall | 54 | 12 | .818 | .182 |" in rendered
        assert "| dev | 9 | 0 | 1.000 | .000 |" in rendered
        assert "| test | 9 | 2 | .818 | .182 |" in rendered
        assert "| train | 36 | 10 | .783 | .217 |" in rendered

    def test_goodness_of_fit_on_the_remove_row(self, massive_corpus_shaped,
                                               combined_dictionary, shipped_ava):
        report = frequency_table(run_audit(
            massive_corpus_shaped, combined_dictionary,
            PROFILES["gendered_language"], ava=(shipped_ava, "remove"),
        ))
        observed = [report.overall.frequencies["masculine"],
                    report.overall.frequencies["feminine"]]
        result = chi2_gof(observed)
        assert result.statistic == pytest.approx(26.73, abs=0.01)
        assert result.p < 0.001

    def test_by_dataset_comparison_reproduces_corrected_statistic(
            self, massive_corpus_shaped, redial_corpus_shaped,
            combined_dictionary, shipped_ava):
        profile = PROFILES["gendered_language"]
        massive_report = frequency_table(run_audit(
            massive_corpus_shaped, combined_dictionary, profile,
            ava=(shipped_ava, "remove"),
        ))
        redial_report = frequency_table(run_audit(
            redial_corpus_shaped, combined_dictionary, profile,
            ava=(shipped_ava, "remove"),
        ))
        table = cross_table(massive_report, redial_report)
        assert table == [[54, 12], [1344, 1128]]
        result = chi2_2x2(table, yates=True)
        assert result.statistic == pytest.approx(18.48, abs=0.01)
        uncorrected = chi2_2x2(table, yates=False)
        assert uncorrected.statistic == pytest.approx(19.58, abs=0.01)

    def test_top_terms_ranking(self, massive_corpus_shaped, combined_dictionary):
        matchset = run_audit(
            massive_corpus_shaped, combined_dictionary, PROFILES["gendered_language"]
        )
        ranked = top_terms(matchset, 4)
        assert ranked[0] == ("love", F, 140)
        assert [t for t, _, _ in ranked] == ["love", "king", "power", "virgin"]


class TestAnnotationRoundTrip:
    def test_candidates_session_export_and_reaudit(
            self, massive_corpus_shaped, redial_corpus_shaped, combined_dictionary):
        profile = PROFILES["gendered_language"]
        corpora = {"massive": massive_corpus_shaped, "redial": redial_corpus_shaped}
        matchsets = [run_audit(c, combined_dictionary, profile)
                     for c in corpora.values()]
        candidates = extract_candidates(matchsets, corpora, samples_per_corpus=2)
        # ordering: total frequency across corpora, descending
        assert [c.term for c in candidates] == ["king", "virgin", "love", "power"]
        king = next(c for c in candidates if c.term == "king")
        assert king.corpora_found == {"massive": 54, "redial": 1344}

        session = create_session(candidates, ["r1", "r2", "r3"], "workflow")
        # love and power are judged ambiguous unanimously; king splits and is
        # resolved not-ambiguous; virgin unanimously not ambiguous
        for rater in ("r1", "r2", "r3"):
            session.submit_rating(rater, "love", True)
            session.submit_rating(rater, "power", True)
            session.submit_rating(rater, "virgin", False)
        session.submit_rating("r1", "king", True, note="royalty reading")
        session.submit_rating("r2", "king", False)
        session.submit_rating("r3", "king", False)
        session.resolve("king", False, note="restaurants and chess openings")

        payload = export_ava(session)
        exported = load_ava(payload.splitlines())
        assert sorted(e.term for e in exported) == ["love", "power"]
        assert dump_ava(exported) == payload

        reduced = subtract(combined_dictionary, exported, mode="remove")
        report = frequency_table(run_audit(massive_corpus_shaped, reduced, profile))
        assert report.overall.frequencies == {"masculine": 54, "feminine": 12}

    def test_session_alpha_flows_from_stats(self, combined_dictionary,
                                            massive_corpus_shaped):
        from lexaudit import RatingsMatrix, session_alpha

        profile = PROFILES["gendered_language"]
        matchsets = [run_audit(massive_corpus_shaped, combined_dictionary, profile)]
        candidates = extract_candidates(
            matchsets, {"massive": massive_corpus_shaped}, samples_per_corpus=1
        )
        session = create_session(candidates, ["a", "b"], "alpha-check")
        for candidate in candidates:
            session.submit_rating("a", candidate.term, True)
            session.submit_rating("b", candidate.term, candidate.term != "king")
        values = {
            (term, rater): rating.ambiguous
            for (rater, term), rating in session.ratings.items()
        }
        matrix = RatingsMatrix(tuple(c.term for c in candidates), ("a", "b"), values)
        assert session_alpha(session) == kripp_alpha(matrix)
