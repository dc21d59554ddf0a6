"""lexaudit: dictionary-based gender-language auditing for NLP corpora.

Parses conversational training corpora, matches them against pluggable
dictionaries of gendered patterns, derives frequency/ratio/share tables and
chi-square comparisons, and runs the human-in-the-loop workflow that
produces ambiguity dictionaries for virtual-assistant contexts.
"""

from .audit import (
    AuditReport,
    Match,
    MatchSet,
    cross_table,
    dict_share,
    frequency_table,
    run_audit,
    top_terms,
)
from .annotate import (
    Candidate,
    ConcordanceLine,
    Session,
    concordance,
    create_session,
    export_ava,
    extract_candidates,
    per_term_alpha,
    replay_session,
    resolve,
    session_alpha,
    submit_rating,
)
from .corpus import (
    Corpus,
    Partition,
    PipelineProfile,
    PROFILES,
    Token,
    Utterance,
    corpus_stats,
    load_corpus,
    parse_massive,
    parse_redial,
    stem,
    tokenize,
)
from .errors import ConfigError, LexauditError, ParseError, ValidationError
from .lexicon import (
    CONSERVATIVE,
    LOOSE,
    AvaEntry,
    Category,
    DictEntry,
    Dictionary,
    GenderClass,
    Matcher,
    ThresholdPolicy,
    apply_threshold,
    compile_glob,
    dump_ava,
    load_ava,
    load_dictionary,
    merge,
    subtract,
)
from .stats import Chi2Result, RatingsMatrix, chi2_2x2, chi2_gof, chi2_p, kripp_alpha
from .stopwords import STOPWORDS, STOPWORDS_VERSION, load_stopwords

__version__ = "0.1.0"
