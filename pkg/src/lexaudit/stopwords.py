"""Shipped English stop-word list.

The list is a frozen copy of the Snowball English stop words, one word per
line, UTF-8. It is versioned independently of the package so that audits can
record exactly which list produced their counts.
"""

from __future__ import annotations

from importlib import resources

STOPWORDS_VERSION = "snowball-en/1.0.0"


def load_stopwords(path: str | None = None) -> frozenset[str]:
    """Load a stop-word list (one word per line, '#' lines are comments).

    With no path, returns the shipped list identified by STOPWORDS_VERSION.
    """
    if path is None:
        text = (
            resources.files("lexaudit.data")
            .joinpath("stopwords_en.txt")
            .read_text(encoding="utf-8")
        )
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    words = []
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.append(line)
    return frozenset(words)


STOPWORDS = load_stopwords()
