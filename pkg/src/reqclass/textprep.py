"""Text preprocessing: normalization, stopword removal, stemming.

The chain is normalize -> remove stopwords -> stem, in that order, so that
stopword matching sees surface forms. Tokens are lowercase ASCII letter
runs; digits, punctuation and non-ASCII letters all act as separators.
"""

from __future__ import annotations

import re
from importlib import resources

from . import porter

_TOKEN_RE = re.compile(r"[A-Za-z]+")
_DEFAULT_STOPWORDS = None


def load_stopwords(path=None):
    """Stopword set from a word-per-line file; ``#`` lines are comments.

    Without a path, returns the bundled 179-word English list.
    """
    if path is None:
        text = resources.files("reqclass").joinpath("data/stopwords_en.txt").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    words = set()
    for line in text.splitlines():
        word = line.strip()
        if word and not word.startswith("#"):
            words.add(word.lower())
    return frozenset(words)


def default_stopwords():
    global _DEFAULT_STOPWORDS
    if _DEFAULT_STOPWORDS is None:
        _DEFAULT_STOPWORDS = load_stopwords()
    return _DEFAULT_STOPWORDS


def normalize_text(text):
    """Lowercase letter-run tokens; everything else is treated as a separator."""
    return [match.group(0).lower() for match in _TOKEN_RE.finditer(text)]


def remove_stopwords(tokens, stopwords=None):
    if stopwords is None:
        stopwords = default_stopwords()
    return [token for token in tokens if token not in stopwords]


def stem_token(token):
    """Porter stem of a lowercase alphabetic token."""
    return porter.stem(token)


def preprocess(text, stopwords=None):
    """normalize -> remove stopwords -> stem, elementwise."""
    return [stem_token(token) for token in remove_stopwords(normalize_text(text), stopwords)]
