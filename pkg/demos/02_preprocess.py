#!/usr/bin/env python3
"""The preprocessing chain: normalize -> drop stopwords -> Porter stem.

Normalization keeps lowercase letter runs only (digits, punctuation and
non-ASCII letters act as separators), the bundled 179-word English stopword
list filters function words, and the published Porter algorithm reduces the
survivors to their stems.
"""

from reqclass import normalize_text, preprocess, remove_stopwords, stem_token
from reqclass.textprep import default_stopwords

requirement = (
    "System provides a management console displaying workstations running "
    "client software; workstation name and IP address; and utilities for "
    "managing client sessions."
)

tokens = normalize_text(requirement)
print("normalized:", tokens)

content = remove_stopwords(tokens)
print("w/o stopwords:", content)

stems = [stem_token(t) for t in content]
print("stemmed:", stems)

assert preprocess(requirement) == stems
print()

print(f"bundled stopword list has {len(default_stopwords())} words")
print()

# Some classic stemmer behavior:
for word in ("caresses", "ponies", "relational", "generalizations", "oscillators", "sky"):
    print(f"  {word:18s} -> {stem_token(word)}")
