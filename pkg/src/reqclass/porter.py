"""The Porter stemming algorithm, as published.

    Porter, M., "An algorithm for suffix stripping",
    Program 14(3), 1980, pp. 130-137.

This follows the published rule set exactly, steps 1a through 5b, with no
later revisions: the well-known reference encodings add a length guard and
two extra step-2 rules, which are deliberately not reproduced here. Within
a step the longest matching suffix is selected first and only then is its
condition tested; whether or not the condition holds, no other rule in that
step applies.

Each step is a module function so the published per-rule examples (e.g.
``caresses -> caress``, ``relational -> relate``) can be exercised one step
at a time.
"""

from __future__ import annotations

_VOWELS = "aeiou"


def _is_consonant(word, i):
    # y counts as a vowel when it follows a consonant ("sky", "by").
    ch = word[i]
    if ch in _VOWELS:
        return False
    if ch == "y":
        return True if i == 0 else not _is_consonant(word, i - 1)
    return True


def _measure(stem):
    """m in the [C](VC)^m[V] decomposition of the stem."""
    m = 0
    previous_vowel = False
    for i in range(len(stem)):
        consonant = _is_consonant(stem, i)
        if consonant and previous_vowel:
            m += 1
        previous_vowel = not consonant
    return m


def _has_vowel(stem):
    return any(not _is_consonant(stem, i) for i in range(len(stem)))


def _ends_double_consonant(word):
    return (
        len(word) >= 2
        and word[-1] == word[-2]
        and _is_consonant(word, len(word) - 1)
    )


def _ends_cvc(stem):
    """*o: stem ends consonant-vowel-consonant, final not w, x or y."""
    if len(stem) < 3:
        return False
    n = len(stem)
    return (
        _is_consonant(stem, n - 3)
        and not _is_consonant(stem, n - 2)
        and _is_consonant(stem, n - 1)
        and stem[-1] not in "wxy"
    )


def _longest_match(word, rules):
    best = None
    for suffix, replacement in rules:
        if word.endswith(suffix) and (best is None or len(suffix) > len(best[0])):
            best = (suffix, replacement)
    return best


def _apply_table(word, rules, threshold):
    """Replace the longest matching suffix when m(stem) > threshold."""
    match = _longest_match(word, rules)
    if match is None:
        return word
    suffix, replacement = match
    stem = word[: len(word) - len(suffix)]
    if _measure(stem) > threshold:
        return stem + replacement
    return word


def step1a(word):
    """SSES -> SS, IES -> I, SS -> SS, S -> (caresses, ponies, caress, cats)."""
    for suffix, replacement in (("sses", "ss"), ("ies", "i"), ("ss", "ss"), ("s", "")):
        if word.endswith(suffix):
            return word[: len(word) - len(suffix)] + replacement
    return word


def step1b(word):
    """(m>0) EED -> EE; (*v*) ED -> ; (*v*) ING -> ; then the cleanup rules.

    agreed -> agree, plastered -> plaster, motoring -> motor; afterwards
    conflat(ed) -> conflate, hopp(ing) -> hop, fil(ing) -> file, while the
    *L/*S/*Z double letters survive (fall, hiss, fizz).
    """
    if word.endswith("eed"):
        stem = word[:-3]
        return stem + "ee" if _measure(stem) > 0 else word
    if word.endswith("ed"):
        stem = word[:-2]
    elif word.endswith("ing"):
        stem = word[:-3]
    else:
        return word
    if not _has_vowel(stem):
        return word
    if stem.endswith(("at", "bl", "iz")):
        return stem + "e"
    if _ends_double_consonant(stem) and stem[-1] not in "lsz":
        return stem[:-1]
    if _measure(stem) == 1 and _ends_cvc(stem):
        return stem + "e"
    return stem


def step1c(word):
    """(*v*) Y -> I (happy -> happi, but sky stays sky)."""
    if word.endswith("y") and _has_vowel(word[:-1]):
        return word[:-1] + "i"
    return word


_STEP2_RULES = (
    ("ational", "ate"),   # relational -> relate
    ("tional", "tion"),   # conditional -> condition, rational -> rational
    ("enci", "ence"),     # valenci -> valence
    ("anci", "ance"),     # hesitanci -> hesitance
    ("izer", "ize"),      # digitizer -> digitize
    ("abli", "able"),     # conformabli -> conformable
    ("alli", "al"),       # radicalli -> radical
    ("entli", "ent"),     # differentli -> different
    ("eli", "e"),         # vileli -> vile
    ("ousli", "ous"),     # analogousli -> analogous
    ("ization", "ize"),   # vietnamization -> vietnamize
    ("ation", "ate"),     # predication -> predicate
    ("ator", "ate"),      # operator -> operate
    ("alism", "al"),      # feudalism -> feudal
    ("iveness", "ive"),   # decisiveness -> decisive
    ("fulness", "ful"),   # hopefulness -> hopeful
    ("ousness", "ous"),   # callousness -> callous
    ("aliti", "al"),      # formaliti -> formal
    ("iviti", "ive"),     # sensitiviti -> sensitive
    ("biliti", "ble"),    # sensibiliti -> sensible
)

_STEP3_RULES = (
    ("icate", "ic"),      # triplicate -> triplic
    ("ative", ""),        # formative -> form
    ("alize", "al"),      # formalize -> formal
    ("iciti", "ic"),      # electriciti -> electric
    ("ical", "ic"),       # electrical -> electric
    ("ful", ""),          # hopeful -> hope
    ("ness", ""),         # goodness -> good
)

_STEP4_SUFFIXES = (
    "al", "ance", "ence", "er", "ic", "able", "ible", "ant", "ement",
    "ment", "ent", "ion", "ou", "ism", "ate", "iti", "ous", "ive", "ize",
)


def step2(word):
    """Double suffixes map to single ones when m(stem) > 0."""
    return _apply_table(word, _STEP2_RULES, threshold=0)


def step3(word):
    """-icate, -ful, -ness and friends strip when m(stem) > 0."""
    return _apply_table(word, _STEP3_RULES, threshold=0)


def step4(word):
    """Residual suffixes drop in m > 1 context; ION additionally needs *S or *T."""
    match = _longest_match(word, tuple((s, "") for s in _STEP4_SUFFIXES))
    if match is None:
        return word
    suffix, _ = match
    stem = word[: len(word) - len(suffix)]
    if suffix == "ion" and not (stem and stem[-1] in "st"):
        return word
    return stem if _measure(stem) > 1 else word


def step5a(word):
    """(m>1) E -> ; (m=1 and not *o) E -> (probate -> probat, cease -> ceas)."""
    if word.endswith("e"):
        stem = word[:-1]
        m = _measure(stem)
        if m > 1 or (m == 1 and not _ends_cvc(stem)):
            return stem
    return word


def step5b(word):
    """(m>1 and *d and *L) -> single letter (controll -> control, roll -> roll)."""
    if word.endswith("ll") and _measure(word) > 1:
        return word[:-1]
    return word


_STEPS = (step1a, step1b, step1c, step2, step3, step4, step5a, step5b)


def stem(word):
    """Stem a lowercase alphabetic token through steps 1a..5b."""
    for apply_step in _STEPS:
        word = apply_step(word)
    return word
