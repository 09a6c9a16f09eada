"""Hard and soft voting over a panel of member probabilities.

A panel is the members' positive-class probabilities in a fixed model order.
Hard voting thresholds each member and takes the majority label, falling
back to soft voting on an even split; soft voting thresholds the mean
probability. The boundary mean of exactly 0.5 reads as the positive class.
"""

from __future__ import annotations

from .corpus import FR, NFR

VOTE_THRESHOLD = 0.5


def soft_vote(panel, threshold=VOTE_THRESHOLD):
    if not panel:
        raise ValueError("empty vote panel")
    mean = sum(panel) / len(panel)
    return FR if mean >= threshold else NFR


def hard_vote(panel, threshold=VOTE_THRESHOLD):
    if not panel:
        raise ValueError("empty vote panel")
    fr_votes = sum(1 for p in panel if p >= threshold)
    nfr_votes = len(panel) - fr_votes
    if fr_votes > nfr_votes:
        return FR
    if nfr_votes > fr_votes:
        return NFR
    return soft_vote(panel, threshold)
