#!/usr/bin/env python3
"""Hard and soft voting over a panel of member probabilities.

A panel holds the five models' FR probabilities for one requirement, in a
fixed model order. Hard voting thresholds each member at 0.5 and takes the
majority; soft voting thresholds the mean probability. With five members a
hard vote can never tie; for even panels it falls back to the soft rule.
"""

from reqclass import hard_vote, soft_vote

panel = [0.9, 0.8, 0.2, 0.6, 0.4]
print("panel:", panel)
print("member votes:", [int(p >= 0.5) for p in panel])
print("hard vote:", hard_vote(panel))
print("soft vote:", soft_vote(panel), f"(mean {sum(panel) / len(panel):.2f})")
print()

# The two rules can disagree: confident minorities move the mean.
panel = [0.95, 0.9, 0.45, 0.45, 0.45]
print("panel:", panel)
print("hard vote:", hard_vote(panel), " soft vote:", soft_vote(panel))
print()

# Even panel with a 2-2 split defers to the soft rule.
panel = [0.9, 0.8, 0.2, 0.3]
print("even panel:", panel)
print("hard vote (tie -> soft):", hard_vote(panel))
