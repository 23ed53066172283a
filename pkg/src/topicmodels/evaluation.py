"""Topic-quality evaluation via the document co-occurrence coherence score.

For a topic's top words v_1..v_N (most probable first):

    C = sum_{n=2}^{N} sum_{l=1}^{n-1} log (D(v_n, v_l) + 1) / D(v_l)

where D counts documents, not tokens: D(v) is the number of documents
containing v and D(v_n, v_l) the number containing both.  The conditioning
word of each pair, v_l, is the earlier-ranked one, exactly as the score is
defined.
"""

import math
from typing import Sequence


def document_sets(docword: Sequence[Sequence[int]], words: Sequence[int]) -> dict:
    """Map each listed word to the set of document ids containing it."""
    wanted = set(words)
    sets: dict = {v: set() for v in wanted}
    for m, doc in enumerate(docword):
        for v in doc:
            if v in wanted:
                sets[v].add(m)
    return sets


def topic_coherence(docword: Sequence[Sequence[int]], top_words: Sequence[int]) -> float:
    """Coherence of one ordered top-word list; 0.0 for fewer than two words."""
    sets = document_sets(docword, top_words)
    for v in top_words:
        if not sets[v]:
            raise ValueError(f"word id {v} occurs in no document")
    score = 0.0
    for n in range(1, len(top_words)):
        v_n = top_words[n]
        for l in range(n):
            v_l = top_words[l]
            co = len(sets[v_n] & sets[v_l])
            score += math.log((co + 1) / len(sets[v_l]))
    return score


def top_word_ids(phi_row: Sequence[float], n: int) -> list:
    """Indices of the n largest probabilities, ties broken by vocabulary index."""
    order = sorted(range(len(phi_row)), key=lambda v: (-phi_row[v], v))
    return order[:n]


def average_coherence(docword: Sequence[Sequence[int]], phi: Sequence[Sequence[float]],
                      top_n: int) -> float:
    """Mean topic coherence over all topics, each using its top_n words."""
    if top_n < 1:
        raise ValueError("top_n must be >= 1")
    scores = [topic_coherence(docword, top_word_ids(row, top_n)) for row in phi]
    return sum(scores) / len(scores)
