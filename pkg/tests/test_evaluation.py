import math

import pytest

from topicmodels.core import SeededRng
from topicmodels.evaluation import average_coherence, topic_coherence, top_word_ids


def test_coherence_hand_count_equal_docs():
    # D(A)=2, D(A,B)=1: C = log((1+1)/2) = 0
    docword = [[0, 1], [0], [2]]
    assert topic_coherence(docword, [0, 1]) == pytest.approx(0.0, abs=1e-12)


def test_coherence_hand_count_log_half():
    # D(A)=4, D(A,B)=1: C = log((1+1)/4) = log 0.5
    docword = [[0], [0], [0], [0, 1]]
    assert topic_coherence(docword, [0, 1]) == pytest.approx(math.log(0.5), rel=1e-12)


def test_coherence_three_words_hand_count():
    # docs: {0,1,2}, {0,1}, {0}, {2}
    docword = [[0, 1, 2], [0, 1], [0], [2]]
    # ordered top words [0, 1, 2]:
    #   n=1 (v=1): pair with 0 -> log((2+1)/3)
    #   n=2 (v=2): pairs with 0 -> log((1+1)/3); with 1 -> log((1+1)/2)
    want = math.log(3 / 3) + math.log(2 / 3) + math.log(2 / 2)
    assert topic_coherence(docword, [0, 1, 2]) == pytest.approx(want, rel=1e-12)


def test_coherence_order_matters_in_denominator():
    # the conditioning word is the earlier-ranked one
    docword = [[0, 1], [0], [0], [1, 0], [1]]
    c_01 = topic_coherence(docword, [0, 1])  # D(1,0)+1 over D(0)=4
    c_10 = topic_coherence(docword, [1, 0])  # over D(1)=3
    assert c_01 == pytest.approx(math.log(3 / 4), rel=1e-12)
    assert c_10 == pytest.approx(math.log(3 / 3), rel=1e-12)
    assert c_01 != c_10


def test_coherence_single_word_is_zero():
    assert topic_coherence([[0], [0, 1]], [0]) == 0.0


def test_coherence_counts_documents_not_tokens():
    docword = [[0, 0, 0, 1, 1]]  # repeated tokens, one document
    assert topic_coherence(docword, [0, 1]) == pytest.approx(math.log(2 / 1), rel=1e-12)


def test_coherence_unseen_word_error_names_word():
    with pytest.raises(ValueError, match="7"):
        topic_coherence([[0, 1]], [0, 7])


def test_coherence_permutation_invariant_in_documents():
    rng = SeededRng(2)
    docword = [[rng.randrange(6) for _ in range(rng.randrange(1, 6))] for _ in range(12)]
    docword = [d for d in docword]
    top = [0, 1, 2, 3]
    for d in docword:
        d.extend(top)  # ensure every listed word occurs
    base = topic_coherence(docword, top)
    shuffled = list(docword)
    rng.shuffle(shuffled)
    assert topic_coherence(shuffled, top) == pytest.approx(base, rel=1e-12)


def test_top_word_ids_tie_break_by_index():
    assert top_word_ids([0.2, 0.5, 0.2, 0.1], 3) == [1, 0, 2]


def test_average_coherence_k1_and_identical_topics():
    docword = [[0, 1], [0], [2, 1]]
    phi_row = [0.5, 0.3, 0.2]
    single = average_coherence(docword, [phi_row], 2)
    assert single == pytest.approx(topic_coherence(docword, [0, 1]), rel=1e-12)
    assert average_coherence(docword, [phi_row, phi_row], 2) == pytest.approx(single)


def test_average_coherence_rejects_bad_top_n():
    with pytest.raises(ValueError):
        average_coherence([[0]], [[1.0]], 0)
