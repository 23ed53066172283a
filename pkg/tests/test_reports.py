import pytest

from topicmodels.reports import (parse_doc_topic_file, parse_topic_word_file,
                                 parse_value_lines, rank_top,
                                 write_author_topic_file, write_doc_topic_file,
                                 write_sparse_ratio_file, write_topic_word_file,
                                 write_value_lines)


def test_rank_top_stable_tie_break():
    assert rank_top([0.1, 0.4, 0.4, 0.2], 3) == [1, 2, 3]
    assert rank_top([1.0], 5) == [0]


def test_topic_word_round_trip(tmp_path):
    path = tmp_path / "tw.txt"
    phi = [[0.5, 0.3, 0.2], [0.1, 0.2, 0.7]]
    words = ["alpha", "beta", "gamma"]
    write_topic_word_file(path, phi, words, top_n=2)
    text = path.read_text()
    assert text.startswith("Topic:1\n")
    assert "\n\nTopic:2\n" in text
    blocks = parse_topic_word_file(path)
    assert blocks == [(None, [("alpha", 0.5), ("beta", 0.3)]),
                      (None, [("gamma", 0.7), ("beta", 0.2)])]


def test_topic_word_block_grammar(tmp_path):
    path = tmp_path / "tw.txt"
    write_topic_word_file(path, [[0.9, 0.1]], ["w0", "w1"], top_n=2)
    lines = path.read_text().splitlines()
    assert lines[0] == "Topic:1"
    assert lines[1] == f"w0 :{0.9!r}"
    assert lines[2] == f"w1 :{0.1!r}"
    assert lines[3] == ""


def test_topic_word_paren_labels(tmp_path):
    path = tmp_path / "tw.txt"
    write_topic_word_file(path, [[1.0]], ["w"], 1, paren_labels=["Security"])
    assert path.read_text().splitlines()[0] == "Topic:1(Security)"
    assert parse_topic_word_file(path)[0][0] == "Security"


def test_topic_word_related_labels(tmp_path):
    path = tmp_path / "tw.txt"
    write_topic_word_file(path, [[1.0], [1.0]], ["w"], 1,
                          related_labels=["Cloud", "global label"])
    lines = path.read_text().splitlines()
    assert lines[0] == "Topic:1\tRelated label:Cloud"
    blocks = parse_topic_word_file(path)
    assert [b[0] for b in blocks] == ["Cloud", "global label"]


def test_topic_word_words_with_spaces_round_trip(tmp_path):
    # author names flow through the same writer: " :" splits from the right
    path = tmp_path / "tw.txt"
    write_topic_word_file(path, [[0.7, 0.3]], ["Jane Q. Doe", "Wei Li"], 2)
    blocks = parse_topic_word_file(path)
    assert blocks[0][1][0] == ("Jane Q. Doe", 0.7)


def test_doc_topic_round_trip_and_header(tmp_path):
    path = tmp_path / "dt.txt"
    theta = [[0.25, 0.75], [0.6, 0.4]]
    write_doc_topic_file(path, theta)
    lines = path.read_text().splitlines()
    assert lines[0] == "Topic1 Topic2"
    assert parse_doc_topic_file(path) == theta


def test_doc_topic_rejects_malformed_header(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("TopicA TopicB\n0.5 0.5\n")
    with pytest.raises(ValueError):
        parse_doc_topic_file(path)


def test_value_lines_round_trip(tmp_path):
    path = tmp_path / "theta.txt"
    values = [0.25, 0.5, 0.25]
    write_value_lines(path, values)
    assert parse_value_lines(path) == values
    ints = tmp_path / "clusters.txt"
    write_value_lines(ints, [3, 0, 2])
    assert ints.read_text() == "3\n0\n2\n"


def test_author_topic_file_uses_tab(tmp_path):
    path = tmp_path / "at.txt"
    write_author_topic_file(path, ["Jane Q. Doe", "Wei Li"],
                            [[0.9, 0.1], [0.5, 0.5]])
    lines = path.read_text().splitlines()
    name, row = lines[0].split("\t")
    assert name == "Jane Q. Doe"
    assert [float(x) for x in row.split()] == [0.9, 0.1]


def test_sparse_ratio_file_grammar(tmp_path):
    path = tmp_path / "ratio.txt"
    write_sparse_ratio_file(path, [0.9, 0.8], 0.85, "topic_word")
    lines = path.read_text().splitlines()
    assert lines[-1] == f"average saprse ratio of topic_word:{0.85!r}"
    assert [float(x) for x in lines[:-1]] == [0.9, 0.8]


def test_float_repr_round_trips_exactly(tmp_path):
    path = tmp_path / "dt.txt"
    theta = [[0.03822039986269391, 0.9617796001373061]]
    write_doc_topic_file(path, theta)
    assert parse_doc_topic_file(path) == theta
