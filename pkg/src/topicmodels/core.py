"""Shared numerical machinery for the samplers.

Everything here is deliberately plain Python: the collapsed samplers spend
their time on scalar count lookups, so count tables are lists of ints (or
floats for the expected-count twins used by the variational algorithms).
"""

import math
import random
from typing import Sequence


class SamplingError(ValueError):
    """Raised when a categorical draw is requested from an invalid weight vector."""


class SeededRng(random.Random):
    """Mersenne Twister seeded with a fixed 64-bit value.

    Identical seeds give identical draw sequences on every platform; the
    underlying generator is CPython's documented ``random.Random``.
    """

    def __init__(self, seed: int):
        self.seed_value = int(seed)
        super().__init__(self.seed_value)


def sample_categorical(weights: Sequence[float], rng: random.Random) -> int:
    """Draw an index with probability weights[i] / sum(weights).

    Cumulative-sum inversion of a single uniform draw.  Weights must be
    nonnegative, free of NaN, and not all zero.
    """
    total = 0.0
    for w in weights:
        if w < 0.0 or w != w:
            raise SamplingError(f"invalid weight {w!r} in categorical draw")
        total += w
    if total <= 0.0:
        raise SamplingError("all categorical weights are zero")
    r = rng.random() * total
    acc = 0.0
    for i, w in enumerate(weights):
        acc += w
        if r < acc:
            return i
    # float round-off can leave r microscopically past the final cumsum;
    # fall back to the last index carrying mass
    for i in range(len(weights) - 1, -1, -1):
        if weights[i] > 0.0:
            return i
    raise SamplingError("unreachable: no positive weight found")


def log_rising_factorial(x: float, n: int) -> float:
    """log of x(x+1)...(x+n-1), i.e. sum_{j=0}^{n-1} log(x+j).

    Equals lgamma(x+n) - lgamma(x).  Computed as the direct sum of logs,
    which is exact enough for the short products the samplers need and
    never overflows.
    """
    if x <= 0.0:
        raise ValueError(f"log_rising_factorial requires x > 0, got {x}")
    if n < 0:
        raise ValueError(f"log_rising_factorial requires n >= 0, got {n}")
    acc = 0.0
    for j in range(n):
        acc += math.log(x + j)
    return acc


def exp_normalize(log_weights: Sequence[float]) -> list[float]:
    """Turn log weights into weights, subtracting the max first so nothing overflows."""
    m = max(log_weights)
    return [math.exp(lw - m) for lw in log_weights]


def normalize(weights: Sequence[float]) -> list[float]:
    """Scale a nonnegative weight vector to sum to one."""
    total = sum(weights)
    if total <= 0.0:
        raise SamplingError("cannot normalize an all-zero weight vector")
    return [w / total for w in weights]


class CountTables:
    """Sufficient statistics of a token-level topic assignment.

    doc_topic[m][k]   n_m^k   tokens of document m assigned to topic k
    topic_word[k][v]  n_k^v   tokens of word v assigned to topic k
    topic_total[k]    n_k^*   tokens assigned to topic k
    doc_total[m]      n_m^*   tokens of document m

    The same layout doubles as the real-valued expected-count tables of the
    CVB0 algorithms; pass ``real=True`` to start from float zeros.
    """

    def __init__(self, n_docs: int, n_topics: int, n_words: int, real: bool = False):
        zero = 0.0 if real else 0
        self.doc_topic = [[zero] * n_topics for _ in range(n_docs)]
        self.topic_word = [[zero] * n_words for _ in range(n_topics)]
        self.topic_total = [zero] * n_topics
        self.doc_total = [zero] * n_docs

    @property
    def n_docs(self) -> int:
        return len(self.doc_topic)

    @property
    def n_topics(self) -> int:
        return len(self.topic_total)

    @property
    def n_words(self) -> int:
        return len(self.topic_word[0]) if self.topic_word else 0

    def increment(self, m: int, k: int, v: int, amount=1) -> None:
        self.doc_topic[m][k] += amount
        self.topic_word[k][v] += amount
        self.topic_total[k] += amount
        self.doc_total[m] += amount

    def decrement(self, m: int, k: int, v: int, amount=1) -> None:
        self.increment(m, k, v, -amount)

    def grand_total(self):
        return sum(self.topic_total)

    def check(self, tolerance: float = 0.0) -> None:
        """Assert the closure invariants; raises ValueError on violation."""
        for m, row in enumerate(self.doc_topic):
            if abs(sum(row) - self.doc_total[m]) > tolerance:
                raise ValueError(f"doc {m}: topic counts do not sum to doc total")
            if any(c < -tolerance for c in row):
                raise ValueError(f"doc {m}: negative count")
        for k, row in enumerate(self.topic_word):
            if abs(sum(row) - self.topic_total[k]) > tolerance:
                raise ValueError(f"topic {k}: word counts do not sum to topic total")
            if any(c < -tolerance for c in row):
                raise ValueError(f"topic {k}: negative count")
        if abs(sum(self.doc_total) - sum(self.topic_total)) > tolerance:
            raise ValueError("doc totals and topic totals disagree")


def counts_from_assignments(docword: Sequence[Sequence[int]], z: Sequence[Sequence[int]],
                            n_topics: int, n_words: int) -> CountTables:
    """Build fresh count tables from per-token topic assignments."""
    tables = CountTables(len(docword), n_topics, n_words)
    for m, doc in enumerate(docword):
        zm = z[m]
        if len(zm) != len(doc):
            raise ValueError(f"doc {m}: {len(zm)} assignments for {len(doc)} tokens")
        for n, v in enumerate(doc):
            k = zm[n]
            if not 0 <= k < n_topics:
                raise ValueError(f"doc {m} token {n}: topic {k} out of range [0, {n_topics})")
            tables.increment(m, k, v)
    return tables
