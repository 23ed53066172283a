"""One-cluster-per-document models: Dirichlet multinomial mixture (fixed K)
and its Dirichlet-process extension (K grows and shrinks).

Cluster bookkeeping:
  n_docs_in[k]      documents currently assigned to cluster k
  cluster_word[k][v] tokens of word v in cluster k
  cluster_total[k]  tokens in cluster k
Document word multisets are cached as sorted (word, count) item lists.
"""

import math
import random
from collections import Counter
from dataclasses import dataclass
from typing import Callable

from .core import exp_normalize, log_rising_factorial, sample_categorical
from .corpus import Corpus
from .lda import smoothed_rows


@dataclass(frozen=True)
class MixtureHyper:
    n_clusters: int  # fixed K for DMM, initial K for DPMM
    alpha: float = 0.1
    beta: float = 0.01
    iterations: int = 1000
    top_words: int = 10

    def __post_init__(self):
        if self.n_clusters < 1:
            raise ValueError("n_clusters must be >= 1")
        if self.alpha < 0 or self.beta <= 0:
            raise ValueError("alpha must be >= 0 and beta > 0")


@dataclass
class MixtureFit:
    theta: list        # K cluster weights, sums to 1
    phi: list          # K x V
    doc_cluster: list  # final assignment per document


class _ClusterTables:
    def __init__(self, corpus: Corpus):
        self.doc_items = [sorted(Counter(doc).items()) for doc in corpus.docword]
        self.doc_len = [len(doc) for doc in corpus.docword]
        self.n_docs_in: list = []
        self.cluster_word: list = []
        self.cluster_total: list = []

    @property
    def n_clusters(self) -> int:
        return len(self.n_docs_in)

    def new_cluster(self, n_words: int) -> int:
        self.n_docs_in.append(0)
        self.cluster_word.append([0] * n_words)
        self.cluster_total.append(0)
        return self.n_clusters - 1

    def add_doc(self, m: int, k: int) -> None:
        self.n_docs_in[k] += 1
        row = self.cluster_word[k]
        for v, c in self.doc_items[m]:
            row[v] += c
        self.cluster_total[k] += self.doc_len[m]

    def remove_doc(self, m: int, k: int) -> None:
        self.n_docs_in[k] -= 1
        row = self.cluster_word[k]
        for v, c in self.doc_items[m]:
            row[v] -= c
        self.cluster_total[k] -= self.doc_len[m]

    def log_word_term(self, k: int, m: int, beta: float, v_beta: float) -> float:
        """log of prod_w rising(n_kw + beta, N_m^w) / rising(n_k + V beta, N_m)."""
        row = self.cluster_word[k]
        lw = 0.0
        for v, c in self.doc_items[m]:
            lw += log_rising_factorial(row[v] + beta, c)
        return lw - log_rising_factorial(self.cluster_total[k] + v_beta, self.doc_len[m])


class DmmSampler:
    """Collapsed Gibbs chain over per-document cluster labels, K fixed."""

    def __init__(self, corpus: Corpus, hyper: MixtureHyper, rng: random.Random):
        if corpus.n_docs == 0 or corpus.n_tokens == 0:
            raise ValueError("corpus is empty")
        self.corpus = corpus
        self.hyper = hyper
        self.rng = rng
        self.tables = _ClusterTables(corpus)
        for _ in range(hyper.n_clusters):
            self.tables.new_cluster(corpus.n_words)
        self.z = []
        for m in range(corpus.n_docs):
            k = rng.randrange(hyper.n_clusters)
            self.z.append(k)
            self.tables.add_doc(m, k)

    def full_conditional(self, m: int) -> list:
        """Cluster weights for document m, its counts already removed.

        weight_k = (n_k + a)/(M - 1 + K a) * word term, in log space.
        """
        hyper = self.hyper
        K = hyper.n_clusters
        M = self.corpus.n_docs
        v_beta = self.corpus.n_words * hyper.beta
        log_prior_denom = math.log(M - 1 + K * hyper.alpha)
        logs = []
        for k in range(K):
            prior = self.tables.n_docs_in[k] + hyper.alpha
            if prior <= 0.0:
                logs.append(float("-inf"))
                continue
            lw = math.log(prior) - log_prior_denom
            lw += self.tables.log_word_term(k, m, hyper.beta, v_beta)
            logs.append(lw)
        return exp_normalize(logs)

    def sweep(self) -> None:
        for m in range(self.corpus.n_docs):
            self.tables.remove_doc(m, self.z[m])
            k = sample_categorical(self.full_conditional(m), self.rng)
            self.z[m] = k
            self.tables.add_doc(m, k)

    def estimate(self) -> MixtureFit:
        M = self.corpus.n_docs
        K = self.hyper.n_clusters
        denom = M + K * self.hyper.alpha
        theta = [(n + self.hyper.alpha) / denom for n in self.tables.n_docs_in]
        phi = smoothed_rows(self.tables.cluster_word, self.tables.cluster_total,
                            self.hyper.beta)
        return MixtureFit(theta=theta, phi=phi, doc_cluster=list(self.z))


def dmm_fit(corpus: Corpus, hyper: MixtureHyper, rng: random.Random,
            sweep_callback: Callable[[DmmSampler, int], None] | None = None) -> MixtureFit:
    sampler = DmmSampler(corpus, hyper, rng)
    for it in range(hyper.iterations):
        sampler.sweep()
        if sweep_callback is not None:
            sweep_callback(sampler, it)
    return sampler.estimate()


class DpmmSampler:
    """Nonparametric variant: clusters are born with new documents and die
    when their last document leaves; live indices stay contiguous."""

    def __init__(self, corpus: Corpus, hyper: MixtureHyper, rng: random.Random):
        if corpus.n_docs == 0 or corpus.n_tokens == 0:
            raise ValueError("corpus is empty")
        self.corpus = corpus
        self.hyper = hyper
        self.rng = rng
        self.tables = _ClusterTables(corpus)
        for _ in range(hyper.n_clusters):
            self.tables.new_cluster(corpus.n_words)
        self.z = []
        for m in range(corpus.n_docs):
            k = rng.randrange(hyper.n_clusters)
            self.z.append(k)
            self.tables.add_doc(m, k)
        # initial clusters that attracted no document are not live
        for k in range(self.tables.n_clusters - 1, -1, -1):
            if self.tables.n_docs_in[k] == 0:
                self._delete_cluster(k)

    @property
    def n_clusters(self) -> int:
        return self.tables.n_clusters

    def _delete_cluster(self, k: int) -> None:
        last = self.tables.n_clusters - 1
        if k != last:
            self.tables.n_docs_in[k] = self.tables.n_docs_in[last]
            self.tables.cluster_word[k] = self.tables.cluster_word[last]
            self.tables.cluster_total[k] = self.tables.cluster_total[last]
            for m, zm in enumerate(self.z):
                if zm == last:
                    self.z[m] = k
        self.tables.n_docs_in.pop()
        self.tables.cluster_word.pop()
        self.tables.cluster_total.pop()

    def full_conditional(self, m: int) -> list:
        """K live-cluster weights plus one new-cluster weight (last entry).

        live k: n_k/(M - 1 + a) * word term with cluster counts
        new:    a/(M - 1 + a) * word term with zero counts
        """
        hyper = self.hyper
        M = self.corpus.n_docs
        beta = hyper.beta
        v_beta = self.corpus.n_words * beta
        log_denom = math.log(M - 1 + hyper.alpha)
        logs = []
        for k in range(self.tables.n_clusters):
            lw = math.log(self.tables.n_docs_in[k]) - log_denom
            lw += self.tables.log_word_term(k, m, beta, v_beta)
            logs.append(lw)
        if hyper.alpha > 0:
            lw = math.log(hyper.alpha) - log_denom
            for _, c in self.tables.doc_items[m]:
                lw += log_rising_factorial(beta, c)
            lw -= log_rising_factorial(v_beta, self.tables.doc_len[m])
            logs.append(lw)
        else:
            logs.append(float("-inf"))
        return exp_normalize(logs)

    def sweep(self) -> None:
        for m in range(self.corpus.n_docs):
            old = self.z[m]
            self.tables.remove_doc(m, old)
            self.z[m] = -1
            if self.tables.n_docs_in[old] == 0:
                self._delete_cluster(old)
            weights = self.full_conditional(m)
            k = sample_categorical(weights, self.rng)
            if k == self.tables.n_clusters:
                k = self.tables.new_cluster(self.corpus.n_words)
            self.z[m] = k
            self.tables.add_doc(m, k)

    def estimate(self) -> MixtureFit:
        M = self.corpus.n_docs
        K = self.tables.n_clusters
        denom = M + K * self.hyper.alpha
        theta = [(n + self.hyper.alpha) / denom for n in self.tables.n_docs_in]
        phi = smoothed_rows(self.tables.cluster_word, self.tables.cluster_total,
                            self.hyper.beta)
        return MixtureFit(theta=theta, phi=phi, doc_cluster=list(self.z))


def dpmm_fit(corpus: Corpus, hyper: MixtureHyper, rng: random.Random,
             sweep_callback: Callable[[DpmmSampler, int], None] | None = None
             ) -> tuple[MixtureFit, int]:
    """Returns the fit and the surviving cluster count."""
    sampler = DpmmSampler(corpus, hyper, rng)
    for it in range(hyper.iterations):
        sampler.sweep()
        if sweep_callback is not None:
            sweep_callback(sampler, it)
    return sampler.estimate(), sampler.n_clusters
