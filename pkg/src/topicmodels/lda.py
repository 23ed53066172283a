"""Latent Dirichlet allocation, fitted by collapsed Gibbs sampling or by
zero-order collapsed variational Bayes (CVB0).

Count-table notation (mirrored across the whole package):
  n_mk  tokens of document m assigned to topic k
  n_kv  tokens of word v assigned to topic k
  n_k   tokens assigned to topic k
  n_m   tokens of document m
CVB0 replaces the integer counts with their variational expectations and the
hard assignment z with a per-token responsibility vector.
"""

import random
from dataclasses import dataclass
from typing import Callable

from .core import CountTables, SamplingError, counts_from_assignments
from .corpus import Corpus


@dataclass(frozen=True)
class LdaHyper:
    n_topics: int
    alpha: float = 0.1
    beta: float = 0.01
    iterations: int = 1000
    top_words: int = 10

    def __post_init__(self):
        if self.n_topics < 1:
            raise ValueError("n_topics must be >= 1")
        if self.alpha <= 0 or self.beta <= 0:
            raise ValueError("alpha and beta must be positive")
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")


@dataclass
class FittedLda:
    theta: list  # M x K, rows sum to 1
    phi: list    # K x V, rows sum to 1


def smoothed_rows(counts, totals, smooth: float) -> list:
    """Rows of (count + smooth) / (total + dim * smooth); each row is stochastic."""
    out = []
    for row, total in zip(counts, totals):
        denom = total + len(row) * smooth
        out.append([(c + smooth) / denom for c in row])
    return out


def estimate_theta(tables: CountTables, alpha: float) -> list:
    return smoothed_rows(tables.doc_topic, tables.doc_total, alpha)


def estimate_phi(tables: CountTables, beta: float) -> list:
    return smoothed_rows(tables.topic_word, tables.topic_total, beta)


def gibbs_full_conditional(tables: CountTables, m: int, v: int,
                           alpha: float, beta: float) -> list:
    """Unnormalized topic weights for one token, counts already excluded.

    weight_k = (n_mk + alpha)/(n_m + K alpha) * (n_kv + beta)/(n_k + V beta)
    """
    K = tables.n_topics
    V = tables.n_words
    n_m = tables.doc_total[m]
    doc_denom = n_m + K * alpha
    n_mk = tables.doc_topic[m]
    vbeta = V * beta
    return [(n_mk[k] + alpha) / doc_denom
            * (tables.topic_word[k][v] + beta) / (tables.topic_total[k] + vbeta)
            for k in range(K)]


class LdaGibbsSampler:
    """Owns the assignment vector z and its count tables for one chain."""

    def __init__(self, corpus: Corpus, hyper: LdaHyper, rng: random.Random):
        if corpus.n_docs == 0 or corpus.n_tokens == 0:
            raise ValueError("corpus is empty")
        self.corpus = corpus
        self.hyper = hyper
        self.rng = rng
        K = hyper.n_topics
        self.z = [[rng.randrange(K) for _ in doc] for doc in corpus.docword]
        self.tables = counts_from_assignments(corpus.docword, self.z, K, corpus.n_words)

    def full_conditional(self, m: int, v: int) -> list:
        return gibbs_full_conditional(self.tables, m, v, self.hyper.alpha, self.hyper.beta)

    def sweep(self) -> None:
        """Resample every token once, documents then positions in index order."""
        K = self.hyper.n_topics
        alpha = self.hyper.alpha
        beta = self.hyper.beta
        vbeta = self.corpus.n_words * beta
        ndk = self.tables.doc_topic
        nkv = self.tables.topic_word
        nk = self.tables.topic_total
        rng_random = self.rng.random
        weights = [0.0] * K
        for m, doc in enumerate(self.corpus.docword):
            zm = self.z[m]
            nm = ndk[m]
            for n, v in enumerate(doc):
                k = zm[n]
                nm[k] -= 1
                nkv[k][v] -= 1
                nk[k] -= 1
                # the per-document denominator is constant in k, so the
                # proportional form of the full conditional is enough here
                total = 0.0
                for kk in range(K):
                    w = (nm[kk] + alpha) * (nkv[kk][v] + beta) / (nk[kk] + vbeta)
                    weights[kk] = w
                    total += w
                r = rng_random() * total
                acc = 0.0
                k_new = K - 1
                for kk in range(K):
                    acc += weights[kk]
                    if r < acc:
                        k_new = kk
                        break
                zm[n] = k_new
                nm[k_new] += 1
                nkv[k_new][v] += 1
                nk[k_new] += 1

    def estimate(self) -> FittedLda:
        return FittedLda(theta=estimate_theta(self.tables, self.hyper.alpha),
                         phi=estimate_phi(self.tables, self.hyper.beta))


def fit_gibbs(corpus: Corpus, hyper: LdaHyper, rng: random.Random,
              burn_in: int = 0,
              sweep_callback: Callable[[LdaGibbsSampler, int], None] | None = None) -> FittedLda:
    """Run the collapsed Gibbs chain and estimate theta/phi from the final state.

    ``burn_in`` extra sweeps run before the counted iterations; the callback
    fires after each counted sweep (used by diagnostics and progress display).
    """
    sampler = LdaGibbsSampler(corpus, hyper, rng)
    for _ in range(burn_in):
        sampler.sweep()
    for it in range(hyper.iterations):
        sampler.sweep()
        if sweep_callback is not None:
            sweep_callback(sampler, it)
    return sampler.estimate()


def cvb0_update(expected: CountTables, m: int, v: int,
                alpha: float, beta: float) -> list:
    """New responsibility vector for one token whose own mass is excluded.

    gamma_k proportional to (nhat_mk + alpha) * (nhat_kv + beta)/(nhat_k + V beta),
    returned normalized to sum one.
    """
    K = expected.n_topics
    vbeta = expected.n_words * beta
    n_mk = expected.doc_topic[m]
    weights = [(n_mk[k] + alpha)
               * (expected.topic_word[k][v] + beta) / (expected.topic_total[k] + vbeta)
               for k in range(K)]
    total = sum(weights)
    if total <= 0.0:
        raise SamplingError("CVB0 update produced no positive weight")
    return [w / total for w in weights]


def random_responsibilities(corpus: Corpus, n_topics: int, rng: random.Random) -> list:
    """Per-token responsibility vectors: normalized uniform random positives."""
    gamma = []
    for doc in corpus.docword:
        rows = []
        for _ in doc:
            u = [rng.random() + 1e-12 for _ in range(n_topics)]
            s = sum(u)
            rows.append([x / s for x in u])
        gamma.append(rows)
    return gamma


class LdaCvb0:
    """Deterministic CVB0 fixed-point iteration over token responsibilities."""

    def __init__(self, corpus: Corpus, hyper: LdaHyper, gamma: list):
        if corpus.n_docs == 0 or corpus.n_tokens == 0:
            raise ValueError("corpus is empty")
        self.corpus = corpus
        self.hyper = hyper
        self.gamma = gamma
        self.expected = CountTables(corpus.n_docs, hyper.n_topics, corpus.n_words, real=True)
        for m, doc in enumerate(corpus.docword):
            for n, v in enumerate(doc):
                for k, g in enumerate(gamma[m][n]):
                    self.expected.increment(m, k, v, g)

    def sweep(self) -> None:
        K = self.hyper.n_topics
        alpha = self.hyper.alpha
        beta = self.hyper.beta
        vbeta = self.corpus.n_words * beta
        ndk = self.expected.doc_topic
        nkv = self.expected.topic_word
        nk = self.expected.topic_total
        for m, doc in enumerate(self.corpus.docword):
            gm = self.gamma[m]
            nm = ndk[m]
            for n, v in enumerate(doc):
                g = gm[n]
                total = 0.0
                new = [0.0] * K
                for k in range(K):
                    gk = g[k]
                    w = (nm[k] - gk + alpha) \
                        * (nkv[k][v] - gk + beta) / (nk[k] - gk + vbeta)
                    new[k] = w
                    total += w
                for k in range(K):
                    gk_new = new[k] / total
                    delta = gk_new - g[k]
                    nm[k] += delta
                    nkv[k][v] += delta
                    nk[k] += delta
                    g[k] = gk_new

    def estimate(self) -> FittedLda:
        return FittedLda(theta=estimate_theta(self.expected, self.hyper.alpha),
                         phi=estimate_phi(self.expected, self.hyper.beta))


def fit_cvb0(corpus: Corpus, hyper: LdaHyper, rng: random.Random | None = None,
             init_gamma: list | None = None,
             sweep_callback: Callable[[LdaCvb0, int], None] | None = None) -> FittedLda:
    """Run CVB0; deterministic given the initial responsibilities.

    Either pass ``init_gamma`` explicitly or an rng to draw the random
    initialization from.
    """
    if init_gamma is None:
        if rng is None:
            raise ValueError("fit_cvb0 needs an rng or an explicit init_gamma")
        init_gamma = random_responsibilities(corpus, hyper.n_topics, rng)
    solver = LdaCvb0(corpus, hyper, init_gamma)
    for it in range(hyper.iterations):
        solver.sweep()
        if sweep_callback is not None:
            sweep_callback(solver, it)
    return solver.estimate()
